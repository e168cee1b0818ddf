//! Adaptive Dormand–Prince 5(4) integration and the blow-up ODE scenarios.

mod blowup;
mod dopri;
mod substitution;

pub use blowup::{
    integrate, integrate_system, kato_onset_bracket, zhou_lifespan_scaling, BlowupOptions,
    BlowupReason, BlowupReport, KatoOnset, KatoScenario, OdeScenario, ZhouScalingResult,
    ZhouScenario,
};
pub use dopri::{Dopri5, OdeSystem, StepOutcome};
pub use substitution::{exp_substitution_check, zhou_envelope};
