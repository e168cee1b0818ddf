//! Deterministic file output: every float is written as `{:.16e}`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use epdt_core::harness::format_number;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

/// Pretty JSON with floats in the same fixed format as the CSV files.
struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_number(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::io(format!("cannot serialise output: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::io(e.to_string()))
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = to_json(value)?;
    fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// A CSV table with a fixed header; cells are pre-formatted strings.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let fail = |e: csv::Error| CliError::io(format!("cannot write {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(fail)?;
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row).map_err(fail)?;
        }
        w.flush()
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn num(x: f64) -> String {
    format_number(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_are_fixed() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            n: usize,
            v: Vec<f64>,
            nan: f64,
        }
        let text = to_json(&S {
            x: 0.5,
            n: 3,
            v: vec![1.0, -0.25],
            nan: f64::NAN,
        })
        .unwrap();
        assert!(text.contains("\"x\": 5.0000000000000000e-1"));
        assert!(text.contains("\"n\": 3"));
        assert!(text.contains("-2.5000000000000000e-1"));
        assert!(text.contains("\"nan\": null"));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["v"][1].as_f64(), Some(-0.25));
    }
}
