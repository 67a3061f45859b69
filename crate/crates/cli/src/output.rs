use std::io::Write;

use hypercone::report::{g17, to_json_string};
use hypercone::C64;
use serde_json::{json, Value};

use crate::Failure;

pub fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(2, "io_error", e.to_string())
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn write_json(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    out.write_all(to_json_string(value).as_bytes()).map_err(io_failure)
}

/// RFC-4180 CSV; every field is already a string so float formatting stays
/// under our control.
pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let csv_failure = |e: csv::Error| Failure::new(2, "io_error", e.to_string());
    w.write_record(header).map_err(csv_failure)?;
    for row in rows {
        w.write_record(row).map_err(csv_failure)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(2, "io_error", e.to_string()))?;
    out.write_all(&bytes).map_err(io_failure)
}

pub fn float(x: f64) -> String {
    g17(x)
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
