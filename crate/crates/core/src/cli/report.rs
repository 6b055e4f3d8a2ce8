//! Report records and their JSON / CSV renderings.
//!
//! JSON output is one object per line with a fixed key order. Floats are
//! printed with 17 significant digits; non-finite values become `null`.

use std::fmt::Write as _;

/// One line of output.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub operator: String,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<(String, f64)>,
    pub error_estimate: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
    /// Error kind, e.g. `DomainError`.
    pub error: Option<String>,
    pub message: Option<String>,
    pub wall_ms: f64,
}

impl ReportRecord {
    pub fn new(operator: &str, inputs: Vec<(String, String)>) -> Self {
        ReportRecord {
            operator: operator.to_string(),
            inputs,
            values: Vec::new(),
            error_estimate: None,
            residual: None,
            tolerance: None,
            pass: None,
            error: None,
            message: None,
            wall_ms: 0.0,
        }
    }

    pub fn value(mut self, name: &str, v: f64) -> Self {
        self.values.push((name.to_string(), v));
        self
    }

    /// Attach a residual, its tolerance and the resulting verdict.
    pub fn checked(mut self, residual: f64, tolerance: f64) -> Self {
        self.residual = Some(residual);
        self.tolerance = Some(tolerance);
        self.pass = Some(residual <= tolerance);
        self
    }

    pub fn failed(mut self, err: &crate::Error) -> Self {
        self.error = Some(err.kind().to_string());
        self.message = Some(err.to_string());
        if self.tolerance.is_some() || self.pass.is_some() {
            self.pass = Some(false);
        }
        self
    }
}

/// `{:.16e}`: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_float(v: f64) -> String {
    if v.is_finite() {
        format_float(v)
    } else {
        "null".to_string()
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_opt_float(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), json_float)
}

pub fn to_json_line(r: &ReportRecord) -> String {
    let mut out = String::new();
    out.push_str("{\"operator\":");
    out.push_str(&json_str(&r.operator));
    out.push_str(",\"inputs\":{");
    for (k, (name, v)) in r.inputs.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:{}", json_str(name), json_str(v));
    }
    out.push_str("},\"values\":{");
    for (k, (name, v)) in r.values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:{}", json_str(name), json_float(*v));
    }
    let _ = write!(
        out,
        "}},\"error_estimate\":{},\"residual\":{},\"tolerance\":{},\"pass\":{},\"error\":{},\"message\":{},\"wall_ms\":{}}}",
        json_opt_float(r.error_estimate),
        json_opt_float(r.residual),
        json_opt_float(r.tolerance),
        r.pass.map_or("null".to_string(), |p| p.to_string()),
        r.error.as_deref().map_or("null".to_string(), json_str),
        r.message.as_deref().map_or("null".to_string(), json_str),
        json_float(r.wall_ms),
    );
    out
}

pub fn render_json(records: &[ReportRecord]) -> String {
    records.iter().map(|r| to_json_line(r) + "\n").collect()
}

pub const CSV_HEADER: [&str; 10] =
    ["operator", "inputs", "values", "error_estimate", "residual", "tolerance", "pass", "error", "message", "wall_ms"];

pub fn render_csv(records: &[ReportRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    for r in records {
        let inputs = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        let values = r.values.iter().map(|(k, v)| format!("{k}={}", format_float(*v))).collect::<Vec<_>>().join(";");
        w.write_record([
            r.operator.clone(),
            inputs,
            values,
            opt(r.error_estimate),
            opt(r.residual),
            opt(r.tolerance),
            r.pass.map(|p| p.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
            r.message.clone().unwrap_or_default(),
            format_float(r.wall_ms),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
