//! Versioned JSON check reports and CSV curves.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::quadrature::QuadratureInfo;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub schema_version: u32,
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    pub lhs: Value,
    pub rhs: Value,
    pub rel_err: f64,
    pub quadrature: Option<QuadratureInfo>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            lhs: Value::Null,
            rhs: Value::Null,
            rel_err: 0.0,
            quadrature: None,
            pass: true,
            details: None,
        }
    }

    pub fn param(mut self, name: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(name.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn sides(mut self, lhs: Complex64, rhs: Complex64) -> Self {
        self.lhs = complex_json(lhs);
        self.rhs = complex_json(rhs);
        self
    }

    /// Sets `rel_err` and `pass = rel_err < tol` (NaN fails).
    pub fn judge(mut self, rel_err: f64, tol: f64) -> Self {
        self.rel_err = rel_err;
        self.pass = rel_err < tol;
        self.parameters.insert("tolerance".into(), json!(tol));
        self
    }

    pub fn with_quadrature(mut self, info: QuadratureInfo) -> Self {
        self.quadrature = Some(info);
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `|a - b| / |b|`, or `|a - b|` when `b = 0`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let diff = (a - b).norm();
    let scale = b.norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// `max |a_i - b_i| / max |b_i|` over a grid.
pub fn normwise_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// CSV with columns `<x_name>,re,im`.
pub fn curve_csv(x_name: &str, rows: &[(f64, Complex64)]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([x_name, "re", "im"]).expect("in-memory write");
    for (x, v) in rows {
        writer
            .write_record([x.to_string(), v.re.to_string(), v.im.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_schema_keys() {
        let r = CheckReport::new("demo")
            .param("k", 1.0)
            .sides(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            .judge(0.0, 1e-8);
        let v: Value = serde_json::from_str(&r.to_json_string()).unwrap();
        for key in ["schema_version", "check_name", "parameters", "lhs", "rhs", "rel_err", "quadrature", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["pass"], json!(true));
        assert!(!CheckReport::new("nan").judge(f64::NAN, 1.0).pass);
    }

    #[test]
    fn csv_layout() {
        let s = curve_csv("x", &[(0.5, Complex64::new(1.5, 0.0))]);
        assert_eq!(s, "x,re,im\n0.5,1.5,0\n");
    }
}
