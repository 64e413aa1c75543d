#![allow(dead_code)]

use serde_json::Value;

/// Extended-precision reference values generated by `oracles/extended_precision.py`.
pub fn oracle() -> Value {
    serde_json::from_str(include_str!("../oracles/extended_precision.json")).expect("oracle JSON parses")
}

pub fn num(v: &Value) -> f64 {
    v.as_str().expect("oracle numbers are strings").parse().expect("oracle number parses")
}

pub fn pair(v: &Value) -> (f64, f64) {
    (num(&v[0]), num(&v[1]))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub mod inequalities;
