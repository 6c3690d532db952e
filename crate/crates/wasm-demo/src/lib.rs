//! wasm-bindgen exports for the static page in `www/`. Every export returns a
//! JSON string; errors come back as `{"error": "..."}`.

use dunkl_hankel::bessel::{phi, psi, SeriesEvalSpec};
use dunkl_hankel::poly::Polynomial;
use dunkl_hankel::quadrature::QuadratureSpec;
use dunkl_hankel::transform::{transform_curve as curve, GaussianPolynomial};
use dunkl_hankel::truncated::{truncated_json as truncated, truncated_report};
use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest truncation index the page may request.
pub const MAX_TRUNCATION: usize = 12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// `{x: [...], phi: [...], psi: [...]}` for real `k` and `λ`.
#[wasm_bindgen]
pub fn kernel_curves(k: f64, lambda: f64, x_min: f64, x_max: f64, count: usize) -> String {
    let spec = SeriesEvalSpec::default();
    let xs = grid(x_min, x_max, count.min(2000));
    let mut phis = Vec::with_capacity(xs.len());
    let mut psis = Vec::with_capacity(xs.len());
    for &x in &xs {
        let p = phi(c(x), c(lambda), c(k), &spec).and_then(|p| Ok((p, psi(c(x), c(lambda), c(k), &spec)?)));
        match p {
            Ok((p, s)) => {
                phis.push(p.value.re);
                psis.push(s.value.re);
            }
            Err(e) => return error(e),
        }
    }
    json!({ "x": xs, "phi": phis, "psi": psis }).to_string()
}

/// Quadrature against the exact transform of `p(x) e^{-x²}`, with `p` given
/// as comma separated ascending coefficients.
#[wasm_bindgen]
pub fn transform_curve(k: f64, poly: &str, l_min: f64, l_max: f64, count: usize) -> String {
    let coeffs: Result<Vec<f64>, _> = poly.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let Ok(coeffs) = coeffs else {
        return error(format!("cannot parse polynomial {poly:?}"));
    };
    let f = GaussianPolynomial::decaying(Polynomial::from_real(&coeffs), c(k));
    let lambdas = grid(l_min, l_max, count.min(400));
    match curve(&f, &lambdas, &QuadratureSpec::default()) {
        Ok(points) => {
            let quad: Vec<f64> = points.iter().map(|p| p.quadrature.re).collect();
            let oracle: Vec<f64> = points.iter().map(|p| p.oracle.re).collect();
            let worst = points
                .iter()
                .map(|p| (p.quadrature - p.oracle).norm() / p.oracle.norm().max(1.0))
                .fold(0.0, f64::max);
            json!({ "lambda": lambdas, "quadrature": quad, "oracle": oracle, "max_rel_err": worst }).to_string()
        }
        Err(e) => error(e),
    }
}

/// Matrices and exact checks of the truncated module at `k = -n - 1/2`.
#[wasm_bindgen]
pub fn truncated_json(n: usize) -> String {
    if n > MAX_TRUNCATION {
        return error(format!("n must be at most {MAX_TRUNCATION}"));
    }
    let mut v: Value = truncated(n);
    v["pass"] = json!(truncated_report(n).pass());
    v.to_string()
}
