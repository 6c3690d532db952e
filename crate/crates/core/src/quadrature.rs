//! Weighted quadrature `∫_0^R g(x) x^{2k} dx` for `Re k > -1/2`, and the
//! full-line version with `|x|^{2k}`, split at the origin.
//!
//! `[1, R]` always uses composite Gauss–Legendre on uniform panels. On `[0, 1]`
//! the rule depends on `k`: for `Re k >= 0` Gauss–Legendre on panels graded
//! geometrically towards 0, for `-1/2 < Re k < 0` tanh-sinh with the weight
//! folded into the log of the Jacobian so `x^{2k}` never overflows.
//! Each integral is refined by halving panel widths (or the tanh-sinh step)
//! until two successive levels agree to `rel_tol` relative to `∫|integrand|`,
//! which keeps integrals that cancel to zero from refining forever.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointRule {
    /// Graded Gauss–Legendre for `Re k >= 0`, tanh-sinh otherwise.
    Auto,
    GaussLegendre,
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Truncation radius. `None` derives it from the tail bound.
    pub radius: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub endpoint_rule: EndpointRule,
    /// Uniform panels per unit length on `[1, R]` at the coarsest level.
    pub panels: usize,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radius: None,
            abs_tol: 1e-15,
            rel_tol: 1e-12,
            endpoint_rule: EndpointRule::Auto,
            panels: 1,
            order: 20,
            max_refinements: 4,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        Self {
            radius: Some(radius),
            ..self
        }
    }
}

/// Envelope `scale · x^degree · e^{-alpha x² + growth x}` of the integrand
/// (weight excluded) for large `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub alpha: f64,
    pub growth: f64,
    pub degree: f64,
    pub scale: f64,
    /// Smallest radius to try.
    pub min_radius: f64,
}

impl TailModel {
    /// Gaussian-class envelope with the default starting radius `max(9, |c| + 9)`.
    pub fn gaussian(alpha: f64, growth: f64, degree: f64, scale: f64, center: f64) -> Self {
        Self {
            alpha,
            growth,
            degree,
            scale,
            min_radius: (center.abs() + 9.0).max(9.0),
        }
    }
}

/// Envelope of the weighted integrand at `R`.
pub fn tail_bound(model: &TailModel, k_re: f64, radius: f64) -> f64 {
    let log = -model.alpha * radius * radius + model.growth * radius + (2.0 * k_re + model.degree) * radius.ln();
    model.scale.max(1.0) * log.exp()
}

const MAX_RADIUS: f64 = 400.0;

/// Radius used for an integral: the explicit one if it passes the tail
/// bound, else the first `R >= min_radius` in unit steps that does.
pub fn resolve_radius(spec: &QuadratureSpec, model: &TailModel, k_re: f64) -> Result<f64> {
    if let Some(r) = spec.radius {
        let bound = tail_bound(model, k_re, r);
        if !(r > 1.0 && bound < spec.abs_tol) {
            return Err(Error::TailBound {
                radius: r,
                bound,
                abs_tol: spec.abs_tol,
            });
        }
        return Ok(r);
    }
    let mut r = model.min_radius.max(2.0);
    loop {
        let bound = tail_bound(model, k_re, r);
        if bound < spec.abs_tol {
            return Ok(r);
        }
        if r >= MAX_RADIUS {
            return Err(Error::TailBound {
                radius: r,
                bound,
                abs_tol: spec.abs_tol,
            });
        }
        r += 1.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleUsed {
    GradedGaussLegendre,
    TanhSinhGaussLegendre,
}

impl RuleUsed {
    pub fn name(self) -> &'static str {
        match self {
            RuleUsed::GradedGaussLegendre => "graded-gauss-legendre",
            RuleUsed::TanhSinhGaussLegendre => "tanh-sinh+gauss-legendre",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureInfo {
    #[serde(rename = "R")]
    pub radius: f64,
    pub panels: usize,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub info: QuadratureInfo,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const GRADING_RATIO: f64 = 0.15;
const GRADING_LEVELS: i32 = 20;
const TANH_SINH_SPAN: f64 = 8.0;

/// Running value and `∫|integrand|`.
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    value: Complex64,
    l1: f64,
}

impl Sum {
    fn add(&mut self, term: Complex64) {
        self.value += term;
        self.l1 += term.norm();
    }

    fn merge(&mut self, other: Sum) {
        self.value += other.value;
        self.l1 += other.l1;
    }
}

struct Engine<'a, G> {
    g: &'a G,
    two_k: Complex64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl<G: Fn(f64) -> Result<Complex64>> Engine<'_, G> {
    fn panel(&self, a: f64, b: f64) -> Result<Sum> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Sum::default();
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            let x = mid + half * z;
            let weight = (self.two_k * x.ln()).exp();
            acc.add(*w * half * weight * (self.g)(x)?);
        }
        Ok(acc)
    }

    fn split(&self, a: f64, b: f64, pieces: usize) -> Result<Sum> {
        let h = (b - a) / pieces as f64;
        let mut acc = Sum::default();
        for j in 0..pieces {
            let lo = a + j as f64 * h;
            let hi = if j + 1 == pieces { b } else { lo + h };
            acc.merge(self.panel(lo, hi)?);
        }
        Ok(acc)
    }

    /// `[1, R]`, `panels_per_unit` uniform panels per unit length.
    fn outer(&self, radius: f64, panels_per_unit: usize) -> Result<(Sum, usize)> {
        let count = ((radius - 1.0) * panels_per_unit as f64).ceil().max(1.0) as usize;
        Ok((self.split(1.0, radius, count)?, count))
    }

    /// `[0, 1]` on geometrically graded panels, each split in `pieces`.
    fn graded(&self, pieces: usize) -> Result<(Sum, usize)> {
        let mut acc = self.split(0.0, GRADING_RATIO.powi(GRADING_LEVELS), pieces)?;
        for j in (0..GRADING_LEVELS).rev() {
            acc.merge(self.split(GRADING_RATIO.powi(j + 1), GRADING_RATIO.powi(j), pieces)?);
        }
        Ok((acc, (GRADING_LEVELS as usize + 1) * pieces))
    }

    /// `[0, 1]` by tanh-sinh with step `h`: `x = 1/(1 + e^{-a})`, `a = π sinh u`.
    fn tanh_sinh(&self, h: f64) -> Result<(Sum, usize)> {
        let n = (TANH_SINH_SPAN / h).ceil() as i64;
        let mut acc = Sum::default();
        for j in -n..=n {
            let u = j as f64 * h;
            let a = PI * u.sinh();
            // ln x = -softplus(-a), ln(dx/du) = ln(π cosh u) - ln(2 + 2 cosh a)
            let ln_x = -softplus(-a);
            let ln_jac = (PI * u.cosh()).ln() - (a.abs() + 2.0 * (-a.abs()).exp().ln_1p());
            let weight = (self.two_k * ln_x + ln_jac).exp();
            if weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            let x = 1.0 / (1.0 + (-a).exp());
            acc.add(h * weight * (self.g)(x)?);
        }
        Ok((acc, (2 * n + 1) as usize))
    }
}

fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

fn pick_rule(spec: &QuadratureSpec, k: Complex64) -> RuleUsed {
    match spec.endpoint_rule {
        EndpointRule::GaussLegendre => RuleUsed::GradedGaussLegendre,
        EndpointRule::TanhSinh => RuleUsed::TanhSinhGaussLegendre,
        EndpointRule::Auto if k.re < 0.0 => RuleUsed::TanhSinhGaussLegendre,
        EndpointRule::Auto => RuleUsed::GradedGaussLegendre,
    }
}

fn check_k(k: Complex64) -> Result<()> {
    if k.re <= -0.5 || !k.re.is_finite() || !k.im.is_finite() {
        return Err(Error::Precondition(format!(
            "weighted quadrature needs Re k > -1/2, got k = {k}"
        )));
    }
    Ok(())
}

/// `∫_0^R g(x) x^{2k} dx` with `R` from [`resolve_radius`].
pub fn integrate_half_line<G>(g: &G, k: Complex64, spec: &QuadratureSpec, tail: &TailModel) -> Result<QuadratureResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    check_k(k)?;
    let radius = resolve_radius(spec, tail, k.re)?;
    let (nodes, weights) = gauss_legendre(spec.order.max(2));
    let engine = Engine {
        g,
        two_k: 2.0 * k,
        nodes,
        weights,
    };
    let rule = pick_rule(spec, k);
    let level = |l: usize| -> Result<(Sum, usize)> {
        let scale = 1usize << l;
        let (mut outer, n_outer) = engine.outer(radius, spec.panels.max(1) * scale)?;
        let (inner, n_inner) = match rule {
            RuleUsed::GradedGaussLegendre => engine.graded(scale)?,
            RuleUsed::TanhSinhGaussLegendre => engine.tanh_sinh(0.125 / scale as f64)?,
        };
        outer.merge(inner);
        Ok((outer, n_outer + n_inner))
    };
    let (mut prev, _) = level(0)?;
    let mut last_change = f64::INFINITY;
    for l in 1..=spec.max_refinements.max(1) {
        let (cur, panels) = level(l)?;
        let change = (cur.value - prev.value).norm();
        if change <= spec.rel_tol * cur.l1 + spec.abs_tol {
            return Ok(QuadratureResult {
                value: cur.value,
                info: QuadratureInfo {
                    radius,
                    panels,
                    rule: rule.name().to_string(),
                },
            });
        }
        prev = cur;
        last_change = change;
    }
    Err(Error::QuadratureTolerance {
        estimate: prev.value.norm(),
        change: last_change,
    })
}

/// `∫_{-R}^{R} g(x) |x|^{2k} dx`, evaluated as `∫_0^R (g(x) + g(-x)) x^{2k} dx`.
pub fn integrate_line<G>(g: &G, k: Complex64, spec: &QuadratureSpec, tail: &TailModel) -> Result<QuadratureResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let folded = |x: f64| -> Result<Complex64> { Ok(g(x)? + g(-x)?) };
    integrate_half_line(&folded, k, spec, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gaussian_tail() -> TailModel {
        TailModel::gaussian(1.0, 0.0, 2.0, 1.0, 0.0)
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn gaussian_moments_both_rules() {
        // ∫_0^∞ e^{-x²} x^{2k} dx = Γ(k + 1/2)/2
        for k in [-0.45, -0.25, 0.0, 0.25, 1.0, 2.5] {
            let g = |x: f64| Ok(c((-x * x).exp()));
            let got = integrate_half_line(&g, c(k), &QuadratureSpec::default(), &gaussian_tail()).unwrap();
            let want = gamma(c(k + 0.5)) / 2.0;
            assert!((got.value - want).norm() < 1e-12 * want.norm(), "k = {k}: {got:?}");
        }
        for rule in [EndpointRule::GaussLegendre, EndpointRule::TanhSinh] {
            let spec = QuadratureSpec {
                endpoint_rule: rule,
                ..Default::default()
            };
            let g = |x: f64| Ok(c(x * x * (-x * x).exp()));
            let got = integrate_half_line(&g, c(0.3), &spec, &gaussian_tail()).unwrap();
            let want = gamma(c(1.8)) / 2.0;
            assert!((got.value - want).norm() < 1e-12 * want.norm(), "{rule:?}");
        }
    }

    #[test]
    fn complex_k_moment() {
        let k = Complex64::new(0.4, 0.7);
        let g = |x: f64| Ok(c((-x * x).exp()));
        let got = integrate_line(&g, k, &QuadratureSpec::default(), &gaussian_tail()).unwrap();
        let want = gamma(k + 0.5);
        assert!((got.value - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn radius_follows_tail_bound() {
        let spec = QuadratureSpec::default();
        assert_eq!(resolve_radius(&spec, &gaussian_tail(), 1.0).unwrap(), 9.0);
        let shifted = TailModel::gaussian(0.5, 5.4, 4.0, 1.0, 1.2);
        let r = resolve_radius(&spec, &shifted, 2.5).unwrap();
        assert!(r > 10.2 && tail_bound(&shifted, 2.5, r) < spec.abs_tol);
        assert!(matches!(
            resolve_radius(&spec.with_radius(3.0), &gaussian_tail(), 1.0),
            Err(Error::TailBound { .. })
        ));
    }

    #[test]
    fn rejects_k_below_minus_half() {
        let g = |x: f64| Ok(c((-x * x).exp()));
        assert!(integrate_half_line(&g, c(-0.5), &QuadratureSpec::default(), &gaussian_tail()).is_err());
    }
}
