//! The even eigenfunction `φ_λ(x, k) = f(xλ, k)` of
//! `L = d²/dx² + (2k/x) d/dx`, the Dunkl eigenfunction
//! `ψ_λ = φ_λ + φ_λ'/(2λ) = g(xλ)` with `g = f + f'/2`, and the truncated
//! Bessel polynomials that replace them at `k = -n - 1/2`.
//!
//! `f(t, k) = Σ_m t^{2m} / (m! (k+1/2)(k+3/2)⋯(k-1/2+m))` solves
//! `f'' + (2k/t) f' - 4f = 0` with `f(0) = 1`. The series is summed through the
//! term ratio `t² / (m (k - 1/2 + m))`; its poles are `k ∈ {-1/2, -3/2, …}`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::polyrep::check_regular_k;

/// Truncation policy for the power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvalSpec {
    pub max_terms: usize,
    pub rel_tol: f64,
    /// Consecutive negligible terms required before stopping.
    pub guard_terms: usize,
}

impl Default for SeriesEvalSpec {
    fn default() -> Self {
        Self {
            max_terms: 500,
            rel_tol: 1e-15,
            guard_terms: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms_used: usize,
}

/// `f`, `f'`, `f''` at one point.
#[derive(Debug, Clone, Copy)]
pub struct SeriesJet {
    pub f: Complex64,
    pub df: Complex64,
    pub d2f: Complex64,
    pub terms_used: usize,
}

struct Accumulator {
    sum: Complex64,
    quiet: usize,
}

impl Accumulator {
    fn push(&mut self, term: Complex64, rel_tol: f64) {
        self.sum += term;
        if term.norm() <= rel_tol * self.sum.norm() {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
    }
}

/// Sums `f`, `f'` and `f''` term by term.
///
/// Stops once every series has seen `guard_terms` consecutive terms below
/// `rel_tol` relative to its partial sum, and only after `m >= |t|`: the
/// terms grow until `m ≈ |t|`, so an early lull is never trusted.
pub fn series_jet(t: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<SeriesJet> {
    check_regular_k(k, spec.max_terms)?;
    let t2 = t * t;
    let t_abs = t.norm();
    // b holds a_{m-1} t^{2m-2}
    let mut b = Complex64::new(1.0, 0.0);
    let mut f = Accumulator { sum: b, quiet: 0 };
    let mut df = Accumulator { sum: Complex64::zero(), quiet: 0 };
    let mut d2f = Accumulator { sum: Complex64::zero(), quiet: 0 };
    for m in 1..=spec.max_terms {
        let mf = m as f64;
        let denom = k - 0.5 + mf;
        let ratio = b / denom;
        df.push(2.0 * t * ratio, spec.rel_tol);
        d2f.push(2.0 * (2.0 * mf - 1.0) * ratio, spec.rel_tol);
        b = ratio * t2 / mf;
        f.push(b, spec.rel_tol);
        let quiet = f.quiet.min(df.quiet).min(d2f.quiet);
        if quiet >= spec.guard_terms && mf >= t_abs {
            return Ok(SeriesJet {
                f: f.sum,
                df: df.sum,
                d2f: d2f.sum,
                terms_used: m + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        terms: spec.max_terms,
        t_abs,
    })
}

/// `φ_λ(x, k) = f(xλ, k)`.
pub fn phi(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<SeriesValue> {
    let jet = series_jet(x * lambda, k, spec)?;
    Ok(SeriesValue {
        value: jet.f,
        terms_used: jet.terms_used,
    })
}

/// `d/dx φ_λ(x) = λ f'(xλ)`.
pub fn phi_deriv(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<SeriesValue> {
    let jet = series_jet(x * lambda, k, spec)?;
    Ok(SeriesValue {
        value: lambda * jet.df,
        terms_used: jet.terms_used,
    })
}

/// `ψ_λ(x) = g(xλ)`, with the convention `ψ_0 = 1`.
pub fn psi(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<SeriesValue> {
    if lambda.is_zero() {
        check_regular_k(k, spec.max_terms)?;
        return Ok(SeriesValue {
            value: Complex64::one(),
            terms_used: 1,
        });
    }
    let jet = series_jet(x * lambda, k, spec)?;
    Ok(SeriesValue {
        value: jet.f + 0.5 * jet.df,
        terms_used: jet.terms_used,
    })
}

fn require_nonzero_x(x: Complex64) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Precondition("x must be nonzero".into()));
    }
    Ok(())
}

/// `|Dψ_λ(x) - 2λψ_λ(x)|`, with `D` applied through the parity split:
/// `d/dx` on the even part `φ_λ`, `d/dx + 2k/x` on the odd part `φ_λ'/(2λ)`.
pub fn dunkl_residual_psi(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<f64> {
    require_nonzero_x(x)?;
    if lambda.is_zero() {
        check_regular_k(k, spec.max_terms)?;
        return Ok(0.0);
    }
    let jet = series_jet(x * lambda, k, spec)?;
    let even = jet.f;
    let odd = 0.5 * jet.df;
    let d_even = lambda * jet.df;
    let d_odd = 0.5 * lambda * jet.d2f + 2.0 * k * odd / x;
    let psi = even + odd;
    Ok((d_even + d_odd - 2.0 * lambda * psi).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LResidual {
    /// `|Lφ - 4λ²φ|`.
    pub direct: f64,
    /// `|H u - 4λ² u|` for `u = |x|^k φ` and `H = d²/dx² + k(1-k)/x²`.
    pub conjugated: f64,
}

pub fn l_residual_phi(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<LResidual> {
    require_nonzero_x(x)?;
    let jet = series_jet(x * lambda, k, spec)?;
    let phi = jet.f;
    let dphi = lambda * jet.df;
    let d2phi = lambda * lambda * jet.d2f;
    let eig = 4.0 * lambda * lambda;
    let direct = (d2phi + 2.0 * k * dphi / x - eig * phi).norm();

    // φ is even, so evaluate the conjugated form at r = |x| > 0.
    let r = Complex64::new(x.norm(), 0.0);
    let sign = if x.re < 0.0 { -1.0 } else { 1.0 };
    let dphi_r = sign * dphi;
    let w = r.powc(k);
    let u = w * phi;
    let d2u = w * (d2phi + 2.0 * k * dphi_r / r + k * (k - 1.0) * phi / (r * r));
    let conjugated = (d2u + k * (1.0 - k) * u / (r * r) - eig * u).norm();
    Ok(LResidual { direct, conjugated })
}

/// Relative error between `(1/x) dφ_λ/dx (x, k)` and `4λ²/(1+2k) φ_λ(x, k+1)`.
pub fn shift_check(x: Complex64, lambda: Complex64, k: Complex64, spec: &SeriesEvalSpec) -> Result<f64> {
    require_nonzero_x(x)?;
    check_regular_k(k + 1.0, spec.max_terms)?;
    let lhs = phi_deriv(x, lambda, k, spec)?.value / x;
    let rhs = 4.0 * lambda * lambda / (1.0 + 2.0 * k) * phi(x, lambda, k + 1.0, spec)?.value;
    let diff = (lhs - rhs).norm();
    if diff == 0.0 {
        return Ok(0.0);
    }
    Ok(diff / rhs.norm().max(lhs.norm()))
}

/// JSON record for a single evaluation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalRecord {
    pub x: f64,
    pub lambda: f64,
    pub k: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub terms_used: usize,
}

impl EvalRecord {
    pub fn new(x: f64, lambda: f64, k: f64, v: SeriesValue) -> Self {
        Self {
            x,
            lambda,
            k,
            value_re: v.value.re,
            value_im: v.value.im,
            terms_used: v.terms_used,
        }
    }
}

/// Exact truncated Bessel data at `k = -n - 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedBessel {
    pub n: usize,
    /// `f_n`, even, degree `2n`, ascending powers of `t`.
    pub f: Polynomial<BigRational>,
    /// `g_n = f_n + f_n'/2`.
    pub g: Polynomial<BigRational>,
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, i| acc * BigRational::from_integer(i.into()))
}

fn minus_one_pow(n: usize) -> BigRational {
    if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

pub fn truncation_k(n: usize) -> BigRational {
    BigRational::new((-(2 * n as i64) - 1).into(), 2.into())
}

/// `f_n(t) = Σ_{m=0}^{n} (-1)^{n-m} (n-m)!/m! t^{2m}`.
pub fn truncated_f_closed_form(n: usize) -> Polynomial<BigRational> {
    let mut coeffs = vec![BigRational::zero(); 2 * n + 1];
    for m in 0..=n {
        coeffs[2 * m] = minus_one_pow(n - m) * factorial(n - m) / factorial(m);
    }
    Polynomial::from_coeffs(coeffs)
}

/// Diagonal kernel coefficients from `c_l = 2 c_{l-1} / (l + (1-(-1)^l) k)`
/// at `k = -n - 1/2`, seeded with `c_0 = (-1)^n n!`.
pub fn truncated_g_recursion(n: usize) -> Polynomial<BigRational> {
    let k = truncation_k(n);
    let two = BigRational::from_integer(2.into());
    let mut coeffs = vec![minus_one_pow(n) * factorial(n)];
    for l in 1..=2 * n {
        let mut factor = BigRational::from_integer(l.into());
        if l % 2 == 1 {
            factor += &two * &k;
        }
        let prev = coeffs[l - 1].clone();
        coeffs.push(&two * prev / factor);
    }
    Polynomial::from_coeffs(coeffs)
}

fn g_from_f(f: &Polynomial<BigRational>) -> Polynomial<BigRational> {
    f + &f.derivative().scale(&BigRational::new(1.into(), 2.into()))
}

/// Builds `f_n` and `g_n` from the closed form and from the kernel recursion
/// and panics if the two disagree.
pub fn truncated_bessel(n: usize) -> TruncatedBessel {
    let f = truncated_f_closed_form(n);
    let g = g_from_f(&f);
    let g_rec = truncated_g_recursion(n);
    assert_eq!(g, g_rec, "closed form and recursion disagree at n = {n}");
    assert_eq!(f, g_rec.even_part());
    TruncatedBessel { n, f, g }
}

/// `f'' + (2k/t) f' - 4f` at `k = -n - 1/2`, exactly. Vanishes mod `t^{2n}`.
pub fn truncated_bessel_residual(n: usize) -> Polynomial<BigRational> {
    let f = truncated_f_closed_form(n);
    let df = f.derivative();
    // f' is odd, so f'/t is a polynomial
    let df_over_t = Polynomial::from_coeffs(df.coeffs().iter().skip(1).cloned().collect());
    let two_k = truncation_k(n) * BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    &(&df.derivative() + &df_over_t.scale(&two_k)) - &f.scale(&four)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn spec() -> SeriesEvalSpec {
        SeriesEvalSpec::default()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn phi_at_zero_lambda_is_one() {
        for k in [0.0, 0.25, 1.7] {
            assert_eq!(phi(c(3.0), c(0.0), c(k), &spec()).unwrap().value, c(1.0));
        }
    }

    #[test]
    fn phi_k0_is_cosh() {
        for (x, l) in [(0.5, 1.0), (-1.3, 0.7), (2.0, 2.0)] {
            let got = phi(c(x), c(l), c(0.0), &spec()).unwrap().value;
            assert!(rel(got, c((2.0 * x * l).cosh())) < 1e-14);
        }
    }

    #[test]
    fn phi_k_half_is_i0_series() {
        // Σ t^{2m}/(m!)², summed independently
        let t: f64 = 1.1;
        let mut term = 1.0;
        let mut want = 1.0;
        for m in 1..60 {
            term *= t * t / (m as f64 * m as f64);
            want += term;
        }
        let got = phi(c(1.0), c(t), c(0.5), &spec()).unwrap().value;
        assert!(rel(got, c(want)) < 1e-14);
    }

    #[test]
    fn phi_deriv_examples() {
        assert_eq!(phi_deriv(c(0.0), c(0.8), c(1.0), &spec()).unwrap().value, c(0.0));
        let (x, l) = (0.4, 1.3);
        let got = phi_deriv(c(x), c(l), c(0.0), &spec()).unwrap().value;
        assert!(rel(got, c(2.0 * l * (2.0 * x * l).sinh())) < 1e-14);
        // central difference oracle
        let (x, l, k) = (0.7, 0.4, 1.3);
        let h = 1e-5;
        let fd = (phi(c(x + h), c(l), c(k), &spec()).unwrap().value
            - phi(c(x - h), c(l), c(k), &spec()).unwrap().value)
            / (2.0 * h);
        let got = phi_deriv(c(x), c(l), c(k), &spec()).unwrap().value;
        assert!(rel(got, fd) < 1e-8);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(c(2.0), c(0.0), c(0.3), &spec()).unwrap().value, c(1.0));
        let got = psi(c(0.6), c(-0.9), c(0.0), &spec()).unwrap().value;
        assert!(rel(got, c((2.0 * 0.6 * -0.9f64).exp())) < 1e-13);
        let (mu, l, k) = (Complex64::new(0.3, 0.2), Complex64::new(-1.1, 0.4), c(0.75));
        let a = psi(mu, l, k, &spec()).unwrap().value;
        let b = psi(l, mu, k, &spec()).unwrap().value;
        assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn residuals_are_small() {
        assert!(dunkl_residual_psi(c(0.8), c(0.5), c(1.0), &spec()).unwrap() < 1e-10);
        assert_eq!(dunkl_residual_psi(c(0.8), c(0.0), c(1.0), &spec()).unwrap(), 0.0);
        assert!(dunkl_residual_psi(c(-1.2), c(0.9), c(0.0), &spec()).unwrap() < 1e-10);
        let r = l_residual_phi(c(0.9), c(0.3), c(1.5), &spec()).unwrap();
        assert!(r.direct < 1e-9 && r.conjugated < 1e-9, "{r:?}");
        let r = l_residual_phi(c(0.9), c(0.0), c(1.5), &spec()).unwrap();
        assert_eq!(r.direct, 0.0);
        let r = l_residual_phi(c(-1.4), c(0.8), c(0.0), &spec()).unwrap();
        assert!(r.direct < 1e-10);
        assert!(dunkl_residual_psi(c(0.0), c(1.0), c(1.0), &spec()).is_err());
    }

    #[test]
    fn shift_formula() {
        assert!(shift_check(c(0.6), c(0.7), c(0.5), &spec()).unwrap() < 1e-9);
        assert_eq!(shift_check(c(0.6), c(0.0), c(0.5), &spec()).unwrap(), 0.0);
        // k = 0: (1/x)·2λ sinh(2λx) against 4λ² f(xλ, 1) with f(t,1) = Σ t^{2m}/(m!(3/2)_m)
        let (x, l) = (1.1, 0.45);
        let t = x * l;
        let (mut term, mut f1) = (1.0, 1.0);
        for m in 1..60 {
            let m = m as f64;
            term *= t * t / (m * (m + 0.5));
            f1 += term;
        }
        let lhs = 2.0 * l * (2.0 * l * x).sinh() / x;
        assert!((lhs - 4.0 * l * l * f1).abs() < 1e-13 * lhs);
        assert!(shift_check(c(x), c(l), c(0.0), &spec()).unwrap() < 1e-13);
    }

    #[test]
    fn singular_k_rejected() {
        for k in [-0.5, -1.5, -2.5 + 1e-10] {
            assert!(matches!(
                phi(c(1.0), c(1.0), c(k), &spec()),
                Err(Error::SingularParameter { .. })
            ));
        }
        let tight = SeriesEvalSpec { max_terms: 5, ..spec() };
        assert!(matches!(
            phi(c(10.0), c(1.0), c(1.0), &tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn truncated_bessel_small_cases() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let t0 = truncated_bessel(0);
        assert_eq!(t0.f.coeffs(), &[q(1)]);
        assert_eq!(t0.g.coeffs(), &[q(1)]);
        let t1 = truncated_bessel(1);
        assert_eq!(t1.f.coeffs(), &[q(-1), q(0), q(1)]);
        assert_eq!(t1.g.coeffs(), &[q(-1), q(1), q(1)]);
        for n in 0..=12 {
            let tb = truncated_bessel(n);
            assert_eq!(tb.f.coeff(0), minus_one_pow(n) * factorial(n));
            assert_eq!(tb.g.coeff(0), tb.f.coeff(0));
            let res = truncated_bessel_residual(n);
            assert!(res.coeffs().iter().take(2 * n).all(Zero::is_zero), "n = {n}");
        }
    }
}
