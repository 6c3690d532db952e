//! Symmetric and nonsymmetric Hankel transforms with weight `|x|^{2k}`:
//!
//! ```text
//! 𝔽f(λ)    = (2/Γ(k+1/2)) ∫_0^∞ φ_λ(x) f(x) x^{2k} dx
//! ℱf(λ)    = (1/Γ(k+1/2)) ∫_ℝ  ψ_λ(x) f(x) |x|^{2k} dx
//! ℱ_im g(x) = (1/Γ(k+1/2)) ∫_ℝ  ψ_x(-it) g(it) |t|^{2k} dt
//! ```
//!
//! The last one is the integral over the imaginary axis `λ = it` with the
//! factor `1/i` from `dλ = i dt` absorbed, so that `ℱ_im(e^{λ²}) = e^{-x²}`.
//!
//! Gaussian polynomials `p(x) e^{∓x²}` carry the exact side: `D`, `L`, `x d/dx`
//! act on them through the polynomial factor, and
//! `ℱ(p e^{-x²}) = e^{λ²} (exp(D²/4) p)(λ)` is computed without quadrature.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::{phi, psi, SeriesEvalSpec};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::polyrep::{check_regular_k, dunkl_apply, exp_half_d_squared, DunklContext};
use crate::quadrature::{integrate_half_line, integrate_line, QuadratureInfo, QuadratureResult, QuadratureSpec, TailModel};
use crate::report::{normwise_rel_err, rel_err};
use crate::special::gamma;

/// Which Gaussian factor multiplies the polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussianSign {
    /// `e^{-x²}`
    Decaying,
    /// `e^{+x²}`
    Growing,
}

impl GaussianSign {
    /// Exponent `σ` in `e^{σx²}`.
    pub fn sigma(self) -> f64 {
        match self {
            GaussianSign::Decaying => -1.0,
            GaussianSign::Growing => 1.0,
        }
    }
}

/// `p(x) e^{σx²}` at parameter `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolynomial {
    pub p: Polynomial<Complex64>,
    pub sign: GaussianSign,
    pub k: Complex64,
}

impl GaussianPolynomial {
    pub fn new(p: Polynomial<Complex64>, sign: GaussianSign, k: Complex64) -> Self {
        Self { p, sign, k }
    }

    pub fn decaying(p: Polynomial<Complex64>, k: Complex64) -> Self {
        Self::new(p, GaussianSign::Decaying, k)
    }

    pub fn growing(p: Polynomial<Complex64>, k: Complex64) -> Self {
        Self::new(p, GaussianSign::Growing, k)
    }

    /// `x^j e^{-x²}`.
    pub fn monomial(j: usize, k: Complex64) -> Self {
        Self::decaying(Polynomial::monomial(j, Complex64::new(1.0, 0.0)), k)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.p.eval_at(z) * (self.sign.sigma() * z * z).exp()
    }

    fn with_p(&self, p: Polynomial<Complex64>) -> Self {
        Self { p, ..self.clone() }
    }

    fn ctx(&self) -> DunklContext<Complex64> {
        DunklContext::numeric(self.k)
    }

    /// `p e^{σx²} ↦ (p' + 2σxp) e^{σx²}`.
    pub fn derivative(&self) -> Self {
        self.with_p(&self.p.derivative() + &self.p.shift(1).scale(&Complex64::from(2.0 * self.sign.sigma())))
    }

    /// `D(p e^{σx²}) = (Dp + 2σxp) e^{σx²}`, since `e^{σx²}` is even.
    pub fn dunkl(&self) -> Self {
        self.with_p(&dunkl_apply(&self.p, &self.ctx()) + &self.p.shift(1).scale(&Complex64::from(2.0 * self.sign.sigma())))
    }

    pub fn dunkl_laplacian(&self) -> Self {
        self.dunkl().dunkl()
    }

    /// `L = d²/dx² + (2k/x) d/dx`, defined here on even functions only.
    pub fn l_operator(&self) -> Result<Self> {
        if !self.p.is_even() {
            return Err(Error::Precondition("L is applied to even Gaussian polynomials only".into()));
        }
        let d1 = self.derivative();
        // d1 is odd, so d1/x is a polynomial
        let over_x = Polynomial::from_coeffs(d1.p.coeffs().iter().skip(1).copied().collect());
        Ok(self.with_p(&d1.derivative().p + &over_x.scale(&(2.0 * self.k))))
    }

    /// `x d/dx`.
    pub fn euler(&self) -> Self {
        self.with_p(self.derivative().p.shift(1))
    }

    pub fn reflect(&self) -> Self {
        self.with_p(self.p.reflect())
    }

    pub fn mul_x(&self) -> Self {
        self.with_p(self.p.shift(1))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_p(self.p.scale(&c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.sign, other.sign, "Gaussian factors differ");
        self.with_p(&self.p + &other.p)
    }

    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    fn coefficient_scale(&self) -> f64 {
        self.p.coeffs().iter().map(|c| c.norm()).sum()
    }
}

/// Growth envelope `scale · |x|^degree · e^{-alpha x² + growth |x|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub alpha: f64,
    pub growth: f64,
    pub degree: f64,
    pub scale: f64,
}

impl Envelope {
    fn times(self, other: Envelope) -> Envelope {
        Envelope {
            alpha: self.alpha + other.alpha,
            growth: self.growth + other.growth,
            degree: self.degree + other.degree,
            scale: self.scale * other.scale,
        }
    }

    fn with_kernel(self, growth: f64, degree: f64) -> Envelope {
        Envelope {
            growth: self.growth + growth,
            degree: self.degree + degree,
            ..self
        }
    }

    fn tail(self, center: f64) -> TailModel {
        TailModel::gaussian(self.alpha, self.growth, self.degree, self.scale, center)
    }
}

/// A function sampled on the real line, with a decay envelope.
pub trait RealLineFunction: Sync {
    fn eval_real(&self, x: f64) -> Complex64;
    fn envelope_real(&self) -> Envelope;
}

/// A function sampled on the imaginary axis: `eval_imag(t) = g(it)`.
pub trait ImaginaryAxisFunction: Sync {
    fn eval_imag(&self, t: f64) -> Complex64;
    fn envelope_imag(&self) -> Envelope;
}

impl RealLineFunction for GaussianPolynomial {
    fn eval_real(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, 0.0))
    }

    fn envelope_real(&self) -> Envelope {
        Envelope {
            alpha: -self.sign.sigma(),
            growth: 0.0,
            degree: self.degree() as f64,
            scale: self.coefficient_scale(),
        }
    }
}

impl ImaginaryAxisFunction for GaussianPolynomial {
    fn eval_imag(&self, t: f64) -> Complex64 {
        self.eval(Complex64::new(0.0, t))
    }

    fn envelope_imag(&self) -> Envelope {
        // e^{σ(it)²} = e^{-σt²}
        Envelope {
            alpha: self.sign.sigma(),
            growth: 0.0,
            degree: self.degree() as f64,
            scale: self.coefficient_scale(),
        }
    }
}

/// A closure with a caller-supplied envelope.
pub struct EnvelopedFn<F> {
    pub f: F,
    pub envelope: Envelope,
}

impl<F: Fn(f64) -> Complex64 + Sync> RealLineFunction for EnvelopedFn<F> {
    fn eval_real(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    fn envelope_real(&self) -> Envelope {
        self.envelope
    }
}

fn series() -> SeriesEvalSpec {
    SeriesEvalSpec::default()
}

fn kernel_degree(k: Complex64) -> f64 {
    (-k.re).max(0.0)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn prepare(k: Complex64) -> Result<Complex64> {
    check_regular_k(k, series().max_terms)?;
    if k.re <= -0.5 {
        return Err(Error::Precondition(format!("transforms need Re k > -1/2, got k = {k}")));
    }
    Ok(gamma(k + 0.5))
}

fn scaled(mut r: QuadratureResult, factor: Complex64) -> QuadratureResult {
    r.value *= factor;
    r
}

/// `𝔽f(λ)` by quadrature on `[0, R]`.
pub fn hankel_sym<F: RealLineFunction + ?Sized>(
    f: &F,
    lambda: Complex64,
    k: Complex64,
    q: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let gamma_k = prepare(k)?;
    let spec = series();
    let integrand = |x: f64| Ok(phi(c(x), lambda, k, &spec)?.value * f.eval_real(x));
    let tail = f
        .envelope_real()
        .with_kernel(2.0 * lambda.re.abs(), kernel_degree(k))
        .tail(lambda.re);
    Ok(scaled(integrate_half_line(&integrand, k, q, &tail)?, 2.0 / gamma_k))
}

/// `ℱf(λ)` by quadrature on `[-R, R]`.
pub fn hankel_nonsym<F: RealLineFunction + ?Sized>(
    f: &F,
    lambda: Complex64,
    k: Complex64,
    q: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let gamma_k = prepare(k)?;
    let spec = series();
    let integrand = |x: f64| Ok(psi(c(x), lambda, k, &spec)?.value * f.eval_real(x));
    let tail = f
        .envelope_real()
        .with_kernel(2.0 * lambda.re.abs(), kernel_degree(k))
        .tail(lambda.re);
    Ok(scaled(integrate_line(&integrand, k, q, &tail)?, 1.0 / gamma_k))
}

fn require_sign(gp: &GaussianPolynomial, sign: GaussianSign) -> Result<()> {
    if gp.sign != sign {
        return Err(Error::Precondition(format!("expected a {sign:?} Gaussian polynomial")));
    }
    Ok(())
}

/// `ℱ(p e^{-x²}) = e^{λ²} (exp(D²/4) p)(λ)`, exactly in the polynomial factor.
pub fn hankel_gaussian_oracle(gp: &GaussianPolynomial) -> Result<GaussianPolynomial> {
    require_sign(gp, GaussianSign::Decaying)?;
    let q = exp_half_d_squared(&gp.p, &gp.ctx(), 1);
    Ok(GaussianPolynomial::growing(q, gp.k))
}

/// `ℱ_im(e^{λ²} p) = e^{-x²} (exp(-D²/4) p)(x)`.
pub fn hankel_inverse_oracle(gp: &GaussianPolynomial) -> Result<GaussianPolynomial> {
    require_sign(gp, GaussianSign::Growing)?;
    let q = exp_half_d_squared(&gp.p, &gp.ctx(), -1);
    Ok(GaussianPolynomial::decaying(q, gp.k))
}

/// `ℱ_im g(x)` by quadrature along `λ = it`.
pub fn hankel_inverse_im<G: ImaginaryAxisFunction + ?Sized>(
    g: &G,
    x: Complex64,
    k: Complex64,
    q: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let gamma_k = prepare(k)?;
    let spec = series();
    let integrand = |t: f64| Ok(psi(x, Complex64::new(0.0, -t), k, &spec)?.value * g.eval_imag(t));
    let tail = g
        .envelope_imag()
        .with_kernel(2.0 * x.im.abs(), kernel_degree(k))
        .tail(x.im);
    Ok(scaled(integrate_line(&integrand, k, q, &tail)?, 1.0 / gamma_k))
}

/// `⟨f, g⟩_re = ∫_ℝ f(x) g(x) |x|^{2k} dx`.
pub fn inner_re<F, G>(f: &F, g: &G, k: Complex64, q: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: RealLineFunction + ?Sized,
    G: RealLineFunction + ?Sized,
{
    prepare(k)?;
    let integrand = |x: f64| Ok(f.eval_real(x) * g.eval_real(x));
    let tail = f.envelope_real().times(g.envelope_real()).tail(0.0);
    integrate_line(&integrand, k, q, &tail)
}

/// `⟨f, g⟩_im = ∫_ℝ f(it) g(-it) |t|^{2k} dt`.
pub fn inner_im<F, G>(f: &F, g: &G, k: Complex64, q: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: ImaginaryAxisFunction + ?Sized,
    G: ImaginaryAxisFunction + ?Sized,
{
    prepare(k)?;
    let integrand = |t: f64| Ok(f.eval_imag(t) * g.eval_imag(-t));
    let tail = f.envelope_imag().times(g.envelope_imag()).tail(0.0);
    integrate_line(&integrand, k, q, &tail)
}

/// One numeric identity: both sides and their relative distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckValue {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
    pub quadrature: QuadratureInfo,
}

fn require_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn master_tail(lambda: Complex64, mu: Complex64, alpha: f64, k: Complex64) -> TailModel {
    TailModel::gaussian(
        alpha,
        2.0 * (lambda.re.abs() + mu.re.abs()),
        2.0 * kernel_degree(k),
        1.0,
        lambda.re.abs().max(mu.re.abs()),
    )
}

/// `α^{-k-1/2} Γ(k+1/2) e^{(λ²+μ²)/α}`, the common factor of both master formulas.
fn master_factor(k: Complex64, lambda: Complex64, mu: Complex64, alpha: f64) -> Complex64 {
    c(alpha).powc(-k - 0.5) * gamma(k + 0.5) * ((lambda * lambda + mu * mu) / alpha).exp()
}

/// `∫_ℝ ψ_λ ψ_μ e^{-αx²} |x|^{2k} dx` against `α^{-k-1/2} Γ(k+1/2) e^{(λ²+μ²)/α} ψ_λ(μ/α)`.
pub fn master_check(k: Complex64, lambda: Complex64, mu: Complex64, alpha: f64, q: &QuadratureSpec) -> Result<CheckValue> {
    require_alpha(alpha)?;
    prepare(k)?;
    let spec = series();
    let integrand = |x: f64| {
        let x = c(x);
        Ok(psi(x, lambda, k, &spec)?.value * psi(x, mu, k, &spec)?.value * (-alpha * x * x).exp())
    };
    let quad = integrate_line(&integrand, k, q, &master_tail(lambda, mu, alpha, k))?;
    let rhs = master_factor(k, lambda, mu, alpha) * psi(mu / alpha, lambda, k, &spec)?.value;
    Ok(CheckValue {
        lhs: quad.value,
        rhs,
        rel_err: rel_err(quad.value, rhs),
        quadrature: quad.info,
    })
}

/// Symmetric master formula with the kernel built by even symmetrization,
/// `φ_λ(x) = (ψ_λ(x) + ψ_λ(-x))/2`:
/// `2∫_0^∞ φ_λ φ_μ e^{-αx²} x^{2k} dx` against
/// `α^{-k-1/2} Γ(k+1/2) e^{(λ²+μ²)/α} φ_λ(μ/α)`.
pub fn master_check_sym(k: Complex64, lambda: Complex64, mu: Complex64, alpha: f64, q: &QuadratureSpec) -> Result<CheckValue> {
    require_alpha(alpha)?;
    prepare(k)?;
    let spec = series();
    let sym = |x: f64, l: Complex64| -> Result<Complex64> {
        Ok(0.5 * (psi(c(x), l, k, &spec)?.value + psi(c(-x), l, k, &spec)?.value))
    };
    let integrand = |x: f64| Ok(2.0 * sym(x, lambda)? * sym(x, mu)? * (-alpha * x * x).exp());
    let quad = integrate_half_line(&integrand, k, q, &master_tail(lambda, mu, alpha, k))?;
    let rhs = master_factor(k, lambda, mu, alpha) * phi(mu / alpha, lambda, k, &spec)?.value;
    Ok(CheckValue {
        lhs: quad.value,
        rhs,
        rel_err: rel_err(quad.value, rhs),
        quadrature: quad.info,
    })
}

/// Scaling of the generalized master formula at `λ = μ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasterScaling {
    /// `∫ e^{-αx²} |x|^{2k} dx` by quadrature.
    pub lhs: Complex64,
    /// `α^{-k-1/2} Γ(k+1/2)`.
    pub rhs_half_shift: Complex64,
    /// `α^{-k} Γ(k+1/2)`.
    pub rhs_plain: Complex64,
    pub rel_err_half_shift: f64,
    pub rel_err_plain: f64,
}

pub fn master_scaling(k: Complex64, alpha: f64, q: &QuadratureSpec) -> Result<MasterScaling> {
    require_alpha(alpha)?;
    let gamma_k = prepare(k)?;
    let integrand = |x: f64| Ok(c((-alpha * x * x).exp()));
    let quad = integrate_line(&integrand, k, q, &master_tail(c(0.0), c(0.0), alpha, k))?;
    let rhs_half_shift = c(alpha).powc(-k - 0.5) * gamma_k;
    let rhs_plain = c(alpha).powc(-k) * gamma_k;
    Ok(MasterScaling {
        lhs: quad.value,
        rhs_half_shift,
        rhs_plain,
        rel_err_half_shift: rel_err(quad.value, rhs_half_shift),
        rel_err_plain: rel_err(quad.value, rhs_plain),
    })
}

/// The nonsymmetric master formula at `α = 1` rebuilt from symmetric ones.
///
/// The odd part of `ψ_λ(x, k)` is `(2λx/(1+2k)) φ_λ(x, k+1)`, so
/// `∫_ℝ ψ_λψ_μ e^{-x²}|x|^{2k} = S_k + 4λμ/(1+2k)² · S_{k+1}` with
/// `S_k = 2∫_0^∞ φ_λ φ_μ e^{-x²} x^{2k}`. `lhs` is that combination, `rhs` the
/// direct quadrature with the `ψ` kernel.
pub fn nonsym_from_sym_check(k: Complex64, lambda: Complex64, mu: Complex64, q: &QuadratureSpec) -> Result<CheckValue> {
    prepare(k)?;
    prepare(k + 1.0)?;
    let spec = series();
    let s = |kk: Complex64| -> Result<QuadratureResult> {
        let integrand = |x: f64| {
            let x = c(x);
            Ok(2.0 * phi(x, lambda, kk, &spec)?.value * phi(x, mu, kk, &spec)?.value * (-x * x).exp())
        };
        integrate_half_line(&integrand, kk, q, &master_tail(lambda, mu, 1.0, kk))
    };
    let s0 = s(k)?;
    let s1 = s(k + 1.0)?;
    let lhs = s0.value + 4.0 * lambda * mu / ((1.0 + 2.0 * k) * (1.0 + 2.0 * k)) * s1.value;
    let integrand = |x: f64| {
        let x = c(x);
        Ok(psi(x, lambda, k, &spec)?.value * psi(x, mu, k, &spec)?.value * (-x * x).exp())
    };
    let direct = integrate_line(&integrand, k, q, &master_tail(lambda, mu, 1.0, k))?;
    Ok(CheckValue {
        lhs,
        rhs: direct.value,
        rel_err: rel_err(lhs, direct.value),
        quadrature: direct.info,
    })
}

/// Map over independent grid cells, in parallel when the feature is on.
/// Results keep the input order.
pub fn grid_map<T, R, F>(cells: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(f).collect()
    }
}

/// Outcome of one operator identity over all test functions and `λ` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorIdentity {
    pub name: &'static str,
    /// Worst normwise relative error over the test functions.
    pub max_rel_err: f64,
    pub test_functions: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Identity {
    DunklToMinus2Lambda,
    TwoXToDunkl,
    Reflection,
    LaplacianToFourLambdaSquared,
    FourXSquaredToLaplacian,
    EulerToEuler,
}

impl Identity {
    const ALL: [Identity; 6] = [
        Identity::DunklToMinus2Lambda,
        Identity::TwoXToDunkl,
        Identity::Reflection,
        Identity::LaplacianToFourLambdaSquared,
        Identity::FourXSquaredToLaplacian,
        Identity::EulerToEuler,
    ];

    fn name(self) -> &'static str {
        match self {
            Identity::DunklToMinus2Lambda => "F(D f) = -2 lambda F(f)",
            Identity::TwoXToDunkl => "F(2x f) = D_lambda F(f)",
            Identity::Reflection => "F(s f) = s F(f)",
            Identity::LaplacianToFourLambdaSquared => "Fsym(L f) = 4 lambda^2 Fsym(f)",
            Identity::FourXSquaredToLaplacian => "Fsym(4x^2 f) = L_lambda Fsym(f)",
            Identity::EulerToEuler => "Fsym(4x f') = -4 lambda d/dlambda Fsym(f) - (4+8k) Fsym(f)",
        }
    }

    fn symmetric(self) -> bool {
        matches!(
            self,
            Identity::LaplacianToFourLambdaSquared | Identity::FourXSquaredToLaplacian | Identity::EulerToEuler
        )
    }

    /// `(argument fed to the quadrature, operator applied to the exact transform)`.
    fn sides(self, f: &GaussianPolynomial) -> Result<(GaussianPolynomial, GaussianPolynomial)> {
        let hat = hankel_gaussian_oracle(f)?;
        let k = f.k;
        Ok(match self {
            Identity::DunklToMinus2Lambda => (f.dunkl(), hat.mul_x().scale(c(-2.0))),
            Identity::TwoXToDunkl => (f.mul_x().scale(c(2.0)), hat.dunkl()),
            Identity::Reflection => (f.reflect(), hat.reflect()),
            Identity::LaplacianToFourLambdaSquared => (f.l_operator()?, hat.mul_x().mul_x().scale(c(4.0))),
            Identity::FourXSquaredToLaplacian => (f.mul_x().mul_x().scale(c(4.0)), hat.l_operator()?),
            Identity::EulerToEuler => (
                f.euler().scale(c(4.0)),
                hat.euler().scale(c(-4.0)).add(&hat.scale(-(4.0 + 8.0 * k))),
            ),
        })
    }
}

/// Default test functions of degree at most 4: all monomials plus a mixed one.
pub fn operator_test_functions(k: Complex64) -> Vec<GaussianPolynomial> {
    let mut out: Vec<_> = (0..=4).map(|j| GaussianPolynomial::monomial(j, k)).collect();
    out.push(GaussianPolynomial::decaying(
        Polynomial::from_real(&[1.0, -1.0, 0.5, 0.25, -0.3]),
        k,
    ));
    out.push(GaussianPolynomial::decaying(Polynomial::from_real(&[2.0, 0.0, -1.0, 0.0, 0.5]), k));
    out
}

/// Default `λ` grid: real points in `[-1.5, 1.5]` and two complex ones.
pub fn operator_lambda_grid() -> Vec<Complex64> {
    let mut grid: Vec<_> = (-3..=3).map(|i| c(0.5 * i as f64)).collect();
    grid.push(Complex64::new(0.4, 0.3));
    grid.push(Complex64::new(-0.7, 1.1));
    grid
}

/// The three identities for `D, x, s` under `ℱ` and the three for
/// `L, x², x d/dx` under `𝔽`, each comparing quadrature of the transformed
/// argument with the operator applied exactly to the transform.
/// The symmetric ones use the even test functions only.
pub fn operator_transform_check(
    k: Complex64,
    functions: &[GaussianPolynomial],
    lambdas: &[Complex64],
    q: &QuadratureSpec,
) -> Result<Vec<OperatorIdentity>> {
    prepare(k)?;
    let cells: Vec<(Identity, &GaussianPolynomial)> = Identity::ALL
        .iter()
        .flat_map(|&id| {
            functions
                .iter()
                .filter(move |f| !id.symmetric() || f.p.is_even())
                .map(move |f| (id, f))
        })
        .collect();
    let errors = grid_map(&cells, |&(id, f)| -> Result<f64> {
        let (arg, exact) = id.sides(f)?;
        let mut lhs = Vec::with_capacity(lambdas.len());
        let mut rhs = Vec::with_capacity(lambdas.len());
        for &l in lambdas {
            let quad = if id.symmetric() {
                hankel_sym(&arg, l, k, q)?
            } else {
                hankel_nonsym(&arg, l, k, q)?
            };
            lhs.push(quad.value);
            rhs.push(exact.eval(l));
        }
        Ok(normwise_rel_err(&lhs, &rhs))
    });
    let mut out = Vec::new();
    for id in Identity::ALL {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for (cell, err) in cells.iter().zip(&errors) {
            if cell.0 == id {
                let e = err.clone()?;
                worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
                count += 1;
            }
        }
        out.push(OperatorIdentity {
            name: id.name(),
            max_rel_err: worst,
            test_functions: count,
            samples: lambdas.len(),
        });
    }
    Ok(out)
}

/// Absolute defects `|⟨Lf,g⟩ - ⟨f,Lg⟩|` and `|⟨Df,g⟩ + ⟨f,Dg⟩|`, with
/// `L = D²` (it agrees with `d² + (2k/x)d` on even functions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjointnessDefects {
    pub laplacian: f64,
    pub dunkl: f64,
}

pub fn adjointness_check(
    f: &GaussianPolynomial,
    g: &GaussianPolynomial,
    q: &QuadratureSpec,
) -> Result<AdjointnessDefects> {
    let k = f.k;
    let ip = |a: &GaussianPolynomial, b: &GaussianPolynomial| Ok::<_, Error>(inner_re(a, b, k, q)?.value);
    let laplacian = (ip(&f.dunkl_laplacian(), g)? - ip(f, &g.dunkl_laplacian())?).norm();
    let dunkl = (ip(&f.dunkl(), g)? + ip(f, &g.dunkl())?).norm();
    Ok(AdjointnessDefects { laplacian, dunkl })
}

/// `⟨f,g⟩_re` by quadrature against `⟨f̂,ĝ⟩_im` with `f̂, ĝ` from the exact
/// oracle. The error is relative to `max(|lhs|, |rhs|, sqrt(⟨f,f⟩⟨g,g⟩))`
/// so that pairs with vanishing product are still judged on their natural scale.
pub fn plancherel_check(f: &GaussianPolynomial, g: &GaussianPolynomial, q: &QuadratureSpec) -> Result<CheckValue> {
    let k = f.k;
    let lhs = inner_re(f, g, k, q)?;
    let rhs = inner_im(&hankel_gaussian_oracle(f)?, &hankel_gaussian_oracle(g)?, k, q)?;
    let ff = inner_re(f, f, k, q)?.value.norm();
    let gg = inner_re(g, g, k, q)?.value.norm();
    let scale = lhs.value.norm().max(rhs.value.norm()).max((ff * gg).sqrt());
    let diff = (lhs.value - rhs.value).norm();
    Ok(CheckValue {
        lhs: lhs.value,
        rhs: rhs.value,
        rel_err: if scale == 0.0 { diff } else { diff / scale },
        quadrature: lhs.info,
    })
}

/// `n` Chebyshev points on `[-half_width, half_width]`.
pub fn chebyshev_nodes(n: usize, half_width: f64) -> Vec<f64> {
    (0..n)
        .map(|i| half_width * (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * n) as f64).cos())
        .collect()
}

/// Least-squares fit of `p` with `deg p <= degree` to samples of `p(z) e^{σz²}`.
/// Returns the fit and the largest sample residual relative to the largest sample.
pub fn fit_gaussian_polynomial(
    samples: &[(f64, Complex64)],
    degree: usize,
    sign: GaussianSign,
    k: Complex64,
) -> (GaussianPolynomial, f64) {
    let n = samples.len();
    let width = samples.iter().map(|s| s.0.abs()).fold(1.0, f64::max);
    let a = DMatrix::from_fn(n, degree + 1, |i, j| c((samples[i].0 / width).powi(j as i32)));
    let b = DVector::from_iterator(n, samples.iter().map(|&(z, v)| v * (-sign.sigma() * z * z).exp()));
    let svd = a.clone().svd(true, true);
    let sol = svd.solve(&b, 1e-14).expect("SVD was computed with U and V");
    let residual = (&a * &sol - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let coeffs: Vec<Complex64> = sol.iter().enumerate().map(|(j, v)| v / width.powi(j as i32)).collect();
    let fit = GaussianPolynomial::new(Polynomial::from_coeffs(coeffs), sign, k);
    (fit, if scale == 0.0 { residual } else { residual / scale })
}

/// Polynomial fit of the quadrature values of a transform, checked to lie in
/// the expected Gaussian-polynomial class.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedTransform {
    pub fit: GaussianPolynomial,
    pub fit_residual: f64,
    pub quadrature: QuadratureInfo,
}

const FIT_HALF_WIDTH: f64 = 1.5;

/// `ℱ(p e^{-x²})` sampled by quadrature at Chebyshev nodes and fitted by
/// `e^{λ²} q(λ)` with `deg q = deg p`.
pub fn hankel_re_fitted(f: &GaussianPolynomial, q: &QuadratureSpec) -> Result<FittedTransform> {
    require_sign(f, GaussianSign::Decaying)?;
    let d = f.degree();
    let nodes = chebyshev_nodes(2 * d + 4, FIT_HALF_WIDTH);
    let values = grid_map(&nodes, |&l| hankel_nonsym(f, c(l), f.k, q));
    let mut samples = Vec::with_capacity(nodes.len());
    let mut info = None;
    for (l, v) in nodes.iter().zip(values) {
        let v = v?;
        info.get_or_insert(v.info);
        samples.push((*l, v.value));
    }
    let (fit, fit_residual) = fit_gaussian_polynomial(&samples, d, GaussianSign::Growing, f.k);
    Ok(FittedTransform {
        fit,
        fit_residual,
        quadrature: info.expect("at least one node"),
    })
}

/// `ℱ_im(e^{λ²} p)` sampled by quadrature at Chebyshev nodes and fitted by
/// `e^{-x²} q(x)` with `deg q = deg p`.
pub fn hankel_im_fitted(g: &GaussianPolynomial, q: &QuadratureSpec) -> Result<FittedTransform> {
    require_sign(g, GaussianSign::Growing)?;
    let d = g.degree();
    let nodes = chebyshev_nodes(2 * d + 4, FIT_HALF_WIDTH);
    let values = grid_map(&nodes, |&x| hankel_inverse_im(g, c(x), g.k, q));
    let mut samples = Vec::with_capacity(nodes.len());
    let mut info = None;
    for (x, v) in nodes.iter().zip(values) {
        let v = v?;
        info.get_or_insert(v.info);
        samples.push((*x, v.value));
    }
    let (fit, fit_residual) = fit_gaussian_polynomial(&samples, d, GaussianSign::Decaying, g.k);
    Ok(FittedTransform {
        fit,
        fit_residual,
        quadrature: info.expect("at least one node"),
    })
}

/// Round trip of one inversion direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionCheck {
    /// Normwise relative error of the round trip over the sample grid.
    pub rel_err: f64,
    /// Residual of the intermediate polynomial fit.
    pub fit_residual: f64,
    /// Coefficient distance between the fitted intermediate and the exact oracle.
    pub oracle_distance: f64,
    pub quadrature: QuadratureInfo,
}

/// Sample points for the round-trip comparison.
pub fn inversion_grid() -> Vec<f64> {
    (-4..=4).map(|i| 0.5 * i as f64).collect()
}

fn coefficient_distance(a: &GaussianPolynomial, b: &GaussianPolynomial) -> f64 {
    let n = a.p.coeffs().len().max(b.p.coeffs().len());
    let diff = (0..n).map(|i| (a.p.coeff(i) - b.p.coeff(i)).norm()).fold(0.0, f64::max);
    let scale = (0..n).map(|i| b.p.coeff(i).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// `ℱ_im ∘ ℱ_re = id` on `f = p e^{-x²}`: the inner transform is sampled and
/// fitted, the outer one is evaluated by quadrature on the fit.
///
/// Feeding raw nested quadrature into the outer transform is not an option:
/// `ψ_x(-it)` on the imaginary axis multiplies errors of the inner values by
/// `e^{t²}`-sized series cancellations.
pub fn inversion_check_re_im(f: &GaussianPolynomial, q: &QuadratureSpec) -> Result<InversionCheck> {
    let inner = hankel_re_fitted(f, q)?;
    let oracle = hankel_gaussian_oracle(f)?;
    let grid = inversion_grid();
    let back = grid_map(&grid, |&x| hankel_inverse_im(&inner.fit, c(x), f.k, q));
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (x, v) in grid.iter().zip(back) {
        lhs.push(v?.value);
        rhs.push(f.eval(c(*x)));
    }
    Ok(InversionCheck {
        rel_err: normwise_rel_err(&lhs, &rhs),
        fit_residual: inner.fit_residual,
        oracle_distance: coefficient_distance(&inner.fit, &oracle),
        quadrature: inner.quadrature,
    })
}

/// `ℱ_re ∘ ℱ_im = id` on `g = p e^{λ²}`.
pub fn inversion_check_im_re(g: &GaussianPolynomial, q: &QuadratureSpec) -> Result<InversionCheck> {
    let inner = hankel_im_fitted(g, q)?;
    let oracle = hankel_inverse_oracle(g)?;
    let grid = inversion_grid();
    let back = grid_map(&grid, |&l| hankel_nonsym(&inner.fit, c(l), g.k, q));
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (l, v) in grid.iter().zip(back) {
        lhs.push(v?.value);
        rhs.push(g.eval(c(*l)));
    }
    Ok(InversionCheck {
        rel_err: normwise_rel_err(&lhs, &rhs),
        fit_residual: inner.fit_residual,
        oracle_distance: coefficient_distance(&inner.fit, &oracle),
        quadrature: inner.quadrature,
    })
}

/// Quadrature transform against the exact one on a list of `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub lambda: f64,
    pub quadrature: Complex64,
    pub oracle: Complex64,
}

pub fn transform_curve(f: &GaussianPolynomial, lambdas: &[f64], q: &QuadratureSpec) -> Result<Vec<CurvePoint>> {
    let oracle = hankel_gaussian_oracle(f)?;
    let values = grid_map(lambdas, |&l| hankel_nonsym(f, c(l), f.k, q));
    lambdas
        .iter()
        .zip(values)
        .map(|(&l, v)| {
            Ok(CurvePoint {
                lambda: l,
                quadrature: v?.value,
                oracle: oracle.eval(c(l)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn sym_transform_of_gaussian_at_zero() {
        let f = GaussianPolynomial::monomial(0, c(1.0));
        let got = hankel_sym(&f, c(0.0), c(1.0), &q()).unwrap().value;
        assert!((got - 1.0).norm() < 1e-13);
        let got = hankel_nonsym(&f, c(0.0), c(1.0), &q()).unwrap().value;
        assert!((got - 1.0).norm() < 1e-13);
    }

    #[test]
    fn oracle_examples() {
        let k = c(0.75);
        let one = hankel_gaussian_oracle(&GaussianPolynomial::monomial(0, k)).unwrap();
        assert_eq!(one.p, Polynomial::one());
        assert_eq!(one.sign, GaussianSign::Growing);
        // exp(D²/4) x² = x² + (1+2k)/2
        let x2 = hankel_gaussian_oracle(&GaussianPolynomial::monomial(2, k)).unwrap();
        assert!((x2.p.coeff(0) - (0.5 + k)).norm() < 1e-15);
        let back = hankel_inverse_oracle(&x2).unwrap();
        assert!(coefficient_distance(&back, &GaussianPolynomial::monomial(2, k)) < 1e-15);
        assert!(hankel_gaussian_oracle(&x2).is_err());
    }

    #[test]
    fn gaussian_polynomial_calculus() {
        let k = c(1.3);
        // D(x e^{-x²}) = (1 + 2k - 2x²) e^{-x²}
        let d = GaussianPolynomial::monomial(1, k).dunkl();
        let want = Polynomial::from_coeffs(vec![1.0 + 2.0 * k, c(0.0), c(-2.0)]);
        assert!(coefficient_distance(&d, &GaussianPolynomial::decaying(want, k)) < 1e-15);
        // L agrees with D² on even functions
        let f = GaussianPolynomial::decaying(Polynomial::from_real(&[1.0, 0.0, -2.0, 0.0, 0.5]), k);
        assert!(coefficient_distance(&f.l_operator().unwrap(), &f.dunkl_laplacian()) < 1e-14);
        assert!(GaussianPolynomial::monomial(1, k).l_operator().is_err());
        // x d/dx e^{-x²} = -2x² e^{-x²}
        let e = GaussianPolynomial::monomial(0, k).euler();
        assert_eq!(e.p, Polynomial::from_real(&[0.0, 0.0, -2.0]));
    }

    #[test]
    fn inverse_im_constant() {
        let g = GaussianPolynomial::growing(Polynomial::one(), c(1.0));
        let got = hankel_inverse_im(&g, c(0.0), c(1.0), &q()).unwrap().value;
        assert!((got - 1.0).norm() < 1e-12);
    }

    #[test]
    fn inner_product_examples() {
        let k = c(1.0);
        let g0 = GaussianPolynomial::monomial(0, k);
        let got = inner_re(&g0, &g0, k, &q()).unwrap().value;
        let want = std::f64::consts::PI.sqrt() / (4.0 * 2f64.sqrt());
        assert!((got - want).norm() < 1e-13);
        let odd = inner_re(&GaussianPolynomial::monomial(1, k), &g0, k, &q()).unwrap().value;
        assert!(odd.norm() < 1e-15);
    }

    #[test]
    fn master_formula_point() {
        let r = master_check(c(1.0), c(0.3), c(0.5), 1.0, &q()).unwrap();
        assert!(r.rel_err < 1e-10, "{r:?}");
        let r = master_check_sym(c(1.0), c(0.3), c(0.5), 2.0, &q()).unwrap();
        assert!(r.rel_err < 1e-10, "{r:?}");
        let s = master_scaling(c(1.0), 2.0, &q()).unwrap();
        assert!(s.rel_err_half_shift < 1e-12 && s.rel_err_plain > 0.1);
    }

    #[test]
    fn fit_recovers_polynomial() {
        let p = Polynomial::from_real(&[0.5, -1.0, 2.0]);
        let exact = GaussianPolynomial::growing(p, c(0.5));
        let samples: Vec<_> = chebyshev_nodes(8, 1.5).into_iter().map(|x| (x, exact.eval(c(x)))).collect();
        let (fit, res) = fit_gaussian_polynomial(&samples, 2, GaussianSign::Growing, c(0.5));
        assert!(res < 1e-14);
        assert!(coefficient_distance(&fit, &exact) < 1e-13);
    }
}
