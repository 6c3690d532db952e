//! The polynomial representation: `x` acts by multiplication, `s` by
//! reflection and `∂` by the Dunkl operator
//!
//! ```text
//! D = d/dx - (k/x)(s - 1),    D(x^l) = (l + (1 - (-1)^l) k) x^{l-1}.
//! ```
//!
//! Works in any of the three scalar modes; identities are proven in the formal
//! `Q[k]` mode, transforms use the numeric one.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::kpoly::KPolynomial;
use crate::poly::Polynomial;
use crate::scalar::{Scalar, ScalarMode};

/// Distance from `-1/2 - n` below which numeric `k` is rejected.
pub const SINGULAR_K_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DunklContext<S> {
    k: S,
}

impl<S: Scalar> DunklContext<S> {
    pub fn k(&self) -> &S {
        &self.k
    }

    pub fn mode(&self) -> ScalarMode {
        S::MODE
    }

    /// Eigenvalue-like factor `l + (1 - (-1)^l) k` of `D` on `x^l`.
    pub fn monomial_factor(&self, l: usize) -> S {
        let l_s = S::from_i64(l as i64);
        if l % 2 == 1 {
            l_s + S::from_i64(2) * self.k.clone()
        } else {
            l_s
        }
    }
}

impl DunklContext<KPolynomial> {
    pub fn formal() -> Self {
        Self { k: KPolynomial::k() }
    }
}

impl DunklContext<BigRational> {
    pub fn exact(k: BigRational) -> Self {
        Self { k }
    }
}

impl DunklContext<Complex64> {
    /// Numeric context without a regularity check.
    pub fn numeric(k: Complex64) -> Self {
        Self { k }
    }

    /// Numeric context that rejects `|k + 1/2 + n| < 1e-8` for `0 <= n <= degmax`.
    pub fn numeric_checked(k: Complex64, degmax: usize) -> Result<Self> {
        check_regular_k(k, degmax)?;
        Ok(Self { k })
    }
}

/// Reject `k` within [`SINGULAR_K_TOL`] of `-1/2 - n` for `0 <= n <= nmax`.
pub fn check_regular_k(k: Complex64, nmax: usize) -> Result<()> {
    let shifted = k + 0.5;
    let n = (-shifted.re).round();
    if n >= 0.0 && n <= nmax as f64 {
        let dist = (shifted + n).norm();
        if dist < SINGULAR_K_TOL {
            return Err(Error::SingularParameter {
                k,
                n: n as usize,
                tol: SINGULAR_K_TOL,
            });
        }
    }
    Ok(())
}

pub fn dunkl_apply<S: Scalar>(p: &Polynomial<S>, ctx: &DunklContext<S>) -> Polynomial<S> {
    Polynomial::from_coeffs(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(l, c)| ctx.monomial_factor(l) * c.clone())
            .collect(),
    )
}

pub fn reflect<S: Scalar>(p: &Polynomial<S>) -> Polynomial<S> {
    p.reflect()
}

/// `ρ(a)(p)`: each PBW term `x^m ∂^n s^ε` acts as reflection, then `D^n`,
/// then multiplication by `x^m`.
pub fn act<S: Scalar>(a: &AlgebraElement, p: &Polynomial<S>, ctx: &DunklContext<S>) -> Polynomial<S> {
    let reflected = p.reflect();
    let max_d = a.max_d_degree() as usize;
    let mut d_plain = vec![p.clone()];
    let mut d_refl = vec![reflected];
    for i in 0..max_d {
        d_plain.push(dunkl_apply(&d_plain[i], ctx));
        d_refl.push(dunkl_apply(&d_refl[i], ctx));
    }
    let mut out = Polynomial::zero();
    for (m, c) in a.terms() {
        let base = if m.s { &d_refl } else { &d_plain }[m.d as usize].shift(m.x as usize);
        let coeff = S::from_kpoly(c, &ctx.k);
        out = &out + &base.scale(&coeff);
    }
    out
}

/// Basis of `{p : deg p <= degmax, D p = 0}`.
///
/// `D` sends `x^l` to a multiple of `x^{l-1}`, so the system is diagonal in the
/// monomial basis: `x^l` lies in the kernel iff its factor vanishes.
pub fn dunkl_kernel_basis<S: Scalar>(ctx: &DunklContext<S>, degmax: usize) -> Result<Vec<Polynomial<S>>> {
    if S::MODE == ScalarMode::Numeric {
        return Err(Error::Precondition(
            "dunkl_kernel_basis requires formal or exact mode".into(),
        ));
    }
    let mut basis = vec![Polynomial::one()];
    for l in 1..=degmax {
        if ctx.monomial_factor(l).is_zero() {
            basis.push(Polynomial::monomial(l, S::one()));
        }
    }
    Ok(basis)
}

/// `Σ_m (sign · D²/4)^m p / m!`, a finite sum since `D` lowers degree.
pub fn exp_half_d_squared<S: Scalar>(p: &Polynomial<S>, ctx: &DunklContext<S>, sign: i8) -> Polynomial<S> {
    let mut out = p.clone();
    let mut term = p.clone();
    let mut m: i64 = 0;
    while !term.is_zero() {
        m += 1;
        let d2 = dunkl_apply(&dunkl_apply(&term, ctx), ctx);
        // term_m = (sign/4)/m · D² term_{m-1}
        let factor = BigRational::new((i64::from(sign)).into(), (4 * m).into());
        term = d2.scale(&S::from_rational(&factor));
        out = &out + &term;
    }
    out
}

/// Whether `p` lies in the submodule `x^{2n+1} P`.
pub fn submodule_membership<S: Scalar>(p: &Polynomial<S>, n: usize) -> bool {
    p.coeffs().iter().take(2 * n + 1).all(Scalar::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutator, rational};

    fn formal() -> DunklContext<KPolynomial> {
        DunklContext::formal()
    }

    fn kp(s: &str) -> KPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn dunkl_on_low_monomials() {
        let ctx = formal();
        let x: Polynomial<KPolynomial> = Polynomial::x();
        assert_eq!(dunkl_apply(&x, &ctx), Polynomial::constant(kp("1 + 2*k")));
        assert!(dunkl_apply(&Polynomial::one(), &ctx).is_zero());
        let x2 = Polynomial::monomial(2, KPolynomial::one());
        assert_eq!(dunkl_apply(&x2, &ctx), Polynomial::monomial(1, KPolynomial::from_int(2)));
    }

    #[test]
    fn reflect_examples() {
        let p = Polynomial::from_coeffs(vec![rational(0, 1), rational(1, 1), rational(1, 1)]);
        assert_eq!(reflect(&p).coeffs(), &[rational(0, 1), rational(-1, 1), rational(1, 1)]);
        assert_eq!(reflect(&Polynomial::<BigRational>::one()), Polynomial::one());
    }

    #[test]
    fn commutator_acts_as_one_plus_2ks() {
        let ctx = formal();
        let rel = commutator(&AlgebraElement::d(), &AlgebraElement::x());
        let p = Polynomial::from_coeffs(vec![kp("3"), kp("-1/2*k"), kp("2"), kp("1 + k"), kp("7")]);
        let want = &p + &p.reflect().scale(&kp("2*k"));
        assert_eq!(act(&rel, &p, &ctx), want);
        assert_eq!(act(&AlgebraElement::one(), &p, &ctx), p);
    }

    #[test]
    fn euler_element_eigenvalues() {
        let ctx = formal();
        let h = crate::algebra::euler_element();
        for j in 0..8 {
            let xj = Polynomial::monomial(j, KPolynomial::one());
            let want = xj.scale(&(KPolynomial::from_int(j as i64) + kp("1/2 + k")));
            assert_eq!(act(&h, &xj, &ctx), want, "j = {j}");
        }
    }

    #[test]
    fn kernel_basis_generic_and_special() {
        let generic = DunklContext::exact(rational(1, 1));
        assert_eq!(dunkl_kernel_basis(&generic, 10).unwrap().len(), 1);
        let special = DunklContext::exact(rational(-3, 2));
        let basis = dunkl_kernel_basis(&special, 10).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[1], Polynomial::monomial(3, rational(1, 1)));
        assert_eq!(dunkl_kernel_basis(&special, 0).unwrap().len(), 1);
        assert_eq!(dunkl_kernel_basis(&formal(), 12).unwrap().len(), 1);
        assert!(dunkl_kernel_basis(&DunklContext::numeric(Complex64::new(1.0, 0.0)), 3).is_err());
    }

    #[test]
    fn exp_half_d_squared_examples() {
        let ctx = formal();
        for sign in [-1, 1] {
            assert_eq!(exp_half_d_squared(&Polynomial::one(), &ctx, sign), Polynomial::one());
        }
        // D²(x²) = 2(1+2k), so exp(-D²/4) x² = x² - (1+2k)/2
        let x2 = Polynomial::monomial(2, KPolynomial::one());
        let want = Polynomial::from_coeffs(vec![kp("-1/2 + -1*k"), KPolynomial::zero(), KPolynomial::one()]);
        assert_eq!(exp_half_d_squared(&x2, &ctx, -1), want);
    }

    #[test]
    fn submodule_examples() {
        let x4 = Polynomial::monomial(4, rational(1, 1));
        let x2 = Polynomial::monomial(2, rational(1, 1));
        assert!(submodule_membership(&x4, 1));
        assert!(!submodule_membership(&x2, 1));
        let ctx = DunklContext::exact(rational(-3, 2));
        let x3 = Polynomial::monomial(3, rational(1, 1));
        assert!(act(&AlgebraElement::d(), &x3, &ctx).is_zero());
    }

    #[test]
    fn singular_numeric_k_is_rejected() {
        assert!(DunklContext::numeric_checked(Complex64::new(-2.5, 0.0), 4).is_err());
        assert!(DunklContext::numeric_checked(Complex64::new(-2.5 + 1e-9, 0.0), 4).is_err());
        assert!(DunklContext::numeric_checked(Complex64::new(-2.5, 0.0), 1).is_ok());
        assert!(DunklContext::numeric_checked(Complex64::new(-2.5 + 1e-6, 0.0), 4).is_ok());
        assert!(DunklContext::numeric_checked(Complex64::new(0.5, 0.0), 4).is_ok());
    }
}
