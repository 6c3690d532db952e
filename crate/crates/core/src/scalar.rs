//! The ring contract shared by the three coefficient modes.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::kpoly::{rational_to_f64, KPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarMode {
    /// `Q[k]` with `k` formal.
    Formal,
    /// `Q` with `k` specialized to a rational.
    Exact,
    /// Complex floating point.
    Numeric,
}

/// Commutative ring with the embeddings the polynomial representation needs.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Evaluate a `Q[k]` coefficient at this ring's value of `k`.
    fn from_kpoly(c: &KPolynomial, k: &Self) -> Self {
        c.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| acc * k.clone() + Self::from_rational(a))
    }
}

impl Scalar for KPolynomial {
    const MODE: ScalarMode = ScalarMode::Formal;

    fn zero() -> Self {
        KPolynomial::zero()
    }
    fn one() -> Self {
        KPolynomial::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        KPolynomial::constant(q.clone())
    }
    fn is_zero(&self) -> bool {
        KPolynomial::is_zero(self)
    }
}

impl Scalar for BigRational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Complex64 {
    const MODE: ScalarMode = ScalarMode::Numeric;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}
