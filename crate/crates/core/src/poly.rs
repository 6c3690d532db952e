//! Univariate polynomials in `x` over any [`Scalar`] ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::kpoly::KPolynomial;
use crate::scalar::{Scalar, ScalarMode};

/// Coefficients indexed by degree in `x`. Trailing exact zeros are trimmed,
/// so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^degree`
    pub fn monomial(degree: usize, c: S) -> Self {
        let mut coeffs = vec![S::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, S::one())
    }

    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(S::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn filter_parity(&self, parity: usize) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == parity { c.clone() } else { S::zero() })
                .collect(),
        )
    }

    pub fn even_part(&self) -> Self {
        self.filter_parity(0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter_parity(1)
    }

    pub fn is_even(&self) -> bool {
        self.odd_part().is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.even_part().is_zero()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `p(x) -> p(-x)`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| S::from_i64(i as i64) * c.clone())
                .collect(),
        )
    }

    /// Drop every monomial of degree `>= degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(degree).cloned().collect())
    }

    /// Horner evaluation inside the coefficient ring.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl Polynomial<Complex64> {
    pub fn eval_at(&self, x: Complex64) -> Complex64 {
        self.eval(&x)
    }

    /// Numeric polynomial from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }
}

impl Polynomial<BigRational> {
    pub fn to_numeric(&self) -> Polynomial<Complex64> {
        self.map(Complex64::from_rational)
    }
}

impl Polynomial<KPolynomial> {
    /// Specialize the formal parameter.
    pub fn specialize(&self, k: &BigRational) -> Polynomial<BigRational> {
        self.map(|c| c.eval(k))
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Polynomial {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl<S: Scalar> Mul for Polynomial<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Serialization of a single coefficient for the JSON rendering.
pub trait CoefficientJson {
    fn to_json(&self) -> Value;
}

impl CoefficientJson for BigRational {
    fn to_json(&self) -> Value {
        Value::String(if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        })
    }
}

impl CoefficientJson for KPolynomial {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl CoefficientJson for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
}

#[derive(Debug, Serialize)]
pub struct PolynomialJson {
    pub mode: ScalarMode,
    /// Ascending powers of `x`.
    pub coefficients: Vec<Value>,
}

impl<S: Scalar + CoefficientJson> Polynomial<S> {
    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            mode: S::MODE,
            coefficients: self.coeffs.iter().map(CoefficientJson::to_json).collect(),
        }
    }
}
