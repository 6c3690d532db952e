//! Polynomials in the formal parameter `k` with exact rational coefficients.
//!
//! Every coefficient that normal ordering in the algebra can produce lives in
//! `Q[k]`, so identities checked with this type hold for all values of `k`
//! at once.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Element of `Q[k]`, stored by ascending power of `k`.
///
/// Canonical: the highest stored coefficient is nonzero, and zero is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct KPolynomial {
    coeffs: Vec<BigRational>,
}

impl KPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The formal parameter `k` itself.
    pub fn k() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Specialize `k` to an exact rational.
    pub fn eval(&self, k: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_complex(&self, k: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * k + rational_to_f64(c)
            })
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for KPolynomial {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Add for &KPolynomial {
    type Output = KPolynomial;
    fn add(self, rhs: &KPolynomial) -> KPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        KPolynomial::from_coeffs(coeffs)
    }
}

impl AddAssign<&KPolynomial> for KPolynomial {
    fn add_assign(&mut self, rhs: &KPolynomial) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Sub for KPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self + &(-&rhs)
    }
}

impl Sub for &KPolynomial {
    type Output = KPolynomial;
    fn sub(self, rhs: &KPolynomial) -> KPolynomial {
        self + &(-rhs)
    }
}

impl Neg for KPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

impl Neg for &KPolynomial {
    type Output = KPolynomial;
    fn neg(self) -> KPolynomial {
        KPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for KPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &KPolynomial {
    type Output = KPolynomial;
    fn mul(self, rhs: &KPolynomial) -> KPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return KPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        KPolynomial::from_coeffs(out)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders as `a0 + a1*k + a2*k^2`, skipping zero coefficients; zero is `0`.
impl fmt::Display for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = fmt_rational(c);
            match p {
                0 => f.write_str(&c)?,
                1 => write!(f, "{c}*k")?,
                _ => write!(f, "{c}*k^{p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for KPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPolynomial({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse k-polynomial from {0:?}")]
pub struct ParseKPolynomialError(pub String);

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl FromStr for KPolynomial {
    type Err = ParseKPolynomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseKPolynomialError(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = KPolynomial::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            // accepts `a`, `a*k`, `a*k^p`, and the shorthands `k`, `-k`, `k^p`
            let (c, kpart) = match term.split_once('*') {
                Some((c, kp)) => (c, Some(kp)),
                None if term.trim_start_matches('-').starts_with('k') => {
                    let neg = term.starts_with('-');
                    (if neg { "-1" } else { "1" }, Some(term.trim_start_matches('-')))
                }
                None => (term, None),
            };
            let power = match kpart {
                None => 0,
                Some("k") => 1,
                Some(kp) => {
                    let p = kp.strip_prefix("k^").ok_or_else(err)?;
                    p.parse::<usize>().map_err(|_| err())?
                }
            };
            let c = parse_rational(c).ok_or_else(err)?;
            let mut coeffs = vec![BigRational::zero(); power + 1];
            coeffs[power] = c;
            out += &KPolynomial::from_coeffs(coeffs);
        }
        Ok(out)
    }
}
