//! Exact arithmetic in the rational degenerate double affine Hecke algebra
//! generated by `x`, `∂`, `s` with
//!
//! ```text
//! s x s = -x,   s ∂ s = -∂,   s² = 1,   ∂ x - x ∂ = 1 + 2 k s
//! ```
//!
//! over `Q[k]`. Elements are kept in PBW normal form: linear combinations of
//! `x^m ∂^n s^ε` with `ε ∈ {0, 1}`.
//!
//! # Text form
//!
//! An element renders as its terms sorted by `(m, n, ε)` and joined with
//! `" + "`, each term written `(c) * x^m d^n s^ε` where `c` is a
//! [`KPolynomial`] in the form `a0 + a1*k + a2*k^2` (rational `a_i` written
//! `p/q`). The zero element renders as `0`. Example:
//!
//! ```text
//! (1) * x^0 d^0 s^0 + (2*k) * x^0 d^0 s^1 + (1) * x^1 d^1 s^0
//! ```
//!
//! [`AlgebraElement`] implements [`FromStr`] for exactly this grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::kpoly::KPolynomial;

/// The PBW monomial `x^x ∂^d s^s`. Ordering is lexicographic on `(x, d, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: u32,
    pub d: u32,
    pub s: bool,
}

impl Monomial {
    pub const fn new(x: u32, d: u32, s: bool) -> Self {
        Self { x, d, s }
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, KPolynomial>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(KPolynomial::one())
    }

    pub fn scalar(c: KPolynomial) -> Self {
        Self::term(Monomial::new(0, 0, false), c)
    }

    pub fn term(m: Monomial, c: KPolynomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn monomial(x: u32, d: u32, s: bool) -> Self {
        Self::term(Monomial::new(x, d, s), KPolynomial::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, false)
    }

    pub fn d() -> Self {
        Self::monomial(0, 1, false)
    }

    pub fn s() -> Self {
        Self::monomial(0, 0, true)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &KPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> KPolynomial {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn max_d_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.d).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: KPolynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Self, c: &KPolynomial) {
        for (m, a) in &other.terms {
            self.add_term(*m, a * c);
        }
    }

    pub fn scale(&self, c: &KPolynomial) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&KPolynomial::constant(q.clone()))
    }

    /// Right multiplication by `∂`: `x^i ∂^j s^ε ∂ = (-1)^ε x^i ∂^{j+1} s^ε`.
    fn right_mul_d(&self, power: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let c = if m.s && power % 2 == 1 { -c } else { c.clone() };
            out.add_term(Monomial::new(m.x, m.d + power, m.s), c);
        }
        out
    }

    fn right_mul_s(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.x, m.d, !m.s), c.clone());
        }
        out
    }

    fn left_mul_x(&self, power: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.x + power, m.d, m.s), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = multiply(&acc, self);
        }
        acc
    }

    /// Deterministic canonical text form (see module docs).
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

/// Normal forms of `∂^b x^c` for all `b <= max_b`, `c <= max_c`, built from
/// `∂ x^c = x^c ∂ + c x^{c-1} + 2k [c odd] x^{c-1} s`.
struct ReorderTable {
    rows: Vec<Vec<AlgebraElement>>,
}

impl ReorderTable {
    fn new(max_b: u32, max_c: u32) -> Self {
        let two_k = KPolynomial::k().scale(&BigRational::from_integer(2.into()));
        let mut rows: Vec<Vec<AlgebraElement>> = Vec::with_capacity(max_b as usize + 1);
        rows.push((0..=max_c).map(|c| AlgebraElement::monomial(c, 0, false)).collect());
        for b in 1..=max_b {
            let prev = &rows[b as usize - 1];
            let mut row = Vec::with_capacity(max_c as usize + 1);
            row.push(AlgebraElement::monomial(0, b, false));
            for c in 1..=max_c {
                let mut e = prev[c as usize].right_mul_d(1);
                let lower = &prev[c as usize - 1];
                e.add_scaled(lower, &KPolynomial::from_int(i64::from(c)));
                if c % 2 == 1 {
                    e.add_scaled(&lower.right_mul_s(), &two_k);
                }
                row.push(e);
            }
            rows.push(row);
        }
        Self { rows }
    }

    fn get(&self, b: u32, c: u32) -> &AlgebraElement {
        &self.rows[b as usize][c as usize]
    }
}

/// Product in normal form.
///
/// `(x^a ∂^b s^e)(x^c ∂^d s^f) = (-1)^{e(c+d)} x^a (∂^b x^c) ∂^d s^{e+f}`,
/// with `∂^b x^c` reordered through the commutation relation.
pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    if a.is_zero() || b.is_zero() {
        return AlgebraElement::zero();
    }
    let table = ReorderTable::new(a.max_d_degree(), b.max_x_degree());
    let mut out = AlgebraElement::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let mut coeff = ca * cb;
            if ma.s && (mb.x + mb.d) % 2 == 1 {
                coeff = -coeff;
            }
            let mut piece = table.get(ma.d, mb.x).left_mul_x(ma.x).right_mul_d(mb.d);
            if ma.s != mb.s {
                piece = piece.right_mul_s();
            }
            out.add_scaled(&piece, &coeff);
        }
    }
    out
}

pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    &multiply(a, b) - &multiply(b, a)
}

/// Images of the generators under a (anti-)homomorphism.
struct GeneratorImages {
    x: AlgebraElement,
    d: AlgebraElement,
    s: AlgebraElement,
    reverse: bool,
}

impl GeneratorImages {
    fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut x_pows = vec![AlgebraElement::one()];
        let mut d_pows = vec![AlgebraElement::one()];
        for _ in 0..a.max_x_degree() {
            let next = multiply(x_pows.last().unwrap(), &self.x);
            x_pows.push(next);
        }
        for _ in 0..a.max_d_degree() {
            let next = multiply(d_pows.last().unwrap(), &self.d);
            d_pows.push(next);
        }
        let mut out = AlgebraElement::zero();
        for (m, c) in &a.terms {
            let xs = &x_pows[m.x as usize];
            let ds = &d_pows[m.d as usize];
            let mut img = if self.reverse {
                multiply(ds, xs)
            } else {
                multiply(xs, ds)
            };
            if m.s {
                img = if self.reverse {
                    multiply(&self.s, &img)
                } else {
                    multiply(&img, &self.s)
                };
            }
            out.add_scaled(&img, c);
        }
        out
    }
}

/// Anti-involution `∂ ↦ -∂`, `x ↦ x`, `s ↦ s`.
pub fn star(a: &AlgebraElement) -> AlgebraElement {
    GeneratorImages {
        x: AlgebraElement::x(),
        d: -AlgebraElement::d(),
        s: AlgebraElement::s(),
        reverse: true,
    }
    .apply(a)
}

/// Gaussian automorphism `∂ ↦ ∂ - 2αx`, fixing `x` and `s`.
pub fn tau(a: &AlgebraElement, alpha: &BigRational) -> AlgebraElement {
    let two_alpha = alpha * BigRational::from_integer(2.into());
    GeneratorImages {
        x: AlgebraElement::x(),
        d: &AlgebraElement::d() - &AlgebraElement::x().scale_rational(&two_alpha),
        s: AlgebraElement::s(),
        reverse: false,
    }
    .apply(a)
}

/// Operator Hankel transform: `∂ ↦ -2x`, `x ↦ ∂/2`, `s ↦ s`.
pub fn sigma(a: &AlgebraElement) -> AlgebraElement {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    GeneratorImages {
        x: AlgebraElement::d().scale_rational(&half),
        d: AlgebraElement::x().scale(&KPolynomial::from_int(-2)),
        s: AlgebraElement::s(),
        reverse: false,
    }
    .apply(a)
}

/// `e = x²`, `f = -∂²/4`, `h = (x∂ + ∂x)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Triple {
    pub e: AlgebraElement,
    pub f: AlgebraElement,
    pub h: AlgebraElement,
}

impl Sl2Triple {
    /// `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
    pub fn relations_hold(&self) -> bool {
        let two = KPolynomial::from_int(2);
        commutator(&self.e, &self.f) == self.h
            && commutator(&self.h, &self.e) == self.e.scale(&two)
            && commutator(&self.h, &self.f) == self.f.scale(&-two)
    }
}

pub fn euler_element() -> AlgebraElement {
    let x = AlgebraElement::x();
    let d = AlgebraElement::d();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (&multiply(&x, &d) + &multiply(&d, &x)).scale_rational(&half)
}

pub fn sl2_triple() -> Sl2Triple {
    let quarter = BigRational::new(BigInt::from(-1), BigInt::from(4));
    let triple = Sl2Triple {
        e: AlgebraElement::monomial(2, 0, false),
        f: AlgebraElement::monomial(0, 2, false).scale_rational(&quarter),
        h: euler_element(),
    };
    assert!(triple.relations_hold(), "sl2 relations fail in normal form");
    triple
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &KPolynomial::one());
        out
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &KPolynomial::from_int(-1));
        out
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&KPolynomial::from_int(-1))
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        multiply(self, rhs)
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        multiply(&self, &rhs)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) * x^{} d^{} s^{}", m.x, m.d, u8::from(m.s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement[{self}]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse algebra element: {0}")]
pub struct ParseElementError(pub String);

impl FromStr for AlgebraElement {
    type Err = ParseElementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let err = |m: &str| ParseElementError(format!("{m} in {s:?}"));
        let mut out = Self::zero();
        let mut rest = s;
        loop {
            let body = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = body.find(')').ok_or_else(|| err("unclosed '('"))?;
            let coeff: KPolynomial = body[..close]
                .parse()
                .map_err(|_| err("bad coefficient"))?;
            let after = body[close + 1..]
                .strip_prefix(" * ")
                .ok_or_else(|| err("expected ' * '"))?;
            let (mono, tail) = match after.find(" + (") {
                Some(i) => (&after[..i], Some(&after[i + 3..])),
                None => (after, None),
            };
            let mut parts = mono.split(' ');
            let mut exp = |prefix: &str| -> Result<u32, ParseElementError> {
                parts
                    .next()
                    .and_then(|p| p.strip_prefix(prefix))
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| err("bad monomial"))
            };
            let (x, d, e) = (exp("x^")?, exp("d^")?, exp("s^")?);
            if e > 1 || parts.next().is_some() {
                return Err(err("bad monomial"));
            }
            out.add_term(Monomial::new(x, d, e == 1), coeff);
            match tail {
                Some(t) => rest = t,
                None => break,
            }
        }
        Ok(out)
    }
}

/// Rational shorthand used across the crate's tests and checks.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_poly(s: &str) -> KPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn d_times_x_reorders() {
        let got = multiply(&AlgebraElement::d(), &AlgebraElement::x());
        let want: AlgebraElement = "(1) * x^0 d^0 s^0 + (2*k) * x^0 d^0 s^1 + (1) * x^1 d^1 s^0"
            .parse()
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn reflection_relations() {
        let s = AlgebraElement::s();
        assert_eq!(multiply(&s, &s), AlgebraElement::one());
        assert_eq!(
            multiply(&s, &AlgebraElement::x()),
            -AlgebraElement::monomial(1, 0, true)
        );
        assert_eq!(
            multiply(&s, &AlgebraElement::d()),
            -AlgebraElement::monomial(0, 1, true)
        );
    }

    #[test]
    fn identity_is_neutral() {
        let a: AlgebraElement = "(1 + 2*k) * x^0 d^0 s^1 + (-1/3) * x^2 d^1 s^0".parse().unwrap();
        assert_eq!(multiply(&AlgebraElement::one(), &a), a);
        assert_eq!(multiply(&a, &AlgebraElement::one()), a);
    }

    #[test]
    fn commutator_basics() {
        let x = AlgebraElement::x();
        let d = AlgebraElement::d();
        let want = AlgebraElement::one()
            + AlgebraElement::s().scale(&k_poly("2*k"));
        assert_eq!(commutator(&d, &x), want);
        assert!(commutator(&x, &x).is_zero());
        let h = euler_element();
        assert_eq!(commutator(&h, &x), x);
        assert_eq!(commutator(&h, &d), -d);
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&AlgebraElement::d()), -AlgebraElement::d());
        assert_eq!(
            star(&AlgebraElement::monomial(5, 0, false)),
            AlgebraElement::monomial(5, 0, false)
        );
        // star(x∂) = -∂x = -x∂ - 1 - 2ks
        let xd = AlgebraElement::monomial(1, 1, false);
        let want = -(&(&xd + &AlgebraElement::one()) + &AlgebraElement::s().scale(&k_poly("2*k")));
        assert_eq!(star(&xd), want);
    }

    #[test]
    fn tau_examples() {
        let d = AlgebraElement::d();
        let x = AlgebraElement::x();
        let one = BigRational::one();
        assert_eq!(tau(&d, &one), &d - &x.scale(&KPolynomial::from_int(2)));
        assert_eq!(tau(&x, &rational(7, 3)), x);
        let rel = commutator(&d, &x);
        assert_eq!(tau(&rel, &rational(-5, 2)), rel);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(
            sigma(&AlgebraElement::d()),
            AlgebraElement::x().scale(&KPolynomial::from_int(-2))
        );
        assert_eq!(sigma(&AlgebraElement::s()), AlgebraElement::s());
        let xd = AlgebraElement::monomial(1, 1, false);
        let want = -(&(&xd + &AlgebraElement::one()) + &AlgebraElement::s().scale(&k_poly("2*k")));
        assert_eq!(sigma(&xd), want);
        // sigma squared negates x and ∂
        assert_eq!(sigma(&sigma(&AlgebraElement::x())), -AlgebraElement::x());
        assert_eq!(sigma(&sigma(&AlgebraElement::d())), -AlgebraElement::d());
    }

    #[test]
    fn sl2_triple_brackets() {
        let t = sl2_triple();
        assert_eq!(commutator(&t.e, &t.f), t.h);
        assert_eq!(commutator(&t.h, &t.e), t.e.scale(&KPolynomial::from_int(2)));
        assert_eq!(commutator(&t.h, &t.f), t.f.scale(&KPolynomial::from_int(-2)));
    }

    #[test]
    fn text_form_round_trips() {
        let t = sl2_triple();
        for a in [t.e, t.f, t.h, AlgebraElement::zero()] {
            let s = a.canonical();
            assert_eq!(s.parse::<AlgebraElement>().unwrap(), a);
        }
        assert!("(1) * x^0 d^0 s^2".parse::<AlgebraElement>().is_err());
        assert!("x".parse::<AlgebraElement>().is_err());
    }
}
