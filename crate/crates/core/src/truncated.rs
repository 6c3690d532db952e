//! The finite-dimensional module `V_{2n+1} = C[x]/(x^{2n+1})` at
//! `k = -n - 1/2`, in exact rational arithmetic.
//!
//! Matrices act on coefficient columns in the basis `1, x, …, x^{2n}`. The
//! truncated transform `F = e^{x²} e^{D²/4} e^{x²}` is read as a map into the
//! same basis in `λ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bessel::{truncated_bessel, truncated_f_closed_form, truncated_g_recursion, truncation_k};
use crate::matrix::{q, Matrix};
use crate::poly::{CoefficientJson, Polynomial};
use crate::polyrep::{exp_half_d_squared, DunklContext};

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, i| acc * q(i as i64))
}

fn sign_pow(n: usize) -> BigRational {
    if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedModule {
    pub n: usize,
    pub k: BigRational,
    pub x: Matrix,
    pub d: Matrix,
    pub s: Matrix,
}

impl TruncatedModule {
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// `SXS = -X`, `SDS = -D`, `DX - XD = I + 2kS`, `X` and `D` nilpotent.
    pub fn relations_hold(&self) -> bool {
        let dim = self.dim();
        let id = Matrix::identity(dim);
        let e = dim as u32;
        &(&self.s * &self.x) * &self.s == -&self.x
            && &(&self.s * &self.d) * &self.s == -&self.d
            && self.d.commutator(&self.x) == &id + &self.s.scale(&(q(2) * &self.k))
            && self.x.pow(e).is_zero()
            && self.d.pow(e).is_zero()
    }
}

/// Builds `X, D, S` and asserts the defining relations.
pub fn build(n: usize) -> TruncatedModule {
    let dim = 2 * n + 1;
    let k = truncation_k(n);
    let ctx = DunklContext::exact(k.clone());
    let x = Matrix::from_fn(dim, dim, |i, j| if i == j + 1 { q(1) } else { q(0) });
    let d = Matrix::from_fn(dim, dim, |i, j| if j == i + 1 { ctx.monomial_factor(j) } else { q(0) });
    let s = Matrix::from_fn(dim, dim, |i, j| if i == j { sign_pow(i) } else { q(0) });
    let module = TruncatedModule { n, k, x, d, s };
    assert!(module.relations_hold(), "relations fail at n = {n}");
    module
}

/// `γ^± = Σ_m (±X²)^m / m!`.
pub fn gaussian(n: usize, sign: i8) -> Matrix {
    let m = build(n);
    (&m.x * &m.x).nilpotent_exp(&q(i64::from(sign.signum())))
}

/// `exp(±D²/4)`.
pub fn exp_d2_quarter(n: usize, sign: i8) -> Matrix {
    let m = build(n);
    (&m.d * &m.d).nilpotent_exp(&rational(i64::from(sign.signum()), 4))
}

/// Columns `exp(±D²/4) x^l` computed in the polynomial representation.
pub fn exp_d2_quarter_via_polyrep(n: usize, sign: i8) -> Matrix {
    let dim = 2 * n + 1;
    let ctx = DunklContext::exact(truncation_k(n));
    let mut out = Matrix::zeros(dim, dim);
    for l in 0..dim {
        let image = exp_half_d_squared(&Polynomial::monomial(l, q(1)), &ctx, sign.signum()).truncate(dim);
        for (i, c) in image.coeffs().iter().enumerate() {
            out.set(i, l, c.clone());
        }
    }
    out
}

/// `F = γ⁺ exp(D²/4) γ⁺`.
pub fn hankel_matrix(n: usize) -> Matrix {
    let g = gaussian(n, 1);
    &(&g * &exp_d2_quarter(n, 1)) * &g
}

/// Closed-form column images:
/// `F(x^{2m}) = (-1)^m m!/(n-m)! λ^{2n-2m}` and
/// `F(x^{2m+1}) = (-1)^m m!/(n-m-1)! λ^{2n-2m-1}`.
pub fn hankel_column_formula(n: usize, l: usize) -> Vec<BigRational> {
    let dim = 2 * n + 1;
    let mut col = vec![BigRational::zero(); dim];
    let m = l / 2;
    let value = if l.is_multiple_of(2) {
        sign_pow(m) * factorial(m) / factorial(n - m)
    } else {
        sign_pow(m) * factorial(m) / factorial(n - m - 1)
    };
    col[2 * n - l] = value;
    col
}

/// The intertwining relations `F·D = -2X·F`, `F·2X = D·F`, `F·S = S·F`.
pub fn intertwines(module: &TruncatedModule, f: &Matrix) -> bool {
    let two = q(2);
    f * &module.d == (&module.x * f).scale(&-two.clone())
        && f * &module.x.scale(&two) == &module.d * f
        && f * &module.s == &module.s * f
}

/// `ψ_λ(x) = Σ c_{l,m} x^l λ^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedKernel {
    pub n: usize,
    pub c: Matrix,
}

impl TruncatedKernel {
    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.c.rows()).map(|i| self.c.get(i, i).clone()).collect()
    }
}

/// `ψ_λ(x) = Σ_l x^{2n-l} F(x^l)`, with the diagonal support and its match
/// with `g_n` asserted.
pub fn kernel(n: usize) -> TruncatedKernel {
    let dim = 2 * n + 1;
    let f = hankel_matrix(n);
    let mut c = Matrix::zeros(dim, dim);
    for l in 0..dim {
        for m in 0..dim {
            let v = c.get(2 * n - l, m) + f.get(m, l);
            c.set(2 * n - l, m, v);
        }
    }
    assert!(c.is_diagonal(), "kernel not diagonal at n = {n}");
    let kernel = TruncatedKernel { n, c };
    let g = truncated_bessel(n).g;
    assert!(
        kernel.diagonal().iter().enumerate().all(|(i, v)| *v == g.coeff(i)),
        "kernel diagonal differs from g_n at n = {n}"
    );
    kernel
}

/// `Dψ_λ(x) = 2λ ψ_λ(x)` modulo `(x^{2n+1}, λ^{2n+1})`.
pub fn kernel_eigen_equation_holds(kernel: &TruncatedKernel) -> bool {
    let dim = 2 * kernel.n + 1;
    let module = build(kernel.n);
    // D acts on the x index, λ-multiplication on the other
    let dpsi = &module.d * &kernel.c;
    let lambda_psi = (&kernel.c * &module.x.transpose()).scale(&q(2));
    (0..dim).all(|a| (0..dim).all(|b| dpsi.get(a, b) == lambda_psi.get(a, b)))
}

/// `F₊(f)(λ) = Res(f(x) ψ_λ(x) x^{-2n-1})`.
pub fn f_plus(kernel: &TruncatedKernel, f: &[BigRational]) -> Vec<BigRational> {
    let dim = 2 * kernel.n + 1;
    assert_eq!(f.len(), dim);
    (0..dim)
        .map(|m| (0..dim).fold(BigRational::zero(), |acc, a| acc + &f[a] * kernel.c.get(2 * kernel.n - a, m)))
        .collect()
}

/// `F₋(g)(x) = Res(g(λ) ψ_x(-λ) λ^{-2n-1})`, from the kernel directly.
pub fn f_minus(kernel: &TruncatedKernel, g: &[BigRational]) -> Vec<BigRational> {
    let n2 = 2 * kernel.n;
    assert_eq!(g.len(), n2 + 1);
    // ψ_x(-λ) = Σ c_{a,b} (-λ)^a x^b
    (0..=n2)
        .map(|b| {
            (0..=n2).fold(BigRational::zero(), |acc, a| {
                acc + &g[n2 - a] * kernel.c.get(a, b) * sign_pow(a)
            })
        })
        .collect()
}

/// `(f, g) = Res(f g x^{-2n-1}) = Σ_l f_l g_{2n-l}`.
pub fn residue_pair(n: usize, f: &[BigRational], g: &[BigRational]) -> BigRational {
    (0..=2 * n).fold(BigRational::zero(), |acc, l| acc + &f[l] * &g[2 * n - l])
}

/// `⟨u, v⟩₋ = Res(u(λ) v(-λ) λ^{-2n-1})`.
pub fn residue_pair_minus(n: usize, u: &[BigRational], v: &[BigRational]) -> BigRational {
    (0..=2 * n).fold(BigRational::zero(), |acc, l| acc + &u[l] * &v[2 * n - l] * sign_pow(2 * n - l))
}

pub fn gram(n: usize) -> Matrix {
    let dim = 2 * n + 1;
    Matrix::from_fn(dim, dim, |i, j| if i + j == 2 * n { q(1) } else { q(0) })
}

fn basis(dim: usize, l: usize) -> Vec<BigRational> {
    (0..dim).map(|i| if i == l { q(1) } else { q(0) }).collect()
}

/// `F₋∘F₊ = (-1)^n id = F₊∘F₋` on every basis vector.
pub fn inversion_holds(kernel: &TruncatedKernel) -> bool {
    let dim = 2 * kernel.n + 1;
    let s = sign_pow(kernel.n);
    (0..dim).all(|l| {
        let e = basis(dim, l);
        let want: Vec<_> = e.iter().map(|v| v * &s).collect();
        f_minus(kernel, &f_plus(kernel, &e)) == want && f_plus(kernel, &f_minus(kernel, &e)) == want
    })
}

/// `F₋` agrees with `F₊` on even vectors and with `-F₊` on odd ones.
pub fn minus_parity_rule_holds(kernel: &TruncatedKernel) -> bool {
    let dim = 2 * kernel.n + 1;
    (0..dim).all(|l| {
        let e = basis(dim, l);
        let plus = f_plus(kernel, &e);
        let want: Vec<_> = if l % 2 == 0 { plus } else { plus.iter().map(|v| -v).collect() };
        f_minus(kernel, &e) == want
    })
}

/// `⟨F₊x^a, F₊x^b⟩₋ = (-1)^n (x^a, x^b)` for all basis pairs.
pub fn plancherel_truncated(kernel: &TruncatedKernel) -> bool {
    let n = kernel.n;
    let dim = 2 * n + 1;
    let s = sign_pow(n);
    (0..dim).all(|a| {
        (0..dim).all(|b| {
            let (ea, eb) = (basis(dim, a), basis(dim, b));
            residue_pair_minus(n, &f_plus(kernel, &ea), &f_plus(kernel, &eb)) == &s * residue_pair(n, &ea, &eb)
        })
    })
}

/// `Gram·X = Xᵀ·Gram`, `Gram·D = -Dᵀ·Gram`, `Gram·S = Sᵀ·Gram`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StarInvariance {
    pub x: bool,
    pub d: bool,
    pub s: bool,
}

pub fn star_invariance_check(n: usize) -> StarInvariance {
    let m = build(n);
    let g = gram(n);
    StarInvariance {
        x: &g * &m.x == &m.x.transpose() * &g,
        d: &g * &m.d == -&(&m.d.transpose() * &g),
        s: &g * &m.s == &m.s.transpose() * &g,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sl2Structure {
    pub ef_is_h: bool,
    pub he_is_2e: bool,
    pub hf_is_minus_2f: bool,
    /// `h x^j = (j - n) x^j` for every `j`.
    pub h_diagonal: bool,
    /// Eigenvalues of `h` on the span of even monomials, ascending.
    pub even_spectrum: Vec<i64>,
}

/// `e = X²`, `f = -D²/4`, `h = (XD + DX)/2`.
pub fn sl2_structure_check(n: usize) -> Sl2Structure {
    let m = build(n);
    let e = &m.x * &m.x;
    let f = (&m.d * &m.d).scale(&rational(-1, 4));
    let h = (&(&m.x * &m.d) + &(&m.d * &m.x)).scale(&rational(1, 2));
    let dim = 2 * n + 1;
    let want_h = Matrix::from_fn(dim, dim, |i, j| if i == j { q(i as i64 - n as i64) } else { q(0) });
    let even_spectrum = (0..dim)
        .step_by(2)
        .map(|j| {
            let v = h.get(j, j);
            assert!(v.is_integer());
            i64::try_from(v.to_integer()).expect("small eigenvalue")
        })
        .collect();
    Sl2Structure {
        ef_is_h: e.commutator(&f) == h,
        he_is_2e: h.commutator(&e) == e.scale(&q(2)),
        hf_is_minus_2f: h.commutator(&f) == f.scale(&q(-2)),
        h_diagonal: h == want_h,
        even_spectrum,
    }
}

/// Dimension of `{M : M·D = -2X·M, M·2X = D·M, M·S = S·M}` over `Q`, and
/// whether `F` spans it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Uniqueness {
    pub dimension: usize,
    pub spanned_by_hankel: bool,
}

pub fn uniqueness_solve(n: usize) -> Uniqueness {
    let m = build(n);
    let system = Matrix::vstack(&[
        Matrix::sylvester_operator(&m.d, &m.x.scale(&q(-2))),
        Matrix::sylvester_operator(&m.x.scale(&q(2)), &m.d),
        Matrix::sylvester_operator(&m.s, &m.s),
    ]);
    let ns = system.nullspace();
    let f = hankel_matrix(n).to_vec();
    let spanned_by_hankel = ns.len() == 1 && {
        let v = &ns[0];
        let pivot = (0..v.len()).find(|&i| !v[i].is_zero()).expect("nonzero basis vector");
        let ratio = &f[pivot] / &v[pivot];
        v.iter().zip(&f).all(|(a, b)| a * &ratio == *b)
    };
    Uniqueness {
        dimension: ns.len(),
        spanned_by_hankel,
    }
}

/// Coordinate subspaces `span{x^j : j ∈ mask}` invariant under `X, D, S`.
///
/// # Panics
/// For `n > 8`, where the `2^{2n+1}` candidates become too many.
pub fn invariant_coordinate_subspaces(n: usize) -> Vec<u32> {
    assert!(n <= 8, "search is exponential in n");
    let m = build(n);
    let dim = 2 * n + 1;
    let support = |mat: &Matrix, j: usize| -> u32 {
        (0..dim).filter(|&i| !mat.get(i, j).is_zero()).fold(0, |acc, i| acc | (1 << i))
    };
    let images: Vec<u32> = (0..dim)
        .map(|j| support(&m.x, j) | support(&m.d, j) | support(&m.s, j))
        .collect();
    (0u32..(1 << dim))
        .filter(|&mask| (0..dim).filter(|j| mask & (1 << j) != 0).all(|j| images[j] & !mask == 0))
        .collect()
}

/// One scaling of the braid identity `e^{a x²} e^{b D²} e^{a x²} = e^{c D²} e^{d x²} e^{c D²}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidVariant {
    pub label: &'static str,
    pub holds: bool,
}

fn braid_side(m: &TruncatedModule, outer_is_x: bool, outer: &BigRational, inner: &BigRational) -> Matrix {
    let x2 = &m.x * &m.x;
    let d2 = &m.d * &m.d;
    let (o, i) = if outer_is_x { (&x2, &d2) } else { (&d2, &x2) };
    let eo = o.nilpotent_exp(outer);
    &(&eo * &i.nilpotent_exp(inner)) * &eo
}

/// Evaluates the printed braid line and nearby scalings in `V_{2n+1}`.
pub fn braid_variants(n: usize) -> Vec<BraidVariant> {
    let m = build(n);
    let lhs = braid_side(&m, true, &q(1), &rational(1, 4));
    let candidates: [(&'static str, BigRational, BigRational); 4] = [
        ("e^{x^2} e^{D^2/4} e^{x^2} = e^{D^2} e^{x^2/4} e^{D^2} (printed)", q(1), rational(1, 4)),
        ("e^{x^2} e^{D^2/4} e^{x^2} = e^{D^2/4} e^{x^2} e^{D^2/4}", rational(1, 4), q(1)),
        ("e^{x^2} e^{D^2/4} e^{x^2} = e^{D^2/4} e^{x^2/4} e^{D^2/4}", rational(1, 4), rational(1, 4)),
        ("e^{x^2} e^{D^2/4} e^{x^2} = e^{D^2} e^{x^2} e^{D^2}", q(1), q(1)),
    ];
    candidates
        .into_iter()
        .map(|(label, c, d)| BraidVariant {
            label,
            holds: braid_side(&m, false, &c, &d) == lhs,
        })
        .collect()
}

/// Kernel value at the origin against the printed `-n!`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationAnomaly {
    pub n: usize,
    pub computed: String,
    pub printed: String,
    pub agree: bool,
}

pub fn normalization_anomaly(n: usize) -> NormalizationAnomaly {
    let computed = kernel(n).c.get(0, 0).clone();
    let printed = -factorial(n);
    NormalizationAnomaly {
        n,
        computed: computed.to_string(),
        printed: printed.to_string(),
        agree: computed == printed,
    }
}

/// All exact checks for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedReport {
    pub n: usize,
    pub relations: bool,
    pub gaussians_inverse: bool,
    pub exp_d2_inverse: bool,
    pub exp_d2_matches_polyrep: bool,
    pub columns_match_formula: bool,
    pub intertwining: bool,
    pub kernel_diagonal_is_g: bool,
    pub bessel_constructions_agree: bool,
    pub kernel_eigen_equation: bool,
    pub kernel_origin_value: String,
    pub inversion: bool,
    pub minus_parity_rule: bool,
    pub plancherel: bool,
    pub kernel_matches_matrix: bool,
    pub star: StarInvariance,
    pub sl2: Sl2Structure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<Uniqueness>,
}

impl TruncatedReport {
    pub fn pass(&self) -> bool {
        self.relations
            && self.gaussians_inverse
            && self.exp_d2_inverse
            && self.exp_d2_matches_polyrep
            && self.columns_match_formula
            && self.intertwining
            && self.kernel_diagonal_is_g
            && self.bessel_constructions_agree
            && self.kernel_eigen_equation
            && self.inversion
            && self.minus_parity_rule
            && self.plancherel
            && self.kernel_matches_matrix
            && self.star.x
            && self.star.d
            && self.star.s
            && self.sl2.ef_is_h
            && self.sl2.he_is_2e
            && self.sl2.hf_is_minus_2f
            && self.sl2.h_diagonal
            && self.uniqueness.as_ref().is_none_or(|u| u.dimension == 1 && u.spanned_by_hankel)
    }
}

/// Largest `n` for which [`truncated_report`] runs the uniqueness solve.
pub const UNIQUENESS_NMAX: usize = 6;

pub fn truncated_report(n: usize) -> TruncatedReport {
    let module = build(n);
    let dim = 2 * n + 1;
    let id = Matrix::identity(dim);
    let f = hankel_matrix(n);
    let ker = kernel(n);
    let kernel_matches_matrix = (0..dim).all(|l| f_plus(&ker, &basis(dim, l)) == f.column(l));
    TruncatedReport {
        n,
        relations: module.relations_hold(),
        gaussians_inverse: &gaussian(n, 1) * &gaussian(n, -1) == id,
        exp_d2_inverse: &exp_d2_quarter(n, 1) * &exp_d2_quarter(n, -1) == id,
        exp_d2_matches_polyrep: exp_d2_quarter(n, 1) == exp_d2_quarter_via_polyrep(n, 1)
            && exp_d2_quarter(n, -1) == exp_d2_quarter_via_polyrep(n, -1),
        columns_match_formula: (0..dim).all(|l| f.column(l) == hankel_column_formula(n, l)),
        intertwining: intertwines(&module, &f),
        kernel_diagonal_is_g: ker.diagonal() == truncated_g_recursion(n).coeffs().to_vec(),
        bessel_constructions_agree: truncated_g_recursion(n).even_part() == truncated_f_closed_form(n),
        kernel_eigen_equation: kernel_eigen_equation_holds(&ker),
        kernel_origin_value: ker.c.get(0, 0).to_string(),
        inversion: inversion_holds(&ker),
        minus_parity_rule: minus_parity_rule_holds(&ker),
        plancherel: plancherel_truncated(&ker),
        kernel_matches_matrix,
        star: star_invariance_check(n),
        sl2: sl2_structure_check(n),
        uniqueness: (n <= UNIQUENESS_NMAX).then(|| uniqueness_solve(n)),
    }
}

/// Matrices, kernel and check outcomes for one `n`.
pub fn truncated_json(n: usize) -> Value {
    let m = build(n);
    let ker = kernel(n);
    json!({
        "n": n,
        "k": m.k.to_json(),
        "dim": m.dim(),
        "X": m.x.to_json(),
        "D": m.d.to_json(),
        "S": m.s.to_json(),
        "gamma_plus": gaussian(n, 1).to_json(),
        "gamma_minus": gaussian(n, -1).to_json(),
        "exp_d2_quarter_plus": exp_d2_quarter(n, 1).to_json(),
        "exp_d2_quarter_minus": exp_d2_quarter(n, -1).to_json(),
        "hankel": hankel_matrix(n).to_json(),
        "kernel_diagonal": ker.diagonal().iter().map(CoefficientJson::to_json).collect::<Vec<_>>(),
        "checks": serde_json::to_value(truncated_report(n)).expect("report serializes"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_cases() {
        let m0 = build(0);
        assert_eq!(m0.x, Matrix::zeros(1, 1));
        assert_eq!(m0.s, Matrix::identity(1));
        let m1 = build(1);
        assert_eq!(*m1.d.get(0, 1), q(-2));
        assert_eq!(*m1.d.get(1, 2), q(2));
        assert!(m1.x.column(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn gaussians_for_n1() {
        let m = build(1);
        let x2 = &m.x * &m.x;
        assert_eq!(gaussian(1, 1), &Matrix::identity(3) + &x2);
        assert_eq!(gaussian(1, -1), &Matrix::identity(3) - &x2);
        assert_eq!(gaussian(0, 1), Matrix::identity(1));
    }

    #[test]
    fn hankel_n1_columns() {
        let f = hankel_matrix(1);
        assert_eq!(f.column(0), vec![q(0), q(0), q(1)]);
        assert_eq!(f.column(1), vec![q(0), q(1), q(0)]);
        assert_eq!(f.column(2), vec![q(-1), q(0), q(0)]);
        assert_eq!(kernel(1).diagonal(), vec![q(-1), q(1), q(1)]);
        assert_eq!(kernel(0).diagonal(), vec![q(1)]);
    }

    #[test]
    fn residue_pair_n1() {
        let f = [q(1), q(2), q(3)];
        let g = [q(5), q(7), q(11)];
        assert_eq!(residue_pair(1, &f, &g), q(11 + 14 + 15));
    }

    #[test]
    fn sl2_n1_spectrum() {
        let s = sl2_structure_check(1);
        assert!(s.ef_is_h && s.he_is_2e && s.hf_is_minus_2f && s.h_diagonal);
        assert_eq!(s.even_spectrum, vec![-1, 1]);
    }

    #[test]
    fn report_passes_small_n() {
        for n in 0..=3 {
            let r = truncated_report(n);
            assert!(r.pass(), "{r:?}");
        }
    }

    #[test]
    fn only_trivial_coordinate_subspaces() {
        for n in 0..=2 {
            let full = (1u32 << (2 * n + 1)) - 1;
            assert_eq!(invariant_coordinate_subspaces(n), vec![0, full]);
        }
    }
}
