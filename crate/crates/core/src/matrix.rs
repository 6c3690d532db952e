//! Dense exact rational matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::poly::CoefficientJson;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(BigRational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        (0..e).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// `Σ_m (c A)^m / m!`, which terminates because `A` is nilpotent.
    ///
    /// # Panics
    /// If `A` is not nilpotent.
    pub fn nilpotent_exp(&self, c: &BigRational) -> Self {
        assert_eq!(self.rows, self.cols);
        let step = self.scale(c);
        let mut out = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for m in 1..=self.rows {
            term = (&term * &step).scale(&BigRational::new(BigInt::one(), BigInt::from(m)));
            out = &out + &term;
        }
        assert!((&term * &step).is_zero(), "matrix is not nilpotent");
        out
    }

    /// `AB - BA`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j) - &f * m.get(row, j);
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Row-major vectorization.
    pub fn to_vec(&self) -> Vec<BigRational> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Coefficient matrix of the linear map `M ↦ M A - B M` on row-major `vec(M)`.
    pub fn sylvester_operator(a: &Self, b: &Self) -> Self {
        let n = a.rows;
        assert!(a.rows == a.cols && b.rows == n && b.cols == n);
        let mut out = Self::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let row = i * n + j;
                // (M A)_{ij} = Σ_l M_{il} A_{lj}
                for l in 0..n {
                    let col = i * n + l;
                    let v = out.get(row, col) + a.get(l, j);
                    out.set(row, col, v);
                }
                // (B M)_{ij} = Σ_l B_{il} M_{lj}
                for l in 0..n {
                    let col = l * n + j;
                    let v = out.get(row, col) - b.get(i, l);
                    out.set(row, col, v);
                }
            }
        }
        out
    }

    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Self { rows, cols, data }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    pub fn max_abs_entry(&self) -> BigRational {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_nilpotent_inverts() {
        let n = Matrix::from_fn(4, 4, |i, j| if j == i + 1 { q(j as i64) } else { q(0) });
        let e = n.nilpotent_exp(&q(1));
        let e_inv = n.nilpotent_exp(&q(-1));
        assert_eq!(&e * &e_inv, Matrix::identity(4));
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let m = Matrix::from_fn(2, 3, |i, j| q(((i + 1) * (j + 1)) as i64));
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        assert_eq!(Matrix::identity(3).nullspace().len(), 0);
    }

    #[test]
    fn sylvester_operator_matches_direct() {
        let a = Matrix::from_fn(3, 3, |i, j| q((i as i64) - 2 * (j as i64)));
        let b = Matrix::from_fn(3, 3, |i, j| q(((i * j) % 3) as i64));
        let m = Matrix::from_fn(3, 3, |i, j| q((i + 3 * j) as i64 - 1));
        let direct = &(&m * &a) - &(&b * &m);
        let via = Matrix::sylvester_operator(&a, &b).apply(&m.to_vec());
        assert_eq!(via, direct.to_vec());
    }
}
