//! Small dense square matrices: LU with partial pivoting and a one-sided
//! Jacobi SVD. Dimensions here are single digits, so plain `Vec` storage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointN;
use crate::scalar::Real;

/// Row-major n x n real matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixN<T> {
    n: usize,
    data: Vec<T>,
}

/// Which norm `|A|` denotes. The minimum-stretch bound holds for the operator norm;
/// Frobenius is offered for comparison only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixNorm {
    #[default]
    Operator,
    Frobenius,
}

impl<T: Real> MatrixN<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must form a non-empty square"));
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(Self { n, data })
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn set_row(&mut self, i: usize, row: &[T]) {
        self.data[i * self.n..(i + 1) * self.n].copy_from_slice(row);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &PointN<T>) -> PointN<T> {
        PointN::from_vec(
            (0..self.n)
                .map(|i| self.row(i).iter().zip(v.coords()).fold(T::zero(), |a, (&m, &x)| a + m * x))
                .collect(),
        )
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self[(i, k)];
                for j in 0..self.n {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |a, &v| a + v * v).sqrt()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> T {
        self.singular_values()[0]
    }

    pub fn norm(&self, kind: MatrixNorm) -> T {
        match kind {
            MatrixNorm::Operator => self.operator_norm(),
            MatrixNorm::Frobenius => self.frobenius_norm(),
        }
    }

    pub fn lu(&self) -> Lu<T> {
        Lu::factor(self)
    }

    pub fn det(&self) -> T {
        self.lu().det()
    }

    pub fn solve(&self, b: &PointN<T>) -> Result<PointN<T>> {
        self.lu().solve(b)
    }

    /// Singular values in non-increasing order, via one-sided Jacobi
    /// rotations on the columns. Small singular values come out with
    /// relative accuracy, unlike the eigenvalues of `AᵀA`.
    pub fn singular_values(&self) -> Vec<T> {
        let n = self.n;
        // columns as contiguous vectors
        let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|i| self[(i, j)]).collect()).collect();
        let eps = T::epsilon();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                    for i in 0..n {
                        alpha = alpha + cols[p][i] * cols[p][i];
                        beta = beta + cols[q][i] * cols[q][i];
                        gamma = gamma + cols[p][i] * cols[q][i];
                    }
                    if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    for i in 0..n {
                        let a = cols[p][i];
                        let b = cols[q][i];
                        cols[p][i] = c * a - s * b;
                        cols[q][i] = s * a + c * b;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<T> = cols.iter().map(|c| c.iter().fold(T::zero(), |a, &v| a + v * v).sqrt()).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }

    pub fn min_singular_value(&self) -> T {
        *self.singular_values().last().expect("non-empty matrix")
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.as_f64()).collect()).collect()
    }
}

impl<T> std::ops::Index<(usize, usize)> for MatrixN<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for MatrixN<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting, `PA = LU` packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: MatrixN<T>,
    perm: Vec<usize>,
    sign: T,
    singular: bool,
}

impl<T: Real> Lu<T> {
    fn factor(a: &MatrixN<T>) -> Self {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for k in 0..n {
            let (piv, max) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if max == T::zero() {
                singular = true;
                continue;
            }
            if piv != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    lu[(i, j)] = lu[(i, j)] - f * lu[(k, j)];
                }
            }
        }
        Self { lu, perm, sign, singular }
    }

    pub fn det(&self) -> T {
        if self.singular {
            return T::zero();
        }
        (0..self.lu.n).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &PointN<T>) -> Result<PointN<T>> {
        if self.singular {
            return Err(Error::Singular);
        }
        let n = self.lu.n;
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - self.lu[(i, j)] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] = y[i] - self.lu[(i, j)] * y[j];
            }
            y[i] = y[i] / self.lu[(i, i)];
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        Ok(PointN::from_vec(y))
    }
}
