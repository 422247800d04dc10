//! Square matrices with the max-row-sum norm acting on vectors with the max norm.

use serde::{Deserialize, Serialize};

use crate::algebra::{mismatch, AlgebraElement, InstanceTag, NormedSpace, UnitalElement};
use crate::error::{Error, Result};
use crate::scalar::{max_or_zero, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Matrix<S> {
    rows: Vec<Vec<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Vector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config("matrix must be square and nonempty".into()));
        }
        Ok(Matrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![S::one(); n])
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            rows: vec![vec![S::zero(); n]; n],
        }
    }

    pub fn diagonal(d: Vec<S>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, v) in d.into_iter().enumerate() {
            m.rows[i][i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InstanceMismatch {
                left: format!("matrix {}x{}", self.dim(), self.dim()),
                right: format!("matrix {}x{}", other.dim(), other.dim()),
            });
        }
        Ok(())
    }

    pub fn apply(&self, v: &Vector<S>) -> Result<Vector<S>> {
        if v.dim() != self.dim() {
            return Err(Error::InstanceMismatch {
                left: format!("matrix {}x{}", self.dim(), self.dim()),
                right: format!("vector of length {}", v.dim()),
            });
        }
        let entries = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.entries)
                    .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect();
        Ok(Vector { entries })
    }
}

impl<S: Scalar> NormedSpace for Matrix<S> {
    type Scalar = S;

    fn tag(&self) -> InstanceTag {
        InstanceTag::Matrix
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other).map_err(|_| mismatch(self, other, "add"))?;
        Ok(Matrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
                .collect(),
        })
    }

    fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
                .collect(),
        }
    }

    fn norm(&self) -> S {
        max_or_zero(
            self.rows
                .iter()
                .map(|r| r.iter().fold(S::zero(), |acc, x| acc + x.abs())),
        )
    }

    fn zero_like(&self) -> Self {
        Self::zeros(self.dim())
    }
}

impl<S: Scalar> AlgebraElement for Matrix<S> {
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.dim();
        let mut rows = vec![vec![S::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (k, a) in self.rows[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = cell.clone() + a.clone() * other.rows[k][j].clone();
                }
            }
        }
        Ok(Matrix { rows })
    }
}

impl<S: Scalar> UnitalElement for Matrix<S> {
    fn unit_like(&self) -> Self {
        Self::identity(self.dim())
    }

    /// Gauss–Jordan elimination with partial pivoting on the largest entry.
    fn try_inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&x, &y| {
                    a[x][col]
                        .abs()
                        .partial_cmp(&a[y][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .ok_or_else(|| Error::NotInvertible(format!("matrix is singular at column {col}")))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            if S::MODE == crate::scalar::ArithmeticMode::Approx && p.abs().to_f64() < 1e-300 {
                return Err(Error::NotInvertible("pivot underflow".into()));
            }
            for j in 0..n {
                a[col][j] = a[col][j].clone() / p.clone();
                inv[col][j] = inv[col][j].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].clone() - factor.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - factor.clone() * inv[col][j].clone();
                }
            }
        }
        Ok(Matrix { rows: inv })
    }
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }
}

impl<S: Scalar> NormedSpace for Vector<S> {
    type Scalar = S;

    fn tag(&self) -> InstanceTag {
        InstanceTag::Vector
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(mismatch(self, other, "vector length"));
        }
        Ok(Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    fn scale(&self, c: &S) -> Self {
        Vector {
            entries: self.entries.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    fn norm(&self) -> S {
        max_or_zero(self.entries.iter().map(Scalar::abs))
    }

    fn zero_like(&self) -> Self {
        Vector {
            entries: vec![S::zero(); self.dim()],
        }
    }
}
