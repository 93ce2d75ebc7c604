//! The algebra `UT_n` of upper triangular matrices.
//!
//! Entries are stored densely in upper-packed row-major order; that order is
//! also the order of the matrix-unit basis `e_ij` (`i <= j`) used everywhere a
//! matrix is treated as a coordinate vector. Indices are 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Field, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangularError {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix is not invertible (zero diagonal entry at {0})")]
    NotInvertible(usize),
    #[error("operation is only defined for the {expected} product, got {got}")]
    UnsupportedProduct { expected: ProductKind, got: ProductKind },
    #[error("matrix literal for n={n} needs {expected} entries, got {got}")]
    BadLiteral { n: usize, expected: usize, got: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Which product `UT_n` carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProductKind {
    #[serde(rename = "assoc")]
    Associative,
    /// `[a,b] = ab - ba`
    #[serde(rename = "lie")]
    Lie,
    /// `a o b = ab + ba`, deliberately without a factor 1/2
    #[serde(rename = "jordan")]
    Jordan,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Associative => "assoc",
            ProductKind::Lie => "lie",
            ProductKind::Jordan => "jordan",
        })
    }
}

/// `n(n+1)/2`
pub const fn dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Position of `e_ij` in the packed basis.
#[inline]
pub const fn unit_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n + 1 - i) / 2 + (j - i)
}

/// Inverse of [`unit_index`].
pub fn unit_position(n: usize, mut idx: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i;
        if idx < row {
            return (i, i + idx);
        }
        idx -= row;
    }
    panic!("basis index out of range for n={n}");
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> TriMatrix<F> {
    pub fn zeros(n: usize) -> Self {
        TriMatrix { n, data: vec![F::zero(); dim(n)] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, F::one())
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// The matrix unit `e_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, F::one());
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, d) in entries.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// From coordinates in the packed matrix-unit basis.
    pub fn from_packed(n: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), dim(n), "packed data has wrong length");
        TriMatrix { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(dim(n));
        for i in 0..n {
            for j in i..n {
                data.push(f(i, j));
            }
        }
        TriMatrix { n, data }
    }

    /// Row-major list of the upper entries, e.g. `["1", "1/3", "2"]` for n=2.
    pub fn from_literal<S: AsRef<str>>(n: usize, entries: &[S]) -> Result<Self, TriangularError> {
        if entries.len() != dim(n) {
            return Err(TriangularError::BadLiteral { n, expected: dim(n), got: entries.len() });
        }
        let data = entries.iter().map(|s| F::parse_literal(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(TriMatrix { n, data })
    }

    pub fn to_literal(&self) -> Vec<String> {
        self.data.iter().map(ToString::to_string).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn packed(&self) -> &[F] {
        &self.data
    }

    pub fn into_packed(self) -> Vec<F> {
        self.data
    }

    /// Entry `(i, j)`; zero below the diagonal.
    pub fn entry(&self, i: usize, j: usize) -> F {
        if i > j {
            F::zero()
        } else {
            self.data[unit_index(self.n, i, j)].clone()
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[unit_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        let idx = unit_index(self.n, i, j);
        self.data[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_invertible(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i).is_zero())
    }

    fn check_size(&self, other: &Self) -> Result<(), TriangularError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(TriangularError::SizeMismatch { left: self.n, right: other.n })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TriangularError> {
        self.check_size(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TriangularError> {
        self.check_size(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        TriMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        TriMatrix { n: self.n, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        TriMatrix { n: self.n, data: self.data.iter().map(|a| -a.clone()).collect() }
    }

    /// Associative product. Panics on a size mismatch; see [`Self::multiply`].
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in i..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in k..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = unit_index(n, i, j);
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self, kind: ProductKind) -> Result<Self, TriangularError> {
        self.check_size(other)?;
        Ok(self.product(other, kind))
    }

    /// [`Self::multiply`] for operands already known to have equal size.
    pub fn product(&self, other: &Self, kind: ProductKind) -> Self {
        let xy = self.matmul(other);
        match kind {
            ProductKind::Associative => xy,
            ProductKind::Lie => xy.zip_with(&other.matmul(self), |a, b| a.clone() - b.clone()),
            ProductKind::Jordan => xy.zip_with(&other.matmul(self), |a, b| a.clone() + b.clone()),
        }
    }

    /// Inverse by back-substitution, column by column.
    pub fn inverse(&self) -> Result<Self, TriangularError> {
        let n = self.n;
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            diag_inv.push(self.get(i, i).inverse().map_err(|_| TriangularError::NotInvertible(i))?);
        }
        let mut b = Self::zeros(n);
        for j in 0..n {
            b.set(j, j, diag_inv[j].clone());
            for i in (0..j).rev() {
                let mut s = F::zero();
                for k in i + 1..=j {
                    s = s + self.get(i, k).clone() * b.get(k, j).clone();
                }
                b.set(i, j, -(s * diag_inv[i].clone()));
            }
        }
        Ok(b)
    }

    /// The flip along the second diagonal, `e_ij -> e_{n-1-j, n-1-i}`.
    pub fn flip_t(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.get(n - 1 - j, n - 1 - i).clone())
    }

    /// `omega = -t`
    pub fn omega(&self) -> Self {
        self.flip_t().neg()
    }

    /// Largest `m` with the matrix in `J^m = span{e_ij : j - i >= m}`; `n` for zero.
    pub fn radical_degree(&self) -> usize {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .map(|(i, j)| j - i)
            .min()
            .unwrap_or(n)
    }

    /// Coordinates modulo the center `K*1` of the Lie algebra, in the
    /// complement spanned by every matrix unit except `e_{n-1,n-1}`.
    pub fn center_project(&self, kind: ProductKind) -> Result<Vec<F>, TriangularError> {
        if kind != ProductKind::Lie {
            return Err(TriangularError::UnsupportedProduct { expected: ProductKind::Lie, got: kind });
        }
        let n = self.n;
        if n == 0 {
            return Ok(vec![]);
        }
        let last = self.get(n - 1, n - 1).clone();
        let mut out = Vec::with_capacity(dim(n) - 1);
        for i in 0..n {
            for j in i..n {
                if i == n - 1 {
                    continue;
                }
                let v = self.get(i, j).clone();
                out.push(if i == j { v - last.clone() } else { v });
            }
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Debug for TriMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> fmt::Display for TriMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
