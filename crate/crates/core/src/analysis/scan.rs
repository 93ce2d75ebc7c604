//! Candidate spaces and the per-grading classifier used by every scan.

use rayon::prelude::*;

use crate::gradings::{CoordinateMap, Grading};
use crate::groups::GroupElement;
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::{dim, unit_position, TriMatrix};

use super::{AnalysisError, EnumerationBudget};

/// Precomputed data for deciding how a map moves the components of a grading.
pub struct Classifier<F> {
    cm: CoordinateMap<F>,
    basis: Vec<TriMatrix<F>>,
    /// Support index of each basis vector.
    deg: Vec<usize>,
    dims: Vec<usize>,
    support: Vec<GroupElement>,
    one: Option<usize>,
}

impl<F: Field> Classifier<F> {
    pub fn new(grading: &Grading) -> Self {
        let support = grading.support();
        let deg: Vec<usize> = grading.degrees().iter().map(|g| support.binary_search(g).expect("degree in support")).collect();
        let mut dims = vec![0; support.len()];
        for &d in &deg {
            dims[d] += 1;
        }
        let basis = (0..deg.len()).map(|k| grading.basis_matrix(k)).collect();
        let mut c = Classifier { cm: grading.coordinate_map(), basis, deg, dims, support, one: None };
        c.one = c.degree_of(&TriMatrix::identity(grading.n()));
        c
    }

    pub fn support(&self) -> &[GroupElement] {
        &self.support
    }

    pub fn basis(&self) -> &[TriMatrix<F>] {
        &self.basis
    }

    /// Support index of the degree of the identity matrix, if homogeneous.
    pub fn identity_degree(&self) -> Option<usize> {
        self.one
    }

    /// Support index of `x` when `x` is nonzero and homogeneous.
    pub fn degree_of(&self, x: &TriMatrix<F>) -> Option<usize> {
        let mut found = None;
        for (k, v) in self.cm.coordinates(x).iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            match found {
                None => found = Some(self.deg[k]),
                Some(d) if d == self.deg[k] => {}
                Some(_) => return None,
            }
        }
        found
    }

    /// The support permutation of a self-equivalence, `None` otherwise.
    pub fn permutation(&self, f: impl Fn(&TriMatrix<F>) -> TriMatrix<F>) -> Option<Vec<usize>> {
        let mut alpha = vec![usize::MAX; self.support.len()];
        for (b, &d) in self.basis.iter().zip(&self.deg) {
            let target = self.degree_of(&f(b))?;
            if alpha[d] == usize::MAX {
                alpha[d] = target;
            } else if alpha[d] != target {
                return None;
            }
        }
        let mut seen = vec![false; alpha.len()];
        for (g, &h) in alpha.iter().enumerate() {
            if std::mem::replace(&mut seen[h], true) || self.dims[g] != self.dims[h] {
                return None;
            }
        }
        Some(alpha)
    }

    pub fn is_graded(&self, f: impl Fn(&TriMatrix<F>) -> TriMatrix<F>) -> bool {
        self.basis.iter().zip(&self.deg).all(|(b, &d)| self.degree_of(&f(b)) == Some(d))
    }

    /// Scalars `lambda_g` (by support index) when `f` scales every component.
    pub fn lambdas(&self, f: impl Fn(&TriMatrix<F>) -> TriMatrix<F>) -> Option<Vec<F>> {
        let mut out: Vec<Option<F>> = vec![None; self.support.len()];
        for (b, &d) in self.basis.iter().zip(&self.deg) {
            let image = f(b);
            let (k, pivot) = b.packed().iter().enumerate().find(|(_, v)| !v.is_zero())?;
            let lambda = image.packed()[k].clone() * pivot.inverse().ok()?;
            if lambda.is_zero() || b.scale(&lambda) != image {
                return None;
            }
            match &out[d] {
                None => out[d] = Some(lambda),
                Some(l) if *l == lambda => {}
                Some(_) => return None,
            }
        }
        out.into_iter().collect()
    }
}

/// Upper triangular matrices with invertible diagonal, indexed lexicographically
/// in packed order (units first on the diagonal, all elements elsewhere).
pub struct InvertibleSpace<F> {
    n: usize,
    digits: Vec<Vec<F>>,
    pub count: u64,
}

impl<F: Field> InvertibleSpace<F> {
    /// With `normalized`, the entry `a_11` is fixed to 1.
    pub fn new(n: usize, normalized: bool, budget: &EnumerationBudget) -> Result<Self, AnalysisError> {
        let units = enumerate_units::<F>()?;
        let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
        let digits: Vec<Vec<F>> = (0..dim(n))
            .map(|k| {
                let (i, j) = unit_position(n, k);
                if k == 0 && normalized {
                    vec![F::one()]
                } else if i == j {
                    units.clone()
                } else {
                    elems.clone()
                }
            })
            .collect();
        let count = budget.admit(digits.iter().map(|d| d.len() as u128).product())?;
        Ok(InvertibleSpace { n, digits, count })
    }

    pub fn decode(&self, mut idx: u64) -> TriMatrix<F> {
        let mut data = vec![F::zero(); self.digits.len()];
        for (slot, d) in data.iter_mut().zip(&self.digits).rev() {
            let r = d.len() as u64;
            *slot = d[(idx % r) as usize].clone();
            idx /= r;
        }
        TriMatrix::from_packed(self.n, data)
    }
}

/// Runs `f` over `0..count` in contiguous chunks; the output is in index order
/// whatever the schedule.
pub fn par_scan<T: Send>(count: u64, chunks: usize, f: impl Fn(u64) -> Option<T> + Sync) -> Vec<T> {
    let chunks = (chunks.max(1) as u64).min(count.max(1));
    let size = count.div_ceil(chunks);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * size;
            let hi = count.min(lo + size);
            (lo..hi).filter_map(&f).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Every tuple over `values` of the given length, in lexicographic order.
pub fn tuples<F: Clone>(values: &[F], len: usize) -> Vec<Vec<F>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}
