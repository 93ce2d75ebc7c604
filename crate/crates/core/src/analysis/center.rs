//! Comparing Lie gradings modulo the center `K*1`.

use std::collections::BTreeSet;

use crate::gradings::Grading;
use crate::scalars::Field;
use crate::triangular::ProductKind;

use super::AnalysisError;

/// Whether two Lie gradings induce the same decomposition of `L / z(L)`.
pub fn practically_same<F: Field>(a: &Grading, b: &Grading) -> Result<bool, AnalysisError> {
    for g in [a, b] {
        if g.product() != ProductKind::Lie {
            return Err(AnalysisError::Precondition(format!("practically_same needs Lie gradings, got {}", g.product())));
        }
    }
    if a.n() != b.n() {
        return Err(AnalysisError::Precondition(format!("sizes differ: {} vs {}", a.n(), b.n())));
    }
    if a.group() != b.group() {
        return Err(AnalysisError::Precondition("the grading groups differ".into()));
    }
    let degrees: BTreeSet<_> = a.support().into_iter().chain(b.support()).collect();
    for g in &degrees {
        if quotient_span::<F>(a, g)? != quotient_span::<F>(b, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reduced row echelon basis of the image of `A_g` in `L / z(L)`.
fn quotient_span<F: Field>(grading: &Grading, g: &crate::groups::GroupElement) -> Result<Vec<Vec<F>>, AnalysisError> {
    let mut rows: Vec<Vec<F>> = grading
        .component(g)
        .into_iter()
        .map(|k| grading.basis_matrix::<F>(k).center_project(ProductKind::Lie))
        .collect::<Result<_, _>>()?;
    Ok(rref(&mut rows))
}

fn rref<F: Field>(rows: &mut [Vec<F>]) -> Vec<Vec<F>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for v in rows[rank].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, q) in row.iter_mut().zip(&pivot) {
                *v = v.clone() - f.clone() * q.clone();
            }
        }
        rank += 1;
    }
    rows[..rank].to_vec()
}
