//! Omega-invertible matrices and the Weyl witnesses of MT gradings.

use std::collections::BTreeMap;

use rand::Rng;

use crate::morphisms::{omega_compatibility, OmegaCompatibility};
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::TriMatrix;

use super::{require_odd_characteristic, AnalysisError};

/// Free positions `(i, j)`, 0-based, with `i <= j` and `i + j <= n - 2`.
pub fn omega_free_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i + j + 2 <= n {
                out.push((i, j));
            }
        }
    }
    out
}

/// Uniformly random free entries over a finite field, diagonal ones nonzero.
pub fn random_free_entries<F: Field>(n: usize, rng: &mut impl Rng) -> Result<BTreeMap<(usize, usize), F>, AnalysisError> {
    let units = enumerate_units::<F>()?;
    let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
    Ok(omega_free_positions(n)
        .into_iter()
        .map(|(i, j)| {
            let pool = if i == j { &units } else { &elems };
            ((i, j), pool[rng.gen_range(0..pool.len())].clone())
        })
        .collect())
}

/// The unique `a` with `a omega(a) = omega(a) a = -k` and the given free entries.
///
/// The inner block of size `n - 2` is solved first; the first row of each
/// block is free except its last entry, and the last column follows from
/// the first row of `a t(a) = k`.
pub fn construct_omega_invertible<F: Field>(
    n: usize,
    free: &BTreeMap<(usize, usize), F>,
    k: &F,
) -> Result<TriMatrix<F>, AnalysisError> {
    require_odd_characteristic::<F>()?;
    if k.is_zero() {
        return Err(AnalysisError::ZeroK);
    }
    let root = if n % 2 == 1 { Some(k.sqrt().ok_or_else(|| AnalysisError::NoSquareRoot { n, k: k.to_string() })?) } else { None };
    let positions = omega_free_positions(n);
    if let Some(&(i, j)) = free.keys().find(|p| !positions.contains(p)) {
        return Err(AnalysisError::NotFree(i, j));
    }
    let mut a = TriMatrix::zeros(n);
    for &(i, j) in &positions {
        let v = free.get(&(i, j)).ok_or(AnalysisError::MissingFreeEntry(i, j))?;
        if i == j && v.is_zero() {
            return Err(AnalysisError::ZeroDiagonal(i));
        }
        a.set(i, j, v.clone());
    }
    let mut lo = n / 2;
    let mut hi = n - n / 2;
    if let Some(root) = root {
        a.set(lo, lo, root);
    }
    // blocks [lo, hi) grow outwards by one on each side
    while lo > 0 {
        lo -= 1;
        hi += 1;
        solve_block(&mut a, lo, hi - 1, k)?;
    }
    match omega_compatibility(&a)? {
        OmegaCompatibility::Commuting(c) if c == *k => Ok(a),
        other => Err(AnalysisError::Invariant(format!("constructed matrix gives {other:?}"))),
    }
}

/// Fills the last column of the block `[f, l]` from its first row.
fn solve_block<F: Field>(a: &mut TriMatrix<F>, f: usize, l: usize, k: &F) -> Result<(), AnalysisError> {
    let s = l - f + 1;
    let at = |a: &TriMatrix<F>, i: usize, j: usize| a.get(f + i - 1, f + j - 1).clone();
    let a11 = at(a, 1, 1);
    let inv = a11.inverse()?;
    // j = 1 gives a_ss; 2 <= j <= s - 1 give a_{s+1-j, s}
    a.set(l, l, k.clone() * inv.clone());
    for j in 2..s {
        let sum = (2..=j).fold(F::zero(), |acc, m| acc + at(a, 1, m) * at(a, s + 1 - j, s + 1 - m));
        a.set(f + s - j, l, -(sum * inv.clone()));
    }
    if s >= 2 {
        let sum = (2..s).fold(F::zero(), |acc, m| acc + at(a, 1, m) * at(a, 1, s + 1 - m));
        let two = F::from_i64(2);
        a.set(f, l, -(sum * (two * a11).inverse()?));
    }
    Ok(())
}

/// `diag(e, ..., e, e_1...e_{p-1}, ..., e_1 e_2, e_1, 1)` with `e = e_1...e_p`
/// repeated `n - p` times, `p = n / 2`.
pub fn weyl_witness<F: Field>(n: usize, eps: &[i8]) -> Result<TriMatrix<F>, AnalysisError> {
    require_odd_characteristic::<F>()?;
    let p = n / 2;
    if eps.len() != p {
        return Err(AnalysisError::WrongSignCount { expected: p, got: eps.len() });
    }
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(AnalysisError::BadSign);
    }
    let partial: Vec<i64> = eps.iter().scan(1i64, |acc, &e| {
        *acc *= e as i64;
        Some(*acc)
    }).collect();
    let total = partial.last().copied().unwrap_or(1);
    let mut d = vec![F::from_i64(total); n - p];
    d.extend((0..p.saturating_sub(1)).rev().map(|k| F::from_i64(partial[k])));
    if p > 0 {
        d.push(F::one());
    }
    Ok(TriMatrix::diagonal(&d))
}

/// All sign vectors of length `p`, `+1` before `-1` in each slot.
pub(crate) fn all_sign_vectors(p: usize) -> Vec<Vec<i8>> {
    (0..1u32 << p).map(|m| (0..p).map(|i| if m >> (p - 1 - i) & 1 == 1 { -1 } else { 1 }).collect()).collect()
}
