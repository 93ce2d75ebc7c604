//! Graded involutions `x -> a t(x) a^{-1}` of elementary gradings.

use serde::Serialize;

use crate::gradings::{is_symmetric, Grading, GradingKind};
use crate::morphisms::make_involution;
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::{dim, unit_index, unit_position, TriMatrix};

use super::scan::Classifier;
use super::{require_odd_characteristic, AnalysisError, EnumerationBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InvolutionClass {
    Canonical,
    Symplectic,
}

#[derive(Clone)]
pub struct InvolutionWitness<F> {
    pub a: TriMatrix<F>,
    /// From `t(a) = a` or `t(a) = -a`.
    pub by_symmetry: InvolutionClass,
    /// From the image of `e_1n`.
    pub by_corner: InvolutionClass,
    /// Whether `a` is homogeneous of the degree of the identity.
    pub homogeneous_degree_one: bool,
}

#[derive(Clone)]
pub struct InvolutionSurvey<F> {
    /// `eta` symmetric and the support commutative.
    pub predicted: bool,
    pub candidates: u64,
    pub witnesses: Vec<InvolutionWitness<F>>,
}

impl<F: Field> InvolutionSurvey<F> {
    pub fn exists(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn consistent(&self) -> bool {
        self.witnesses.iter().all(|w| w.by_symmetry == w.by_corner)
    }
}

/// Scans every `a` with `t(a) = ±a` and `a_11 = 1` for graded involutions
/// `phi_a ∘ t`.
pub fn involution_survey<F: Field>(grading: &Grading, budget: &EnumerationBudget) -> Result<InvolutionSurvey<F>, AnalysisError> {
    require_odd_characteristic::<F>()?;
    let eta = grading
        .eta()
        .filter(|_| grading.kind() == GradingKind::Elementary)
        .ok_or_else(|| AnalysisError::Precondition("involution survey needs an elementary grading".into()))?;
    let support = grading.support();
    let predicted = is_symmetric(eta) && grading.group().is_commutative_subset(&support)?;
    let n = grading.n();
    let units = enumerate_units::<F>()?;
    let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
    let classifier = Classifier::<F>::new(grading);

    // orbit representatives of the flip on packed positions
    let partner = |k: usize| {
        let (i, j) = unit_position(n, k);
        unit_index(n, n - 1 - j, n - 1 - i)
    };
    let reps: Vec<usize> = (0..dim(n)).filter(|&k| k <= partner(k)).collect();

    let mut witnesses = Vec::new();
    let mut candidates: u128 = 0;
    for sign in [1i64, -1] {
        let s = F::from_i64(sign);
        let choices: Vec<Vec<F>> = reps
            .iter()
            .map(|&k| {
                let (i, j) = unit_position(n, k);
                let fixed = partner(k) == k;
                if fixed && sign == -1 {
                    vec![F::zero()]
                } else if k == 0 {
                    vec![F::one()]
                } else if i == j {
                    units.clone()
                } else {
                    elems.clone()
                }
            })
            .collect();
        let count: u128 = choices.iter().map(|c| c.len() as u128).product();
        candidates += count;
        budget.admit(candidates)?;
        let mut values = vec![Vec::new()];
        for c in &choices {
            values = values
                .into_iter()
                .flat_map(|prefix: Vec<F>| {
                    c.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        for v in values {
            let mut data = vec![F::zero(); dim(n)];
            for (&k, x) in reps.iter().zip(&v) {
                data[k] = x.clone();
                data[partner(k)] = if partner(k) == k { x.clone() } else { s.clone() * x.clone() };
            }
            let a = TriMatrix::from_packed(n, data);
            if !a.is_invertible() {
                continue;
            }
            let b = a.inverse()?;
            if !classifier.is_graded(|x| a.matmul(&x.flip_t()).matmul(&b)) {
                continue;
            }
            let f = make_involution(&a)?;
            if !f.is_involution() {
                return Err(AnalysisError::Invariant("phi_a t with t(a) = ±a is not an involution".into()));
            }
            let by_symmetry = if sign == 1 { InvolutionClass::Canonical } else { InvolutionClass::Symplectic };
            let corner = f.unit_image(0, n - 1);
            let by_corner = if corner == TriMatrix::unit(n, 0, n - 1) {
                InvolutionClass::Canonical
            } else if corner == TriMatrix::unit(n, 0, n - 1).neg() {
                InvolutionClass::Symplectic
            } else {
                return Err(AnalysisError::Invariant("e_1n is not mapped to ±e_1n".into()));
            };
            let homogeneous_degree_one = classifier.identity_degree().is_some() && classifier.degree_of(&a) == classifier.identity_degree();
            witnesses.push(InvolutionWitness { a, by_symmetry, by_corner, homogeneous_degree_one });
        }
    }
    Ok(InvolutionSurvey { predicted, candidates: candidates as u64, witnesses })
}
