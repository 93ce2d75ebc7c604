//! Exhaustive Stab, Weyl and Diag computations over finite fields, the
//! omega-invertible construction, graded involutions and theorem reports.

mod center;
mod graded;
mod involutions;
mod omega;
pub mod scan;
mod theorems;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gradings::GradingError;
use crate::groups::GroupError;
use crate::morphisms::{LinearMap, MorphismError};
use crate::scalars::{Field, ScalarError};
use crate::triangular::{ProductKind, TriMatrix, TriangularError};
use crate::universal::UniversalError;

pub use center::practically_same;
pub use graded::{diag_group, enumerate_stab, weyl_group, DiagGroup, DiagonalMap, GradedGroups, InnerHit, PermGroup, PsiScan, Stab};
pub use involutions::{involution_survey, InvolutionClass, InvolutionSurvey, InvolutionWitness};
pub use omega::{construct_omega_invertible, omega_free_positions, random_free_entries, weyl_witness};
pub use theorems::{verify_theorems, Assertion, DiagEntry, DiagSummary, StabSummary, Status, TheoremReport, WeylSummary, WorkCounters};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Triangular(#[from] TriangularError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error("enumeration needs {needed} candidates but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("k = {k} has no square root, so no omega-invertible matrix of odd size {n} exists")]
    NoSquareRoot { n: usize, k: String },
    #[error("k must be nonzero")]
    ZeroK,
    #[error("free entry ({0}, {1}) is missing")]
    MissingFreeEntry(usize, usize),
    #[error("entry ({0}, {1}) is not free")]
    NotFree(usize, usize),
    #[error("free diagonal entry ({0}, {0}) is zero")]
    ZeroDiagonal(usize),
    #[error("expected {expected} signs, got {got}")]
    WrongSignCount { expected: usize, got: usize },
    #[error("signs must be 1 or -1")]
    BadSign,
    #[error("{0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Limits for exhaustive scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBudget {
    pub max_candidates: u64,
    pub parallel_chunks: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_candidates: 10_000_000, parallel_chunks: 64 }
    }
}

impl EnumerationBudget {
    pub fn new(max_candidates: u64) -> Self {
        EnumerationBudget { max_candidates, ..Self::default() }
    }

    /// The count itself when it fits.
    pub fn admit(&self, needed: u128) -> Result<u64, AnalysisError> {
        if needed > self.max_candidates as u128 {
            Err(AnalysisError::BudgetExceeded { needed, budget: self.max_candidates })
        } else {
            Ok(needed as u64)
        }
    }
}

/// The outer automorphism adjoined for a product: `t` for Jordan, `omega` for Lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outer {
    #[serde(rename = "t")]
    FlipT,
    #[serde(rename = "omega")]
    Omega,
}

impl Outer {
    pub fn for_product(kind: ProductKind) -> Option<Outer> {
        match kind {
            ProductKind::Associative => None,
            ProductKind::Jordan => Some(Outer::FlipT),
            ProductKind::Lie => Some(Outer::Omega),
        }
    }

    pub fn apply<F: Field>(self, x: &TriMatrix<F>) -> TriMatrix<F> {
        match self {
            Outer::FlipT => x.flip_t(),
            Outer::Omega => x.omega(),
        }
    }

    pub fn map<F: Field>(self, n: usize) -> LinearMap<F> {
        match self {
            Outer::FlipT => LinearMap::flip_t(n),
            Outer::Omega => LinearMap::omega(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outer::FlipT => "t",
            Outer::Omega => "omega",
        }
    }
}

fn require_odd_characteristic<F: Field>() -> Result<(), AnalysisError> {
    if F::descriptor().is_char_two() {
        Err(AnalysisError::CharacteristicTwo)
    } else {
        Ok(())
    }
}
