//! Group gradings on upper triangular matrices.
//!
//! The algebra `UT_n` is studied with its associative, Lie and Jordan
//! products. Gradings are elementary or MT; the crate computes their graded
//! automorphisms, Weyl groups and diagonal groups by exact enumeration over
//! prime fields, and checks the structure theorems about them.

pub mod analysis;
pub mod gradings;
pub mod groups;
pub mod morphisms;
pub mod scalars;
pub mod triangular;
pub mod universal;

pub use analysis::{verify_theorems, AnalysisError, EnumerationBudget, TheoremReport};
pub use gradings::{Grading, GradingKind, GradingSpec};
pub use groups::{AbelianGroup, CayleyGroup, Group, GroupElement};
pub use morphisms::{LinearMap, OmegaCompatibility};
pub use scalars::{Field, FieldDescriptor, Fp, Gf2, Gf3, Gf5, Gf7, Rational};
pub use triangular::{ProductKind, TriMatrix};

pub type RationalMatrix = TriMatrix<Rational>;
pub type RationalMap = LinearMap<Rational>;
pub type Gf3Matrix = TriMatrix<Gf3>;
pub type Gf3Map = LinearMap<Gf3>;
