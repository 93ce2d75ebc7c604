//! The universal grading group, abelianized, and its characters.
//!
//! Only `U(Γ)^{ab}` is computed: characters into the abelian group `K^*`
//! factor through it, which is all the diagonal-group computations need.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::gradings::{Grading, GradingError};
use crate::groups::{AbelianGroup, Group, GroupElement, GroupError, PresentationMap};
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::{ProductKind, TriMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniversalError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("product {left} * {right} is not homogeneous; the grading axiom fails")]
    NotAGrading { left: String, right: String },
    #[error("{0} cannot be evaluated by a character of the universal group")]
    NotEvaluable(GroupElement),
    #[error("character diagonals need an elementary grading")]
    NotElementary,
}

/// `U(Γ)^{ab}`: generators are the support, one relation `a - b - c` for every
/// nonzero product `A_b A_c ⊆ A_a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianPresentation {
    pub generators: Vec<GroupElement>,
    pub relations: Vec<Vec<i64>>,
    pub normal_form: AbelianGroup,
    #[serde(skip)]
    map: PresentationMap,
}

impl AbelianPresentation {
    /// Image of a support element in the normal form.
    pub fn embed(&self, g: &GroupElement) -> Option<GroupElement> {
        let i = self.generators.binary_search(g).ok()?;
        Some(self.map.generator(i))
    }

    pub fn map(&self) -> &PresentationMap {
        &self.map
    }
}

pub fn universal_abelian<F: Field>(grading: &Grading, kind: ProductKind) -> Result<AbelianPresentation, UniversalError> {
    let generators = grading.support();
    let idx = |g: &GroupElement| generators.binary_search(g).expect("degree in support");
    let cm = grading.coordinate_map::<F>();
    let mats: Vec<TriMatrix<F>> = (0..grading.basis().len()).map(|k| grading.basis_matrix(k)).collect();
    let degrees = grading.degrees();
    let mut relations = BTreeSet::new();
    for (x, bx) in mats.iter().enumerate() {
        for (y, by) in mats.iter().enumerate() {
            let z = bx.product(by, kind);
            if z.is_zero() {
                continue;
            }
            let Some(a) = grading.degree_from_coordinates(&cm.coordinates(&z)) else {
                return Err(UniversalError::NotAGrading {
                    left: grading.basis()[x].label.clone(),
                    right: grading.basis()[y].label.clone(),
                });
            };
            let mut row = vec![0i64; generators.len()];
            row[idx(&a)] += 1;
            row[idx(&degrees[x])] -= 1;
            row[idx(&degrees[y])] -= 1;
            relations.insert(row);
        }
    }
    let relations: Vec<Vec<i64>> = relations.into_iter().filter(|r| r.iter().any(|&v| v != 0)).collect();
    let (normal_form, map) = AbelianGroup::from_relations(generators.len(), &relations);
    Ok(AbelianPresentation { generators, relations, normal_form, map })
}

/// A homomorphism `U -> K^*`, given by the images of the normal-form generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character<F> {
    pub images: Vec<F>,
}

impl<F: Field> Character<F> {
    pub fn trivial(u: &AbelianGroup) -> Self {
        Character { images: vec![F::one(); u.rank()] }
    }

    /// `chi(u)` for `u` in normal-form coordinates.
    pub fn evaluate(&self, u: &GroupElement) -> F {
        self.images
            .iter()
            .zip(u.coords())
            .fold(F::one(), |acc, (x, &e)| acc * x.powi(e).expect("character values are units"))
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|x| x.is_one())
    }
}

/// `(p-1)^r * prod gcd(d_i, p-1)`
pub fn character_count(u: &AbelianGroup, p: u64) -> u64 {
    let m = p - 1;
    let free = m.pow(u.free_rank as u32);
    u.invariant_factors().iter().fold(free, |acc, &d| acc * num_integer::gcd(d, m))
}

/// All characters into the unit group of a finite field, in canonical order.
pub fn characters<F: Field>(u: &AbelianGroup) -> Result<Vec<Character<F>>, UniversalError> {
    let units = enumerate_units::<F>()?;
    let mut choices: Vec<Vec<F>> = vec![units.clone(); u.free_rank];
    for &d in u.invariant_factors() {
        choices.push(units.iter().filter(|x| x.pow(d).is_one()).cloned().collect());
    }
    let mut out = vec![Vec::new()];
    for options in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<F>| {
                options.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|images| Character { images }).collect())
}

/// `diag(chi(a_1), ..., chi(a_n))` for a sequence of grading-group elements.
///
/// An entry is evaluated as `1` if it is the identity, through the embedding
/// if it lies in the support, and as `chi(a^{-1})^{-1}` if its inverse does.
pub fn diagonal_from_character<F: Field>(
    chi: &Character<F>,
    a_seq: &[GroupElement],
    group: &Group,
    u: &AbelianPresentation,
) -> Result<TriMatrix<F>, UniversalError> {
    let entries = a_seq
        .iter()
        .map(|a| {
            if *a == group.identity() {
                return Ok(F::one());
            }
            if let Some(x) = u.embed(a) {
                return Ok(chi.evaluate(&x));
            }
            let inv = group.inv(a)?;
            match u.embed(&inv) {
                Some(x) => Ok(chi.evaluate(&x).inverse()?),
                None => Err(UniversalError::NotEvaluable(a.clone())),
            }
        })
        .collect::<Result<Vec<F>, UniversalError>>()?;
    Ok(TriMatrix::diagonal(&entries))
}

/// `a_chi` for an elementary grading, with the sequence lifted to `U`:
/// `a_1 = 1` and `a_j = deg(e_1j)^{-1}`, so `phi_{a_chi}(e_ij) = chi(deg e_ij) e_ij`.
pub fn character_diagonal<F: Field>(chi: &Character<F>, grading: &Grading, u: &AbelianPresentation) -> Result<TriMatrix<F>, UniversalError> {
    let n = grading.n();
    let mut entries = Vec::with_capacity(n);
    for j in 0..n {
        let deg = grading.unit_degree(0, j).ok_or(UniversalError::NotElementary)?;
        let x = u.embed(deg).expect("unit degrees lie in the support");
        entries.push(chi.evaluate(&x).inverse()?);
    }
    Ok(TriMatrix::diagonal(&entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::{omega_compatibility, LinearMap, OmegaCompatibility};
    use crate::scalars::{FieldDescriptor, Gf2, Gf3, Gf5, Gf7};
    use num_traits::One;

    fn el(c: &[i64]) -> GroupElement {
        GroupElement(c.to_vec())
    }

    fn z2() -> Group {
        Group::Abelian(AbelianGroup::cyclic(2))
    }

    #[test]
    fn universal_examples() {
        let trivial = Grading::elementary_from_eta(3, z2(), &[el(&[0]), el(&[0])], ProductKind::Associative).unwrap();
        assert!(universal_abelian::<Gf3>(&trivial, ProductKind::Associative).unwrap().normal_form.is_trivial());

        let gg = Grading::elementary_from_eta(3, z2(), &[el(&[1]), el(&[1])], ProductKind::Associative).unwrap();
        let u = universal_abelian::<Gf3>(&gg, ProductKind::Associative).unwrap();
        assert_eq!(u.normal_form, AbelianGroup::cyclic(2));

        let g2 = Grading::elementary_from_eta(2, z2(), &[el(&[1])], ProductKind::Associative).unwrap();
        let u = universal_abelian::<Gf3>(&g2, ProductKind::Associative).unwrap();
        assert_eq!(u.normal_form, AbelianGroup::cyclic(0));
    }

    #[test]
    fn relations_vanish_under_embedding() {
        let k4 = Group::Abelian(AbelianGroup::new(0, vec![2, 2]).unwrap());
        for kind in [ProductKind::Associative, ProductKind::Lie, ProductKind::Jordan] {
            let g = Grading::elementary_from_eta(4, k4.clone(), &[el(&[1, 0]), el(&[0, 1]), el(&[1, 1])], kind).unwrap();
            let u = universal_abelian::<Gf5>(&g, kind).unwrap();
            for r in &u.relations {
                assert!(u.map().apply(r) == u.normal_form.identity());
            }
        }
        let mt = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(2), &[el(&[1]), el(&[0]), el(&[1])], ProductKind::Jordan, &FieldDescriptor::Prime { p: 5 }).unwrap();
        let u = universal_abelian::<Gf5>(&mt, ProductKind::Jordan).unwrap();
        assert!(u.relations.iter().all(|r| u.map().apply(r) == u.normal_form.identity()));
    }

    #[test]
    fn character_examples() {
        let z2 = AbelianGroup::cyclic(2);
        let chars = characters::<Gf3>(&z2).unwrap();
        assert_eq!(chars.iter().map(|c| c.images[0]).collect::<Vec<_>>(), vec![Gf3::new(1), Gf3::new(2)]);
        assert_eq!(characters::<Gf5>(&AbelianGroup::trivial()).unwrap(), vec![Character { images: vec![] }]);
        assert_eq!(characters::<Gf2>(&z2).unwrap().len(), 1);
        assert!(characters::<crate::scalars::Rational>(&z2).is_err());
    }

    #[test]
    fn character_count_matches_enumeration() {
        let groups = [
            AbelianGroup::trivial(),
            AbelianGroup::cyclic(2),
            AbelianGroup::cyclic(3),
            AbelianGroup::cyclic(0),
            AbelianGroup::new(0, vec![2, 2]).unwrap(),
            AbelianGroup::new(1, vec![2, 6]).unwrap(),
            AbelianGroup::new(2, vec![4]).unwrap(),
        ];
        for u in &groups {
            assert_eq!(characters::<Gf3>(u).unwrap().len() as u64, character_count(u, 3));
            assert_eq!(characters::<Gf5>(u).unwrap().len() as u64, character_count(u, 5));
            assert_eq!(characters::<Gf7>(u).unwrap().len() as u64, character_count(u, 7));
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        let u = AbelianGroup::new(1, vec![2, 6]).unwrap();
        let samples: Vec<GroupElement> = (-2..3).flat_map(|a| (0..2).flat_map(move |b| (0..6).map(move |c| el(&[a, b, c])))).collect();
        for chi in characters::<Gf7>(&u).unwrap() {
            assert!(chi.evaluate(&u.identity()).is_one());
            for x in samples.iter().step_by(7) {
                for y in samples.iter().step_by(5) {
                    let xy = u.mul(x, y).unwrap();
                    assert_eq!(chi.evaluate(&xy), chi.evaluate(x) * chi.evaluate(y));
                }
            }
        }
    }

    #[test]
    fn diagonal_examples() {
        let gg = Grading::elementary_from_eta(3, z2(), &[el(&[1]), el(&[1])], ProductKind::Associative).unwrap();
        let u = universal_abelian::<Gf3>(&gg, ProductKind::Associative).unwrap();
        let chars = characters::<Gf3>(&u.normal_form).unwrap();
        let seq = [el(&[0]), el(&[1]), el(&[0])];
        assert_eq!(diagonal_from_character(&chars[0], &seq, gg.group(), &u).unwrap(), TriMatrix::identity(3));
        let nontrivial = chars.iter().find(|c| !c.is_trivial()).unwrap();
        let d = diagonal_from_character(nontrivial, &seq, gg.group(), &u).unwrap();
        assert_eq!(d, TriMatrix::diagonal(&[Gf3::new(1), Gf3::new(2), Gf3::new(1)]));
        assert_eq!(character_diagonal(nontrivial, &gg, &u).unwrap(), d);

        let z4 = Group::Abelian(AbelianGroup::cyclic(4));
        let g = Grading::elementary_from_eta(2, z4.clone(), &[el(&[2])], ProductKind::Associative).unwrap();
        let u = universal_abelian::<Gf3>(&g, ProductKind::Associative).unwrap();
        let chi = Character::trivial(&u.normal_form);
        assert_eq!(diagonal_from_character::<Gf3>(&chi, &[el(&[1])], &z4, &u), Err(UniversalError::NotEvaluable(el(&[1]))));
    }

    #[test]
    fn mt_character_diagonals_fix_components() {
        let mt = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(2), &[el(&[1]), el(&[0]), el(&[1])], ProductKind::Jordan, &FieldDescriptor::Prime { p: 5 }).unwrap();
        let ind = mt.induced_elementary().unwrap().unwrap();
        let u = universal_abelian::<Gf5>(&ind, ProductKind::Jordan).unwrap();
        for chi in characters::<Gf5>(&u.normal_form).unwrap() {
            let a = character_diagonal(&chi, &ind, &u).unwrap();
            assert!(matches!(omega_compatibility(&a).unwrap(), OmegaCompatibility::Commuting(_)));
            let f = LinearMap::inner(&a).unwrap();
            assert!(f.is_graded(&mt));
            assert!(f.as_diagonal(&mt).unwrap().is_some());
        }
    }
}
