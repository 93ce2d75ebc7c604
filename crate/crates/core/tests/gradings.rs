mod common;

use proptest::prelude::*;

use common::{cyclic, el, elementary, klein};
use utgrade::gradings::{is_symmetric, rev, GradingError, GradingKind};
use utgrade::groups::{s3_table, AbelianGroup, CayleyGroup, Group, GroupElement};
use utgrade::scalars::{Field, FieldDescriptor, Gf3, Gf5};
use utgrade::triangular::{dim, unit_index, ProductKind, TriMatrix};
use utgrade::Grading;

const ASSOC: ProductKind = ProductKind::Associative;
const GF3: FieldDescriptor = FieldDescriptor::Prime { p: 3 };

#[test]
fn elementary_degrees() {
    let g = elementary(3, cyclic(2), &[&[1], &[1]], ASSOC);
    assert_eq!(g.unit_degree(0, 1), Some(&el(&[1])));
    assert_eq!(g.unit_degree(1, 2), Some(&el(&[1])));
    assert_eq!(g.unit_degree(0, 2), Some(&el(&[0])));
    assert!((0..3).all(|i| g.unit_degree(i, i) == Some(&el(&[0]))));
    assert_eq!(g.support(), vec![el(&[0]), el(&[1])]);
    assert_eq!(g.kind(), GradingKind::Elementary);

    let trivial = elementary(4, cyclic(2), &[&[0], &[0], &[0]], ASSOC);
    assert_eq!(trivial.support(), vec![el(&[0])]);

    let z = elementary(2, cyclic(0), &[&[1]], ASSOC);
    assert_eq!(z.support(), vec![el(&[0]), el(&[1])]);
}

#[test]
fn elementary_from_sequences() {
    let a = elementary(3, cyclic(2), &[&[1], &[1]], ASSOC);
    let b = Grading::elementary_from_sequence(3, cyclic(2), &[el(&[0]), el(&[1]), el(&[0])], ASSOC).unwrap();
    assert_eq!(a.degrees(), b.degrees());

    let z2 = Group::Abelian(AbelianGroup::new(2, vec![]).unwrap());
    let g = Grading::elementary_from_sequence(3, z2, &[el(&[0, 0]), el(&[1, 0]), el(&[1, 1])], ASSOC).unwrap();
    assert_eq!(g.unit_degree(0, 2), Some(&el(&[-1, -1])));
}

#[test]
fn non_commutative_support_is_rejected_for_lie_and_jordan() {
    let s3 = Group::Cayley(CayleyGroup::new(s3_table()).unwrap());
    assert!(Grading::elementary_from_eta(3, s3.clone(), &[el(&[1]), el(&[2])], ASSOC).is_ok());
    for kind in [ProductKind::Lie, ProductKind::Jordan] {
        assert_eq!(
            Grading::elementary_from_eta(3, s3.clone(), &[el(&[1]), el(&[2])], kind).unwrap_err(),
            GradingError::NonCommutativeSupport(kind)
        );
    }
    assert!(Grading::elementary_from_eta(3, s3, &[el(&[4]), el(&[5])], ProductKind::Lie).is_ok());
}

#[test]
fn reverse_and_symmetry() {
    assert_eq!(rev(&["g", "h"]), vec!["h", "g"]);
    assert!(!is_symmetric(&["g", "h"]));
    assert!(is_symmetric(&["g", "g"]));
    assert!(is_symmetric(&["g"]));
}

#[test]
fn mt_examples() {
    let h = AbelianGroup::trivial();
    let g = Grading::mt_from_symmetric(2, &h, &[el(&[])], ProductKind::Jordan, &GF3).unwrap();
    let labels: Vec<&str> = g.basis().iter().map(|b| b.label.as_str()).collect();
    assert_eq!(labels, vec!["X+_{1:0}", "X-_{1:0}", "X+_{1:1}"]);
    assert_eq!(g.degrees(), &[el(&[0]), el(&[1]), el(&[0])]);
    assert_eq!(g.mt_distinguished(), Some(&el(&[1])));

    let z2 = AbelianGroup::cyclic(2);
    let g = Grading::mt_from_symmetric(3, &z2, &[el(&[1]), el(&[1])], ProductKind::Jordan, &GF3).unwrap();
    let deg = |label: &str| g.degrees()[g.basis().iter().position(|b| b.label == label).unwrap()].clone();
    assert_eq!(deg("X+_{1:1}"), el(&[0, 1]));
    assert_eq!(deg("X-_{1:1}"), el(&[1, 1]));

    assert_eq!(
        Grading::mt_from_symmetric(3, &z2, &[el(&[1]), el(&[0])], ProductKind::Jordan, &GF3).unwrap_err(),
        GradingError::NotSymmetric
    );
    assert_eq!(
        Grading::mt_from_symmetric(2, &h, &[el(&[])], ProductKind::Jordan, &FieldDescriptor::Prime { p: 2 }).unwrap_err(),
        GradingError::CharacteristicTwo
    );
    assert_eq!(Grading::mt_from_symmetric(2, &h, &[el(&[])], ASSOC, &GF3).unwrap_err(), GradingError::AssociativeMt);
}

#[test]
fn homogeneous_degrees() {
    let g = elementary(3, cyclic(2), &[&[1], &[1]], ASSOC);
    let e = |i, j| TriMatrix::<Gf3>::unit(3, i, j);
    assert_eq!(g.homogeneous_degree(&e(0, 1)).unwrap(), Some(el(&[1])));
    assert_eq!(g.homogeneous_degree(&e(0, 0).add(&e(0, 2)).unwrap()).unwrap(), Some(el(&[0])));
    assert_eq!(g.homogeneous_degree(&e(0, 0).add(&e(0, 1)).unwrap()).unwrap(), None);
    assert_eq!(g.homogeneous_degree(&TriMatrix::<Gf3>::zeros(3)), Err(GradingError::ZeroMatrix));

    let mt = Grading::mt_from_symmetric(3, &AbelianGroup::trivial(), &[el(&[]), el(&[])], ProductKind::Jordan, &GF3).unwrap();
    assert_eq!(mt.homogeneous_degree(&e(0, 0)).unwrap(), None);
}

#[test]
fn decompositions() {
    let mt = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(2), &[el(&[1]), el(&[0]), el(&[1])], ProductKind::Jordan, &GF3).unwrap();
    let id = TriMatrix::<Gf3>::identity(4);
    let parts = mt.decompose(&id).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts.values().next().unwrap(), &id);
    assert_eq!(parts.keys().next().unwrap(), &el(&[0, 0]));

    let g = elementary(3, cyclic(2), &[&[1], &[1]], ASSOC);
    assert_eq!(g.support(), vec![el(&[0]), el(&[1])]);
    assert_eq!(elementary(3, cyclic(2), &[&[0], &[0]], ASSOC).support(), vec![el(&[0])]);
}

#[test]
fn axioms() {
    let g = elementary(3, cyclic(2), &[&[1], &[1]], ASSOC);
    assert!(g.verify_axioms::<Gf3>(ASSOC).unwrap().holds);
    let mt = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(3), &[el(&[1]), el(&[2]), el(&[1])], ProductKind::Jordan, &GF3).unwrap();
    assert!(mt.verify_axioms::<Gf3>(ProductKind::Jordan).unwrap().holds);
    let lie = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(3), &[el(&[1]), el(&[2]), el(&[1])], ProductKind::Lie, &GF3).unwrap();
    assert!(lie.verify_axioms::<Gf3>(ProductKind::Lie).unwrap().holds);

    let e12 = unit_index(3, 0, 1);
    let broken = g.with_degree(e12, el(&[0]));
    let check = broken.verify_axioms::<Gf3>(ASSOC).unwrap();
    assert!(!check.holds);
    assert_eq!(check.witness, Some(("e12".to_string(), "e23".to_string())));
}

#[test]
fn flip_respects_mt_components() {
    let h = AbelianGroup::cyclic(3);
    let mt = Grading::mt_from_symmetric(5, &h, &[el(&[1]), el(&[2]), el(&[2]), el(&[1])], ProductKind::Jordan, &FieldDescriptor::Prime { p: 5 }).unwrap();
    for (k, b) in mt.basis().iter().enumerate() {
        let x: TriMatrix<Gf5> = b.to_matrix(5);
        let deg = &mt.degrees()[k];
        let tx = x.flip_t();
        assert_eq!(mt.homogeneous_degree(&tx).unwrap().as_ref(), Some(deg));
        let sign = if b.label.starts_with("X+") { Gf5::new(1) } else { Gf5::new(-1) };
        assert_eq!(tx, x.scale(&sign), "{}", b.label);
    }
}

#[test]
fn serialized_spec() {
    let spec: utgrade::GradingSpec = serde_json::from_str(r#"{"kind":"elementary","eta":[[1],[1]]}"#).unwrap();
    assert_eq!(spec, utgrade::GradingSpec::Elementary { eta: vec![el(&[1]), el(&[1])] });
    let spec: utgrade::GradingSpec = serde_json::from_str(r#"{"kind":"mt","eta":[[1]]}"#).unwrap();
    assert_eq!(spec, utgrade::GradingSpec::Mt { eta: vec![el(&[1])] });
}

fn z4_elem() -> impl Strategy<Value = GroupElement> {
    (0i64..4).prop_map(|x| el(&[x]))
}

fn klein_elem() -> impl Strategy<Value = GroupElement> {
    (0i64..2, 0i64..2).prop_map(|(a, b)| el(&[a, b]))
}

fn random_matrix<F: Field>(n: usize, seed: &[i64]) -> TriMatrix<F> {
    TriMatrix::from_packed(n, (0..dim(n)).map(|k| F::from_i64(seed[k % seed.len()] * (k as i64 + 1))).collect())
}

proptest! {
    #[test]
    fn eta_and_sequence_agree(a in prop::collection::vec(z4_elem(), 1..6)) {
        let n = a.len();
        let g = cyclic(4);
        let from_seq = Grading::elementary_from_sequence(n, g.clone(), &a, ProductKind::Jordan).unwrap();
        let eta: Vec<GroupElement> = a.windows(2).map(|w| g.mul(&w[0], &g.inv(&w[1]).unwrap()).unwrap()).collect();
        let from_eta = Grading::elementary_from_eta(n, g, &eta, ProductKind::Jordan).unwrap();
        prop_assert_eq!(from_seq.degrees(), from_eta.degrees());
    }

    #[test]
    fn constructed_gradings_satisfy_axioms(eta in prop::collection::vec(klein_elem(), 0..5), kind in prop::sample::select(vec![ProductKind::Associative, ProductKind::Lie, ProductKind::Jordan])) {
        let n = eta.len() + 1;
        let g = Grading::elementary_from_eta(n, klein(), &eta, kind).unwrap();
        prop_assert!(g.verify_axioms::<Gf3>(kind).unwrap().holds);
    }

    #[test]
    fn mt_gradings_satisfy_axioms(half in prop::collection::vec(z4_elem(), 0..3), middle in prop::option::of(z4_elem()), lie in any::<bool>()) {
        let mut eta = half.clone();
        eta.extend(middle);
        eta.extend(half.iter().rev().cloned());
        let n = eta.len() + 1;
        let kind = if lie { ProductKind::Lie } else { ProductKind::Jordan };
        let g = Grading::mt_from_symmetric(n, &AbelianGroup::cyclic(4), &eta, kind, &FieldDescriptor::Prime { p: 5 }).unwrap();
        prop_assert_eq!(g.basis().len(), dim(n));
        prop_assert!(g.verify_axioms::<Gf5>(kind).unwrap().holds);
    }

    #[test]
    fn decomposition_sums_back(eta in prop::collection::vec(klein_elem(), 1..5), seed in prop::collection::vec(-3i64..4, 1..6)) {
        let n = eta.len() + 1;
        let g = Grading::elementary_from_eta(n, klein(), &eta, ProductKind::Associative).unwrap();
        let x: TriMatrix<Gf5> = random_matrix(n, &seed);
        let parts = g.decompose(&x).unwrap();
        let sum = parts.values().fold(TriMatrix::zeros(n), |acc, p| acc.add(p).unwrap());
        prop_assert_eq!(sum, x);
        for (deg, part) in &parts {
            prop_assert!(!part.is_zero());
            prop_assert_eq!(g.homogeneous_degree(part).unwrap(), Some(deg.clone()));
        }
    }

    #[test]
    fn mt_decomposition_sums_back(seed in prop::collection::vec(-3i64..4, 1..6)) {
        let g = Grading::mt_from_symmetric(4, &AbelianGroup::cyclic(2), &[el(&[1]), el(&[1]), el(&[1])], ProductKind::Lie, &FieldDescriptor::Prime { p: 3 }).unwrap();
        let x: TriMatrix<Gf3> = random_matrix(4, &seed);
        let sum = g.decompose(&x).unwrap().values().fold(TriMatrix::zeros(4), |acc, p| acc.add(p).unwrap());
        prop_assert_eq!(sum, x);
    }
}
