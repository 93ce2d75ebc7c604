//! Linear endomorphisms of `UT_n`: inner maps, the Lie translations `psi_s`,
//! the flip `t` and `omega`, and the graded predicates built on them.
//!
//! A map is stored as the images of the matrix units in packed order, so
//! every predicate is exact linear algebra over the field.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gradings::Grading;
use crate::groups::GroupElement;
use crate::scalars::Field;
use crate::triangular::{dim, unit_index, unit_position, ProductKind, TriMatrix, TriangularError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Triangular(#[from] TriangularError),
    #[error("s is not in S: a_1 + ... + a_n + 1 = {sum} is zero")]
    NotInS { sum: String },
    #[error("psi_s is defined for the Lie product only")]
    PsiRequiresLie,
    #[error("t(A) is neither A nor -A")]
    NotSymmetricOrSkew,
    #[error("involutions need characteristic different from 2")]
    CharacteristicTwo,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("component of degree 1 is scaled by {0}, not 1")]
    IdentityComponentScaled(String),
}

/// How a map was built. Kept for reports; never consulted by predicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    Identity,
    Inner { a: Vec<String> },
    Psi { s: Vec<String> },
    FlipT,
    Omega,
    Composite { outer: Box<Provenance>, inner: Box<Provenance> },
    Raw,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "id"),
            Provenance::Inner { a } => write!(f, "phi[{}]", a.join(",")),
            Provenance::Psi { s } => write!(f, "psi[{}]", s.join(",")),
            Provenance::FlipT => write!(f, "t"),
            Provenance::Omega => write!(f, "omega"),
            Provenance::Composite { outer, inner } => write!(f, "{outer}*{inner}"),
            Provenance::Raw => write!(f, "raw"),
        }
    }
}

#[derive(Clone)]
pub struct LinearMap<F> {
    n: usize,
    /// Image of each matrix unit, packed.
    cols: Vec<Vec<F>>,
    provenance: Provenance,
}

impl<F: Field> PartialEq for LinearMap<F> {
    /// Equality of maps; provenance is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cols == other.cols
    }
}

impl<F: Field> Eq for LinearMap<F> {}

impl<F: Field> std::hash::Hash for LinearMap<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.cols.hash(state);
    }
}

impl<F: Field> fmt::Debug for LinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap({}, n={})", self.provenance, self.n)
    }
}

/// Result of testing `a` against `omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaCompatibility<F> {
    /// `a omega(a) = omega(a) a = -k`
    Commuting(F),
    /// `omega(a) a = -a omega(a) = -k`
    Anticommuting(F),
    Neither,
}

impl<F: Field> LinearMap<F> {
    pub fn from_unit_images(n: usize, mut image: impl FnMut(usize, usize) -> TriMatrix<F>, provenance: Provenance) -> Self {
        let cols = (0..dim(n))
            .map(|k| {
                let (i, j) = unit_position(n, k);
                image(i, j).into_packed()
            })
            .collect();
        LinearMap { n, cols, provenance }
    }

    /// From explicit packed columns.
    pub fn raw(n: usize, cols: Vec<Vec<F>>) -> Self {
        assert_eq!(cols.len(), dim(n));
        assert!(cols.iter().all(|c| c.len() == dim(n)));
        LinearMap { n, cols, provenance: Provenance::Raw }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_unit_images(n, |i, j| TriMatrix::unit(n, i, j), Provenance::Identity)
    }

    /// `x -> a x a^{-1}`, column by column from the entries of `a` and `a^{-1}`.
    pub fn inner(a: &TriMatrix<F>) -> Result<Self, MorphismError> {
        let b = a.inverse()?;
        let n = a.n();
        // a e_ij a^{-1} = sum_{l <= i, m >= j} a_li b_jm e_lm
        let map = Self::from_unit_images(
            n,
            |i, j| {
                TriMatrix::from_fn(n, |l, m| {
                    if l <= i && m >= j {
                        a.get(l, i).clone() * b.get(j, m).clone()
                    } else {
                        F::zero()
                    }
                })
            },
            Provenance::Inner { a: a.to_literal() },
        );
        Ok(map)
    }

    /// `e_ij -> e_ij + delta_ij a_i 1`, an automorphism of the Lie algebra.
    pub fn psi(s: &[F], kind: ProductKind) -> Result<Self, MorphismError> {
        if kind != ProductKind::Lie {
            return Err(MorphismError::PsiRequiresLie);
        }
        let sum = s.iter().fold(F::one(), |acc, x| acc + x.clone());
        if sum.is_zero() {
            let shown = s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ");
            return Err(MorphismError::NotInS { sum: format!("{shown} + 1") });
        }
        let n = s.len();
        Ok(Self::from_unit_images(
            n,
            |i, j| {
                let e = TriMatrix::unit(n, i, j);
                if i == j {
                    e.add(&TriMatrix::scalar(n, s[i].clone())).expect("same size")
                } else {
                    e
                }
            },
            Provenance::Psi { s: s.iter().map(ToString::to_string).collect() },
        ))
    }

    pub fn flip_t(n: usize) -> Self {
        Self::from_unit_images(n, |i, j| TriMatrix::<F>::unit(n, i, j).flip_t(), Provenance::FlipT)
    }

    pub fn omega(n: usize) -> Self {
        Self::from_unit_images(n, |i, j| TriMatrix::<F>::unit(n, i, j).omega(), Provenance::Omega)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn columns(&self) -> &[Vec<F>] {
        &self.cols
    }

    pub fn apply(&self, x: &TriMatrix<F>) -> TriMatrix<F> {
        assert_eq!(x.n(), self.n, "size mismatch");
        TriMatrix::from_packed(self.n, self.apply_packed(x.packed()))
    }

    pub fn apply_packed(&self, x: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); x.len()];
        for (c, col) in x.iter().zip(&self.cols) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(col) {
                if !v.is_zero() {
                    *o = o.clone() + c.clone() * v.clone();
                }
            }
        }
        out
    }

    pub fn unit_image(&self, i: usize, j: usize) -> TriMatrix<F> {
        TriMatrix::from_packed(self.n, self.cols[unit_index(self.n, i, j)].clone())
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self, MorphismError> {
        if self.n != other.n {
            return Err(MorphismError::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(LinearMap {
            n: self.n,
            cols: other.cols.iter().map(|c| self.apply_packed(c)).collect(),
            provenance: Provenance::Composite { outer: Box::new(self.provenance.clone()), inner: Box::new(other.provenance.clone()) },
        })
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(k, c)| c.iter().enumerate().all(|(r, v)| if r == k { v.is_one() } else { v.is_zero() }))
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<F>> = self.cols.clone();
        let d = rows.len();
        let mut rank = 0;
        for col in 0..d {
            let Some(p) = (rank..d).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(rank, p);
            let inv = rows[rank][col].inverse().expect("nonzero pivot");
            let pivot: Vec<F> = rows[rank].iter().map(|v| v.clone() * inv.clone()).collect();
            for r in rank + 1..d {
                let f = rows[r][col].clone();
                if f.is_zero() {
                    continue;
                }
                for (v, p) in rows[r].iter_mut().zip(&pivot) {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_bijective(&self) -> bool {
        self.rank() == dim(self.n)
    }

    /// Bijective and multiplicative on all pairs of matrix units.
    pub fn is_automorphism(&self, kind: ProductKind) -> bool {
        self.is_bijective() && self.preserves_product(kind, false)
    }

    /// `f(xy) = f(x)f(y)` (or `f(y)f(x)` when `reversed`) on unit pairs.
    fn preserves_product(&self, kind: ProductKind, reversed: bool) -> bool {
        let n = self.n;
        let images: Vec<TriMatrix<F>> = self.cols.iter().map(|c| TriMatrix::from_packed(n, c.clone())).collect();
        for k in 0..dim(n) {
            let (i, j) = unit_position(n, k);
            let x = TriMatrix::<F>::unit(n, i, j);
            for l in 0..dim(n) {
                let (p, q) = unit_position(n, l);
                let y = TriMatrix::unit(n, p, q);
                let lhs = self.apply(&x.product(&y, kind));
                let rhs = if reversed { images[l].product(&images[k], kind) } else { images[k].product(&images[l], kind) };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `f(A_g) ⊆ A_g` for every component.
    pub fn is_graded(&self, grading: &Grading) -> bool {
        let cm = grading.coordinate_map::<F>();
        let degrees = grading.degrees();
        (0..degrees.len()).all(|k| {
            let image = self.apply(&grading.basis_matrix(k));
            cm.coordinates(&image).iter().zip(degrees).all(|(c, g)| c.is_zero() || *g == degrees[k])
        })
    }

    /// The permutation `alpha` of the support with `f(A_g) = A_{alpha(g)}`,
    /// as indices into `grading.support()`.
    pub fn as_self_equivalence(&self, grading: &Grading) -> Option<Vec<usize>> {
        let support = grading.support();
        let index = |g: &GroupElement| support.binary_search(g).expect("degree lies in the support");
        let cm = grading.coordinate_map::<F>();
        let degrees = grading.degrees();
        let mut alpha: Vec<Option<usize>> = vec![None; support.len()];
        for k in 0..degrees.len() {
            let coords = cm.coordinates(&self.apply(&grading.basis_matrix(k)));
            let mut target = None;
            for (c, g) in coords.iter().zip(degrees) {
                if c.is_zero() {
                    continue;
                }
                match target {
                    None => target = Some(index(g)),
                    Some(t) if t == index(g) => {}
                    Some(_) => return None,
                }
            }
            let target = target?;
            let slot = &mut alpha[index(&degrees[k])];
            match slot {
                None => *slot = Some(target),
                Some(t) if *t == target => {}
                Some(_) => return None,
            }
        }
        let alpha: Vec<usize> = alpha.into_iter().collect::<Option<_>>()?;
        let mut seen = vec![false; alpha.len()];
        for &a in &alpha {
            if std::mem::replace(&mut seen[a], true) {
                return None;
            }
        }
        // dimensions must match for f(A_g) = A_{alpha(g)}
        let dims: Vec<usize> = support.iter().map(|g| grading.component(g).len()).collect();
        if alpha.iter().enumerate().any(|(g, &h)| dims[g] != dims[h]) {
            return None;
        }
        Some(alpha)
    }

    /// The scalars `lambda_g` when `f` acts on every component by a scalar.
    ///
    /// The component of degree 1 must be fixed; an automorphism scaling it
    /// by anything else is reported as an error.
    pub fn as_diagonal(&self, grading: &Grading) -> Result<Option<BTreeMap<GroupElement, F>>, MorphismError> {
        let mut out: BTreeMap<GroupElement, F> = BTreeMap::new();
        for (k, g) in grading.degrees().iter().enumerate() {
            let b = grading.basis_matrix::<F>(k);
            let image = self.apply(&b);
            let Some(lambda) = scalar_ratio(&image, &b) else { return Ok(None) };
            match out.get(g) {
                None => {
                    out.insert(g.clone(), lambda);
                }
                Some(l) if *l == lambda => {}
                Some(_) => return Ok(None),
            }
        }
        if let Some(l) = out.get(&grading.group().identity()) {
            if !l.is_one() {
                return Err(MorphismError::IdentityComponentScaled(l.to_string()));
            }
        }
        Ok(Some(out))
    }

    /// `f ∘ f = id` and `f(xy) = f(y) f(x)`.
    pub fn is_involution(&self) -> bool {
        self.compose(self).is_ok_and(|ff| ff.is_identity()) && self.preserves_product(ProductKind::Associative, true)
    }

    pub fn is_graded_involution(&self, grading: &Grading) -> bool {
        self.is_involution() && self.is_graded(grading)
    }
}

/// `lambda` with `image = lambda * b`, if it exists and is nonzero.
fn scalar_ratio<F: Field>(image: &TriMatrix<F>, b: &TriMatrix<F>) -> Option<F> {
    let (k, pivot) = b.packed().iter().enumerate().find(|(_, v)| !v.is_zero())?;
    let lambda = image.packed()[k].clone() * pivot.inverse().ok()?;
    if lambda.is_zero() || b.scale(&lambda) != *image {
        return None;
    }
    Some(lambda)
}

/// `x -> A t(x) A^{-1}` for invertible `A` with `t(A) = ±A`.
pub fn make_involution<F: Field>(a: &TriMatrix<F>) -> Result<LinearMap<F>, MorphismError> {
    if F::descriptor().is_char_two() {
        return Err(MorphismError::CharacteristicTwo);
    }
    let ta = a.flip_t();
    if ta != *a && ta != a.neg() {
        return Err(MorphismError::NotSymmetricOrSkew);
    }
    LinearMap::inner(a)?.compose(&LinearMap::flip_t(a.n()))
}

pub fn omega_compatibility<F: Field>(a: &TriMatrix<F>) -> Result<OmegaCompatibility<F>, MorphismError> {
    if !a.is_invertible() {
        return Err(a.inverse().unwrap_err().into());
    }
    let w = a.omega();
    let p = a.matmul(&w);
    let q = w.matmul(a);
    let n = a.n();
    let minus_k = |m: &TriMatrix<F>| -> Option<F> {
        let k = -m.get(0, 0).clone();
        (!k.is_zero() && *m == TriMatrix::scalar(n, -k.clone())).then_some(k)
    };
    if p == q {
        if let Some(k) = minus_k(&p) {
            return Ok(OmegaCompatibility::Commuting(k));
        }
    }
    if q == p.neg() {
        if let Some(k) = minus_k(&q) {
            return Ok(OmegaCompatibility::Anticommuting(k));
        }
    }
    Ok(OmegaCompatibility::Neither)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{AbelianGroup, Group};
    use crate::scalars::{Gf2, Gf3, Gf5};
    use num_traits::One;
    use proptest::prelude::*;

    fn lit<F: Field>(n: usize, v: &[&str]) -> TriMatrix<F> {
        TriMatrix::from_literal(n, v).unwrap()
    }

    fn el(c: &[i64]) -> GroupElement {
        GroupElement(c.to_vec())
    }

    fn gg3() -> Grading {
        Grading::elementary_from_eta(3, Group::Abelian(AbelianGroup::cyclic(2)), &[el(&[1]), el(&[1])], ProductKind::Associative).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert!(LinearMap::inner(&TriMatrix::<Gf3>::identity(3)).unwrap().is_identity());
        let a = lit::<Gf3>(2, &["1", "1", "1"]);
        let f = LinearMap::inner(&a).unwrap();
        assert_eq!(f.unit_image(0, 0), lit(2, &["1", "2", "0"]));
        let scaled = TriMatrix::<Gf3>::scalar(3, Gf3::new(2));
        assert!(LinearMap::inner(&scaled).unwrap().is_identity());
        assert!(LinearMap::inner(&lit::<Gf3>(2, &["1", "1", "0"])).is_err());
    }

    #[test]
    fn psi_examples() {
        let z = [Gf3::new(0), Gf3::new(0)];
        assert!(LinearMap::psi(&z, ProductKind::Lie).unwrap().is_identity());
        assert!(matches!(LinearMap::psi(&[Gf3::new(1), Gf3::new(1)], ProductKind::Lie), Err(MorphismError::NotInS { .. })));
        assert_eq!(LinearMap::psi(&z, ProductKind::Jordan), Err(MorphismError::PsiRequiresLie));
        let f = LinearMap::psi(&[Gf3::new(1), Gf3::new(0)], ProductKind::Lie).unwrap();
        let e11 = TriMatrix::<Gf3>::unit(2, 0, 0);
        let e12 = TriMatrix::<Gf3>::unit(2, 0, 1);
        assert_eq!(f.apply(&e11), e11.add(&TriMatrix::identity(2)).unwrap());
        let lhs = f.apply(&e11).product(&f.apply(&e12), ProductKind::Lie);
        assert_eq!(lhs, f.apply(&e11.product(&e12, ProductKind::Lie)));
        assert!(f.is_automorphism(ProductKind::Lie));
    }

    #[test]
    fn automorphism_examples() {
        for n in 1..=4 {
            assert!(LinearMap::<Gf3>::flip_t(n).is_automorphism(ProductKind::Jordan));
            assert!(LinearMap::<Gf3>::omega(n).is_automorphism(ProductKind::Lie));
            assert_eq!(LinearMap::<Gf3>::flip_t(n).is_automorphism(ProductKind::Associative), n == 1);
        }
    }

    #[test]
    fn graded_examples() {
        let g = gg3();
        assert!(LinearMap::<Gf3>::identity(3).is_graded(&g));
        let d = TriMatrix::diagonal(&[Gf3::new(1), Gf3::new(2), Gf3::new(1)]);
        assert!(LinearMap::inner(&d).unwrap().is_graded(&g));
        let homogeneous = lit::<Gf3>(3, &["1", "0", "2", "1", "0", "2"]);
        assert!(LinearMap::inner(&homogeneous).unwrap().is_graded(&g));
        let a = TriMatrix::<Gf3>::identity(3).add(&TriMatrix::unit(3, 0, 1)).unwrap();
        let f = LinearMap::inner(&a).unwrap();
        assert_eq!(f.unit_image(0, 0), lit(3, &["1", "2", "0", "0", "0", "0"]));
        assert!(!f.is_graded(&g));
    }

    #[test]
    fn self_equivalence_examples() {
        let g = gg3();
        let id: Vec<usize> = (0..g.support().len()).collect();
        assert_eq!(LinearMap::<Gf3>::identity(3).as_self_equivalence(&g), Some(id));

        let k4 = Group::Abelian(AbelianGroup::new(0, vec![2, 2]).unwrap());
        let jg = Grading::elementary_from_eta(3, k4, &[el(&[1, 0]), el(&[0, 1])], ProductKind::Jordan).unwrap();
        let supp = jg.support();
        let alpha = LinearMap::<Gf3>::flip_t(3).as_self_equivalence(&jg).unwrap();
        let pos = |x: &[i64]| supp.iter().position(|s| s.0 == x).unwrap();
        assert_eq!(alpha[pos(&[1, 0])], pos(&[0, 1]));
        assert_eq!(alpha[pos(&[0, 1])], pos(&[1, 0]));
        assert_eq!(alpha[pos(&[0, 0])], pos(&[0, 0]));

        let a = TriMatrix::<Gf3>::identity(3).add(&TriMatrix::unit(3, 0, 1)).unwrap();
        assert_eq!(LinearMap::inner(&a).unwrap().as_self_equivalence(&g), None);
    }

    #[test]
    fn diagonal_examples() {
        let g = gg3();
        let all_one = LinearMap::<Gf3>::identity(3).as_diagonal(&g).unwrap().unwrap();
        assert!(all_one.values().all(|l| l.is_one()));
        let d = TriMatrix::diagonal(&[Gf3::new(1), Gf3::new(2), Gf3::new(1)]);
        let l = LinearMap::inner(&d).unwrap().as_diagonal(&g).unwrap().unwrap();
        assert_eq!(l[&el(&[0])], Gf3::new(1));
        assert_eq!(l[&el(&[1])], Gf3::new(2));
        let homogeneous = lit::<Gf3>(3, &["1", "0", "2", "1", "0", "2"]);
        let f = LinearMap::inner(&homogeneous).unwrap();
        assert!(f.is_graded(&g));
        assert_eq!(f.as_diagonal(&g).unwrap(), None);
    }

    #[test]
    fn involution_examples() {
        let t = make_involution(&TriMatrix::<Gf3>::identity(3)).unwrap();
        assert_eq!(t, LinearMap::flip_t(3));
        assert!(t.is_involution());

        let d = TriMatrix::diagonal(&[Gf5::new(1), Gf5::new(1), Gf5::new(-1), Gf5::new(-1)]);
        let s = make_involution(&d).unwrap();
        assert!(s.is_involution());
        let e14 = TriMatrix::<Gf5>::unit(4, 0, 3);
        assert_eq!(s.apply(&e14), e14.neg());

        let a = lit::<Gf3>(2, &["1", "1", "1"]);
        let f = make_involution(&a).unwrap();
        assert!(f.is_involution());
        let trivial = Grading::elementary_from_eta(2, Group::Abelian(AbelianGroup::cyclic(2)), &[el(&[0])], ProductKind::Associative).unwrap();
        let nontrivial = Grading::elementary_from_eta(2, Group::Abelian(AbelianGroup::cyclic(2)), &[el(&[1])], ProductKind::Associative).unwrap();
        assert!(f.is_graded_involution(&trivial));
        assert!(!f.is_graded_involution(&nontrivial));

        assert_eq!(make_involution(&lit::<Gf3>(2, &["1", "1", "2"])), Err(MorphismError::NotSymmetricOrSkew));
        assert_eq!(make_involution(&TriMatrix::<Gf2>::identity(2)), Err(MorphismError::CharacteristicTwo));
    }

    #[test]
    fn omega_compatibility_examples() {
        let d = TriMatrix::diagonal(&[Gf3::new(2), Gf3::new(2)]);
        assert_eq!(omega_compatibility(&d).unwrap(), OmegaCompatibility::Commuting(Gf3::new(1)));
        assert_eq!(omega_compatibility(&TriMatrix::<Gf3>::identity(4)).unwrap(), OmegaCompatibility::Commuting(Gf3::new(1)));
        assert_eq!(omega_compatibility(&lit::<Gf3>(2, &["1", "1", "1"])).unwrap(), OmegaCompatibility::Neither);
        assert!(omega_compatibility(&lit::<Gf3>(2, &["1", "1", "0"])).is_err());
    }

    fn invertible<F: Field>(n: usize, values: Vec<i64>) -> TriMatrix<F> {
        let mut m = TriMatrix::from_packed(n, values.into_iter().map(F::from_i64).collect());
        for i in 0..n {
            if m.get(i, i).is_zero() {
                m.set(i, i, F::one());
            }
        }
        m
    }

    fn inv5() -> impl Strategy<Value = TriMatrix<Gf5>> {
        (1usize..=5).prop_flat_map(|n| proptest::collection::vec(0i64..5, dim(n)).prop_map(move |v| invertible(n, v)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn inner_matches_triple_product(a in inv5()) {
            let f = LinearMap::inner(&a).unwrap();
            let b = a.inverse().unwrap();
            let n = a.n();
            for k in 0..dim(n) {
                let (i, j) = unit_position(n, k);
                prop_assert_eq!(f.unit_image(i, j), a.matmul(&TriMatrix::unit(n, i, j)).matmul(&b));
            }
        }

        #[test]
        fn psi_commutes_with_inner(a in inv5(), raw in proptest::collection::vec(0i64..5, 5)) {
            let n = a.n();
            let s: Vec<Gf5> = raw[..n].iter().map(|&v| Gf5::new(v)).collect();
            if let Ok(psi) = LinearMap::psi(&s, ProductKind::Lie) {
                let phi = LinearMap::inner(&a).unwrap();
                prop_assert_eq!(psi.compose(&phi).unwrap(), phi.compose(&psi).unwrap());
            }
        }

        #[test]
        fn commuting_iff_phi_commutes_with_omega(a in inv5()) {
            let n = a.n();
            let phi = LinearMap::inner(&a).unwrap();
            let w = LinearMap::omega(n);
            let commutes = phi.compose(&w).unwrap() == w.compose(&phi).unwrap();
            let compat = omega_compatibility(&a).unwrap();
            prop_assert_eq!(matches!(compat, OmegaCompatibility::Commuting(_)), commutes);
            if let OmegaCompatibility::Anticommuting(_) = compat {
                let minus = w.compose(&phi).unwrap();
                let neg = LinearMap::raw(n, minus.columns().iter().map(|c| c.iter().map(|v| -*v).collect()).collect());
                prop_assert_eq!(phi.compose(&w).unwrap(), neg);
            }
        }

        #[test]
        fn inner_maps_respect_radical_filtration(a in inv5(), seed in any::<u64>()) {
            let n = a.n();
            let f = LinearMap::inner(&a).unwrap();
            for m in 0..n {
                for i in 0..n - m {
                    // e_{i:m} plus some element of J^{m+1}
                    let x = TriMatrix::<Gf5>::from_fn(n, |p, q| {
                        if (p, q) == (i, i + m) {
                            Gf5::new(1)
                        } else if q > p + m {
                            Gf5::new((seed >> ((p * n + q) % 61)) as i64 & 3)
                        } else {
                            Gf5::new(0)
                        }
                    });
                    let y = f.apply(&x);
                    let lead = *y.get(i, i + m);
                    let rest = y.sub(&TriMatrix::unit(n, i, i + m).scale(&lead)).unwrap();
                    prop_assert!(rest.radical_degree() > m);
                }
            }
        }

        #[test]
        fn involutions_from_symmetric_or_skew(a in inv5(), skew in any::<bool>()) {
            let ta = a.flip_t();
            let cand = if skew { a.sub(&ta).unwrap() } else { a.add(&ta).unwrap() };
            if cand.is_invertible() {
                prop_assert!(make_involution(&cand).unwrap().is_involution());
            }
        }
    }

    fn all_invertible<F: Field>(n: usize) -> Vec<TriMatrix<F>> {
        let elems = F::elements().unwrap();
        let units: Vec<F> = elems.iter().filter(|x| !x.is_zero()).cloned().collect();
        let mut out = vec![Vec::new()];
        for k in 0..dim(n) {
            let (i, j) = unit_position(n, k);
            let choices = if i == j { &units } else { &elems };
            out = out
                .into_iter()
                .flat_map(|p: Vec<F>| {
                    choices.iter().map(move |c| {
                        let mut v = p.clone();
                        v.push(c.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|v| TriMatrix::from_packed(n, v)).collect()
    }

    fn projective_kernel_check<F: Field>(n: usize) {
        let all = all_invertible::<F>(n);
        let maps: Vec<_> = all.iter().map(|a| LinearMap::inner(a).unwrap()).collect();
        let units: Vec<F> = F::elements().unwrap().into_iter().filter(|x| !x.is_zero()).collect();
        for (a, fa) in all.iter().zip(&maps) {
            for (b, fb) in all.iter().zip(&maps) {
                let proportional = units.iter().any(|l| b.scale(l) == *a);
                assert_eq!(fa == fb, proportional, "a={a:?} b={b:?}");
            }
        }
    }

    #[test]
    fn inner_maps_agree_exactly_on_scalar_multiples() {
        for n in 1..=3 {
            projective_kernel_check::<Gf2>(n);
            projective_kernel_check::<Gf3>(n);
        }
    }

    #[test]
    fn anticommuting_never_occurs_for_small_cases() {
        // diagonal entries of a omega(a) and omega(a) a agree, so -k = k
        for n in 1..=3 {
            for a in all_invertible::<Gf3>(n) {
                assert!(!matches!(omega_compatibility(&a).unwrap(), OmegaCompatibility::Anticommuting(_)));
            }
        }
    }
}
