//! Elementary and MT gradings on `UT_n`.
//!
//! A grading is stored as a homogeneous basis: each basis vector is a small
//! integer combination of matrix units, tagged with its degree. Coordinates
//! with respect to the basis come from a precomputed dual basis over `Q`,
//! which is reduced into the working field on demand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{AbelianGroup, Group, GroupElement, GroupError};
use crate::scalars::{Field, FieldDescriptor};
use crate::triangular::{dim, unit_index, ProductKind, TriMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("sequence has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} product requires a commutative support")]
    NonCommutativeSupport(ProductKind),
    #[error("MT gradings require a symmetric sequence")]
    NotSymmetric,
    #[error("MT gradings require characteristic different from 2")]
    CharacteristicTwo,
    #[error("MT gradings are defined for the Lie and Jordan products only")]
    AssociativeMt,
    #[error("n must be at least 1")]
    EmptyAlgebra,
    #[error("the zero matrix has no degree")]
    ZeroMatrix,
    #[error("basis vectors do not form a basis of UT_n")]
    NotABasis,
    #[error("matrix of size {got} used with a grading on UT_{expected}")]
    SizeMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingKind {
    Elementary,
    Mt,
    /// Any other homogeneous basis, e.g. a variant differing only in the
    /// degree of the center.
    Custom,
}

/// A basis vector as an integer combination of matrix units (packed indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisVector {
    pub label: String,
    pub terms: Vec<(usize, i64)>,
}

impl BasisVector {
    pub fn to_matrix<F: Field>(&self, n: usize) -> TriMatrix<F> {
        let mut data = vec![F::zero(); dim(n)];
        for &(k, c) in &self.terms {
            data[k] = data[k].clone() + F::from_i64(c);
        }
        TriMatrix::from_packed(n, data)
    }
}

/// Configuration form of a grading: `{"kind":"elementary","eta":[[1],[0]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GradingSpec {
    Elementary { eta: Vec<GroupElement> },
    Mt { eta: Vec<GroupElement> },
}

pub fn rev<T: Clone>(eta: &[T]) -> Vec<T> {
    eta.iter().rev().cloned().collect()
}

pub fn is_symmetric<T: PartialEq>(eta: &[T]) -> bool {
    eta.iter().eq(eta.iter().rev())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    kind: GradingKind,
    product: ProductKind,
    group: Group,
    n: usize,
    basis: Vec<BasisVector>,
    degrees: Vec<GroupElement>,
    eta: Option<Vec<GroupElement>>,
    mt_distinguished: Option<GroupElement>,
    dual: Vec<Vec<(usize, BigRational)>>,
}

/// Dual basis reduced into a field, for repeated coordinate computations.
#[derive(Debug, Clone)]
pub struct CoordinateMap<F> {
    n: usize,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> CoordinateMap<F> {
    pub fn coordinates(&self, x: &TriMatrix<F>) -> Vec<F> {
        assert_eq!(x.n(), self.n, "size mismatch");
        let data = x.packed();
        self.rows
            .iter()
            .map(|row| row.iter().fold(F::zero(), |acc, (k, c)| acc + c.clone() * data[*k].clone()))
            .collect()
    }
}

fn unit_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("e{}{}", i + 1, j + 1)
    } else {
        format!("e{}_{}", i + 1, j + 1)
    }
}

impl Grading {
    pub fn elementary_from_eta(n: usize, group: Group, eta: &[GroupElement], product: ProductKind) -> Result<Self, GradingError> {
        if n == 0 {
            return Err(GradingError::EmptyAlgebra);
        }
        if eta.len() != n - 1 {
            return Err(GradingError::WrongLength { expected: n - 1, got: eta.len() });
        }
        for g in eta {
            if !group.contains(g) {
                return Err(GroupError::NotAMember { element: g.clone(), group: group.to_string() }.into());
            }
        }
        if product != ProductKind::Associative && !eta.is_empty() && !group.is_commutative_subset(eta)? {
            return Err(GradingError::NonCommutativeSupport(product));
        }
        let mut basis = Vec::with_capacity(dim(n));
        let mut degrees = Vec::with_capacity(dim(n));
        for i in 0..n {
            let mut deg = group.identity();
            for j in i..n {
                if j > i {
                    deg = group.mul(&deg, &eta[j - 1])?;
                }
                basis.push(BasisVector { label: unit_label(n, i, j), terms: vec![(unit_index(n, i, j), 1)] });
                degrees.push(deg.clone());
            }
        }
        Self::assemble(GradingKind::Elementary, product, group, n, basis, degrees, Some(eta.to_vec()), None)
    }

    /// The grading with `deg e_ij = a_i a_j^{-1}`.
    pub fn elementary_from_sequence(n: usize, group: Group, a: &[GroupElement], product: ProductKind) -> Result<Self, GradingError> {
        if n == 0 {
            return Err(GradingError::EmptyAlgebra);
        }
        if a.len() != n {
            return Err(GradingError::WrongLength { expected: n, got: a.len() });
        }
        if product != ProductKind::Associative && !group.is_commutative_subset(a)? {
            return Err(GradingError::NonCommutativeSupport(product));
        }
        let eta = a
            .windows(2)
            .map(|w| group.mul(&w[0], &group.inv(&w[1])?))
            .collect::<Result<Vec<_>, _>>()?;
        Self::elementary_from_eta(n, group, &eta, product)
    }

    /// MT grading over `Z_2 x H` from a symmetric elementary grading over `H`.
    ///
    /// The `Z_2` part is 0 on the fixed space of the graded automorphism
    /// (`t` for Jordan, `omega` for Lie) and 1 on its `-1` eigenspace, so
    /// `X^+` has parity 0 for Jordan and 1 for Lie. The distinguished element
    /// `(1, 1_H)` is the parity shift in both cases.
    ///
    /// Group coordinates are `(free part of H, epsilon, torsion of H)` when
    /// `Z_2 x H` is already in normal form; otherwise the normal form of
    /// `Z^r x Z_2 x Z_{d_1} x ...` is used.
    pub fn mt_from_symmetric(
        n: usize,
        h: &AbelianGroup,
        eta: &[GroupElement],
        product: ProductKind,
        field: &FieldDescriptor,
    ) -> Result<Self, GradingError> {
        if product == ProductKind::Associative {
            return Err(GradingError::AssociativeMt);
        }
        if field.is_char_two() {
            return Err(GradingError::CharacteristicTwo);
        }
        if !is_symmetric(eta) {
            return Err(GradingError::NotSymmetric);
        }
        let base = Self::elementary_from_eta(n, Group::Abelian(h.clone()), eta, product)?;
        let mut torsion = vec![2u64];
        torsion.extend_from_slice(h.invariant_factors());
        let r = h.free_rank;
        let (group, embed): (AbelianGroup, Box<dyn Fn(i64, &GroupElement) -> GroupElement>) = match AbelianGroup::new(r, torsion.clone()) {
            Ok(g) => (g, Box::new(move |eps, x| {
                let mut c = x.0[..r].to_vec();
                c.push(eps);
                c.extend_from_slice(&x.0[r..]);
                GroupElement(c)
            })),
            Err(_) => {
                let (g, map) = AbelianGroup::normalize(r, &torsion);
                (g, Box::new(move |eps, x| {
                    let mut c = x.0[..r].to_vec();
                    c.push(eps);
                    c.extend_from_slice(&x.0[r..]);
                    map.apply(&c)
                }))
            }
        };
        let group = Group::Abelian(group);
        // t is an anti-automorphism of the bracket, so for Lie the even part
        // is the skew-symmetric one (the fixed space of omega).
        let (plus, minus) = if product == ProductKind::Lie { (1, 0) } else { (0, 1) };

        let mut basis = Vec::with_capacity(dim(n));
        let mut degrees = Vec::with_capacity(dim(n));
        for m in 0..n {
            // pairs e_{i:m}, e_{-i:m} with 2i+m <= n+1 (1-based)
            for i in 1..=(n + 1 - m) / 2 {
                let p = unit_index(n, i - 1, i - 1 + m);
                let q = unit_index(n, n - i - m, n - i);
                let dh = &base.degrees[p];
                if p == q {
                    basis.push(BasisVector { label: format!("X+_{{{i}:{m}}}"), terms: vec![(p, 2)] });
                    degrees.push(embed(plus, dh));
                } else {
                    basis.push(BasisVector { label: format!("X+_{{{i}:{m}}}"), terms: vec![(p, 1), (q, 1)] });
                    degrees.push(embed(plus, dh));
                    basis.push(BasisVector { label: format!("X-_{{{i}:{m}}}"), terms: vec![(p, 1), (q, -1)] });
                    degrees.push(embed(minus, dh));
                }
            }
        }
        let distinguished = embed(1, &h.identity());
        Self::assemble(GradingKind::Mt, product, group, n, basis, degrees, Some(eta.to_vec()), Some(distinguished))
    }

    /// A grading from an explicit homogeneous basis.
    pub fn from_parts(
        n: usize,
        product: ProductKind,
        group: Group,
        basis: Vec<BasisVector>,
        degrees: Vec<GroupElement>,
    ) -> Result<Self, GradingError> {
        if degrees.len() != basis.len() {
            return Err(GradingError::WrongLength { expected: basis.len(), got: degrees.len() });
        }
        for g in &degrees {
            if !group.contains(g) {
                return Err(GroupError::NotAMember { element: g.clone(), group: group.to_string() }.into());
            }
        }
        Self::assemble(GradingKind::Custom, product, group, n, basis, degrees, None, None)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: GradingKind,
        product: ProductKind,
        group: Group,
        n: usize,
        basis: Vec<BasisVector>,
        degrees: Vec<GroupElement>,
        eta: Option<Vec<GroupElement>>,
        mt_distinguished: Option<GroupElement>,
    ) -> Result<Self, GradingError> {
        let dual = dual_basis(n, &basis).ok_or(GradingError::NotABasis)?;
        Ok(Grading { kind, product, group, n, basis, degrees, eta, mt_distinguished, dual })
    }

    /// Replaces one degree; used to build deliberately inconsistent gradings.
    pub fn with_degree(mut self, index: usize, degree: GroupElement) -> Self {
        self.degrees[index] = degree;
        self
    }

    pub fn kind(&self) -> GradingKind {
        self.kind
    }

    pub fn product(&self) -> ProductKind {
        self.product
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn eta(&self) -> Option<&[GroupElement]> {
        self.eta.as_deref()
    }

    pub fn mt_distinguished(&self) -> Option<&GroupElement> {
        self.mt_distinguished.as_ref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.eta.as_deref().is_some_and(is_symmetric)
    }

    /// Degree of `e_ij` for an elementary grading (0-based indices).
    pub fn unit_degree(&self, i: usize, j: usize) -> Option<&GroupElement> {
        (self.kind == GradingKind::Elementary).then(|| &self.degrees[unit_index(self.n, i, j)])
    }

    /// The sequence `a` with `a_1 = 1` and `deg e_ij = a_i a_j^{-1}`.
    pub fn sequence(&self) -> Option<Vec<GroupElement>> {
        let eta = self.eta.as_ref()?;
        if self.kind != GradingKind::Elementary {
            return None;
        }
        let mut a = vec![self.group.identity()];
        for g in eta {
            let prev = a.last().unwrap();
            a.push(self.group.mul(&self.group.inv(g).ok()?, prev).ok()?);
        }
        Some(a)
    }

    pub fn basis_matrix<F: Field>(&self, index: usize) -> TriMatrix<F> {
        self.basis[index].to_matrix(self.n)
    }

    pub fn coordinate_map<F: Field>(&self) -> CoordinateMap<F> {
        let conv = |q: &BigRational| {
            let num = F::from_i64(q.numer().to_i64().expect("dual coefficient fits i64"));
            let den = F::from_i64(q.denom().to_i64().expect("dual coefficient fits i64"));
            num.div(&den).expect("dual basis denominator is invertible in the field")
        };
        CoordinateMap {
            n: self.n,
            rows: self.dual.iter().map(|row| row.iter().map(|(k, q)| (*k, conv(q))).collect()).collect(),
        }
    }

    pub fn coordinates<F: Field>(&self, x: &TriMatrix<F>) -> Result<Vec<F>, GradingError> {
        self.check_size(x)?;
        Ok(self.coordinate_map().coordinates(x))
    }

    fn check_size<F: Field>(&self, x: &TriMatrix<F>) -> Result<(), GradingError> {
        if x.n() == self.n {
            Ok(())
        } else {
            Err(GradingError::SizeMismatch { expected: self.n, got: x.n() })
        }
    }

    /// The degree of `x` if it is homogeneous.
    pub fn homogeneous_degree<F: Field>(&self, x: &TriMatrix<F>) -> Result<Option<GroupElement>, GradingError> {
        self.check_size(x)?;
        if x.is_zero() {
            return Err(GradingError::ZeroMatrix);
        }
        Ok(self.degree_from_coordinates(&self.coordinate_map().coordinates(x)))
    }

    pub fn degree_from_coordinates<F: Field>(&self, coords: &[F]) -> Option<GroupElement> {
        let mut found: Option<&GroupElement> = None;
        for (c, g) in coords.iter().zip(&self.degrees) {
            if c.is_zero() {
                continue;
            }
            match found {
                None => found = Some(g),
                Some(h) if h == g => {}
                Some(_) => return None,
            }
        }
        found.cloned()
    }

    pub fn decompose<F: Field>(&self, x: &TriMatrix<F>) -> Result<BTreeMap<GroupElement, TriMatrix<F>>, GradingError> {
        let coords = self.coordinates(x)?;
        let mut out: BTreeMap<GroupElement, TriMatrix<F>> = BTreeMap::new();
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = self.basis_matrix::<F>(k).scale(c);
            let slot = out.entry(self.degrees[k].clone()).or_insert_with(|| TriMatrix::zeros(self.n));
            *slot = slot.add(&term).expect("same size");
        }
        Ok(out)
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.degrees.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Basis indices of the component of degree `g`.
    pub fn component(&self, g: &GroupElement) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| &self.degrees[k] == g).collect()
    }

    /// Checks `A_g * A_h ⊆ A_{gh}` on basis pairs.
    pub fn verify_axioms<F: Field>(&self, product: ProductKind) -> Result<AxiomCheck, GradingError> {
        let cm = self.coordinate_map::<F>();
        let mats: Vec<TriMatrix<F>> = (0..self.basis.len()).map(|k| self.basis_matrix(k)).collect();
        for (a, x) in mats.iter().enumerate() {
            for (b, y) in mats.iter().enumerate() {
                let z = x.product(y, product);
                if z.is_zero() {
                    continue;
                }
                let target = self.group.mul(&self.degrees[a], &self.degrees[b])?;
                let coords = cm.coordinates(&z);
                if coords.iter().zip(&self.degrees).any(|(c, g)| !c.is_zero() && *g != target) {
                    return Ok(AxiomCheck {
                        holds: false,
                        witness: Some((self.basis[a].label.clone(), self.basis[b].label.clone())),
                    });
                }
            }
        }
        Ok(AxiomCheck { holds: true, witness: None })
    }

    /// The elementary grading induced by `G -> G/<t>` on an MT grading,
    /// together with its quotient group.
    pub fn induced_elementary(&self) -> Result<Option<Grading>, GradingError> {
        let (Some(t), GradingKind::Mt) = (&self.mt_distinguished, self.kind) else {
            return Ok(None);
        };
        let g = self.group.as_abelian().ok_or(GroupError::NotAbelian)?;
        let (quot, map) = g.quotient_by(t)?;
        let n = self.n;
        let mut eta = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let p = unit_index(n, i, i + 1);
            let k = self
                .basis
                .iter()
                .position(|b| b.terms.iter().any(|&(q, _)| q == p))
                .expect("every unit occurs in the MT basis");
            eta.push(map.apply(&self.degrees[k].0));
        }
        Self::elementary_from_eta(n, Group::Abelian(quot), &eta, self.product).map(Some)
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} grading on UT_{} ({}) over {}", self.kind, self.n, self.product, self.group)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub holds: bool,
    /// Labels of a basis pair whose product leaves the expected component.
    pub witness: Option<(String, String)>,
}

/// Rows of the inverse of the basis matrix, sparse, over `Q`.
fn dual_basis(n: usize, basis: &[BasisVector]) -> Option<Vec<Vec<(usize, BigRational)>>> {
    let d = dim(n);
    if basis.len() != d {
        return None;
    }
    // columns of m are the basis vectors; augment with identity
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); 2 * d]; d];
    for (col, b) in basis.iter().enumerate() {
        for &(k, c) in &b.terms {
            if k >= d {
                return None;
            }
            m[k][col] += BigRational::from_integer(BigInt::from(c));
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        row[d + r] = BigRational::one();
    }
    for col in 0..d {
        let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = &*v - &f * p;
                }
            }
        }
    }
    Some(
        m.into_iter()
            .map(|row| row[d..].iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(k, q)| (k, q.clone())).collect())
            .collect(),
    )
}
