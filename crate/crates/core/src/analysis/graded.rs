//! Stab, Weyl and Diag groups of a grading, from one exhaustive inner scan.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::gradings::{is_symmetric, Grading, GradingKind};
use crate::groups::{AbelianGroup, GroupElement};
use crate::morphisms::LinearMap;
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::{ProductKind, TriMatrix};
use crate::universal::{character_diagonal, characters, universal_abelian};

use super::omega::{all_sign_vectors, weyl_witness};
use super::scan::{par_scan, tuples, Classifier, InvertibleSpace};
use super::{AnalysisError, EnumerationBudget, Outer};

/// One invertible `a` that is interesting for some reason.
#[derive(Clone)]
pub struct InnerHit<F> {
    pub a: TriMatrix<F>,
    /// Support permutation of `phi_a`, when it is a self-equivalence.
    pub inner: Option<Vec<usize>>,
    /// Same for `outer ∘ phi_a`.
    pub outer: Option<Vec<usize>>,
    /// Support index of `a` when it is homogeneous.
    pub degree: Option<usize>,
    /// Same, for the induced elementary grading of an MT grading.
    pub induced_degree: Option<usize>,
}

#[derive(Clone)]
pub struct PsiScan<F> {
    pub tuples: u64,
    pub valid: u64,
    /// `s` with `psi_s` graded.
    pub graded: Vec<Vec<F>>,
    /// `s` with `psi_s` a self-equivalence, and its permutation.
    pub self_equivalences: Vec<(Vec<F>, Vec<usize>)>,
}

pub struct GradedGroups<F> {
    grading: Grading,
    classifier: Classifier<F>,
    induced: Option<(Grading, Classifier<F>)>,
    pub outer: Option<Outer>,
    pub candidates: u64,
    pub hits: Vec<InnerHit<F>>,
    pub psi: Option<PsiScan<F>>,
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

fn psi_image<F: Field>(s: &[F], x: &TriMatrix<F>) -> TriMatrix<F> {
    let n = x.n();
    let c = (0..n).fold(F::zero(), |acc, i| acc + x.get(i, i).clone() * s[i].clone());
    let mut y = x.clone();
    for i in 0..n {
        y.set(i, i, y.get(i, i).clone() + c.clone());
    }
    y
}

fn conjugate<F: Field>(a: &TriMatrix<F>, b: &TriMatrix<F>, x: &TriMatrix<F>) -> TriMatrix<F> {
    a.matmul(x).matmul(b)
}

impl<F: Field> GradedGroups<F> {
    pub fn compute(grading: &Grading, budget: &EnumerationBudget) -> Result<Self, AnalysisError> {
        let classifier = Classifier::<F>::new(grading);
        let induced = grading.induced_elementary()?.map(|g| {
            let c = Classifier::new(&g);
            (g, c)
        });
        let outer = Outer::for_product(grading.product());
        let space = InvertibleSpace::<F>::new(grading.n(), false, budget)?;
        let hits = par_scan(space.count, budget.parallel_chunks, |idx| {
            let a = space.decode(idx);
            let b = a.inverse().expect("diagonal entries are units");
            let inner = classifier.permutation(|x| conjugate(&a, &b, x));
            let outer_perm = outer.and_then(|o| classifier.permutation(|x| o.apply(&conjugate(&a, &b, x))));
            let degree = classifier.degree_of(&a);
            let induced_degree = induced.as_ref().and_then(|(_, c)| c.degree_of(&a));
            let keep = inner.is_some() || outer_perm.is_some() || degree.is_some() || induced_degree.is_some();
            keep.then_some(InnerHit { a, inner, outer: outer_perm, degree, induced_degree })
        });
        let psi = if grading.product() == ProductKind::Lie { Some(Self::scan_psi(&classifier, grading.n(), budget)?) } else { None };
        Ok(GradedGroups { grading: grading.clone(), classifier, induced, outer, candidates: space.count, hits, psi })
    }

    fn scan_psi(classifier: &Classifier<F>, n: usize, budget: &EnumerationBudget) -> Result<PsiScan<F>, AnalysisError> {
        let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
        let count = budget.admit((elems.len() as u128).pow(n as u32))?;
        let mut scan = PsiScan { tuples: count, valid: 0, graded: Vec::new(), self_equivalences: Vec::new() };
        for s in tuples(&elems, n) {
            if s.iter().fold(F::one(), |acc, x| acc + x.clone()).is_zero() {
                continue;
            }
            scan.valid += 1;
            if let Some(p) = classifier.permutation(|x| psi_image(&s, x)) {
                if is_identity(&p) {
                    scan.graded.push(s.clone());
                }
                scan.self_equivalences.push((s, p));
            }
        }
        Ok(scan)
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn classifier(&self) -> &Classifier<F> {
        &self.classifier
    }

    pub fn induced(&self) -> Option<&Grading> {
        self.induced.as_ref().map(|(g, _)| g)
    }

    pub fn is_mt(&self) -> bool {
        self.grading.kind() == GradingKind::Mt
    }

    /// Matrices `a` (all scalings) with `phi_a` graded.
    pub fn graded_inner(&self) -> impl Iterator<Item = &InnerHit<F>> {
        self.hits.iter().filter(|h| h.inner.as_deref().is_some_and(is_identity))
    }

    /// Projective representatives (`a_11 = 1`) with `phi_a` graded.
    pub fn inner_representatives(&self) -> Vec<TriMatrix<F>> {
        self.graded_inner().filter(|h| h.a.get(0, 0).is_one()).map(|h| h.a.clone()).collect()
    }

    pub fn outer_graded(&self) -> bool {
        self.outer.is_some_and(|o| self.classifier.is_graded(|x| o.apply(x)))
    }

    pub fn stab(&self) -> Result<Stab<F>, AnalysisError> {
        let n = self.grading.n();
        let inner = self.inner_representatives();
        let inner_maps: HashSet<LinearMap<F>> = inner.iter().map(LinearMap::inner).collect::<Result<_, _>>()?;
        let psi: Vec<Vec<F>> = self.psi.as_ref().map(|p| p.graded.clone()).unwrap_or_default();
        let psi_maps: Vec<LinearMap<F>> = psi.iter().map(|s| LinearMap::psi(s, ProductKind::Lie)).collect::<Result<_, _>>()?;
        let overlap = if psi_maps.is_empty() { 1 } else { psi_maps.iter().filter(|m| inner_maps.contains(m)).count() as u64 };
        if overlap == 0 {
            return Err(AnalysisError::Invariant("the identity is missing from the graded maps".into()));
        }
        let normal = inner.len() as u64 * (psi.len().max(1) as u64) / overlap;

        let outer_coset: Vec<TriMatrix<F>> = self
            .hits
            .iter()
            .filter(|h| h.a.get(0, 0).is_one() && h.outer.as_deref().is_some_and(is_identity))
            .map(|h| h.a.clone())
            .collect();
        let mut outer_in_normal = false;
        let mut outer_commutes = true;
        if let (Some(o), Some(a0)) = (self.outer, outer_coset.first()) {
            let f = o.map::<F>(n).compose(&LinearMap::inner(a0)?)?;
            outer_in_normal = if psi_maps.is_empty() {
                inner_maps.contains(&f)
            } else {
                psi_maps.iter().any(|p| p.compose(&f).is_ok_and(|m| inner_maps.contains(&m)))
            };
            let om = o.map::<F>(n);
            for m in inner_maps.iter().chain(&psi_maps) {
                if om.compose(m)? != m.compose(&om)? {
                    outer_commutes = false;
                    break;
                }
            }
        }
        let order = if !outer_coset.is_empty() && !outer_in_normal { 2 * normal } else { normal };

        let mut structure = format!("{}[{}]", if self.is_mt() { "H^G" } else { "H_1" }, inner.len());
        if psi.len() > 1 {
            structure = format!("{}[{}] x {structure}", if self.is_mt() { "G_S" } else { "G_1" }, psi.len());
            if overlap > 1 {
                structure = format!("({structure})/{overlap}");
            }
        }
        if let (Some(o), false, false) = (self.outer, outer_coset.is_empty(), outer_in_normal) {
            let sep = if outer_commutes { "x" } else { "x|" };
            structure = format!("<{}> {sep} ({structure})", o.name());
        }
        Ok(Stab {
            candidates: self.candidates,
            graded_matrices: self.graded_inner().count() as u64,
            inner,
            outer: self.outer,
            outer_graded: self.outer_graded(),
            outer_coset,
            outer_in_normal,
            outer_commutes,
            psi,
            psi_valid: self.psi.as_ref().map_or(0, |p| p.valid),
            overlap,
            order,
            structure,
        })
    }

    /// The permutation of an MT Weyl witness for every sign vector.
    pub fn witness_permutations(&self) -> Result<Vec<(Vec<i8>, Option<Vec<usize>>)>, AnalysisError> {
        if !self.is_mt() {
            return Ok(Vec::new());
        }
        let n = self.grading.n();
        all_sign_vectors(n / 2)
            .into_iter()
            .map(|eps| {
                let a = weyl_witness::<F>(n, &eps)?;
                let b = a.inverse()?;
                let p = self.classifier.permutation(|x| conjugate(&a, &b, x));
                Ok((eps, p))
            })
            .collect()
    }

    pub fn weyl(&self) -> Result<PermGroup, AnalysisError> {
        let mut gens: BTreeSet<Vec<usize>> = BTreeSet::new();
        for h in &self.hits {
            gens.extend(h.inner.iter().cloned());
            gens.extend(h.outer.iter().cloned());
        }
        if let Some(p) = &self.psi {
            gens.extend(p.self_equivalences.iter().map(|(_, q)| q.clone()));
        }
        for (_, p) in self.witness_permutations()? {
            gens.extend(p);
        }
        Ok(PermGroup::generate(self.classifier.support().len(), gens))
    }

    /// Diagonal maps from the exhaustive scan and from the characters of `U`.
    pub fn diag(&self, budget: &EnumerationBudget) -> Result<DiagGroup<F>, AnalysisError> {
        compute_diag(&self.grading, &self.classifier, self.induced(), budget)
    }
}

fn compute_diag<F: Field>(
    grading: &Grading,
    c: &Classifier<F>,
    induced: Option<&Grading>,
    budget: &EnumerationBudget,
) -> Result<DiagGroup<F>, AnalysisError> {
    let n = grading.n();
    let units = enumerate_units::<F>()?;
    let scanned = budget.admit((units.len() as u128).pow(n.saturating_sub(1) as u32))?;
    let outer = Outer::for_product(grading.product()).and_then(|o| c.lambdas(|x| o.apply(x)).map(|l| (o, l)));
    let with_outer = |d: DiagonalMap<F>, out: &mut Vec<DiagonalMap<F>>| -> Result<(), AnalysisError> {
        if let Some((o, lo)) = &outer {
            let map = o.map::<F>(n).compose(&d.map)?;
            let lambdas = lo.iter().zip(&d.lambdas).map(|(x, y)| x.clone() * y.clone()).collect();
            out.push(DiagonalMap { map, diagonal: d.diagonal.clone(), outer: true, lambdas });
        }
        out.push(d);
        Ok(())
    };

    let mut scan = Vec::new();
    for tail in tuples(&units, n.saturating_sub(1)) {
        let mut d = vec![F::one()];
        d.extend(tail);
        let a = TriMatrix::diagonal(&d);
        let b = a.inverse()?;
        if let Some(lambdas) = c.lambdas(|x| conjugate(&a, &b, x)) {
            with_outer(DiagonalMap { map: LinearMap::inner(&a)?, diagonal: d, outer: false, lambdas }, &mut scan)?;
        }
    }

    let source = induced.unwrap_or(grading);
    let u = universal_abelian::<F>(source, source.product())?;
    let chars = characters::<F>(&u.normal_form)?;
    let mut from_chars = Vec::new();
    let mut failures = Vec::new();
    for chi in &chars {
        let a = character_diagonal(chi, source, &u)?;
        let b = a.inverse()?;
        match c.lambdas(|x| conjugate(&a, &b, x)) {
            Some(lambdas) => {
                let diagonal = (0..n).map(|i| a.get(i, i).clone()).collect();
                with_outer(DiagonalMap { map: LinearMap::inner(&a)?, diagonal, outer: false, lambdas }, &mut from_chars)?;
            }
            None => failures.push(format!("character {:?} gives a non-diagonal map", chi.images)),
        }
    }
    let canon = |v: &mut Vec<DiagonalMap<F>>| {
        v.sort_by(|x, y| x.map.columns().cmp(y.map.columns()));
        v.dedup_by(|x, y| x.map == y.map);
    };
    canon(&mut scan);
    canon(&mut from_chars);
    let equal = failures.is_empty() && scan.len() == from_chars.len() && scan.iter().zip(&from_chars).all(|(x, y)| x.map == y.map);
    Ok(DiagGroup {
        support: c.support().to_vec(),
        scanned,
        scan,
        characters: from_chars,
        character_count: chars.len() as u64,
        universal: u.normal_form,
        outer: outer.map(|(o, _)| o),
        failures,
        equal,
    })
}

#[derive(Clone)]
pub struct Stab<F> {
    pub candidates: u64,
    /// Matrices `a`, all scalings counted, with `phi_a` graded.
    pub graded_matrices: u64,
    /// One `a` per graded inner automorphism, normalized by `a_11 = 1`.
    pub inner: Vec<TriMatrix<F>>,
    pub outer: Option<Outer>,
    pub outer_graded: bool,
    /// Normalized `a` with `outer ∘ phi_a` graded.
    pub outer_coset: Vec<TriMatrix<F>>,
    pub outer_in_normal: bool,
    pub outer_commutes: bool,
    pub psi: Vec<Vec<F>>,
    pub psi_valid: u64,
    /// Size of the intersection of the `psi` and inner parts.
    pub overlap: u64,
    pub order: u64,
    pub structure: String,
}

/// A permutation group on the support, listed in full.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub elements: Vec<Vec<usize>>,
}

impl PermGroup {
    pub fn generate(degree: usize, gens: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let generators: Vec<Vec<usize>> =
            gens.into_iter().filter(|g| !is_identity(g)).collect::<BTreeSet<_>>().into_iter().collect();
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        PermGroup { degree, generators, elements: seen.into_iter().collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `"1"`, `"Z_2^k"` for elementary abelian 2-groups, else `"order N"`.
    pub fn structure(&self) -> String {
        let n = self.order();
        if n == 1 {
            return "1".into();
        }
        let involutive = self.elements.iter().all(|x| x.iter().enumerate().all(|(i, &j)| x[j] == i));
        if involutive {
            let k = n.trailing_zeros();
            if k == 1 {
                "Z_2".into()
            } else {
                format!("Z_2^{k}")
            }
        } else {
            format!("order {n}")
        }
    }
}

#[derive(Clone)]
pub struct DiagonalMap<F> {
    pub map: LinearMap<F>,
    /// Diagonal of the conjugating matrix.
    pub diagonal: Vec<F>,
    /// Whether the outer automorphism is applied after the conjugation.
    pub outer: bool,
    /// Scalar on each component, by support index.
    pub lambdas: Vec<F>,
}

#[derive(Clone)]
pub struct DiagGroup<F> {
    pub support: Vec<GroupElement>,
    pub scanned: u64,
    pub scan: Vec<DiagonalMap<F>>,
    pub characters: Vec<DiagonalMap<F>>,
    pub character_count: u64,
    pub universal: AbelianGroup,
    pub outer: Option<Outer>,
    pub failures: Vec<String>,
    pub equal: bool,
}

pub fn enumerate_stab<F: Field>(grading: &Grading, budget: &EnumerationBudget) -> Result<Stab<F>, AnalysisError> {
    GradedGroups::<F>::compute(grading, budget)?.stab()
}

pub fn weyl_group<F: Field>(grading: &Grading, budget: &EnumerationBudget) -> Result<PermGroup, AnalysisError> {
    GradedGroups::<F>::compute(grading, budget)?.weyl()
}

pub fn diag_group<F: Field>(grading: &Grading, budget: &EnumerationBudget) -> Result<DiagGroup<F>, AnalysisError> {
    let induced = grading.induced_elementary()?;
    compute_diag(grading, &Classifier::new(grading), induced.as_ref(), budget)
}

/// Whether the elementary data of a grading is symmetric.
pub(crate) fn eta_symmetric(grading: &Grading) -> bool {
    grading.eta().is_some_and(is_symmetric)
}
