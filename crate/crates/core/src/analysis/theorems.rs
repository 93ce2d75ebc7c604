//! Executable versions of the structure theorems, with serializable summaries.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gradings::{rev, Grading, GradingKind};
use crate::morphisms::{omega_compatibility, LinearMap, OmegaCompatibility, Provenance};
use crate::scalars::{enumerate_units, Field, ScalarError};
use crate::triangular::{ProductKind, TriMatrix};

use super::graded::{eta_symmetric, DiagGroup, GradedGroups, PermGroup, Stab};
use super::scan::{tuples, Classifier, InvertibleSpace};
use super::{AnalysisError, EnumerationBudget, Outer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabSummary {
    pub candidates: u64,
    pub graded_matrices: u64,
    pub inner_automorphisms: u64,
    pub psi_valid: u64,
    pub psi_graded: u64,
    pub outer: Option<String>,
    pub outer_graded: bool,
    pub outer_coset: u64,
    pub order: u64,
    pub structure: String,
    pub inner_representatives: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
}

impl StabSummary {
    pub fn new<F: Field>(s: &Stab<F>) -> Self {
        StabSummary {
            candidates: s.candidates,
            graded_matrices: s.graded_matrices,
            inner_automorphisms: s.inner.len() as u64,
            psi_valid: s.psi_valid,
            psi_graded: s.psi.len() as u64,
            outer: s.outer.map(|o| o.name().to_string()),
            outer_graded: s.outer_graded,
            outer_coset: s.outer_coset.len() as u64,
            order: s.order,
            structure: s.structure.clone(),
            inner_representatives: s.inner.iter().map(TriMatrix::to_literal).collect(),
            psi: s.psi.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylSummary {
    pub support: Vec<String>,
    pub order: u64,
    pub structure: String,
    pub generators: Vec<Vec<usize>>,
}

impl WeylSummary {
    pub fn new(w: &PermGroup, support: &[crate::groups::GroupElement]) -> Self {
        WeylSummary {
            support: support.iter().map(ToString::to_string).collect(),
            order: w.order() as u64,
            structure: w.structure(),
            generators: w.generators.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagEntry {
    pub diagonal: Vec<String>,
    pub outer: bool,
    pub lambdas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagSummary {
    pub support: Vec<String>,
    pub universal_group: String,
    pub characters: u64,
    pub scanned: u64,
    pub scan_size: u64,
    pub character_size: u64,
    pub outer: Option<String>,
    pub equal: bool,
    pub maps: Vec<DiagEntry>,
    pub failures: Vec<String>,
}

impl DiagSummary {
    pub fn new<F: Field>(d: &DiagGroup<F>) -> Self {
        let strs = |v: &[F]| v.iter().map(ToString::to_string).collect();
        DiagSummary {
            support: d.support.iter().map(ToString::to_string).collect(),
            universal_group: d.universal.to_string(),
            characters: d.character_count,
            scanned: d.scanned,
            scan_size: d.scan.len() as u64,
            character_size: d.characters.len() as u64,
            outer: d.outer.map(|o| o.name().to_string()),
            equal: d.equal,
            maps: d.scan.iter().map(|m| DiagEntry { diagonal: strs(&m.diagonal), outer: m.outer, lambdas: strs(&m.lambdas) }).collect(),
            failures: d.failures.clone(),
        }
    }
}

/// Deterministic work counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WorkCounters {
    pub inner_candidates: u64,
    pub kept_candidates: u64,
    pub psi_tuples: u64,
    pub diagonal_candidates: u64,
    pub sampled_pairs: u64,
    pub full_scan_maps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub grading: String,
    pub stab: StabSummary,
    pub weyl: WeylSummary,
    pub diag: DiagSummary,
    pub assertions: Vec<Assertion>,
    pub work: WorkCounters,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.status != Status::Fail)
    }

    pub fn assertion(&self, id: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.id == id)
    }
}

#[derive(Default)]
struct Checks(Vec<Assertion>);

impl Checks {
    fn check(&mut self, id: &str, statement: &str, ok: bool, witness: Option<String>) {
        self.0.push(Assertion {
            id: id.into(),
            statement: statement.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: if ok { None } else { witness },
        });
    }

    fn skip(&mut self, id: &str, statement: &str, reason: String) {
        self.0.push(Assertion { id: id.into(), statement: statement.into(), status: Status::Skipped, witness: Some(reason) });
    }
}

fn show<F: Field>(a: &TriMatrix<F>) -> String {
    format!("a = [{}]", a.to_literal().join(","))
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

/// `outer ∘ phi_a ∘ outer = phi_{t(a)^{-1}}` for every representative.
fn normalizes<F: Field>(o: Outer, inner: &[TriMatrix<F>]) -> Result<Option<String>, AnalysisError> {
    for a in inner {
        let om = o.map::<F>(a.n());
        let lhs = om.compose(&LinearMap::inner(a)?)?.compose(&om)?;
        if lhs != LinearMap::inner(&a.flip_t().inverse()?)? {
            return Ok(Some(show(a)));
        }
    }
    Ok(None)
}

pub fn verify_theorems<F: Field>(grading: &Grading, budget: &EnumerationBudget, seed: u64) -> Result<TheoremReport, AnalysisError> {
    let groups = GradedGroups::<F>::compute(grading, budget)?;
    let stab = groups.stab()?;
    let weyl = groups.weyl()?;
    let diag = groups.diag(budget)?;
    let c = groups.classifier();
    let n = grading.n();
    let kind = grading.product();
    let mt = grading.kind() == GradingKind::Mt;
    let mut checks = Checks::default();
    let mut work = WorkCounters {
        inner_candidates: groups.candidates,
        kept_candidates: groups.hits.len() as u64,
        psi_tuples: groups.psi.as_ref().map_or(0, |p| p.tuples),
        diagonal_candidates: diag.scanned,
        ..WorkCounters::default()
    };

    let graded = |h: &super::graded::InnerHit<F>| h.inner.as_deref().is_some_and(is_identity);

    if !mt {
        let bad = groups.hits.iter().find(|h| graded(h) != h.degree.is_some());
        checks.check(
            "stab.graded_iff_homogeneous",
            "phi_a is graded exactly when a is homogeneous",
            bad.is_none(),
            bad.map(|h| show(&h.a)),
        );
        let bad = groups.graded_inner().find(|h| h.degree != c.identity_degree());
        checks.check(
            "stab.homogeneous_degree_one",
            "every a with phi_a graded has the degree of the identity",
            bad.is_none(),
            bad.map(|h| show(&h.a)),
        );
    }

    let symmetric = eta_symmetric(grading);
    match (kind, mt) {
        (ProductKind::Associative, _) => {
            let bad = groups.hits.iter().find(|h| h.inner.as_deref().is_some_and(|p| !is_identity(p)));
            checks.check(
                "assoc.aut_equals_stab",
                "every inner self-equivalence fixes the support pointwise",
                bad.is_none(),
                bad.map(|h| show(&h.a)),
            );
            checks.check("weyl.order", "the Weyl group is trivial", weyl.order() == 1, Some(format!("order {}", weyl.order())));
            let aut = groups.hits.iter().filter(|h| h.a.get(0, 0).is_one() && h.inner.is_some()).count() as u64;
            checks.check(
                "aut.orbit_consistency",
                "|Aut| = |W| |Stab|",
                aut == weyl.order() as u64 * stab.order,
                Some(format!("|Aut| = {aut}, |W| = {}, |Stab| = {}", weyl.order(), stab.order)),
            );
        }
        (ProductKind::Jordan, false) => {
            checks.check(
                "jordan.t_graded_iff_symmetric",
                "t is graded exactly when eta = rev eta",
                stab.outer_graded == symmetric,
                Some(format!("t graded: {}, eta symmetric: {symmetric}", stab.outer_graded)),
            );
            let t_perm = c.permutation(|x| x.flip_t());
            checks.check("jordan.t_self_equivalence", "t is a self-equivalence", t_perm.is_some(), Some("t mixes components".into()));
            let expected = if n >= 2 && !symmetric { 2 } else { 1 };
            checks.check(
                "weyl.order",
                "the Weyl group is Z_2 exactly when eta != rev eta",
                weyl.order() == expected,
                Some(format!("order {}, expected {expected}", weyl.order())),
            );
            let bad = normalizes(Outer::FlipT, &stab.inner)?;
            checks.check("jordan.t_normalizes_inner", "t phi_a t = phi_{t(a)^{-1}}", bad.is_none(), bad);
            if n >= 2 {
                let aut = groups.hits.iter().filter(|h| h.a.get(0, 0).is_one()).map(|h| h.inner.is_some() as u64 + h.outer.is_some() as u64).sum::<u64>();
                checks.check(
                    "aut.orbit_consistency",
                    "|Aut| = |W| |Stab|",
                    aut == weyl.order() as u64 * stab.order,
                    Some(format!("|Aut| = {aut}, |W| = {}, |Stab| = {}", weyl.order(), stab.order)),
                );
            }
        }
        (ProductKind::Lie, false) => {
            let psi = groups.psi.as_ref().expect("Lie scans psi");
            checks.check(
                "lie.psi_all_graded",
                "psi_s is graded for every s in S",
                psi.graded.len() as u64 == psi.valid,
                Some(format!("{} of {} graded", psi.graded.len(), psi.valid)),
            );
            checks.check(
                "lie.omega_graded_iff_symmetric",
                "omega is graded exactly when eta = rev eta",
                stab.outer_graded == symmetric,
                Some(format!("omega graded: {}, eta symmetric: {symmetric}", stab.outer_graded)),
            );
            let expected = if n > 2 && !symmetric { 2 } else { 1 };
            checks.check(
                "weyl.order",
                "the Weyl group is Z_2 exactly when eta != rev eta (trivial for n = 2)",
                weyl.order() == expected,
                Some(format!("order {}, expected {expected}", weyl.order())),
            );
            let (bad, pairs) = sample_commutation::<F>(n, seed)?;
            work.sampled_pairs = pairs;
            checks.check("lie.g0_g1_commute", "psi_s phi_a = phi_a psi_s on random pairs", bad.is_none(), bad);
            let bad = normalizes(Outer::Omega, &stab.inner)?;
            checks.check("lie.omega_normalizes_inner", "omega phi_a omega = phi_{t(a)^{-1}}", bad.is_none(), bad);
            if n == 2 {
                match full_automorphism_scan::<F>(grading, c, budget) {
                    Ok(full) => {
                        work.full_scan_maps = full.maps;
                        checks.check(
                            "lie.n2_aut_equals_stab",
                            "for n = 2 every self-equivalence is graded and |Stab| matches",
                            full.non_graded_self_equivalences == 0 && full.graded == stab.order,
                            Some(format!(
                                "{} graded maps, {} moving self-equivalences, |Stab| = {}",
                                full.graded, full.non_graded_self_equivalences, stab.order
                            )),
                        );
                        let units = enumerate_units::<F>()?;
                        let expected: HashSet<LinearMap<F>> = units
                            .iter()
                            .map(|x| LinearMap::inner(&TriMatrix::diagonal(&[F::one(), x.clone()])))
                            .collect::<Result<_, _>>()?;
                        checks.check(
                            "lie.n2_diag",
                            "for n = 2 Diag = { phi_diag(1,x) }",
                            full.diagonal == expected,
                            Some(format!("{} diagonal maps found, {} expected", full.diagonal.len(), expected.len())),
                        );
                    }
                    Err(e @ AnalysisError::BudgetExceeded { .. }) => {
                        checks.skip("lie.n2_aut_equals_stab", "for n = 2 every self-equivalence is graded", e.to_string());
                        checks.skip("lie.n2_diag", "for n = 2 Diag = { phi_diag(1,x) }", e.to_string());
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        (_, true) => {
            let axioms = grading.verify_axioms::<F>(kind)?;
            checks.check("mt.axioms", "the MT grading satisfies the grading axioms", axioms.holds, axioms.witness.map(|(x, y)| format!("{x} * {y}")));
            let mut bad_inv = None;
            let mut bad_h = None;
            let mut bad_induced = None;
            let induced_one = groups.induced().and_then(|g| Classifier::<F>::new(g).identity_degree());
            for h in &groups.hits {
                let inv = matches!(omega_compatibility(&h.a)?, OmegaCompatibility::Commuting(_));
                let g = graded(h);
                if g && !inv && bad_inv.is_none() {
                    bad_inv = Some(show(&h.a));
                }
                if g != (inv && h.degree.is_some() && h.degree == c.identity_degree()) && bad_h.is_none() {
                    bad_h = Some(format!("{} (graded: {g})", show(&h.a)));
                }
                if g != (inv && h.induced_degree.is_some() && h.induced_degree == induced_one) && bad_induced.is_none() {
                    bad_induced = Some(format!("{} (graded: {g})", show(&h.a)));
                }
            }
            checks.check("mt.graded_inner_omega_invertible", "every graded phi_a has omega-invertible a", bad_inv.is_none(), bad_inv);
            checks.check(
                "mt.stab_inner_equals_h",
                "phi_a is graded exactly when a is omega-invertible and homogeneous of degree 1 in the MT grading",
                bad_h.is_none(),
                bad_h,
            );
            checks.check(
                "mt.stab_inner_equals_h_induced",
                "phi_a is graded exactly when a is omega-invertible and homogeneous of degree 1 in the induced elementary grading",
                bad_induced.is_none(),
                bad_induced,
            );
            let o = Outer::for_product(kind).expect("MT gradings are Jordan or Lie");
            checks.check(&format!("mt.{}_graded", o.name()), "the outer automorphism is graded", stab.outer_graded, None);
            checks.check(
                &format!("mt.{}_commutes", o.name()),
                "the outer automorphism commutes with every graded inner map and psi_s",
                stab.outer_commutes,
                None,
            );
            checks.check(&format!("mt.{}_in_diag", o.name()), "the outer automorphism lies in Diag", diag.outer.is_some(), None);
            let p = n / 2;
            let witnesses = groups.witness_permutations()?;
            let distinct: BTreeSet<Vec<usize>> = witnesses.iter().filter_map(|(_, q)| q.clone()).collect();
            let missing = witnesses.iter().find(|(_, q)| q.is_none());
            checks.check(
                "mt.weyl_witnesses_distinct",
                "the 2^p Weyl witnesses induce 2^p distinct support permutations",
                missing.is_none() && distinct.len() == 1 << p,
                Some(match missing {
                    Some((eps, _)) => format!("signs {eps:?} give no self-equivalence"),
                    None => format!("{} distinct permutations for p = {p}", distinct.len()),
                }),
            );
            checks.check(
                "weyl.order",
                "the Weyl group is Z_2^p with p = floor(n/2)",
                weyl.order() == 1 << p,
                Some(format!("order {} ({}), expected {}", weyl.order(), weyl.structure(), 1 << p)),
            );
            if kind == ProductKind::Lie {
                let psi = groups.psi.as_ref().expect("Lie scans psi");
                let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
                let symmetric_valid: Vec<Vec<F>> = tuples(&elems, n)
                    .into_iter()
                    .filter(|s| !s.iter().fold(F::one(), |acc, x| acc + x.clone()).is_zero() && rev(s) == *s)
                    .collect();
                let ok = psi.graded == symmetric_valid;
                let witness = psi
                    .graded
                    .iter()
                    .find(|s| rev(s) != **s)
                    .or_else(|| symmetric_valid.iter().find(|s| !psi.graded.contains(s)))
                    .map(|s| format!("s = {:?}", s.iter().map(ToString::to_string).collect::<Vec<_>>()));
                checks.check("mt.psi_graded_iff_symmetric", "psi_s is graded exactly when s = rev s", ok, witness);
            }
        }
    }

    checks.check(
        "diag.equals_characters",
        "the diagonal scan equals the maps built from characters of U",
        diag.equal,
        Some(format!("scan {} vs characters {}; {}", diag.scan.len(), diag.characters.len(), diag.failures.join("; "))),
    );
    let bad = diag.scan.iter().find(|m| !c.is_graded(|x| m.map.apply(x)));
    checks.check("diag.within_stab", "every diagonal map is graded", bad.is_none(), bad.map(|m| m.map.provenance().to_string()));

    Ok(TheoremReport {
        grading: grading.to_string(),
        stab: StabSummary::new(&stab),
        weyl: WeylSummary::new(&weyl, c.support()),
        diag: DiagSummary::new(&diag),
        assertions: checks.0,
        work,
    })
}

/// 100 seeded pairs `(a, s)`; the first non-commuting pair, if any.
fn sample_commutation<F: Field>(n: usize, seed: u64) -> Result<(Option<String>, u64), AnalysisError> {
    let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
    let units = enumerate_units::<F>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |v: &[F]| v[rng.gen_range(0..v.len())].clone();
    for _ in 0..100 {
        let a = TriMatrix::from_fn(n, |i, j| if i == j { pick(&units) } else { pick(&elems) });
        let s = loop {
            let s: Vec<F> = (0..n).map(|_| pick(&elems)).collect();
            if !s.iter().fold(F::one(), |acc, x| acc + x.clone()).is_zero() {
                break s;
            }
        };
        let phi = LinearMap::inner(&a)?;
        let psi = LinearMap::psi(&s, ProductKind::Lie)?;
        if phi.compose(&psi)? != psi.compose(&phi)? {
            return Ok((Some(format!("{} with s = {:?}", show(&a), s.iter().map(ToString::to_string).collect::<Vec<_>>())), 100));
        }
    }
    Ok((None, 100))
}

struct FullScan<F> {
    maps: u64,
    graded: u64,
    non_graded_self_equivalences: u64,
    diagonal: HashSet<LinearMap<F>>,
}

/// Every `psi_s ∘ omega^e ∘ phi_a` of a Lie grading, classified.
fn full_automorphism_scan<F: Field>(grading: &Grading, c: &Classifier<F>, budget: &EnumerationBudget) -> Result<FullScan<F>, AnalysisError> {
    let n = grading.n();
    let space = InvertibleSpace::<F>::new(n, true, budget)?;
    let elems = F::elements().ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))?;
    let valid: Vec<Vec<F>> =
        tuples(&elems, n).into_iter().filter(|s| !s.iter().fold(F::one(), |acc, x| acc + x.clone()).is_zero()).collect();
    budget.admit(space.count as u128 * valid.len() as u128 * 2)?;
    let mut out = FullScan { maps: 0, graded: 0, non_graded_self_equivalences: 0, diagonal: HashSet::new() };
    let mut graded_maps = HashSet::new();
    for idx in 0..space.count {
        let a = space.decode(idx);
        let b = a.inverse()?;
        for s in &valid {
            for e in [false, true] {
                let f = |x: &TriMatrix<F>| {
                    let y = a.matmul(x).matmul(&b);
                    let y = if e { y.omega() } else { y };
                    let d = (0..n).fold(F::zero(), |acc, i| acc + y.get(i, i).clone() * s[i].clone());
                    y.add(&TriMatrix::scalar(n, d)).expect("same size")
                };
                out.maps += 1;
                match c.permutation(f) {
                    Some(p) if is_identity(&p) => {
                        let map = LinearMap::from_unit_images(n, |i, j| f(&TriMatrix::unit(n, i, j)), Provenance::Raw);
                        if c.lambdas(f).is_some() {
                            out.diagonal.insert(map.clone());
                        }
                        graded_maps.insert(map);
                    }
                    Some(_) => out.non_graded_self_equivalences += 1,
                    None => {}
                }
            }
        }
    }
    out.graded = graded_maps.len() as u64;
    Ok(out)
}
