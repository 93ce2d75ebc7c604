//! Runs the tasks of a validated job and assembles the report.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use utgrade::analysis::{
    construct_omega_invertible, involution_survey, random_free_entries, verify_theorems, Assertion, DiagSummary,
    EnumerationBudget, GradedGroups, InvolutionClass, StabSummary, Status, WeylSummary, WorkCounters,
};
use utgrade::morphisms::{omega_compatibility, OmegaCompatibility};
use utgrade::scalars::{Field, FieldDescriptor, Fp, Rational};
use utgrade::universal::universal_abelian;
use utgrade::{AnalysisError, Grading};

use crate::config::{build_grading, JobConfig, Task};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Adds per-task wall-clock times, which makes reports non-reproducible.
    pub wall_clock: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskAssertion {
    pub task: String,
    #[serde(flatten)]
    pub assertion: Assertion,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub work: BTreeMap<String, WorkCounters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config_echo: JobConfig,
    pub results: BTreeMap<String, Value>,
    pub assertions: Vec<TaskAssertion>,
    pub timing: Timing,
    pub incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    fn new(cfg: &JobConfig) -> Self {
        Report {
            config_echo: cfg.clone(),
            results: BTreeMap::new(),
            assertions: Vec::new(),
            timing: Timing::default(),
            incomplete: false,
            error: None,
        }
    }

    pub fn failed_assertions(&self) -> impl Iterator<Item = &TaskAssertion> {
        self.assertions.iter().filter(|a| a.assertion.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

macro_rules! dispatch_prime {
    ($p:expr, $f:ident, $($arg:expr),*) => {
        match $p {
            2 => $f::<Fp<2>>($($arg),*),
            3 => $f::<Fp<3>>($($arg),*),
            5 => $f::<Fp<5>>($($arg),*),
            7 => $f::<Fp<7>>($($arg),*),
            11 => $f::<Fp<11>>($($arg),*),
            13 => $f::<Fp<13>>($($arg),*),
            17 => $f::<Fp<17>>($($arg),*),
            19 => $f::<Fp<19>>($($arg),*),
            23 => $f::<Fp<23>>($($arg),*),
            29 => $f::<Fp<29>>($($arg),*),
            31 => $f::<Fp<31>>($($arg),*),
            37 => $f::<Fp<37>>($($arg),*),
            41 => $f::<Fp<41>>($($arg),*),
            43 => $f::<Fp<43>>($($arg),*),
            47 => $f::<Fp<47>>($($arg),*),
            p => Err(format!("GF({p}) is not supported")),
        }
    };
}

/// Runs every task in order. The config must already have passed validation.
pub fn run(cfg: &JobConfig, opts: &RunOptions) -> Outcome {
    let mut report = Report::new(cfg);
    if opts.wall_clock {
        report.timing.wall_clock_ms = Some(BTreeMap::new());
    }
    let grading = match build_grading(cfg) {
        Ok(g) => g,
        Err(e) => {
            report.error = Some(e);
            return Outcome { report, exit_code: EXIT_ERROR };
        }
    };
    let ended = match cfg.field {
        FieldDescriptor::Prime { p } => dispatch_prime!(p, run_tasks, cfg, &grading, &mut report),
        FieldDescriptor::Rationals => run_tasks::<Rational>(cfg, &grading, &mut report),
    };
    let exit_code = match ended {
        Err(e) => {
            report.error = Some(e);
            if report.incomplete {
                EXIT_BUDGET
            } else {
                EXIT_ERROR
            }
        }
        Ok(()) if report.failed_assertions().next().is_some() => EXIT_ASSERTION,
        Ok(()) => EXIT_OK,
    };
    Outcome { report, exit_code }
}

fn run_tasks<F: Field>(cfg: &JobConfig, grading: &Grading, report: &mut Report) -> Result<(), String> {
    let budget = EnumerationBudget::new(cfg.budget);
    let mut groups: Option<GradedGroups<F>> = None;
    for &task in &cfg.tasks {
        let start = Instant::now();
        let out = run_task(task, cfg, grading, &budget, &mut groups);
        if let Some(ms) = report.timing.wall_clock_ms.as_mut() {
            ms.insert(task.name().into(), start.elapsed().as_millis() as u64);
        }
        match out {
            Ok(TaskOutput { result, assertions, work }) => {
                report.results.insert(task.name().into(), result);
                report.assertions.extend(assertions.into_iter().map(|assertion| TaskAssertion { task: task.name().into(), assertion }));
                if let Some(w) = work {
                    report.timing.work.insert(task.name().into(), w);
                }
            }
            Err(e) => {
                if matches!(e, AnalysisError::BudgetExceeded { .. }) {
                    report.incomplete = true;
                }
                return Err(format!("{task}: {e}"));
            }
        }
    }
    Ok(())
}

struct TaskOutput {
    result: Value,
    assertions: Vec<Assertion>,
    work: Option<WorkCounters>,
}

impl TaskOutput {
    fn plain(result: Value) -> Self {
        TaskOutput { result, assertions: Vec::new(), work: None }
    }
}

fn check(id: &str, statement: &str, ok: bool, witness: impl FnOnce() -> String) -> Assertion {
    Assertion {
        id: id.into(),
        statement: statement.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        witness: if ok { None } else { Some(witness()) },
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("summary serializes")
}

fn run_task<F: Field>(
    task: Task,
    cfg: &JobConfig,
    grading: &Grading,
    budget: &EnumerationBudget,
    groups: &mut Option<GradedGroups<F>>,
) -> Result<TaskOutput, AnalysisError> {
    let cached = |groups: &mut Option<GradedGroups<F>>| -> Result<(), AnalysisError> {
        if groups.is_none() {
            *groups = Some(GradedGroups::compute(grading, budget)?);
        }
        Ok(())
    };
    match task {
        Task::Verify => {
            let r = verify_theorems::<F>(grading, budget, cfg.seed)?;
            let result = json!({ "grading": r.grading, "stab": r.stab, "weyl": r.weyl, "diag": r.diag });
            Ok(TaskOutput { result, assertions: r.assertions, work: Some(r.work) })
        }
        Task::Stab => {
            cached(groups)?;
            let g = groups.as_ref().expect("computed");
            let work = WorkCounters {
                inner_candidates: g.candidates,
                kept_candidates: g.hits.len() as u64,
                psi_tuples: g.psi.as_ref().map_or(0, |p| p.tuples),
                ..WorkCounters::default()
            };
            Ok(TaskOutput { work: Some(work), ..TaskOutput::plain(to_value(&StabSummary::new(&g.stab()?))) })
        }
        Task::Weyl => {
            cached(groups)?;
            let g = groups.as_ref().expect("computed");
            Ok(TaskOutput::plain(to_value(&WeylSummary::new(&g.weyl()?, g.classifier().support()))))
        }
        Task::Diag => {
            cached(groups)?;
            let g = groups.as_ref().expect("computed");
            let d = g.diag(budget)?;
            let work = WorkCounters { diagonal_candidates: d.scanned, ..WorkCounters::default() };
            let assertion = check(
                "diag.equals_characters",
                "the diagonal scan equals the character-generated set",
                d.equal,
                || d.failures.join("; "),
            );
            Ok(TaskOutput { result: to_value(&DiagSummary::new(&d)), assertions: vec![assertion], work: Some(work) })
        }
        Task::Involutions => involutions::<F>(grading, budget),
        Task::OmegaConstruct => omega_construct::<F>(cfg),
        Task::Report => describe::<F>(cfg, grading),
    }
}

fn class_name(c: InvolutionClass) -> &'static str {
    match c {
        InvolutionClass::Canonical => "canonical",
        InvolutionClass::Symplectic => "symplectic",
    }
}

fn involutions<F: Field>(grading: &Grading, budget: &EnumerationBudget) -> Result<TaskOutput, AnalysisError> {
    let s = involution_survey::<F>(grading, budget)?;
    let count = |c: InvolutionClass| s.witnesses.iter().filter(|w| w.by_symmetry == c).count();
    let message = if s.exists() {
        format!("{} graded involutions found", s.witnesses.len())
    } else {
        "no graded involution exists (requires eta = rev eta and a commutative support)".to_string()
    };
    let witnesses: Vec<Value> = s
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "a": w.a.to_literal(),
                "by_symmetry": class_name(w.by_symmetry),
                "by_corner": class_name(w.by_corner),
                "homogeneous_degree_one": w.homogeneous_degree_one,
            })
        })
        .collect();
    let result = json!({
        "predicted": s.predicted,
        "exists": s.exists(),
        "message": message,
        "candidates": s.candidates,
        "canonical": count(InvolutionClass::Canonical),
        "symplectic": count(InvolutionClass::Symplectic),
        "witnesses": witnesses,
    });
    let n = grading.n();
    let assertions = vec![
        check("involutions.existence", "graded involutions exist exactly when predicted", s.predicted == s.exists(), || {
            format!("predicted {}, found {}", s.predicted, s.witnesses.len())
        }),
        check("involutions.classification", "t(a) = ±a and the image of e_1n give the same class", s.consistent(), || {
            let w = s.witnesses.iter().find(|w| w.by_symmetry != w.by_corner).expect("inconsistent witness");
            format!("a = [{}]", w.a.to_literal().join(","))
        }),
        check("involutions.symplectic_even", "symplectic involutions only occur for even n", n.is_multiple_of(2) || count(InvolutionClass::Symplectic) == 0, || {
            format!("{} symplectic witnesses at n = {n}", count(InvolutionClass::Symplectic))
        }),
        check("involutions.degree_one", "every witness a has the degree of the identity", s.witnesses.iter().all(|w| w.homogeneous_degree_one), || {
            let w = s.witnesses.iter().find(|w| !w.homogeneous_degree_one).expect("witness");
            format!("a = [{}]", w.a.to_literal().join(","))
        }),
    ];
    let work = WorkCounters { inner_candidates: s.candidates, kept_candidates: s.witnesses.len() as u64, ..WorkCounters::default() };
    Ok(TaskOutput { result, assertions, work: Some(work) })
}

fn omega_construct<F: Field>(cfg: &JobConfig) -> Result<TaskOutput, AnalysisError> {
    let spec = cfg.omega.as_ref().ok_or_else(|| AnalysisError::Precondition("omega-construct needs an omega section".into()))?;
    let n = cfg.n;
    let k = F::parse_literal(&spec.k)?;
    let free: BTreeMap<(usize, usize), F> = match &spec.free {
        Some(entries) => entries
            .iter()
            .map(|e| Ok(((e.i - 1, e.j - 1), F::parse_literal(&e.value)?)))
            .collect::<Result<_, AnalysisError>>()?,
        None => random_free_entries::<F>(n, &mut ChaCha8Rng::seed_from_u64(cfg.seed))?,
    };
    let a = construct_omega_invertible(n, &free, &k)?;
    let preserved = free.iter().all(|(&(i, j), v)| a.get(i, j) == v);
    let relation = matches!(omega_compatibility(&a)?, OmegaCompatibility::Commuting(ref c) if *c == k);
    let result = json!({
        "k": k.to_string(),
        "free": free.iter().map(|(&(i, j), v)| json!({ "i": i + 1, "j": j + 1, "value": v.to_string() })).collect::<Vec<_>>(),
        "a": a.to_literal(),
    });
    let assertions = vec![
        check("omega.free_entries", "the result keeps the prescribed free entries", preserved, || "a free entry changed".into()),
        check("omega.relation", "a omega(a) = omega(a) a = -k", relation, || format!("a = [{}]", a.to_literal().join(","))),
    ];
    Ok(TaskOutput { result, assertions, work: None })
}

fn describe<F: Field>(cfg: &JobConfig, grading: &Grading) -> Result<TaskOutput, AnalysisError> {
    let axioms = grading.verify_axioms::<F>(grading.product())?;
    let universal = universal_abelian::<F>(grading, grading.product())?;
    let support = grading.support();
    let components: Vec<Value> = support
        .iter()
        .map(|g| {
            let labels: Vec<&str> = grading.component(g).into_iter().map(|k| grading.basis()[k].label.as_str()).collect();
            json!({ "degree": g.to_string(), "dim": labels.len(), "basis": labels })
        })
        .collect();
    let result = json!({
        "grading": grading.to_string(),
        "field": cfg.field.to_string(),
        "group": grading.group().to_string(),
        "support_size": support.len(),
        "components": components,
        "universal_group": universal.normal_form.to_string(),
    });
    let assertion = check("grading.axioms", "every basis product lands in the component of the product degree", axioms.holds, || {
        let (a, b) = axioms.witness.clone().unwrap_or_default();
        format!("{a} * {b}")
    });
    Ok(TaskOutput { result, assertions: vec![assertion], work: None })
}
