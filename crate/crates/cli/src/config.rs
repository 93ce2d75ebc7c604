//! The JSON job file and its validation.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use utgrade::gradings::{is_symmetric, GradingSpec};
use utgrade::groups::{AbelianGroup, CayleyGroup, Group, GroupElement};
use utgrade::scalars::{is_prime, FieldDescriptor};
use utgrade::{Grading, ProductKind};

/// Largest prime the binary is compiled for, plus one.
pub const PRIME_LIMIT: u64 = 50;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub n: usize,
    pub field: FieldDescriptor,
    pub product: ProductKind,
    /// For MT gradings this is `H`; the grading group is `Z_2 x H`.
    pub group: GroupSpec,
    pub grading: GradingSpec,
    pub tasks: Vec<Task>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSpec>,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Abelian {
        #[serde(default)]
        free_rank: usize,
        #[serde(default)]
        torsion: Vec<u64>,
    },
    Cayley {
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group, String> {
        match self {
            GroupSpec::Abelian { free_rank, torsion } => {
                AbelianGroup::new(*free_rank, torsion.clone()).map(Group::Abelian).map_err(|e| e.to_string())
            }
            GroupSpec::Cayley { table } => CayleyGroup::new(table.clone()).map(Group::Cayley).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Verify,
    Stab,
    Weyl,
    Diag,
    Involutions,
    OmegaConstruct,
    Report,
}

impl Task {
    pub const ALL: [Task; 7] = [Task::Verify, Task::Stab, Task::Weyl, Task::Diag, Task::Involutions, Task::OmegaConstruct, Task::Report];

    pub fn name(self) -> &'static str {
        match self {
            Task::Verify => "verify",
            Task::Stab => "stab",
            Task::Weyl => "weyl",
            Task::Diag => "diag",
            Task::Involutions => "involutions",
            Task::OmegaConstruct => "omega-construct",
            Task::Report => "report",
        }
    }

    /// Tasks that enumerate over the field.
    pub fn is_exhaustive(self) -> bool {
        !matches!(self, Task::OmegaConstruct | Task::Report)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Input for `omega-construct`. Positions are 1-based; without `free` the
/// entries are drawn from the seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSpec {
    pub k: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<Vec<FreeEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

/// A problem with the config, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "/" } else { &self.path };
        write!(f, "{path}: {}", self.message)
    }
}

/// Parses and validates a config file.
pub fn load(text: &str) -> Result<JobConfig, Vec<Diagnostic>> {
    let value: Value = serde_json::from_str(text).map_err(|e| vec![Diagnostic::new("", format!("invalid JSON: {e}"))])?;
    let diags = validate(&value);
    if !diags.is_empty() {
        return Err(diags);
    }
    serde_json::from_value(value).map_err(|e| vec![Diagnostic::new("", e.to_string())])
}

/// Every problem with a config; empty exactly when `load` accepts it.
pub fn validate(value: &Value) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    let Some(obj) = value.as_object() else {
        return vec![Diagnostic::new("", "config must be a JSON object")];
    };
    for key in obj.keys() {
        if !["n", "field", "product", "group", "grading", "tasks", "budget", "format", "seed", "omega"].contains(&key.as_str()) {
            d.push(Diagnostic::new(format!("/{key}"), format!("unknown field {key:?}")));
        }
    }
    match obj.get("n") {
        None => d.push(Diagnostic::new("/n", "n is required")),
        Some(v) => match v.as_i64() {
            Some(n) if n >= 1 => {}
            Some(_) => d.push(Diagnostic::new("/n", "n must be ≥ 1")),
            None => d.push(Diagnostic::new("/n", "n must be an integer")),
        },
    }
    check_field(obj.get("field"), &mut d);
    match obj.get("product").and_then(Value::as_str) {
        Some("assoc" | "lie" | "jordan") => {}
        _ => d.push(Diagnostic::new("/product", "product must be \"assoc\", \"lie\" or \"jordan\"")),
    }
    check_typed::<GroupSpec>(obj.get("group"), "/group", "group", &mut d);
    check_typed::<GradingSpec>(obj.get("grading"), "/grading", "grading", &mut d);
    match obj.get("tasks").and_then(Value::as_array) {
        None => d.push(Diagnostic::new("/tasks", "tasks must be an array")),
        Some(t) if t.is_empty() => d.push(Diagnostic::new("/tasks", "tasks must not be empty")),
        Some(t) => {
            for (i, x) in t.iter().enumerate() {
                if serde_json::from_value::<Task>(x.clone()).is_err() {
                    let names: Vec<&str> = Task::ALL.iter().map(|t| t.name()).collect();
                    d.push(Diagnostic::new(format!("/tasks/{i}"), format!("unknown task {x}; expected one of {}", names.join(", "))));
                }
            }
        }
    }
    if let Some(b) = obj.get("budget") {
        if !b.as_u64().is_some_and(|b| b > 0) {
            d.push(Diagnostic::new("/budget", "budget must be a positive integer"));
        }
    }
    if let Some(f) = obj.get("format") {
        if serde_json::from_value::<Format>(f.clone()).is_err() {
            d.push(Diagnostic::new("/format", "format must be \"text\" or \"json\""));
        }
    }
    if let Some(s) = obj.get("seed") {
        if s.as_u64().is_none() {
            d.push(Diagnostic::new("/seed", "seed must be a non-negative integer"));
        }
    }
    if let Some(o) = obj.get("omega") {
        check_typed::<OmegaSpec>(Some(o), "/omega", "omega", &mut d);
    }
    if !d.is_empty() {
        return d;
    }
    match serde_json::from_value::<JobConfig>(value.clone()) {
        Ok(cfg) => semantic_checks(&cfg),
        Err(e) => vec![Diagnostic::new("", e.to_string())],
    }
}

fn check_field(v: Option<&Value>, d: &mut Vec<Diagnostic>) {
    let Some(v) = v else {
        d.push(Diagnostic::new("/field", "field is required"));
        return;
    };
    match v.get("type").and_then(Value::as_str) {
        Some("q") => {}
        Some("gf") => match v.get("p").and_then(Value::as_u64) {
            Some(p) if !is_prime(p) => d.push(Diagnostic::new("/field/p", format!("{p} is not prime"))),
            Some(p) if p >= PRIME_LIMIT => d.push(Diagnostic::new("/field/p", format!("primes up to {} are supported, got {p}", PRIME_LIMIT - 1))),
            Some(_) => {}
            None => d.push(Diagnostic::new("/field/p", "p must be a positive integer")),
        },
        _ => d.push(Diagnostic::new("/field/type", "field type must be \"gf\" or \"q\"")),
    }
}

fn check_typed<T: for<'de> Deserialize<'de>>(v: Option<&Value>, path: &str, name: &str, d: &mut Vec<Diagnostic>) {
    match v {
        None => d.push(Diagnostic::new(path, format!("{name} is required"))),
        Some(v) => {
            if let Err(e) = serde_json::from_value::<T>(v.clone()) {
                d.push(Diagnostic::new(path, format!("malformed {name}: {e}")));
            }
        }
    }
}

fn semantic_checks(cfg: &JobConfig) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    let group = match cfg.group.build() {
        Ok(g) => g,
        Err(e) => return vec![Diagnostic::new("/group", e)],
    };
    let char_two = cfg.field.is_char_two();
    let (eta, mt) = match &cfg.grading {
        GradingSpec::Elementary { eta } => (eta, false),
        GradingSpec::Mt { eta } => (eta, true),
    };
    if cfg.product != ProductKind::Associative {
        if let Group::Cayley(c) = &group {
            if !c.is_commutative() {
                d.push(Diagnostic::new("/group", "Lie/Jordan require abelian group"));
            }
        }
    }
    if mt {
        if char_two {
            d.push(Diagnostic::new("/grading/kind", "MT requires characteristic ≠ 2"));
        }
        if cfg.product == ProductKind::Associative {
            d.push(Diagnostic::new("/product", "MT gradings are defined for the Lie and Jordan products"));
        }
        if group.as_abelian().is_none() {
            d.push(Diagnostic::new("/group", "MT gradings need an abelian group given by free rank and torsion"));
        }
        if !is_symmetric(eta) {
            d.push(Diagnostic::new("/grading/eta", "MT gradings need eta = rev eta"));
        }
    }
    if eta.len() + 1 != cfg.n {
        d.push(Diagnostic::new("/grading/eta", format!("eta must have n - 1 = {} entries, got {}", cfg.n.saturating_sub(1), eta.len())));
    }
    for (i, g) in eta.iter().enumerate() {
        if !group.contains(g) {
            d.push(Diagnostic::new(format!("/grading/eta/{i}"), format!("{g} is not an element of {group}")));
        }
    }
    for (i, t) in cfg.tasks.iter().enumerate() {
        if cfg.tasks[..i].contains(t) {
            d.push(Diagnostic::new(format!("/tasks/{i}"), format!("task {t} is listed twice")));
        }
        if t.is_exhaustive() && !cfg.field.is_finite() {
            d.push(Diagnostic::new(format!("/tasks/{i}"), format!("{t} enumerates the field and needs a finite field")));
        }
        if *t == Task::Involutions {
            if char_two {
                d.push(Diagnostic::new(format!("/tasks/{i}"), "involutions require characteristic ≠ 2"));
            }
            if mt {
                d.push(Diagnostic::new(format!("/tasks/{i}"), "involutions are surveyed on elementary gradings"));
            }
        }
        if *t == Task::OmegaConstruct {
            if char_two {
                d.push(Diagnostic::new(format!("/tasks/{i}"), "omega-construct requires characteristic ≠ 2"));
            }
            match &cfg.omega {
                None => d.push(Diagnostic::new("/omega", "omega-construct needs an \"omega\" object with k")),
                Some(o) => d.extend(check_omega(o, cfg)),
            }
        }
    }
    if d.is_empty() {
        if let Err(e) = build_grading(cfg) {
            d.push(Diagnostic::new("/grading", e));
        }
    }
    d
}

fn check_omega(o: &OmegaSpec, cfg: &JobConfig) -> Vec<Diagnostic> {
    let mut d = Vec::new();
    if o.k.trim().is_empty() {
        d.push(Diagnostic::new("/omega/k", "k is required"));
    }
    match &o.free {
        None if !cfg.field.is_finite() => d.push(Diagnostic::new("/omega/free", "free entries must be given over Q")),
        None => {}
        Some(entries) => {
            for (idx, e) in entries.iter().enumerate() {
                let ok = e.i >= 1 && e.i <= e.j && e.i + e.j <= cfg.n;
                if !ok {
                    d.push(Diagnostic::new(
                        format!("/omega/free/{idx}"),
                        format!("({}, {}) is not free; free positions satisfy 1 ≤ i ≤ j and i + j ≤ n", e.i, e.j),
                    ));
                }
            }
        }
    }
    d
}

/// The grading described by a validated config.
pub fn build_grading(cfg: &JobConfig) -> Result<Grading, String> {
    let group = cfg.group.build()?;
    match &cfg.grading {
        GradingSpec::Elementary { eta } => Grading::elementary_from_eta(cfg.n, group, eta, cfg.product).map_err(|e| e.to_string()),
        GradingSpec::Mt { eta } => {
            let h = group.as_abelian().ok_or("MT gradings need an abelian group")?;
            Grading::mt_from_symmetric(cfg.n, h, eta, cfg.product, &cfg.field).map_err(|e| e.to_string())
        }
    }
}

/// `eta` entries as given, for echoing.
pub fn eta_of(spec: &GradingSpec) -> &[GroupElement] {
    match spec {
        GradingSpec::Elementary { eta } | GradingSpec::Mt { eta } => eta,
    }
}
