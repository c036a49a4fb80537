//! Command orchestration with the coefficient field chosen at run time.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::canonical::{
    canonical_system, oneform_eigenvalue, phi, phi_tilde, verify_canonical, CanonicalError, InvariantSystem, Mode,
};
use crate::groups::{max_group_order, GroupError, GroupType, ReflectionGroup, RootSystem};
use crate::json::{self, JsonError, PolyJson, SystemJson};
use crate::oracle::{flatto_solve, OracleError};
use crate::polys::OneForm;
use crate::scalars::{Field, FieldKind, QSqrt5, Rational};
use crate::seeds::{product_of_variables, seed_invariants, user_seeds, SeedError, SeedSelector, SeedSystem};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Seeds(#[from] SeedError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    PowerSums,
    Reynolds,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Auto,
    Fixed(FieldKind),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupType,
    pub seed: SeedSpec,
    pub mode: Mode,
    pub field: FieldChoice,
    pub verify: bool,
    pub allow_large: bool,
}

impl RunConfig {
    pub fn new(group: GroupType) -> Self {
        RunConfig {
            group,
            seed: SeedSpec::PowerSums,
            mode: Mode::Generic,
            field: FieldChoice::Auto,
            verify: false,
            allow_large: false,
        }
    }

    pub fn field_kind(&self) -> FieldKind {
        match self.field {
            FieldChoice::Auto => self.group.auto_field(),
            FieldChoice::Fixed(k) => k,
        }
    }
}

/// Everything a build produces, rendered in each output format.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub json: String,
    pub latex: String,
    pub summary: String,
    /// `None` when verification was not requested.
    pub verified: Option<bool>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutput {
    pub group: String,
    pub field: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareOutput {
    pub group: String,
    pub field: String,
    pub degrees: Vec<u32>,
    pub main_verified: bool,
    pub oracle_verified: bool,
    pub same_spans: bool,
}

impl CompareOutput {
    pub fn passed(&self) -> bool {
        self.main_verified && self.oracle_verified && self.same_spans
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaOutput {
    pub group: String,
    pub degree: u32,
    pub root_system: json::RootSystemJson,
    pub delta: PolyJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchOutput {
    pub group: String,
    pub field: String,
    pub delta_ms: f64,
    pub phi_ms: f64,
    pub build_ms: f64,
    pub verify_ms: f64,
}

fn group_for<F: Field>(t: GroupType, allow_large: bool) -> Result<ReflectionGroup<F>, PipelineError> {
    t.validate()?;
    if t.needs_opt_in() && !allow_large {
        return Err(GroupError::NeedsOptIn(t).into());
    }
    let cap = max_group_order();
    if t.order() > cap {
        return Err(GroupError::OrderCap {
            group: t,
            order: t.order(),
            cap,
        }
        .into());
    }
    Ok(ReflectionGroup::new(RootSystem::build(t)?)?)
}

fn read(path: &PathBuf) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn seeds_for<F: Field>(group: &ReflectionGroup<F>, spec: &SeedSpec) -> Result<SeedSystem<F>, PipelineError> {
    Ok(match spec {
        SeedSpec::PowerSums => seed_invariants(group, SeedSelector::PowerSums)?,
        SeedSpec::Reynolds => seed_invariants(group, SeedSelector::Reynolds)?,
        SeedSpec::File(path) => {
            let text = read(path)?;
            let polys: Vec<PolyJson> = serde_json::from_str(&text).map_err(JsonError::from)?;
            let polys = polys
                .iter()
                .map(json::poly_from_json)
                .collect::<Result<Vec<_>, _>>()?;
            user_seeds(group, polys)?
        }
    })
}

macro_rules! dispatch {
    ($kind:expr, $f:ident ( $($arg:expr),* )) => {
        match $kind {
            FieldKind::Rational => $f::<Rational>($($arg),*),
            FieldKind::QuadSqrt5 => $f::<QSqrt5>($($arg),*),
            FieldKind::Float => $f::<f64>($($arg),*),
        }
    };
}

pub fn build(cfg: &RunConfig) -> Result<BuildOutput, PipelineError> {
    dispatch!(cfg.field_kind(), build_in(cfg))
}

/// Construct the canonical system over `F`.
pub fn construct<F: Field>(cfg: &RunConfig) -> Result<(ReflectionGroup<F>, InvariantSystem<F>), PipelineError> {
    let group = group_for::<F>(cfg.group, cfg.allow_large)?;
    let seeds = seeds_for(&group, &cfg.seed)?;
    let sys = canonical_system(&group, &seeds, cfg.mode)?;
    Ok((group, sys))
}

fn build_in<F: Field>(cfg: &RunConfig) -> Result<BuildOutput, PipelineError> {
    let (group, sys) = construct::<F>(cfg)?;
    let (verified, failures) = if cfg.verify {
        let report = verify_canonical(&sys, &group);
        (Some(report.passed), report.failures())
    } else {
        (None, Vec::new())
    };
    let json = json::to_pretty(&json::system_to_json(&sys, verified == Some(true)));
    let latex = json::system_to_latex(&sys);
    let summary = summary(&group, &sys, verified);
    Ok(BuildOutput {
        json,
        latex,
        summary,
        verified,
        failures,
    })
}

fn summary<F: Field>(group: &ReflectionGroup<F>, sys: &InvariantSystem<F>, verified: Option<bool>) -> String {
    let mut out = format!(
        "{} over {} ({}), {} variables\n",
        sys.group,
        F::KIND,
        sys.provenance,
        sys.ambient
    );
    for (i, e) in sys.entries.iter().enumerate() {
        out.push_str(&format!(
            "  f{:<2} degree {:>2}  terms {:>6}  norm {}\n",
            i + 1,
            e.degree,
            e.poly.len(),
            e.norm.to_scalar()
        ));
    }
    if let GroupType::D(n) = sys.group {
        if n % 2 == 0 {
            let omega = OneForm::differential(&product_of_variables::<F>(n));
            let image = phi_tilde(&omega, &group.root_system().delta());
            match oneform_eigenvalue(&omega, &image) {
                Some(l) => out.push_str(&format!("  d(x1...x{n}) is an eigenvector of the lifted map, eigenvalue {}\n", l.to_scalar())),
                None => out.push_str(&format!("  d(x1...x{n}) is NOT an eigenvector of the lifted map\n")),
            }
        }
    }
    match verified {
        Some(true) => out.push_str("verified: yes\n"),
        Some(false) => out.push_str("verified: NO\n"),
        None => out.push_str("verified: not checked\n"),
    }
    out
}

/// Re-check a serialized system.
pub fn verify_text(text: &str) -> Result<VerifyOutput, PipelineError> {
    let j: SystemJson = serde_json::from_str(text).map_err(JsonError::from)?;
    let (_, kind) = json::group_from_json(&j.group)?;
    dispatch!(kind, verify_in(&j))
}

fn verify_in<F: Field>(j: &SystemJson) -> Result<VerifyOutput, PipelineError> {
    let sys = json::system_from_json::<F>(j)?;
    let group = ReflectionGroup::new(RootSystem::<F>::build(sys.group)?)?;
    let mut failures = Vec::new();
    if sys.ambient != group.nvars() {
        failures.push(format!(
            "ambient dimension {} differs from the model's {}",
            sys.ambient,
            group.nvars()
        ));
    }
    if let Some(bad) = sys.entries.iter().position(|e| e.poly.nvars() != group.nvars()) {
        failures.push(format!("entry {} has {} variables", bad + 1, sys.entries[bad].poly.nvars()));
    }
    if failures.is_empty() {
        failures = verify_canonical(&sys, &group).failures();
        if sys.entries.len() != sys.group.rank() {
            failures.push(format!("{} entries for rank {}", sys.entries.len(), sys.group.rank()));
        }
    }
    Ok(VerifyOutput {
        group: sys.group.to_string(),
        field: F::KIND.label().into(),
        passed: failures.is_empty(),
        failures,
    })
}

pub fn delta(cfg: &RunConfig) -> Result<DeltaOutput, PipelineError> {
    dispatch!(cfg.field_kind(), delta_in(cfg))
}

fn delta_in<F: Field>(cfg: &RunConfig) -> Result<DeltaOutput, PipelineError> {
    let group = group_for::<F>(cfg.group, cfg.allow_large)?;
    let rs = group.root_system();
    let d = rs.delta();
    Ok(DeltaOutput {
        group: cfg.group.to_string(),
        degree: d.homogeneous_degree().unwrap_or(0),
        root_system: json::root_system_to_json(rs),
        delta: json::poly_to_json(&d),
    })
}

pub fn oracle_compare(cfg: &RunConfig) -> Result<CompareOutput, PipelineError> {
    dispatch!(cfg.field_kind(), compare_in(cfg))
}

fn compare_in<F: Field>(cfg: &RunConfig) -> Result<CompareOutput, PipelineError> {
    let (mut group, main) = construct::<F>(cfg)?;
    group.enumerate(max_group_order())?;
    let oracle = flatto_solve(&group)?;
    Ok(CompareOutput {
        group: cfg.group.to_string(),
        field: F::KIND.label().into(),
        degrees: main.degrees(),
        main_verified: verify_canonical(&main, &group).passed,
        oracle_verified: verify_canonical(&oracle, &group).passed,
        same_spans: main.same_spans(&oracle),
    })
}

pub fn bench(cfg: &RunConfig) -> Result<BenchOutput, PipelineError> {
    dispatch!(cfg.field_kind(), bench_in(cfg))
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn bench_in<F: Field>(cfg: &RunConfig) -> Result<BenchOutput, PipelineError> {
    let group = group_for::<F>(cfg.group, cfg.allow_large)?;
    let t0 = Instant::now();
    let d = group.root_system().delta();
    let delta_ms = ms(t0);

    let seeds = seeds_for(&group, &cfg.seed)?;
    let top = seeds.polys().last().expect("nonempty seeds");
    let t1 = Instant::now();
    let _ = phi(top, &d);
    let phi_ms = ms(t1);

    let t2 = Instant::now();
    let sys = canonical_system(&group, &seeds, cfg.mode)?;
    let build_ms = ms(t2);

    let t3 = Instant::now();
    let _ = verify_canonical(&sys, &group);
    let verify_ms = ms(t3);
    Ok(BenchOutput {
        group: cfg.group.to_string(),
        field: F::KIND.label().into(),
        delta_ms,
        phi_ms,
        build_ms,
        verify_ms,
    })
}
