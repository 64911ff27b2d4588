//! Parallel, order-independent trial execution.

use std::time::Instant;

use rayon::prelude::*;

use ehs_core::combinatorics::SizeLimit;
use ehs_core::identities::{evaluate, sample_params, trial_rng, EvalOptions, IdentityId, ParamSample, SamplerConfig, Sizes};
use ehs_core::num::Residual;
use ehs_core::{BracketCase, Error, Quad};

use crate::report::{FailureRecord, Fixture, IdentityReport, SampleRecord, SuiteReport, REPORT_VERSION};

/// Environment variable overriding the enumeration size caps.
pub const MAX_SIZE_ENV: &str = "EHS_MAX_SIZE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "double" => Some(Precision::Double),
            "extended" => Some(Precision::Extended),
            _ => None,
        }
    }
}

/// Problems with the run configuration itself (as opposed to failed trials).
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    pub sizes: Sizes,
    /// `None` uses the catalog tolerance for the precision.
    pub tolerance: Option<f64>,
    pub precision: Precision,
    pub case: BracketCase,
    pub sampler: SamplerConfig,
    pub eval: EvalOptions,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 1,
            trials: 50,
            sizes: Sizes::default(),
            tolerance: None,
            precision: Precision::Double,
            case: BracketCase::Elliptic,
            sampler: SamplerConfig::default(),
            eval: EvalOptions { limit: size_limit_from_env(), ..EvalOptions::default() },
        }
    }
}

/// `SizeLimit` from `EHS_MAX_SIZE`, or the default.
pub fn size_limit_from_env() -> SizeLimit {
    std::env::var(MAX_SIZE_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(SizeLimit::uniform)
        .unwrap_or_default()
}

struct Outcome {
    residual: Option<Residual>,
    error: Option<String>,
    sample: Option<ParamSample>,
}

fn eval_at(id: IdentityId, sizes: &Sizes, s: &ParamSample, cfg: &TrialConfig) -> Result<Residual, Error> {
    match cfg.precision {
        Precision::Double => evaluate::<f64>(id, sizes, s, &cfg.eval),
        Precision::Extended => evaluate::<Quad>(id, sizes, s, &cfg.eval),
    }
}

fn run_one(id: IdentityId, sizes: &Sizes, cfg: &TrialConfig, trial: u64) -> Outcome {
    let mut rng = trial_rng(cfg.seed, id, sizes, cfg.case, trial);
    match sample_params(&mut rng, id, sizes, cfg.case, &cfg.sampler, &cfg.eval) {
        Err(e) => Outcome { residual: None, error: Some(e.to_string()), sample: None },
        Ok((s, r)) => {
            let r = match cfg.precision {
                Precision::Double => Ok(r),
                Precision::Extended => eval_at(id, sizes, &s, cfg),
            };
            match r {
                Ok(r) => Outcome { residual: Some(r), error: None, sample: Some(s) },
                Err(e) => Outcome { residual: None, error: Some(e.to_string()), sample: Some(s) },
            }
        }
    }
}

fn resolve(id: IdentityId, cfg: &TrialConfig, sizes: &Sizes) -> Result<(Sizes, f64), RunError> {
    if !id.supports(cfg.case) {
        return Err(RunError::Config(format!("{id} is only defined in the elliptic case")));
    }
    let sizes = sizes.resolve(id, cfg.eval.limit)?;
    let tol = cfg.tolerance.unwrap_or_else(|| id.tolerance(cfg.precision == Precision::Extended));
    if tol.is_nan() || tol <= 0.0 {
        return Err(RunError::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok((sizes, tol))
}

fn assemble(
    id: IdentityId,
    sizes: Sizes,
    cfg: &TrialConfig,
    seed: Option<u64>,
    tol: f64,
    outcomes: Vec<Outcome>,
    start: Instant,
) -> IdentityReport {
    let mut failures = Vec::new();
    let mut max_residual: Option<f64> = None;
    let mut errored = false;
    for (t, o) in outcomes.iter().enumerate() {
        let value = o.residual.map(|r| r.value);
        if let Some(v) = value {
            max_residual = Some(max_residual.map_or(v, |m| m.max(v)));
        }
        let failed = o.error.is_some() || value.is_none_or(|v| v.is_nan() || v >= tol);
        errored |= o.error.is_some();
        if failed {
            failures.push(FailureRecord {
                trial: t as u64,
                error: o.error.clone(),
                residual: value,
                sample: o.sample.as_ref().map(SampleRecord::from_sample),
            });
        }
    }
    let pass = !errored && !outcomes.is_empty() && max_residual.is_some_and(|m| m < tol);
    IdentityReport {
        version: REPORT_VERSION,
        identity: id.name().to_string(),
        sizes,
        case: cfg.case.name().to_string(),
        seed,
        trials: outcomes.len() as u64,
        precision: cfg.precision.name().to_string(),
        tolerance: tol,
        max_residual,
        residuals: outcomes.iter().map(|o| o.residual.map(|r| r.value)).collect(),
        scales: outcomes.iter().map(|o| o.residual.map(|r| r.scale)).collect(),
        pass,
        wall_ms: start.elapsed().as_millis() as u64,
        failures,
    }
}

/// Runs `cfg.trials` independently sampled trials of `id`.
///
/// Trial `t` draws from a stream fixed by `(seed, id, sizes, case, t)`, so
/// the report does not depend on the thread count.
pub fn run_trials(id: IdentityId, cfg: &TrialConfig) -> Result<IdentityReport, RunError> {
    if cfg.trials == 0 {
        return Err(RunError::Config("trials must be at least 1".into()));
    }
    let (sizes, tol) = resolve(id, cfg, &cfg.sizes)?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..cfg.trials).into_par_iter().map(|t| run_one(id, &sizes, cfg, t)).collect();
    Ok(assemble(id, sizes, cfg, Some(cfg.seed), tol, outcomes, start))
}

/// Every catalog identity defined in `cfg.case`, at default sizes.
pub fn run_suite(cfg: &TrialConfig) -> Result<SuiteReport, RunError> {
    let start = Instant::now();
    let ids: Vec<IdentityId> = IdentityId::all().filter(|id| id.supports(cfg.case)).collect();
    let cfg = TrialConfig { sizes: Sizes::default(), ..cfg.clone() };
    let reports = ids.par_iter().map(|&id| run_trials(id, &cfg)).collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteReport {
        version: REPORT_VERSION,
        pass: reports.iter().all(|r| r.pass),
        wall_ms: start.elapsed().as_millis() as u64,
        reports,
    })
}

/// Re-evaluates the samples of a fixture. Samples that error (for example
/// an unbalanced parameter vector) count as failed trials.
pub fn replay(fix: &Fixture, cfg: &TrialConfig) -> Result<IdentityReport, RunError> {
    let id = IdentityId::parse(&fix.identity).ok_or_else(|| RunError::Config(format!("unknown identity `{}`", fix.identity)))?;
    let mut cfg = cfg.clone();
    if let Some(p) = &fix.precision {
        cfg.precision = Precision::parse(p).ok_or_else(|| RunError::Config(format!("unknown precision `{p}`")))?;
    }
    if cfg.tolerance.is_none() {
        cfg.tolerance = fix.tolerance;
    }
    let samples = fix
        .samples
        .iter()
        .map(SampleRecord::to_sample)
        .collect::<Result<Vec<_>, _>>()
        .map_err(RunError::Config)?;
    if samples.is_empty() {
        return Err(RunError::Config("fixture contains no samples".into()));
    }
    if let Some(s) = samples.first() {
        cfg.case = s.case;
    }
    let (sizes, tol) = resolve(id, &cfg, &fix.sizes)?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = samples
        .into_par_iter()
        .map(|s| match eval_at(id, &sizes, &s, &cfg) {
            Ok(r) => Outcome { residual: Some(r), error: None, sample: Some(s) },
            Err(e) => Outcome { residual: None, error: Some(e.to_string()), sample: Some(s) },
        })
        .collect();
    Ok(assemble(id, sizes, &cfg, None, tol, outcomes, start))
}
