//! Machine-readable reports and replayable fixtures.

use serde::{Deserialize, Serialize};

use ehs_core::identities::ParamSample;
use ehs_core::{BracketCase, Sizes};

use crate::text::{format_complex, parse_complex};

pub const REPORT_VERSION: u32 = 1;

/// A sample with every number as a round-trip decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub case: String,
    pub tau: String,
    pub delta: String,
    pub quad_coeff: String,
    pub a: Vec<String>,
    pub c: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub extra: Vec<String>,
}

impl SampleRecord {
    pub fn from_sample(s: &ParamSample) -> Self {
        let list = |v: &[ehs_core::C64]| v.iter().map(|&z| format_complex(z)).collect();
        SampleRecord {
            case: s.case.name().to_string(),
            tau: format_complex(s.tau),
            delta: format_complex(s.delta),
            quad_coeff: format_complex(s.quad_coeff),
            a: list(&s.a),
            c: list(&s.c),
            x: list(&s.x),
            y: list(&s.y),
            extra: list(&s.extra),
        }
    }

    pub fn to_sample(&self) -> Result<ParamSample, String> {
        let list = |v: &[String]| v.iter().map(|t| parse_complex(t)).collect::<Result<Vec<_>, _>>();
        Ok(ParamSample {
            case: BracketCase::parse(&self.case).ok_or_else(|| format!("unknown case `{}`", self.case))?,
            tau: parse_complex(&self.tau)?,
            delta: parse_complex(&self.delta)?,
            quad_coeff: parse_complex(&self.quad_coeff)?,
            a: list(&self.a)?,
            c: list(&self.c)?,
            x: list(&self.x)?,
            y: list(&self.y)?,
            extra: list(&self.extra)?,
        })
    }
}

/// A trial that errored or missed the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub version: u32,
    pub identity: String,
    pub sizes: Sizes,
    pub case: String,
    /// `None` for fixture replays.
    pub seed: Option<u64>,
    pub trials: u64,
    pub precision: String,
    pub tolerance: f64,
    pub max_residual: Option<f64>,
    /// Per-trial residual; `None` where the trial errored.
    pub residuals: Vec<Option<f64>>,
    /// Per-trial normalization (largest summand magnitude).
    pub scales: Vec<Option<f64>>,
    pub pass: bool,
    pub wall_ms: u64,
    pub failures: Vec<FailureRecord>,
}

impl IdentityReport {
    /// Copy with the timing field cleared, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        IdentityReport { wall_ms: 0, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub pass: bool,
    pub wall_ms: u64,
    pub reports: Vec<IdentityReport>,
}

impl SuiteReport {
    pub fn without_timing(&self) -> Self {
        SuiteReport { wall_ms: 0, reports: self.reports.iter().map(IdentityReport::without_timing).collect(), ..self.clone() }
    }
}

/// Samples to re-evaluate, as written by hand or extracted from a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub identity: String,
    #[serde(default)]
    pub sizes: Sizes,
    #[serde(default)]
    pub precision: Option<String>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    pub samples: Vec<SampleRecord>,
}

impl Fixture {
    /// The failed samples of a report.
    pub fn from_report(r: &IdentityReport) -> Self {
        Fixture {
            identity: r.identity.clone(),
            sizes: r.sizes.clone(),
            precision: Some(r.precision.clone()),
            tolerance: Some(r.tolerance),
            samples: r.failures.iter().filter_map(|f| f.sample.clone()).collect(),
        }
    }
}

/// Any document accepted by `--fixture`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FixtureDoc {
    Fixture(Fixture),
    Report(IdentityReport),
    Suite(SuiteReport),
}

impl FixtureDoc {
    pub fn fixtures(self) -> Vec<Fixture> {
        match self {
            FixtureDoc::Fixture(f) => vec![f],
            FixtureDoc::Report(r) => vec![Fixture::from_report(&r)],
            FixtureDoc::Suite(s) => s.reports.iter().map(Fixture::from_report).filter(|f| !f.samples.is_empty()).collect(),
        }
    }
}
