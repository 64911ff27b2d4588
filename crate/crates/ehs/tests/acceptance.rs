//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use ehs::{run_suite, run_trials, IdentityReport, Precision, TrialConfig};
use ehs_core::combinatorics::MultiIndex;
use ehs_core::{BracketCase, IdentityId, Sizes};

use IdentityId::*;

/// One identity at one size and precision, run in every listed case.
struct Run {
    id: IdentityId,
    sizes: Sizes,
    cases: Vec<BracketCase>,
    trials: u64,
    tol: f64,
    precision: Precision,
}

fn run(id: IdentityId, trials: u64, tol: f64) -> Run {
    let cases = BracketCase::ALL.into_iter().filter(|&c| id.supports(c)).collect();
    Run { id, sizes: Sizes::default(), cases, trials, tol, precision: Precision::Double }
}

impl Run {
    fn sizes(mut self, f: impl FnOnce(&mut Sizes)) -> Self {
        f(&mut self.sizes);
        self
    }

    fn extended(mut self) -> Self {
        self.precision = Precision::Extended;
        self
    }
}

fn mi(p: &[usize]) -> Option<MultiIndex> {
    Some(MultiIndex::new(p))
}

struct Outcome {
    pass: bool,
    max: f64,
    trials: u64,
    detail: Vec<String>,
}

fn execute(runs: &[Run]) -> Outcome {
    let mut out = Outcome { pass: true, max: 0.0, trials: 0, detail: Vec::new() };
    for r in runs {
        for &case in &r.cases {
            let cfg = TrialConfig {
                seed: 1,
                trials: r.trials,
                sizes: r.sizes.clone(),
                tolerance: Some(r.tol),
                precision: r.precision,
                case,
                ..TrialConfig::default()
            };
            match run_trials(r.id, &cfg) {
                Ok(rep) => note(&mut out, &rep, r.tol),
                Err(e) => {
                    out.pass = false;
                    out.detail.push(format!("{} {}: {e}", r.id, case.name()));
                }
            }
        }
    }
    out
}

fn note(out: &mut Outcome, rep: &IdentityReport, tol: f64) {
    out.trials += rep.trials;
    let max = rep.max_residual.unwrap_or(f64::INFINITY);
    out.max = out.max.max(max);
    if !rep.pass {
        out.pass = false;
        let errors = rep.failures.iter().filter(|f| f.error.is_some()).count();
        out.detail.push(format!("{} {}: max {max:.2e} > {tol:.0e}, {errors} errored trials", rep.identity, rep.case));
    }
}

fn criteria() -> Vec<(&'static str, Option<Duration>, Vec<Run>)> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        (
            "bracket function theory",
            secs(2),
            vec![run(Riemann, 200, 1e-10), run(Duplication, 200, 1e-10), run(HalfperiodProduct, 200, 1e-10)],
        ),
        (
            "kernel and constant identities",
            secs(2),
            vec![run(KernelBc1, 100, 1e-9), run(ConstantBc1, 100, 1e-9), run(KernelC1, 100, 1e-9), run(ConstantC1, 100, 1e-9)],
        ),
        ("five-group lemma and partial fractions", None, {
            let mut v: Vec<Run> = (2..=4).map(|m| run(LemmaGeneral, 50, 1e-9).sizes(|s| s.m = Some(m))).collect();
            v.push(run(LemmaHalfperiod, 50, 1e-9));
            v.extend((1..=4).map(|n| run(PartialFraction, 50, 1e-10).sizes(|s| s.n = Some(n))));
            v
        }),
        ("Cauchy determinant", None, (1..=6).map(|n| run(CauchyDet, 100, 1e-9).sizes(|s| s.n = Some(n))).collect()),
        ("subset dualities at N = 3", secs(30), {
            let mut v: Vec<Run> =
                (0..=3).map(|r| run(BcSubset, 50, 1e-8).sizes(|s| (s.n, s.r) = (Some(3), Some(r)))).collect();
            v.push(run(CSubset, 50, 1e-8).sizes(|s| s.n = Some(3)));
            v
        }),
        (
            "four-parameter multi-index dualities",
            None,
            vec![
                run(CDualMn, 50, 1e-8).sizes(|s| (s.alpha, s.beta) = (mi(&[2, 1]), mi(&[1, 2]))),
                run(CDual, 50, 1e-8).sizes(|s| (s.alpha, s.beta) = (mi(&[2, 2]), mi(&[1, 1]))),
                run(CSet3, 50, 1e-8),
                run(CtSum, 50, 1e-8),
                run(CN1, 50, 1e-8),
                run(V1211, 50, 1e-8),
            ],
        ),
        (
            "zero formula",
            None,
            vec![run(ZeroFormula, 50, 1e-8).sizes(|s| (s.alpha, s.beta) = (mi(&[2, 1]), mi(&[1, 1])))],
        ),
        (
            "Karlsson-Minton family",
            None,
            vec![
                run(KmTransform, 50, 1e-8).sizes(|s| {
                    (s.alpha, s.beta, s.r, s.s) = (mi(&[2, 1]), mi(&[1]), Some(1), Some(1));
                }),
                run(Km2m8, 50, 1e-8),
                run(KmSum, 50, 1e-8),
            ],
        ),
        ("eight-parameter duality and C_sigma", None, {
            let ab = |s: &mut Sizes| (s.alpha, s.beta) = (mi(&[2, 1]), mi(&[1, 1, 1]));
            let mut v = vec![run(BcDual, 25, 1e-7).sizes(ab), run(BcDual, 25, 1e-18).sizes(ab).extended()];
            v.extend((0..=8).map(|k| run(CSigma, 25, 1e-10).sizes(|s| s.sigma = Some(k))));
            v
        }),
        (
            "eight-parameter transformations and summations",
            None,
            vec![
                run(BcSetMn, 25, 1e-7).sizes(|s| (s.big_m, s.n) = (Some(3), Some(1))),
                run(BcSumSet, 25, 1e-7).sizes(|s| s.big_m = Some(3)),
                run(BcDualMn, 25, 1e-7).sizes(|s| (s.alpha, s.beta) = (mi(&[2]), mi(&[1]))),
                run(BcSumMulti, 25, 1e-7).sizes(|s| s.alpha = mi(&[2, 1])),
            ],
        ),
        (
            "specialization coherence",
            None,
            vec![
                run(CDualCoherence, 50, 1e-8),
                run(BcDualCoherence, 50, 1e-8),
                run(FCoherence, 50, 1e-8),
                run(CSubsetSpec, 50, 1e-8).sizes(|s| s.n = Some(3)),
            ],
        ),
    ]
}

fn full_suite() -> (bool, String) {
    let cfg = TrialConfig { trials: 25, seed: 1, ..TrialConfig::default() };
    let start = Instant::now();
    let first = run_suite(&cfg);
    let elapsed = start.elapsed();
    let second = run_suite(&cfg);
    match (first, second) {
        (Ok(a), Ok(b)) => {
            let same = a.without_timing() == b.without_timing();
            let fast = elapsed < Duration::from_secs(300);
            let msg = format!(
                "{} identities, all pass: {}, {:.2} s, reproducible: {same}",
                a.reports.len(),
                a.pass,
                elapsed.as_secs_f64()
            );
            (a.pass && same && fast, msg)
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn main() {
    let mut failed = 0;
    for (k, (name, budget, runs)) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let o = execute(&runs);
        let t = start.elapsed();
        let in_time = budget.is_none_or(|b| t <= b);
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        let budget = budget.map(|b| format!(" (budget {} s)", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {:>2} {}  {name}: {} trials, max residual {:.2e}, {:.2} s{budget}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            o.trials,
            o.max,
            t.as_secs_f64()
        );
        for d in o.detail {
            println!("              {d}");
        }
    }
    let (pass, msg) = full_suite();
    failed += usize::from(!pass);
    println!("criterion 12 {}  full suite at 25 trials: {msg}", if pass { "PASS" } else { "FAIL" });
    println!("\n{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
