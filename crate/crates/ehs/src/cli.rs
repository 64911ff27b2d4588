//! The `ehs` command line: `list`, `check`, `suite` and `eval`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ehs_core::combinatorics::MultiIndex;
use ehs_core::identities::{IdentityId, SamplerConfig, Sizes};
use ehs_core::num::{to_c64, Cx};
use ehs_core::operators::c_sigma_rec;
use ehs_core::series::{phi_alpha, v_series, PhiSpec};
use ehs_core::{make_context, BracketCase, ContextSpec, C64};

use crate::report::{FixtureDoc, IdentityReport, SuiteReport};
use crate::runner::{replay, run_suite, run_trials, Precision, RunError, TrialConfig};
use crate::text::{format_complex, parse_complex, parse_complex_list, parse_multi_index};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ehs", version, about = "Numerical verification of elliptic hypergeometric identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the identity catalog.
    List {
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Check one identity over sampled trials, or replay a fixture.
    Check(CheckArgs),
    /// Check every identity defined in the bracket case at default sizes.
    Suite(RunArgs),
    /// Evaluate a single expression at given arguments.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Rational,
    Trig,
    Elliptic,
}

impl From<CaseArg> for BracketCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Rational => BracketCase::Rational,
            CaseArg::Trig => BracketCase::Trigonometric,
            CaseArg::Elliptic => BracketCase::Elliptic,
        }
    }
}

fn complex_arg(s: &str) -> Result<C64, String> {
    parse_complex(s)
}

/// Comma-separated complex values as one flag value.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexList(pub Vec<C64>);

fn complex_list_arg(s: &str) -> Result<ComplexList, String> {
    parse_complex_list(s).map(ComplexList)
}

fn multi_index_arg(s: &str) -> Result<MultiIndex, String> {
    parse_multi_index(s)
}

/// Size keys; omitted keys take the identity's defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct SizeArgs {
    /// Multi-index, e.g. `2,1`.
    #[arg(long, value_parser = multi_index_arg)]
    pub alpha: Option<MultiIndex>,
    #[arg(long, value_parser = multi_index_arg)]
    pub beta: Option<MultiIndex>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "M")]
    pub big_m: Option<usize>,
    #[arg(long = "m")]
    pub m: Option<usize>,
    /// Subset level; omitted means every level.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub sigma: Option<usize>,
}

impl SizeArgs {
    pub fn sizes(&self) -> Sizes {
        Sizes {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            n: self.n,
            big_m: self.big_m,
            m: self.m,
            r: self.r,
            s: self.s,
            sigma: self.sigma,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Pass threshold; defaults to the catalog value for the precision.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    pub precision: PrecisionArg,
    #[arg(long = "case", value_enum, default_value_t = CaseArg::Elliptic)]
    pub case: CaseArg,
    /// Fixed modular parameter instead of a random draw.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub tau: Option<C64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub delta: Option<C64>,
    #[arg(long = "quad-coeff", value_parser = complex_arg, allow_hyphen_values = true)]
    pub quad_coeff: Option<C64>,
    /// Relative distance to the lattice below which a denominator is singular.
    #[arg(long = "tol-sing", default_value_t = 1e-8)]
    pub tol_sing: f64,
    /// Also write the machine report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Replay the samples of a fixture or report file instead of sampling.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long)]
    pub identity: Option<String>,
    #[command(flatten)]
    pub sizes: SizeArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expr {
    /// The bracket `[x]`.
    Bracket,
    /// `C_sigma(x)` for eight `--a` and four `--c` parameters.
    Sigma,
    /// `Phi_alpha(x | u)`.
    Phi,
    /// Terminating V-series with `--a a0,a1,...` summed up to `--N`.
    V,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub expr: Expr,
    #[command(flatten)]
    pub sizes: SizeArgs,
    #[arg(long, value_parser = complex_list_arg, allow_hyphen_values = true)]
    pub x: Option<ComplexList>,
    #[arg(long, value_parser = complex_list_arg, allow_hyphen_values = true)]
    pub u: Option<ComplexList>,
    #[arg(long, value_parser = complex_list_arg, allow_hyphen_values = true)]
    pub a: Option<ComplexList>,
    #[arg(long, value_parser = complex_list_arg, allow_hyphen_values = true)]
    pub c: Option<ComplexList>,
    #[arg(long = "case", value_enum, default_value_t = CaseArg::Elliptic)]
    pub case: CaseArg,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub tau: Option<C64>,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub delta: Option<C64>,
    #[arg(long = "quad-coeff", value_parser = complex_arg, allow_hyphen_values = true)]
    pub quad_coeff: Option<C64>,
    #[arg(long = "tol-sing", default_value_t = 1e-8)]
    pub tol_sing: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

/// Default evaluation context for `eval`.
pub const EVAL_TAU: C64 = C64::new(0.0, 1.0);
pub const EVAL_DELTA: C64 = C64::new(0.31, 0.07);

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl RunArgs {
    fn trial_config(&self, sizes: Sizes) -> TrialConfig {
        let mut cfg = TrialConfig {
            seed: self.seed,
            trials: self.trials,
            sizes,
            tolerance: self.tolerance,
            precision: self.precision.into(),
            case: self.case.into(),
            sampler: SamplerConfig { tau: self.tau, delta: self.delta, fixed_quad_coeff: self.quad_coeff, ..SamplerConfig::default() },
            ..TrialConfig::default()
        };
        cfg.eval.tol_sing = self.tol_sing;
        cfg
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Io(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(std::env::args_os(), &mut out, &mut err)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::List { format } => list(format, out).map(|_| EXIT_PASS),
        Command::Check(args) => check(&args, out),
        Command::Suite(args) => suite(&args, out),
        Command::Eval(args) => eval(&args, out),
    }
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

#[derive(Serialize)]
struct ListEntry {
    identity: &'static str,
    summary: &'static str,
    sizes: Vec<&'static str>,
    elliptic_only: bool,
    tolerance_double: f64,
    tolerance_extended: f64,
}

fn list(format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let entries: Vec<ListEntry> = IdentityId::all()
        .map(|id| {
            let i = id.info();
            ListEntry {
                identity: i.name,
                summary: i.summary,
                sizes: i.keys.iter().map(|k| k.name()).collect(),
                elliptic_only: i.elliptic_only,
                tolerance_double: i.tol_double,
                tolerance_extended: i.tol_extended,
            }
        })
        .collect();
    match format {
        Format::Machine => writeln!(out, "{}", serde_json::to_string_pretty(&entries).map_err(io)?).map_err(io),
        Format::Human => {
            writeln!(out, "{:<20} {:<18} {:<9} {:>8} {:>8}  summary", "identity", "sizes", "cases", "tol", "tol-ext").map_err(io)?;
            for e in &entries {
                let cases = if e.elliptic_only { "elliptic" } else { "all" };
                writeln!(
                    out,
                    "{:<20} {:<18} {:<9} {:>8.0e} {:>8.0e}  {}",
                    e.identity,
                    e.sizes.join(","),
                    cases,
                    e.tolerance_double,
                    e.tolerance_extended,
                    e.summary
                )
                .map_err(io)?;
            }
            Ok(())
        }
    }
}

fn load_fixtures(path: &Path) -> Result<Vec<crate::report::Fixture>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: FixtureDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{} is not a fixture or report: {e}", path.display())))?;
    let fixtures = doc.fixtures();
    if fixtures.is_empty() {
        return Err(CliError::Usage(format!("{} contains no samples to replay", path.display())));
    }
    Ok(fixtures)
}

fn replay_all(path: &Path, run: &RunArgs) -> Result<SuiteReport, CliError> {
    let cfg = run.trial_config(Sizes::default());
    let start = std::time::Instant::now();
    let reports = load_fixtures(path)?.iter().map(|f| replay(f, &cfg)).collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteReport {
        version: crate::report::REPORT_VERSION,
        pass: reports.iter().all(|r| r.pass),
        wall_ms: start.elapsed().as_millis() as u64,
        reports,
    })
}

fn emit<D: Serialize>(doc: &D, reports: &[IdentityReport], run: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(doc).map_err(io)?;
    if let Some(p) = &run.out {
        std::fs::write(p, format!("{json}\n")).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    match run.format {
        Format::Machine => writeln!(out, "{json}").map_err(io),
        Format::Human => human_table(reports, out),
    }
}

fn human_table(reports: &[IdentityReport], out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{:<20} {:<9} {:>6} {:>12} {:>8} {:<4} {:>7}", "identity", "case", "trials", "max-resid", "tol", "pass", "ms").map_err(io)?;
    for r in reports {
        let max = r.max_residual.map_or_else(|| "-".to_string(), |m| format!("{m:.3e}"));
        let pass = if r.pass { "ok" } else { "FAIL" };
        writeln!(
            out,
            "{:<20} {:<9} {:>6} {:>12} {:>8.0e} {:<4} {:>7}",
            r.identity, r.case, r.trials, max, r.tolerance, pass, r.wall_ms
        )
        .map_err(io)?;
        for f in r.failures.iter().take(3) {
            let why = f.error.clone().unwrap_or_else(|| format!("residual {:.3e}", f.residual.unwrap_or(f64::NAN)));
            writeln!(out, "    trial {}: {why}", f.trial).map_err(io)?;
        }
    }
    Ok(())
}

fn exit_for(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(path) = &args.run.fixture {
        let suite = replay_all(path, &args.run)?;
        if suite.reports.len() == 1 {
            emit(&suite.reports[0], &suite.reports, &args.run, out)?;
        } else {
            emit(&suite, &suite.reports, &args.run, out)?;
        }
        return Ok(exit_for(suite.pass));
    }
    let name = args.identity.as_deref().ok_or_else(|| CliError::Usage("check needs --identity (see `ehs list`)".into()))?;
    let id = IdentityId::parse(name).ok_or_else(|| CliError::Usage(format!("unknown identity `{name}` (see `ehs list`)")))?;
    let report = run_trials(id, &args.run.trial_config(args.sizes.sizes()))?;
    emit(&report, std::slice::from_ref(&report), &args.run, out)?;
    Ok(exit_for(report.pass))
}

fn suite(args: &RunArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = match &args.fixture {
        Some(path) => replay_all(path, args)?,
        None => run_suite(&args.trial_config(Sizes::default()))?,
    };
    emit(&report, &report.reports, args, out)?;
    Ok(exit_for(report.pass))
}

#[derive(Serialize)]
struct EvalOutput {
    expr: &'static str,
    value: String,
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let usage = |m: &str| CliError::Usage(m.to_string());
    let case: BracketCase = args.case.into();
    let quad = args.quad_coeff.unwrap_or(C64::new(0.0, 0.0));
    let delta = args.delta.unwrap_or(EVAL_DELTA);
    let mut spec = match case {
        BracketCase::Elliptic => ContextSpec::elliptic(args.tau.unwrap_or(EVAL_TAU), quad, delta),
        c => ContextSpec::degenerate(c, quad, delta),
    };
    spec.tol_sing = args.tol_sing;
    let ctx = make_context::<f64>(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let lift = |v: &[C64]| v.iter().map(|&z| Cx::<f64>::new(z.re, z.im)).collect::<Vec<_>>();
    let x = args.x.clone().unwrap_or_default().0;
    let sizes = &args.sizes;
    let value = match args.expr {
        Expr::Bracket => {
            let [u] = x.as_slice() else { return Err(usage("bracket needs one --x value")) };
            ctx.bracket(*u)
        }
        Expr::Sigma => {
            let [z] = x.as_slice() else { return Err(usage("sigma needs one --x value")) };
            let a = args.a.as_ref().map(|l| l.0.as_slice()).filter(|a| a.len() == 8).ok_or_else(|| usage("sigma needs eight --a values"))?;
            let c = args.c.as_ref().map(|l| l.0.as_slice()).filter(|c| c.len() == 4).ok_or_else(|| usage("sigma needs four --c values"))?;
            let sigma = sizes.sigma.ok_or_else(|| usage("sigma needs --sigma"))?;
            let c: [Cx<f64>; 4] = [c[0], c[1], c[2], c[3]];
            c_sigma_rec(&ctx, &lift(a), &c, *z, sigma)
        }
        Expr::Phi => {
            let alpha = sizes.alpha.clone().ok_or_else(|| usage("phi needs --alpha"))?;
            if x.len() != alpha.len() {
                return Err(usage("phi needs one --x value per part of --alpha"));
            }
            let u = args.u.clone().unwrap_or_default().0;
            phi_alpha(&ctx, &PhiSpec { alpha, x: lift(&x), u: lift(&u) })
        }
        Expr::V => {
            let a = args.a.as_ref().map(|l| l.0.as_slice()).filter(|a| !a.is_empty()).ok_or_else(|| usage("v needs --a a0,a1,..."))?;
            let kmax = sizes.n.ok_or_else(|| usage("v needs the summation bound --N"))?;
            v_series(&ctx, a[0], &lift(&a[1..]), kmax)
        }
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let text = format_complex(to_c64(value));
    let name = match args.expr {
        Expr::Bracket => "bracket",
        Expr::Sigma => "sigma",
        Expr::Phi => "phi",
        Expr::V => "v",
    };
    match args.format {
        Format::Human => writeln!(out, "{text}").map_err(io)?,
        Format::Machine => {
            writeln!(out, "{}", serde_json::to_string(&EvalOutput { expr: name, value: text }).map_err(io)?).map_err(io)?
        }
    }
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("ehs").chain(args.iter().copied()))
    }

    #[test]
    fn check_args_parse() {
        let cli = parse(&["check", "--identity", "c-dual", "--alpha", "2,1", "--beta", "1,1", "--trials", "20", "--seed", "7"]).unwrap();
        let Command::Check(a) = cli.command else { panic!() };
        assert_eq!(a.identity.as_deref(), Some("c-dual"));
        assert_eq!(a.sizes.alpha, Some(MultiIndex::new(&[2, 1])));
        assert_eq!(a.run.trials, 20);
        assert_eq!(a.run.seed, 7);
    }

    #[test]
    fn suite_args_parse() {
        let cli = parse(&["suite", "--precision", "extended", "--trials", "10"]).unwrap();
        let Command::Suite(a) = cli.command else { panic!() };
        assert_eq!(a.precision, PrecisionArg::Extended);
    }

    #[test]
    fn unknown_flag_is_an_error() {
        assert!(parse(&["check", "--identity", "riemann", "--bogus"]).is_err());
        assert!(parse(&["suite", "--case", "hyperbolic"]).is_err());
    }

    #[test]
    fn negative_complex_values_parse() {
        let cli = parse(&["eval", "--expr", "bracket", "--x", "-0.3-0.1i", "--delta", "-0.2+0.1i"]).unwrap();
        let Command::Eval(a) = cli.command else { panic!() };
        assert_eq!(a.x, Some(ComplexList(vec![C64::new(-0.3, -0.1)])));
    }

    #[test]
    fn missing_identity_is_usage_error() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["ehs", "check"], &mut o, &mut e), EXIT_USAGE);
    }
}
