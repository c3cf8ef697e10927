//! Argument handling and the `verify` entry point.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use ogring::{CoeffMode, RingParams};
use serde_json::Value;

use crate::certificate::{Status, VerificationCertificate};
use crate::context::Context;
use crate::suites;

pub const DEFAULT_SEED: u64 = 1729;
pub const THREADS_ENV: &str = "OGRING_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    #[value(name = "appendix_pieri")]
    AppendixPieri,
    #[value(name = "rees")]
    Rees,
    #[value(name = "chow")]
    Chow,
    #[value(name = "main_theorem")]
    MainTheorem,
    #[value(name = "all")]
    All,
}

impl Suite {
    pub const EACH: [Suite; 4] = [Suite::AppendixPieri, Suite::Rees, Suite::Chow, Suite::MainTheorem];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AppendixPieri => "appendix_pieri",
            Suite::Rees => "rees",
            Suite::Chow => "chow",
            Suite::MainTheorem => "main_theorem",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "verify", version, about = "Runs verification suites and writes JSON certificates")]
pub struct Args {
    /// Rank of the grassmannian.
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// `exact` or `mod:<K>`; defaults to exact for n <= 8 and mod:(m+3) above.
    #[arg(long)]
    pub coeff: Option<String>,
    /// Certificate output path; stdout when absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// A rejected invocation; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// The validated run plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub n: u32,
    pub suites: Vec<Suite>,
    pub coeff_mode: CoeffMode,
    pub seed: u64,
    pub threads: Option<usize>,
}

fn theorem_suite(s: Suite) -> bool {
    matches!(s, Suite::Rees | Suite::Chow | Suite::MainTheorem)
}

pub fn default_coeff(n: u32) -> CoeffMode {
    match RingParams::exact(n).ok().and_then(|p| p.torsion_exponent()) {
        Some(m) if n > 8 => CoeffMode::Modulus(m + 3),
        _ => CoeffMode::Exact,
    }
}

/// Validates flags and the thread override.
pub fn plan(args: &Args, threads_env: Option<&str>) -> Result<Plan, UsageError> {
    let n = args.n;
    let suites = args.suite.members();
    if suites.contains(&Suite::AppendixPieri) && !(2..=16).contains(&n) {
        return Err(UsageError(format!("appendix_pieri needs 2 <= n <= 16, got {n}")));
    }
    let coeff_mode = match &args.coeff {
        Some(text) => text.parse::<CoeffMode>().map_err(|e| UsageError(format!("invalid --coeff: {e}")))?,
        None => default_coeff(n),
    };
    if suites.iter().any(|&s| theorem_suite(s)) {
        RingParams::for_theorems(n, coeff_mode).map_err(|e| UsageError(format!("invalid rank or modulus for theorem suites: {e}")))?;
    } else {
        RingParams::new(n, coeff_mode).map_err(|e| UsageError(e.to_string()))?;
    }
    let threads = match threads_env {
        Some(text) => Some(
            text.trim()
                .parse::<usize>()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| UsageError(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?,
        ),
        None => args.threads,
    };
    if threads == Some(0) {
        return Err(UsageError("--threads must be positive".into()));
    }
    Ok(Plan { n, suites, coeff_mode, seed: args.seed, threads })
}

/// Runs one suite. The appendix suite always works over exact coefficients.
pub fn run_suite(suite: Suite, ctx: &Context) -> ogring::Result<VerificationCertificate> {
    match suite {
        Suite::AppendixPieri => {
            if ctx.params().coeff_mode == CoeffMode::Exact {
                suites::appendix::suite_appendix_pieri(ctx)
            } else {
                suites::appendix::suite_appendix_pieri(&Context::new(ctx.n(), CoeffMode::Exact, ctx.seed())?)
            }
        }
        Suite::Rees => suites::rees::suite_rees_congruences(ctx),
        Suite::Chow => suites::chow::suite_chow_congruences(ctx),
        Suite::MainTheorem => suites::main_theorem::suite_main_theorem(ctx),
        Suite::All => unreachable!("expanded by plan"),
    }
}

/// Runs every suite of the plan on one shared context.
pub fn execute(plan: &Plan) -> ogring::Result<Vec<VerificationCertificate>> {
    let work = || -> ogring::Result<Vec<VerificationCertificate>> {
        let ctx = Context::new(plan.n, plan.coeff_mode, plan.seed)?;
        plan.suites.iter().map(|&s| run_suite(s, &ctx)).collect()
    };
    match plan.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ogring::Error::MalformedInput(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Exit code for a finished run: 1 if any check failed.
pub fn exit_code(certs: &[VerificationCertificate]) -> i32 {
    if certs.iter().all(|c| c.passed()) {
        0
    } else {
        1
    }
}

/// Certificate JSON: one object for a single suite, an array for `all`.
pub fn render(certs: &[VerificationCertificate], many: bool) -> Value {
    if many {
        serde_json::to_value(certs).expect("certificates serialize")
    } else {
        serde_json::to_value(&certs[0]).expect("certificates serialize")
    }
}

fn summary(certs: &[VerificationCertificate]) -> String {
    let mut out = String::new();
    for c in certs {
        let count = |s: Status| c.checks.iter().filter(|x| x.status == s).count();
        out += &format!(
            "{} (n = {}, {}): {} pass, {} fail, {} assumed-structural, {} skipped\n",
            c.suite,
            c.n,
            c.engine.coeff_mode,
            count(Status::Pass),
            count(Status::Fail),
            count(Status::AssumedStructural),
            count(Status::Skipped)
        );
        for f in c.failures() {
            out += &format!("  FAIL {}: {}\n", f.name, f.witness);
        }
    }
    out
}

/// The whole command: parse, validate, run, write. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    let plan = match plan(&args, env.as_deref()) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if plan.n > 16 {
        eprintln!("warning: n = {} is outside the tested range; expect long runtimes", plan.n);
    }
    let certs = match execute(&plan) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&render(&certs, args.suite == Suite::All)).expect("json");
    let written = match &args.json {
        Some(path) => std::fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write certificate: {e}");
        return 2;
    }
    eprint!("{}", summary(&certs));
    exit_code(&certs)
}
