use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

mod commands;
mod config;
mod output;

use config::{OutputFormat, RunConfig};

const SCAN_HELP: &str = "CSV columns: n,status,b,witness_p,witness_alpha,direct_checked";
const BOUNDS_HELP: &str = "CSV columns: --threshold → n,sum_below,sum_at,constant,margin_below,margin_above,precision_flag; \
--report → n,lhs,(n+1)*log2/4,log(n^2+1)*pi(n),sum_{n<p<2n} log p,rhs_total,verdict,precision_flag";
const CHAIN_HELP: &str = "CSV columns: p,m,lo,hi,next_root";
const ANGLES_HELP: &str = "CSV columns: n,angle_sum,ratio_to_pi";

/// Decide when ∏_{k=1}^n (k² + 1) is a perfect square.
#[derive(Debug, Parser)]
#[command(name = "prodsq", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Largest integer sieved for primes.
    #[arg(long, global = true, env = "PRODSQ_SIEVE_LIMIT", default_value_t = prodsq_core::DEFAULT_SIEVE_LIMIT)]
    sieve_limit: u64,

    /// Largest n whose product is square-tested directly.
    #[arg(long, global = true, default_value_t = prodsq_core::DEFAULT_N_DIRECT)]
    n_direct: u64,

    /// Margin below which floating-point verdicts are re-decided exactly.
    #[arg(long, global = true, default_value_t = prodsq_core::DEFAULT_PRECISION_GUARD)]
    precision_guard: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write output to a file instead of stdout; for `chain`, the chain file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Square status of P_n with its evidence.
    #[command(after_help = SCAN_HELP)]
    Check {
        n: u64,
        /// Only search for an odd-valuation prime.
        #[arg(long)]
        witness_only: bool,
    },
    /// Same as `check --witness-only`.
    #[command(after_help = SCAN_HELP)]
    Witness { n: u64 },
    /// One status row per n in [lo, hi], in increasing n.
    #[command(after_help = SCAN_HELP)]
    Scan { lo: u64, hi: u64 },
    /// Restricted prime sum threshold, or both sides of the conditional inequality at n.
    #[command(after_help = BOUNDS_HELP)]
    Bounds {
        #[arg(long, conflicts_with = "report", required_unless_present = "report")]
        threshold: bool,
        #[arg(long, value_name = "N")]
        report: Option<u64>,
    },
    /// Build and verify a covering chain of non-square certificates for [4, N].
    #[command(after_help = CHAIN_HELP)]
    Chain {
        #[arg(long = "max", value_name = "N", default_value_t = config::DEFAULT_TARGET_HI)]
        max: u64,
    },
    /// Σ_{k ≤ n} arctan(1/k) and its ratio to π.
    #[command(after_help = ANGLES_HELP)]
    Angles { n: u64 },
}

/// A command that did not verify, or could not run.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(serde_json::Value),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn verification(kind: &str, detail: serde_json::Value) -> Self {
        Failure::Verification(json!({ "error": kind, "detail": detail }))
    }
}

impl From<prodsq_core::Error> for Failure {
    fn from(e: prodsq_core::Error) -> Self {
        match e {
            prodsq_core::Error::CoverageGap { gap_lo, gap_hi } => Failure::verification(
                "coverage_gap",
                json!({ "gap_lo": gap_lo.to_string(), "gap_hi": gap_hi.to_string() }),
            ),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let mut cfg = RunConfig {
        sieve_limit: g.sieve_limit,
        n_direct: g.n_direct,
        precision_guard: g.precision_guard,
        output_format: g.format,
        ..RunConfig::default()
    };
    if let Command::Chain { max } = cli.command {
        cfg.target_hi = max;
        cfg.n_direct = cfg.n_direct.min(max);
    }
    if cfg.precision_guard.is_nan() || cfg.precision_guard <= 0.0 {
        return Err(Failure::usage("--precision-guard must be positive"));
    }
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be at least 1"));
        }
    }
    let out = g.out.as_deref();
    let text = match cli.command {
        Command::Check { n, witness_only } => commands::check(&cfg, n, witness_only)?,
        Command::Witness { n } => commands::check(&cfg, n, true)?,
        Command::Scan { lo, hi } => commands::scan(&cfg, lo, hi, g.jobs)?,
        Command::Bounds { threshold: true, .. } => commands::threshold(&cfg)?,
        Command::Bounds { report: Some(n), .. } => commands::report(&cfg, n)?,
        Command::Bounds { .. } => unreachable!("clap enforces --threshold or --report"),
        Command::Chain { .. } => return commands::chain(&cfg, out),
        Command::Angles { n } => commands::angles(&cfg, n)?,
    };
    emit(&text, out)
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(reason)) => {
            eprintln!("{reason}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_gap_is_a_verification_failure() {
        let f: Failure = prodsq_core::Error::CoverageGap { gap_lo: 91, gap_hi: 100 }.into();
        match f {
            Failure::Verification(v) => {
                assert_eq!(v["error"], "coverage_gap");
                assert_eq!(v["detail"]["gap_lo"], "91");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_errors_are_usage_errors() {
        let f: Failure = prodsq_core::Error::InvalidArgument("x".into()).into();
        assert!(matches!(f, Failure::Usage(_)));
    }

    #[test]
    fn cli_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
