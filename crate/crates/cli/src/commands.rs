use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use prodsq_core::bounds::{conditional_inequality_report_with_guard, find_threshold_with_guard};
use prodsq_core::{angle_sum, classify, find_nonsquare_witness, full_verification, PrimeTable, SquareStatus};

use crate::config::{OutputFormat, RunConfig};
use crate::output::{pretty, status_csv, status_json, status_line, STATUS_CSV_HEADER};
use crate::Failure;

/// Crossing point of the restricted prime sum reported in the literature.
pub const REFERENCE_THRESHOLD: u64 = 1831;

fn table(cfg: &RunConfig, needed: u64) -> Result<PrimeTable, Failure> {
    Ok(PrimeTable::build(cfg.sieve_limit.min(needed.max(2)))?)
}

fn square_bound(n: u64) -> u64 {
    n.saturating_mul(n).saturating_add(1)
}

fn require_positive(n: u64) -> Result<(), Failure> {
    if n == 0 {
        Err(Failure::usage("n must be at least 1"))
    } else {
        Ok(())
    }
}

pub fn check(cfg: &RunConfig, n: u64, witness_only: bool) -> Result<String, Failure> {
    require_positive(n)?;
    let primes = table(cfg, square_bound(n))?;
    if witness_only {
        let witness = find_nonsquare_witness(n, &primes);
        return Ok(match cfg.output_format {
            OutputFormat::Table => match witness {
                Some(w) => format!("n={n}: witness p={}, α={}\n", w.p, w.alpha),
                None => format!("n={n}: no witness found\n"),
            },
            OutputFormat::Csv => {
                let (p, a) = witness.map_or((String::new(), String::new()), |w| (w.p.to_string(), w.alpha.to_string()));
                format!("n,witness_p,witness_alpha\n{n},{p},{a}\n")
            }
            OutputFormat::Json => pretty(&json!({ "n": n.to_string(), "witness": witness })) + "\n",
        });
    }
    let status = classify(n, &primes, cfg.n_direct)?;
    Ok(render_statuses(cfg.output_format, std::slice::from_ref(&status)))
}

fn render_statuses(format: OutputFormat, rows: &[SquareStatus]) -> String {
    let mut text = String::new();
    match format {
        OutputFormat::Table => {
            for s in rows {
                let _ = writeln!(text, "{}", status_line(s));
            }
        }
        OutputFormat::Csv => {
            let _ = writeln!(text, "{STATUS_CSV_HEADER}");
            for s in rows {
                let _ = writeln!(text, "{}", status_csv(s));
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = rows.iter().map(status_json).collect();
            text = pretty(&json!(rows)) + "\n";
        }
    }
    text
}

pub fn scan(cfg: &RunConfig, lo: u64, hi: u64, jobs: Option<usize>) -> Result<String, Failure> {
    if lo == 0 || lo > hi {
        return Err(Failure::usage(format!("scan needs 1 <= lo <= hi, got {lo}..{hi}")));
    }
    let primes = table(cfg, square_bound(hi))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Failure::usage(e.to_string()))?;
    // collect() on an indexed parallel iterator preserves order
    let rows: Vec<SquareStatus> = pool.install(|| {
        (lo..=hi)
            .into_par_iter()
            .map(|n| classify(n, &primes, cfg.n_direct))
            .collect::<Result<_, _>>()
    })?;
    let mut text = render_statuses(cfg.output_format, &rows);
    if cfg.output_format == OutputFormat::Table {
        let squares: Vec<String> = rows
            .iter()
            .filter_map(|s| s.root.as_ref().map(|b| format!("n={} (b={b})", s.n)))
            .collect();
        let _ = writeln!(
            text,
            "{} of {} products are squares{}{}",
            squares.len(),
            rows.len(),
            if squares.is_empty() { "" } else { ": " },
            squares.join(", ")
        );
    }
    Ok(text)
}

pub fn threshold(cfg: &RunConfig) -> Result<String, Failure> {
    let primes = table(cfg, 100_000)?;
    let th = find_threshold_with_guard(&primes, cfg.precision_guard)?;
    let text = match cfg.output_format {
        OutputFormat::Table => format!(
            "crossing at n={}\n\
             restricted_log_sum({}) = {:.12} <= {:.12} < {:.12} = restricted_log_sum({})\n\
             margins: below {:.3e}, above {:.3e}; precision_flag={}\n",
            th.n,
            th.n - 1,
            th.sum_below,
            th.constant,
            th.sum_at,
            th.n,
            th.margin_below(),
            th.margin_above(),
            th.precision_flag
        ),
        OutputFormat::Csv => format!(
            "n,sum_below,sum_at,constant,margin_below,margin_above,precision_flag\n{},{},{},{},{},{},{}\n",
            th.n,
            th.sum_below,
            th.sum_at,
            th.constant,
            th.margin_below(),
            th.margin_above(),
            th.precision_flag
        ),
        OutputFormat::Json => pretty(&serde_json::to_value(&th).expect("threshold serializes")) + "\n",
    };
    if th.n != REFERENCE_THRESHOLD {
        // print what was found before failing
        print!("{text}");
        return Err(Failure::verification(
            "threshold_mismatch",
            json!({ "computed": th.n.to_string(), "reference": REFERENCE_THRESHOLD.to_string() }),
        ));
    }
    Ok(text)
}

pub fn report(cfg: &RunConfig, n: u64) -> Result<String, Failure> {
    require_positive(n)?;
    let primes = table(cfg, 2 * n)?;
    let r = conditional_inequality_report_with_guard(&primes, n, cfg.precision_guard)?;
    Ok(match cfg.output_format {
        OutputFormat::Table => {
            let mut text = format!("n={n}\nlhs = {}\n", r.lhs);
            for t in &r.rhs_terms {
                let _ = writeln!(text, "  {} = {}", t.name, t.value);
            }
            let _ = writeln!(text, "rhs_total = {}", r.rhs_total);
            let _ = writeln!(text, "verdict: {} (precision_flag={})", r.verdict, r.precision_flag);
            if let Some(v) = &r.variant {
                let _ = writeln!(text, "variant with pi(n;1,4): lhs = {}, rhs_total = {}, verdict: {}", v.lhs, v.rhs_total, v.verdict);
            }
            text
        }
        OutputFormat::Csv => format!("{}\n{}\n", r.csv_header(), r.csv_row()),
        OutputFormat::Json => pretty(&r.to_json()) + "\n",
    })
}

pub fn chain(cfg: &RunConfig, out: Option<&Path>) -> Result<(), Failure> {
    if cfg.target_hi < 4 {
        return Err(Failure::usage(format!("chain target must be at least 4, got {}", cfg.target_hi)));
    }
    cfg.validate()?;
    let primes = table(cfg, 2 * cfg.target_hi + 2)?;
    let report = full_verification(cfg.target_hi, cfg.n_direct, &primes)?;
    let chain_json = report.chain.to_json() + "\n";
    if let Some(path) = out {
        std::fs::write(path, &chain_json)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match cfg.output_format {
        OutputFormat::Table => {
            let mut text = String::new();
            for c in &report.chain.certificates {
                let _ = writeln!(text, "p={:<8} m={:<6} covers [{}, {}]", c.p, c.m, c.lo, c.hi);
            }
            let _ = writeln!(
                text,
                "{} certificates cover [{}, {}]; direct checks n <= {}: only square is {}",
                report.chain.certificates.len(),
                report.chain.target_lo,
                report.chain.target_hi,
                report.n_direct.max(3),
                report
                    .squares
                    .iter()
                    .map(|s| format!("n={} (b={})", s.n, s.root.as_deref().unwrap_or("?")))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let _ = writeln!(text, "{}", if report.passed() { "verified" } else { "FAILED" });
            text
        }
        OutputFormat::Csv => {
            let mut text = String::from("p,m,lo,hi,next_root\n");
            for c in &report.chain.certificates {
                let _ = writeln!(text, "{},{},{},{},{}", c.p, c.m, c.lo, c.hi, c.next_root);
            }
            text
        }
        OutputFormat::Json => chain_json,
    };
    print!("{text}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::verification("verification_failed", json!({ "failures": report.failures })))
    }
}

pub fn angles(cfg: &RunConfig, n: u64) -> Result<String, Failure> {
    require_positive(n)?;
    let sum = angle_sum(n);
    let ratio = sum / std::f64::consts::PI;
    Ok(match cfg.output_format {
        OutputFormat::Table => format!("angle_sum({n}) = {sum:.15} ({ratio:.15} π)\n"),
        OutputFormat::Csv => format!("n,angle_sum,ratio_to_pi\n{n},{sum},{ratio}\n"),
        OutputFormat::Json => {
            pretty(&json!({ "n": n.to_string(), "angle_sum": sum, "ratio_to_pi": ratio })) + "\n"
        }
    })
}
