//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line to
//! stderr (uncaptured) and fails on FAIL.

use std::io::Write;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use prodsq_core::bounds::{bound_constant, bound_constant_hp, restricted_log_sum, restricted_log_sum_hp};
use prodsq_core::primes::ChebyshevSeries;
use prodsq_core::{
    alpha_bruteforce, alpha_exact, angle_sum, check_factorial_bound, check_half_alpha_bound, check_p_squared_theorem,
    isqrt, product_pn, verify_certificate, CoverageChain, PrimeTable, DEFAULT_PRECISION_GUARD,
};

fn prodsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodsq"))
        .args(args)
        .env_remove("PRODSQ_SIEVE_LIMIT")
        .output()
        .expect("binary runs")
}

fn criterion(id: &str, name: &str, budget: Duration, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let result = result.and_then(|detail| {
        if elapsed <= budget {
            Ok(detail)
        } else {
            Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
        }
    });
    let line = match &result {
        Ok(detail) => format!("ACCEPTANCE {id} PASS  {name}: {detail} [{elapsed:.2?}]\n"),
        Err(detail) => format!("ACCEPTANCE {id} FAIL  {name}: {detail} [{elapsed:.2?}]\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(detail) = result {
        panic!("criterion {id} failed: {detail}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

#[test]
fn c1_unique_solution_up_to_300() {
    criterion("1", "scan 1 300 finds exactly one square (n=3, b=10)", Duration::from_secs(60), || {
        let o = prodsq(&["scan", "1", "300", "--format", "csv"]);
        ensure!(o.status.success(), "scan exited with {:?}", o.status);
        let text = String::from_utf8(o.stdout).unwrap();
        let rows: Vec<Vec<String>> =
            text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
        ensure!(rows.len() == 300, "expected 300 rows, got {}", rows.len());
        let mut squares = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let n = i as u64 + 1;
            ensure!(row[0] == n.to_string(), "row {i} is for n = {}", row[0]);
            ensure!(row[5] == "true", "n = {n} not checked directly");
            let value = product_pn(n).value;
            let r = isqrt(&value);
            let direct_square = &r * &r == value;
            ensure!(direct_square == (row[1] == "square"), "n = {n}: scan says {}, isqrt disagrees", row[1]);
            if direct_square {
                squares.push((n, r));
            }
        }
        ensure!(squares == vec![(3, BigUint::from(10u32))], "squares found: {squares:?}");
        Ok("300 rows, isqrt cross-check agrees, only (b, n) = (10, 3)".into())
    });
}

#[test]
fn c2_covering_chain_to_1830() {
    criterion("2", "chain --max 1830 builds and verifies", Duration::from_secs(10), || {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chain.json");
        let o = prodsq(&["chain", "--max", "1830", "--out", path.to_str().unwrap()]);
        ensure!(o.status.code() == Some(0), "exit code {:?}", o.status.code());
        let chain = CoverageChain::from_json(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
        let c = &chain.certificates;
        ensure!(c.len() >= 2 && c.len() <= 8, "{} certificates", c.len());
        ensure!((c[0].p, c[0].lo, c[0].hi) == (17, 4, 12), "first certificate {}", c[0]);
        ensure!((c[1].p, c[1].lo, c[1].hi) == (101, 10, 90), "second certificate {}", c[1]);
        ensure!(chain.target_lo == 4 && chain.target_hi == 1830, "header {}..{}", chain.target_lo, chain.target_hi);
        ensure!(chain.first_gap().is_none(), "gap at {:?}", chain.first_gap());
        for cert in c {
            verify_certificate(cert).map_err(|why| format!("{cert}: {why}"))?;
        }
        let list: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        Ok(format!("{} certificates: {}", c.len(), list.join("; ")))
    });
}

#[test]
fn c3_valuation_oracle_equivalence() {
    criterion("3", "alpha_exact = alpha_bruteforce, p <= 200, n <= 500", Duration::from_secs(30), || {
        let table = PrimeTable::build(200).unwrap();
        let mut pairs = 0;
        for &p in table.primes() {
            for n in 0..=500 {
                let exact = alpha_exact(p, n).map_err(|e| e.to_string())?.alpha;
                let brute = alpha_bruteforce(p, n);
                ensure!(exact == brute, "p = {p}, n = {n}: {exact} vs {brute}");
                pairs += 1;
            }
        }
        Ok(format!("{pairs} pairs equal"))
    });
}

#[test]
fn c4_alpha_two_closed_form() {
    criterion("4", "alpha_2(n) = ceil(n/2), n <= 10^4", Duration::from_secs(30), || {
        for n in 0..=10_000u64 {
            let a = alpha_exact(2, n).map_err(|e| e.to_string())?.alpha;
            ensure!(a == n.div_ceil(2), "n = {n}: {a}");
        }
        Ok("10001 values".into())
    });
}

#[test]
fn c5_threshold_reproduction() {
    criterion("5", "restricted sum first exceeds 4 + log2/4 at n = 1831", Duration::from_secs(5), || {
        let o = prodsq(&["bounds", "--threshold", "--format", "json"]);
        ensure!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
        let th: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        ensure!(th["n"] == "1831", "computed crossing {} (reference 1831)", th["n"]);
        let below = th["sum_below"].as_f64().unwrap();
        let at = th["sum_at"].as_f64().unwrap();
        let c = bound_constant();
        ensure!(format!("{c:.6}") == "4.173287", "constant {c}");
        ensure!(below <= c && c < at, "bracket fails: {below} / {c} / {at}");

        let table = PrimeTable::build(2000).unwrap();
        ensure!(restricted_log_sum(&table, 1830).unwrap() == below, "sum(1830) mismatch");
        ensure!(restricted_log_sum(&table, 1831).unwrap() == at, "sum(1831) mismatch");
        let margins_ok = c - below > DEFAULT_PRECISION_GUARD && at - c > DEFAULT_PRECISION_GUARD;
        let hp_c = bound_constant_hp();
        let hp_ok = restricted_log_sum_hp(&table, 1830).unwrap() < hp_c && restricted_log_sum_hp(&table, 1831).unwrap() > hp_c;
        ensure!(margins_ok || hp_ok, "margins below guard and high precision did not confirm");
        ensure!(hp_ok, "high-precision recomputation disagrees");
        Ok(format!(
            "sum(1830) = {below:.9} <= {c:.9} < {at:.9} = sum(1831); margins {:.2e}/{:.2e}; fixed-point agrees",
            c - below,
            at - c
        ))
    });
}

#[test]
fn c6_inequality_suites() {
    criterion("6", "inequality suites (a)-(e)", Duration::from_secs(60), || {
        let small = PrimeTable::build(1000).unwrap();
        // (a)
        for &p in small.primes().iter().filter(|&&p| p <= 200 && p % 4 == 1) {
            for n in 1..=500 {
                let r = check_half_alpha_bound(p, n).map_err(|e| e.to_string())?;
                ensure!(r.verdict, "(a) p = {p}, n = {n}: {} > {}", r.lhs, r.rhs_total);
            }
        }
        // (b)
        let limit = 100_000;
        let big = PrimeTable::build(limit).unwrap();
        let series = ChebyshevSeries::new(&big, limit).unwrap();
        for n in 1..=limit {
            let (theta, psi) = (series.theta(n), series.psi(n));
            let bound = series.pi(n) as f64 * (n as f64).ln();
            ensure!(theta <= psi, "(b) theta > psi at {n}");
            // equality ψ(2) = π(2) log 2 holds exactly; allow one rounding
            ensure!(psi <= bound * (1.0 + 1e-12), "(b) psi > pi log n at {n}");
        }
        // (c)
        for n in 1..=500u64 {
            for &p in small.primes().iter().filter(|&&p| n < p && p < 2 * n) {
                let a = alpha_exact(p, n).unwrap().alpha;
                ensure!(a <= 2, "(c) alpha_{p}({n}) = {a}");
            }
        }
        // (d)
        for n in 1..=200 {
            ensure!(check_factorial_bound(n), "(d) n = {n}");
        }
        // (e)
        let squares = PrimeTable::build(300 * 300 + 1).unwrap();
        for n in 1..=300 {
            let c = check_p_squared_theorem(n, &squares).map_err(|e| e.to_string())?;
            ensure!(c.verdict, "(e) n = {n}: {:?}", c.checked);
        }
        Ok("(a) 21 primes x 500 n; (b) n <= 1e5; (c) n <= 500; (d) n <= 200; (e) n <= 300".into())
    });
}

#[test]
fn c7_conditional_inequality() {
    criterion("7", "conditional inequality true at n=3, false at n=2000", Duration::from_secs(10), || {
        let verdict = |n: &str| -> Result<bool, String> {
            let o = prodsq(&["bounds", "--report", n, "--format", "json"]);
            ensure!(o.status.success(), "bounds --report {n} exit {:?}", o.status.code());
            let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            Ok(r["verdict"].as_bool().unwrap())
        };
        ensure!(verdict("3")?, "n = 3 verdict false");
        ensure!(!verdict("2000")?, "n = 2000 verdict true");
        let table = PrimeTable::build(4000).unwrap();
        ensure!(prodsq_core::bounds::conditional_inequality_hp(&table, 3).unwrap(), "fixed point n = 3");
        ensure!(!prodsq_core::bounds::conditional_inequality_hp(&table, 2000).unwrap(), "fixed point n = 2000");
        Ok("verdicts true/false, fixed-point path agrees".into())
    });
}

#[test]
fn c8_angle_identity() {
    criterion("8", "angle_sum(3) = pi/2, finite divergence", Duration::from_secs(5), || {
        let err = (angle_sum(3) - std::f64::consts::FRAC_PI_2).abs();
        ensure!(err <= 1e-12, "|angle_sum(3) - pi/2| = {err:e}");
        for n in [10u64, 100, 1000] {
            let growth = angle_sum(10 * n) - angle_sum(n);
            ensure!(growth > 2.0, "growth {growth} for n = {n}");
        }
        let o = prodsq(&["angles", "3", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        ensure!((v["ratio_to_pi"].as_f64().unwrap() - 0.5).abs() < 1e-12, "CLI ratio {}", v["ratio_to_pi"]);
        Ok(format!("error {err:.1e}"))
    });
}
