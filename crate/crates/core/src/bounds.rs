//! Restricted prime sums, the 4 + log 2 / 4 constant and its crossing point,
//! the conditional inequality that a square P_n would have to satisfy, and
//! a few asymptotic sanity reports.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hp::{self, Fixed};
use crate::primes::PrimeTable;
use crate::summation::{compensated, CompensatedSum};

/// Margin below which a floating-point comparison is re-decided at high precision.
pub const DEFAULT_PRECISION_GUARD: f64 = 1e-9;

// slack for fixed-point comparisons, in units of 2^-256
const HP_SLACK_ULPS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

impl Term {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value }
    }
}

/// Both sides of an inequality evaluated at a concrete n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(with = "crate::decimal")]
    pub n: u64,
    pub lhs: f64,
    pub rhs_terms: Vec<Term>,
    pub rhs_total: f64,
    pub verdict: bool,
    /// Set when |lhs − rhs_total| fell below the precision guard.
    pub precision_flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<Box<BoundReport>>,
}

impl BoundReport {
    pub fn new(n: u64, lhs: f64, rhs_terms: Vec<Term>, verdict: bool, precision_flag: bool) -> Self {
        let rhs_total = compensated(rhs_terms.iter().map(|t| t.value));
        Self { n, lhs, rhs_terms, rhs_total, verdict, precision_flag, variant: None }
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["n".to_string(), "lhs".to_string()];
        cols.extend(self.rhs_terms.iter().map(|t| t.name.clone()));
        cols.extend(["rhs_total", "verdict", "precision_flag"].map(String::from));
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.n.to_string(), self.lhs.to_string()];
        cols.extend(self.rhs_terms.iter().map(|t| t.value.to_string()));
        cols.push(self.rhs_total.to_string());
        cols.push(self.verdict.to_string());
        cols.push(self.precision_flag.to_string());
        cols.join(",")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn restricted_primes(table: &PrimeTable, n: u64) -> impl Iterator<Item = u64> + '_ {
    table.up_to(n).iter().copied().filter(|p| p % 4 != 1)
}

/// Σ log p / (p − 1) over primes p ≤ n with p ≢ 1 (mod 4).
pub fn restricted_log_sum(table: &PrimeTable, n: u64) -> Result<f64> {
    table.check("n", n)?;
    Ok(compensated(restricted_primes(table, n).map(|p| (p as f64).ln() / (p - 1) as f64)))
}

/// [`restricted_log_sum`] in 256-bit fixed point.
pub fn restricted_log_sum_hp(table: &PrimeTable, n: u64) -> Result<Fixed> {
    table.check("n", n)?;
    Ok(restricted_primes(table, n).fold(Fixed::zero(), |acc, p| &acc + &hp::ln_u64(p).div_int(p - 1)))
}

/// 4 + (log 2) / 4.
pub fn bound_constant() -> f64 {
    4.0 + std::f64::consts::LN_2 / 4.0
}

pub fn bound_constant_hp() -> Fixed {
    &Fixed::from_int(4) + &hp::ln2().div_int(4)
}

/// The first n at which the restricted sum exceeds [`bound_constant`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    #[serde(with = "crate::decimal")]
    pub n: u64,
    /// Restricted sum at n − 1.
    pub sum_below: f64,
    /// Restricted sum at n.
    pub sum_at: f64,
    pub constant: f64,
    pub precision_flag: bool,
}

impl Threshold {
    pub fn margin_below(&self) -> f64 {
        self.constant - self.sum_below
    }

    pub fn margin_above(&self) -> f64 {
        self.sum_at - self.constant
    }
}

pub fn find_threshold(table: &PrimeTable) -> Result<Threshold> {
    find_threshold_with_guard(table, DEFAULT_PRECISION_GUARD)
}

pub fn find_threshold_with_guard(table: &PrimeTable, guard: f64) -> Result<Threshold> {
    table.check("required limit", 4000)?;
    let constant = bound_constant();
    let constant_hp = bound_constant_hp();
    let mut acc = CompensatedSum::new();
    let mut hp_acc = Fixed::zero();
    let mut flagged = false;
    for &p in table.primes() {
        if p % 4 == 1 {
            continue;
        }
        let below = acc.value();
        acc.add((p as f64).ln() / (p - 1) as f64);
        hp_acc = &hp_acc + &hp::ln_u64(p).div_int(p - 1);
        let at = acc.value();
        let crossed = if (at - constant).abs() > guard {
            at > constant
        } else {
            flagged = true;
            hp_acc.cmp_with_slack(&constant_hp, HP_SLACK_ULPS) == Some(Ordering::Greater)
        };
        if crossed {
            flagged |= (constant - below).abs() <= guard;
            return Ok(Threshold { n: p, sum_below: below, sum_at: at, constant, precision_flag: flagged });
        }
    }
    Err(Error::invalid(format!(
        "restricted sum stays below {constant} for all primes up to {}",
        table.limit()
    )))
}

/// Σ log p over primes n < p < 2n.
pub fn interval_theta_sum(table: &PrimeTable, n: u64) -> Result<f64> {
    table.check("2n", 2 * n)?;
    Ok(compensated(table.open_interval(n, 2 * n).iter().map(|&p| (p as f64).ln())))
}

/// Both sides of the inequality a perfect-square P_n would force:
///
/// (n − 1) Σ' log p / (p − 1) < (n + 1) log 2 / 4 + log(n² + 1) π(n) + Σ_{n<p<2n} log p
///
/// where Σ' runs over p ≤ n with p ≢ 1 (mod 4). A false verdict at n means
/// P_n is not a square. The `variant` field carries the form with
/// ½⌈n/2⌉ log 2 and π(n; 1, 4) before the restricted primes' log(n² + 1)
/// terms are moved across.
pub fn conditional_inequality_report(table: &PrimeTable, n: u64) -> Result<BoundReport> {
    conditional_inequality_report_with_guard(table, n, DEFAULT_PRECISION_GUARD)
}

pub fn conditional_inequality_report_with_guard(
    table: &PrimeTable,
    n: u64,
    guard: f64,
) -> Result<BoundReport> {
    table.check("2n", 2 * n)?;
    let restricted = restricted_log_sum(table, n)?;
    let log_n2 = ((n as f64) * (n as f64) + 1.0).ln();
    let pi_n = table.pi(n)?;
    let interval = interval_theta_sum(table, n)?;

    let lhs = (n as f64 - 1.0) * restricted;
    let terms = vec![
        Term::new("(n+1)*log2/4", (n + 1) as f64 * std::f64::consts::LN_2 / 4.0),
        Term::new("log(n^2+1)*pi(n)", log_n2 * pi_n as f64),
        Term::new("sum_{n<p<2n} log p", interval),
    ];
    let rhs: f64 = compensated(terms.iter().map(|t| t.value));
    let precision_flag = (lhs - rhs).abs() < guard;
    let verdict = if precision_flag {
        conditional_inequality_hp(table, n)?
    } else {
        lhs < rhs
    };
    let mut report = BoundReport::new(n, lhs, terms, verdict, precision_flag);

    let restricted_count = restricted_primes(table, n).count() as f64;
    let variant_lhs = lhs - log_n2 * restricted_count;
    let variant_terms = vec![
        Term::new("ceil(n/2)*log2/2", n.div_ceil(2) as f64 * std::f64::consts::LN_2 / 2.0),
        Term::new("log(n^2+1)*pi(n;1,4)", log_n2 * table.pi_mod(n, 1, 4)? as f64),
        Term::new("sum_{n<p<2n} log p", interval),
    ];
    let variant_rhs: f64 = compensated(variant_terms.iter().map(|t| t.value));
    report.variant = Some(Box::new(BoundReport::new(
        n,
        variant_lhs,
        variant_terms,
        variant_lhs < variant_rhs,
        (variant_lhs - variant_rhs).abs() < guard,
    )));
    Ok(report)
}

/// The conditional inequality decided in fixed point.
pub fn conditional_inequality_hp(table: &PrimeTable, n: u64) -> Result<bool> {
    table.check("2n", 2 * n)?;
    let lhs = restricted_log_sum_hp(table, n)?.mul_int(n.saturating_sub(1));
    let n2 = BigUint::from(n) * n + 1u32;
    let interval = table
        .open_interval(n, 2 * n)
        .iter()
        .fold(Fixed::zero(), |acc, &p| &acc + &hp::ln_u64(p));
    let rhs = &(&hp::ln2().mul_int(n + 1).div_int(4) + &hp::ln(&n2).mul_int(table.pi(n)?)) + &interval;
    match lhs.cmp_with_slack(&rhs, HP_SLACK_ULPS) {
        Some(ord) => Ok(ord == Ordering::Less),
        None => Err(Error::invalid(format!(
            "conditional inequality at n = {n} is an exact tie within fixed-point precision"
        ))),
    }
}

/// `(n, Σ_{p ≤ n} log p / (p − 1) − log n)` for each requested n.
pub fn log_sum_asymptotic_report(table: &PrimeTable, n_values: &[u64]) -> Result<Vec<(u64, f64)>> {
    n_values
        .iter()
        .map(|&n| {
            table.check("n", n)?;
            let mut acc: CompensatedSum =
                table.up_to(n).iter().map(|&p| (p as f64).ln() / (p - 1) as f64).collect();
            if n > 1 {
                acc.add(-(n as f64).ln());
            }
            Ok((n, acc.value()))
        })
        .collect()
}

/// Σ_{k=1}^n arctan(1/k), the argument of ∏ (k + i).
pub fn angle_sum(n: u64) -> f64 {
    compensated((1..=n).map(|k| (1.0 / k as f64).atan()))
}
