//! Interval certificates: a prime p = m² + 1 divides P_n exactly once for
//! every n in [m, p − m − 1], so none of those P_n is a square.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{is_prime, PrimeTable};
use crate::product::{is_perfect_square, product_pn};
use crate::valuations::alpha_exact;

/// First n not handled by direct inspection of P_1, P_2, P_3.
pub const TARGET_LO: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NonSquareCertificate {
    #[serde(with = "crate::decimal")]
    pub p: u64,
    #[serde(with = "crate::decimal")]
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub lo: u64,
    #[serde(with = "crate::decimal")]
    pub hi: u64,
    #[serde(with = "crate::decimal")]
    pub next_root: u64,
}

impl NonSquareCertificate {
    pub fn covers(&self, n: u64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for NonSquareCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} (m={}) covers [{}, {}]", self.p, self.m, self.lo, self.hi)
    }
}

/// Certificate for p = m² + 1, if that is prime.
pub fn covering_prime(m: u64) -> Option<NonSquareCertificate> {
    covering_prime_with(m, is_prime)
}

fn covering_prime_with(m: u64, prime: impl Fn(u64) -> bool) -> Option<NonSquareCertificate> {
    if m < 2 {
        return None;
    }
    let p = m.checked_mul(m)?.checked_add(1)?;
    prime(p).then(|| NonSquareCertificate { p, m, lo: m, hi: p - m - 1, next_root: p - m })
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Rejection {
    RootTooSmall,
    NotSquarePlusOne,
    NotPrime,
    NotOneModFour,
    LowerEndNotRoot,
    NextRootMismatch,
    EmptyInterval,
    SecondRootInRange,
    ValuationNotOne { alpha: u64 },
    UpperEndNotMaximal,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::RootTooSmall => write!(f, "m must be at least 2"),
            Rejection::NotSquarePlusOne => write!(f, "p != m^2 + 1"),
            Rejection::NotPrime => write!(f, "p is not prime"),
            Rejection::NotOneModFour => write!(f, "p is not 1 mod 4"),
            Rejection::LowerEndNotRoot => write!(f, "lo != m"),
            Rejection::NextRootMismatch => write!(f, "next_root != p - m"),
            Rejection::EmptyInterval => write!(f, "lo > hi"),
            Rejection::SecondRootInRange => write!(f, "second root p - m lies inside [lo, hi]"),
            Rejection::ValuationNotOne { alpha } => write!(f, "v_p(P_hi) = {alpha}, expected 1"),
            Rejection::UpperEndNotMaximal => write!(f, "hi != p - m - 1"),
        }
    }
}

/// Re-derives every certificate property from scratch.
pub fn verify_certificate(cert: &NonSquareCertificate) -> std::result::Result<(), Rejection> {
    let NonSquareCertificate { p, m, lo, hi, next_root } = *cert;
    if m < 2 {
        return Err(Rejection::RootTooSmall);
    }
    if m.checked_mul(m).and_then(|s| s.checked_add(1)) != Some(p) {
        return Err(Rejection::NotSquarePlusOne);
    }
    if !is_prime(p) {
        return Err(Rejection::NotPrime);
    }
    if p % 4 != 1 {
        return Err(Rejection::NotOneModFour);
    }
    if lo != m {
        return Err(Rejection::LowerEndNotRoot);
    }
    if next_root != p - m {
        return Err(Rejection::NextRootMismatch);
    }
    if lo > hi {
        return Err(Rejection::EmptyInterval);
    }
    if next_root <= hi {
        return Err(Rejection::SecondRootInRange);
    }
    let alpha = alpha_exact(p, hi).map_err(|_| Rejection::NotPrime)?.alpha;
    if alpha != 1 {
        return Err(Rejection::ValuationNotOne { alpha });
    }
    if hi != p - m - 1 {
        return Err(Rejection::UpperEndNotMaximal);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageChain {
    #[serde(with = "crate::decimal")]
    pub target_lo: u64,
    #[serde(with = "crate::decimal")]
    pub target_hi: u64,
    pub certificates: Vec<NonSquareCertificate>,
}

impl CoverageChain {
    /// First certificate covering n.
    pub fn covering(&self, n: u64) -> Option<&NonSquareCertificate> {
        self.certificates.iter().find(|c| c.covers(n))
    }

    /// First n in the target range not covered by any certificate.
    pub fn first_gap(&self) -> Option<u64> {
        first_gap(&self.certificates, self.target_lo, self.target_hi)
    }

    /// Consecutive certificates overlap or abut.
    pub fn is_linked(&self) -> bool {
        self.certificates.windows(2).all(|w| w[1].lo <= w[0].hi + 1)
    }

    /// No certificate can be dropped without opening a gap.
    pub fn is_irredundant(&self) -> bool {
        (0..self.certificates.len()).all(|skip| {
            let rest: Vec<_> = self
                .certificates
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, c)| *c)
                .collect();
            first_gap(&rest, self.target_lo, self.target_hi).is_some()
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain serializes")
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn first_gap(certs: &[NonSquareCertificate], lo: u64, hi: u64) -> Option<u64> {
    let mut intervals: Vec<_> = certs.iter().map(|c| (c.lo, c.hi)).collect();
    intervals.sort_unstable();
    let mut next = lo;
    for (a, b) in intervals {
        if next > hi {
            break;
        }
        if a > next {
            return Some(next);
        }
        next = next.max(b.saturating_add(1));
    }
    (next <= hi).then_some(next)
}

/// Greedy covering of [4, target_hi].
///
/// At each step the eligible certificates are those with m ≤ frontier ≤ hi.
/// If one of them already reaches target_hi the smallest such m is taken;
/// otherwise the one reaching furthest.
pub fn build_chain(target_hi: u64, table: &PrimeTable) -> Result<CoverageChain> {
    if target_hi < TARGET_LO {
        return Err(Error::invalid(format!("target_hi must be at least {TARGET_LO}, got {target_hi}")));
    }
    let prime = |p: u64| table.is_prime(p);
    let mut certificates = Vec::new();
    let mut frontier = TARGET_LO;
    while frontier <= target_hi {
        let eligible = || {
            (2..=frontier)
                .filter_map(|m| covering_prime_with(m, prime))
                .filter(move |c| c.hi >= frontier)
        };
        let next = eligible()
            .find(|c| c.hi >= target_hi)
            .or_else(|| eligible().max_by(|a, b| a.hi.cmp(&b.hi).then(b.m.cmp(&a.m))))
            .ok_or(Error::CoverageGap { gap_lo: frontier, gap_hi: target_hi })?;
        frontier = next.hi + 1;
        certificates.push(next);
    }
    Ok(CoverageChain { target_lo: TARGET_LO, target_hi, certificates })
}

/// Direct square test of one small P_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectCheck {
    #[serde(with = "crate::decimal")]
    pub n: u64,
    /// Decimal square root when P_n is a square.
    pub root: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coverage {
    #[serde(with = "crate::decimal")]
    pub n: u64,
    #[serde(with = "crate::decimal")]
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub chain: CoverageChain,
    #[serde(with = "crate::decimal")]
    pub n_direct: u64,
    pub coverage: Vec<Coverage>,
    pub direct: Vec<DirectCheck>,
    /// Every n ≤ max(3, n_direct) found to give a square, with its root.
    pub squares: Vec<DirectCheck>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds and checks a chain over [4, target_hi], then square-tests P_n
/// directly for every n ≤ max(3, n_direct).
pub fn full_verification(target_hi: u64, n_direct: u64, table: &PrimeTable) -> Result<VerificationReport> {
    let chain = build_chain(target_hi, table)?;
    let mut failures = Vec::new();
    for cert in &chain.certificates {
        if let Err(why) = verify_certificate(cert) {
            failures.push(format!("certificate {cert} rejected: {why}"));
        }
    }
    let mut coverage = Vec::new();
    for n in chain.target_lo..=target_hi {
        match chain.covering(n) {
            Some(c) => coverage.push(Coverage { n, p: c.p }),
            None => failures.push(format!("n = {n} is not covered")),
        }
    }

    let mut direct = Vec::new();
    let mut squares = Vec::new();
    let mut value = BigUint::from(1u32);
    for n in 1..=n_direct.max(3) {
        value *= BigUint::from(n) * n + 1u32;
        let root = is_perfect_square(&value).map(|b| b.to_string());
        let check = DirectCheck { n, root };
        match (n, check.root.as_deref()) {
            (3, Some("10")) => {}
            (3, other) => failures.push(format!("P_3 expected to be 10^2, got {other:?}")),
            (_, Some(b)) => failures.push(format!("P_{n} is a square, b = {b}")),
            _ => {}
        }
        if check.root.is_some() {
            squares.push(check.clone());
        }
        direct.push(check);
    }
    debug_assert_eq!(value, product_pn(n_direct.max(3)).value);
    Ok(VerificationReport { chain, n_direct, coverage, direct, squares, failures })
}
