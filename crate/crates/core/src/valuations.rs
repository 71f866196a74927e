//! Exact p-adic valuations of P_n = ∏ (k² + 1) and of n!, the bounds that
//! relate them, and a brute-force oracle.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Term, DEFAULT_PRECISION_GUARD};
use crate::error::{Error, Result};
use crate::primes::{checked_power, is_prime, PrimeTable, RootLift};

/// Largest n accepted by the level-counting routines; keeps n² + 1 and every
/// relevant prime power inside 63 bits.
pub const MAX_N: u64 = 3_000_000_000;

/// α_p = v_p(P_n) and β_p = v_p(n!) with the per-level counts behind α_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationProfile {
    pub p: u64,
    pub n: u64,
    pub alpha: u64,
    pub beta: u64,
    /// `(j, #{1 ≤ k ≤ n : p^j | k² + 1})` for each level that was examined.
    pub per_level: Vec<(u32, u64)>,
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

fn require_n(n: u64) -> Result<()> {
    if n > MAX_N {
        return Err(Error::invalid(format!("n = {n} exceeds supported maximum {MAX_N}")));
    }
    Ok(())
}

/// Legendre's formula: v_p(n!) = Σ_j ⌊n / p^j⌋.
pub fn beta_factorial(p: u64, n: u64) -> u64 {
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Number of k in [1, n] with k ≡ r (mod m), for 0 < r < m.
fn count_residue(n: u64, r: u64, m: u64) -> u64 {
    if r > n {
        0
    } else {
        (n - r) / m + 1
    }
}

/// Exact α_p(n) by counting, at each level j, the k ≤ n congruent to one of
/// the two square roots of -1 modulo p^j.
pub fn alpha_exact(p: u64, n: u64) -> Result<ValuationProfile> {
    require_prime(p)?;
    require_n(n)?;
    let beta = beta_factorial(p, n);
    let mut per_level = Vec::new();
    if n > 0 {
        if p == 2 {
            // k² + 1 is 1 or 2 mod 4, never divisible by 4
            per_level.push((1, n.div_ceil(2)));
        } else if p % 4 == 1 {
            let bound = n as u128 * n as u128 + 1;
            let mut lift = RootLift::base(p)?;
            loop {
                let (r, s) = lift.roots();
                let m = lift.modulus();
                per_level.push((lift.level(), count_residue(n, r, m) + count_residue(n, s, m)));
                match checked_power(p, lift.level() + 1) {
                    Some(next) if next as u128 <= bound => lift = lift.lift()?,
                    _ => break,
                }
            }
        }
    }
    let alpha = per_level.iter().map(|&(_, c)| c).sum();
    Ok(ValuationProfile { p, n, alpha, beta, per_level })
}

/// v_p(x) by repeated division.
pub fn valuation_u128(mut x: u128, p: u64) -> u64 {
    debug_assert!(x > 0 && p > 1);
    let p = p as u128;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// v_p(x) for an arbitrary-precision x > 0.
pub fn valuation_big(x: &BigUint, p: u64) -> u64 {
    let zero = BigUint::from(0u32);
    if *x == zero {
        return u64::MAX;
    }
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &BigUint::from(p));
        if r != zero {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// Σ_{k ≤ n} v_p(k² + 1) by dividing each factor directly.
pub fn alpha_bruteforce(p: u64, n: u64) -> u64 {
    (1..=n as u128).map(|k| valuation_u128(k * k + 1, p)).sum()
}

/// Σ_{j : p^j ≤ n² + 1} 2⌈n / p^j⌉, an upper bound on α_p(n).
pub fn alpha_upper_bound(p: u64, n: u64) -> Result<u64> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    require_n(n)?;
    let bound = n as u128 * n as u128 + 1;
    let mut total = 0;
    let mut power = p as u128;
    while power <= bound {
        total += 2 * (n as u128).div_ceil(power) as u64;
        power *= p as u128;
    }
    Ok(total)
}

/// Reports ½α_p − β_p against log(n² + 1) / log p.
///
/// The verdict is decided in integers: for α ≥ 2β the inequality is
/// equivalent to p^(α − 2β) ≤ (n² + 1)².
pub fn check_half_alpha_bound(p: u64, n: u64) -> Result<BoundReport> {
    if p % 4 != 1 {
        return Err(Error::invalid(format!("{p} is not congruent to 1 mod 4")));
    }
    let profile = alpha_exact(p, n)?;
    let lhs = profile.alpha as f64 / 2.0 - profile.beta as f64;
    let rhs = ((n as f64).powi(2) + 1.0).ln() / (p as f64).ln();
    let verdict = if profile.alpha <= 2 * profile.beta {
        true
    } else {
        let exponent = (profile.alpha - 2 * profile.beta) as u32;
        let base = BigUint::from(n) * n + 1u32;
        BigUint::from(p).pow(exponent) <= &base * &base
    };
    let precision_flag = (rhs - lhs).abs() < DEFAULT_PRECISION_GUARD;
    Ok(BoundReport::new(
        n,
        lhs,
        vec![Term::new("log(n^2+1)/log p", rhs)],
        verdict,
        precision_flag,
    ))
}

/// Outcome of checking that every prime with α_p ≥ 2 lies below 2n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSquareCheck {
    pub n: u64,
    /// `(p, α_p)` for every prime with α_p ≥ 2.
    pub checked: Vec<(u64, u64)>,
    pub verdict: bool,
}

/// Every prime whose square divides P_n is smaller than 2n.
pub fn check_p_squared_theorem(n: u64, table: &PrimeTable) -> Result<PrimeSquareCheck> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    require_n(n)?;
    let bound = n * n + 1;
    table.check("n^2+1", bound)?;
    let mut checked = Vec::new();
    for &p in table.up_to(bound) {
        if p != 2 && p % 4 != 1 {
            continue;
        }
        let alpha = alpha_exact(p, n)?.alpha;
        if alpha >= 2 {
            checked.push((p, alpha));
        }
    }
    let verdict = checked.iter().all(|&(p, _)| p < 2 * n);
    Ok(PrimeSquareCheck { n, checked, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert_eq!(beta_factorial(2, 4), 3);
        assert_eq!(beta_factorial(5, 4), 0);
        assert_eq!(beta_factorial(3, 9), 4);
        assert_eq!(beta_factorial(7, 0), 0);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_exact(2, 3).unwrap().alpha, 2);
        assert_eq!(alpha_exact(17, 4).unwrap().alpha, 1);
        assert_eq!(alpha_exact(3, 100).unwrap().alpha, 0);
        assert_eq!(alpha_exact(5, 3).unwrap().alpha, 2);
        assert_eq!(alpha_exact(17, 13).unwrap().alpha, 2);
    }

    #[test]
    fn degenerate_n_zero() {
        let prof = alpha_exact(5, 0).unwrap();
        assert_eq!((prof.alpha, prof.beta), (0, 0));
        assert!(prof.per_level.is_empty());
    }

    #[test]
    fn alpha_rejects_composite() {
        assert!(alpha_exact(15, 10).is_err());
        assert!(alpha_exact(1, 10).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(alpha_bruteforce(2, 3), 2);
        assert_eq!(alpha_bruteforce(17, 12), 1);
        assert_eq!(alpha_bruteforce(17, 13), 2);
    }

    #[test]
    fn per_level_for_five() {
        // k ≤ 25 with 5 | k²+1: k ≡ 2,3 mod 5 → 10; 25 | k²+1: k ≡ 7,18 mod 25 → 2;
        // levels 3 and 4 are examined (625 ≤ 626) but empty
        let prof = alpha_exact(5, 25).unwrap();
        assert_eq!(prof.per_level, vec![(1, 10), (2, 2), (3, 0), (4, 0)]);
        assert_eq!(prof.alpha, alpha_bruteforce(5, 25));
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(alpha_upper_bound(5, 3).unwrap(), 2);
        // 13² > 26, so only j = 1 contributes
        assert_eq!(alpha_upper_bound(13, 5).unwrap(), 2);
        assert_eq!(alpha_exact(13, 5).unwrap().alpha, 1);
        assert_eq!(alpha_upper_bound(17, 4).unwrap(), 2);
        assert!(alpha_upper_bound(7, 4).is_err());
    }

    #[test]
    fn half_alpha_examples() {
        let r = check_half_alpha_bound(5, 3).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!((r.rhs_total - 10f64.ln() / 5f64.ln()).abs() < 1e-12);
        assert!((r.rhs_total - 1.4307).abs() < 1e-4);
        assert!(r.verdict);
        assert!(check_half_alpha_bound(13, 5).unwrap().verdict);
        assert!(check_half_alpha_bound(5, 25).unwrap().verdict);
    }

    #[test]
    fn p_squared_examples() {
        let t = PrimeTable::build(200).unwrap();
        let c = check_p_squared_theorem(3, &t).unwrap();
        assert_eq!(c.checked, vec![(2, 2), (5, 2)]);
        assert!(c.verdict);
        let c = check_p_squared_theorem(1, &t).unwrap();
        assert!(c.checked.is_empty() && c.verdict);
        let c = check_p_squared_theorem(13, &t).unwrap();
        assert!(c.checked.contains(&(17, 2)));
        assert!(c.verdict);
        assert!(check_p_squared_theorem(15, &t).is_err());
    }

    #[test]
    fn big_valuation() {
        let x = BigUint::from(2u32).pow(70) * 3u32;
        assert_eq!(valuation_big(&x, 2), 70);
        assert_eq!(valuation_big(&x, 3), 1);
        assert_eq!(valuation_big(&x, 5), 0);
    }
}
