//! Exact P_n, integer square roots, and non-square witnesses.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::primes::PrimeTable;
use crate::valuations::alpha_exact;

/// Default largest n for which P_n is square-tested directly.
pub const DEFAULT_N_DIRECT: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductValue {
    pub n: u64,
    pub value: BigUint,
}

/// ∏_{k=1}^n (k² + 1); the empty product for n = 0.
pub fn product_pn(n: u64) -> ProductValue {
    let mut value = BigUint::one();
    let mut chunk: u128 = 1;
    for k in 1..=n as u128 {
        let factor = k * k + 1;
        match chunk.checked_mul(factor) {
            Some(c) => chunk = c,
            None => {
                value *= chunk;
                chunk = factor;
            }
        }
    }
    value *= chunk;
    ProductValue { n, value }
}

/// ⌊√N⌋ by Newton's iteration from an overestimate.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // 2^⌈bits/2⌉ > √N
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn residue_table<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    for x in 0..M {
        t[x * x % M] = true;
    }
    t
}

/// The square root of `n` if it is a perfect square.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let r64 = (n % 64u32).iter_u32_digits().next().unwrap_or(0) as usize;
    if !residue_table::<64>()[r64] {
        return None;
    }
    let r63 = (n % 63u32).iter_u32_digits().next().unwrap_or(0) as usize;
    if !residue_table::<63>()[r63] {
        return None;
    }
    let root = isqrt(n);
    (&root * &root == *n).then_some(root)
}

/// Whether P_n > (n!)².
pub fn check_factorial_bound(n: u64) -> bool {
    let factorial: BigUint = (1..=n).map(BigUint::from).product();
    product_pn(n).value > &factorial * &factorial
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(with = "crate::decimal")]
    pub p: u64,
    #[serde(with = "crate::decimal")]
    pub alpha: u64,
}

/// A prime p ≡ 1 (mod 4) with v_p(P_n) odd.
///
/// Primes of the form m² + 1 whose first repeated root lies beyond n are
/// tried first (smallest p wins); failing that, every p ≡ 1 (mod 4) up to
/// min(n² + 1, table limit) is tried in increasing order. `None` is not a
/// proof that P_n is a square.
pub fn find_nonsquare_witness(n: u64, table: &PrimeTable) -> Option<Witness> {
    if n == 0 {
        return None;
    }
    let odd = |p: u64| {
        alpha_exact(p, n)
            .ok()
            .filter(|prof| prof.alpha % 2 == 1)
            .map(|prof| Witness { p, alpha: prof.alpha })
    };
    // m² − m ≥ n  ⇔  m ≥ (1 + √(1 + 4n)) / 2
    let first_m = (1..=n).find(|&m| m * m - m >= n).unwrap_or(n);
    for m in first_m.max(2)..=n {
        let p = m * m + 1;
        if table.is_prime(p) {
            if let Some(w) = odd(p) {
                return Some(w);
            }
        }
    }
    let bound = (n as u128 * n as u128 + 1).min(table.limit() as u128) as u64;
    table.up_to(bound).iter().filter(|&&p| p % 4 == 1).find_map(|&p| odd(p))
}

/// How the square status of P_n was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareStatus {
    pub n: u64,
    /// `Some(b)` when P_n = b².
    pub root: Option<BigUint>,
    pub witness: Option<Witness>,
    /// Whether P_n itself was square-tested.
    pub direct: bool,
}

impl SquareStatus {
    pub fn is_square(&self) -> bool {
        self.root.is_some()
    }
}

/// Decides whether P_n is a square, testing P_n directly when n ≤ n_direct
/// or when no witness is found.
pub fn classify(n: u64, table: &PrimeTable, n_direct: u64) -> Result<SquareStatus> {
    let witness = find_nonsquare_witness(n, table);
    let direct = n <= n_direct || witness.is_none();
    let root = if direct { is_perfect_square(&product_pn(n).value) } else { None };
    assert!(
        root.is_none() || witness.is_none(),
        "P_{n} is both square and has an odd valuation witness"
    );
    Ok(SquareStatus { n, root, witness, direct })
}
