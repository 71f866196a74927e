use crate::error::{Error, Result};

/// Sieve limit used when callers do not pick one.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Every prime up to `limit`, in increasing order.
///
/// The table is immutable once built and can be shared freely between
/// threads; all queries take `&self`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes over the odd numbers up to `limit`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be at least 2, got {limit}")));
        }
        let limit_usize = usize::try_from(limit)
            .map_err(|_| Error::invalid(format!("sieve limit {limit} does not fit in memory")))?;
        // composite[i] describes 2i + 1
        let half = (limit_usize - 1) / 2 + 1;
        let mut composite = vec![false; half];
        composite[0] = true;
        let mut i = 1;
        while (2 * i + 1) * (2 * i + 1) <= limit_usize {
            if !composite[i] {
                let p = 2 * i + 1;
                let mut j = (p * p) / 2;
                while j < half {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        let mut primes = Vec::with_capacity(estimate_count(limit));
        primes.push(2);
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| 2 * i as u64 + 1),
        );
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub(crate) fn check(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::out_of_range(what, n, self.limit))
        } else {
            Ok(())
        }
    }

    /// Primes `p <= n`. Callers are responsible for the range check.
    pub(crate) fn up_to(&self, n: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= n);
        &self.primes[..end]
    }

    /// Primes in the half-open range `(lo, hi)`.
    pub(crate) fn open_interval(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p < hi);
        &self.primes[start..end.max(start)]
    }

    /// Membership test for `n <= limit`; falls back to Miller-Rabin above it.
    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            self.primes.binary_search(&n).is_ok()
        } else {
            super::modular::is_prime(n)
        }
    }

    /// π(n): the number of primes `<= n`.
    pub fn pi(&self, n: u64) -> Result<u64> {
        self.check("n", n)?;
        Ok(self.up_to(n).len() as u64)
    }

    /// π(n; a, b): primes `p <= n` with `p ≡ a (mod b)`.
    pub fn pi_mod(&self, n: u64, a: u64, b: u64) -> Result<u64> {
        self.check("n", n)?;
        if b < 2 || a >= b {
            return Err(Error::invalid(format!(
                "residue class requires b >= 2 and 0 <= a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(self.up_to(n).iter().filter(|&&p| p % b == a).count() as u64)
    }

    /// Smallest prime strictly between `n` and `2n`.
    pub fn bertrand_witness(&self, n: u64) -> Result<u64> {
        if n <= 1 {
            return Err(Error::invalid(format!("Bertrand interval needs n > 1, got {n}")));
        }
        let upper = n.checked_mul(2).ok_or_else(|| Error::invalid("2n overflows"))?;
        self.check("2n", upper)?;
        self.open_interval(n, upper)
            .first()
            .copied()
            .ok_or_else(|| Error::invalid(format!("no prime in ({n}, {upper})")))
    }
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}
