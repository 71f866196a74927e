//! Chebyshev's ϑ and ψ, summed with compensation over ascending primes.

use super::table::PrimeTable;
use crate::error::Result;
use crate::summation::{compensated, CompensatedSum};

/// ϑ(n) = Σ_{p ≤ n} log p.
pub fn chebyshev_theta(table: &PrimeTable, n: u64) -> Result<f64> {
    table.check("n", n)?;
    Ok(compensated(table.up_to(n).iter().map(|&p| (p as f64).ln())))
}

/// ψ(n) = Σ_{p^m ≤ n} log p.
pub fn chebyshev_psi(table: &PrimeTable, n: u64) -> Result<f64> {
    table.check("n", n)?;
    let mut acc = CompensatedSum::new();
    for &p in table.up_to(n) {
        let log_p = (p as f64).ln();
        let mut power = p;
        loop {
            acc.add(log_p);
            match power.checked_mul(p) {
                Some(next) if next <= n => power = next,
                _ => break,
            }
        }
    }
    Ok(acc.value())
}

/// ϑ and ψ for every `n` in `0..=n_max`, built in one pass.
#[derive(Debug, Clone)]
pub struct ChebyshevSeries {
    theta: Vec<f64>,
    psi: Vec<f64>,
    pi: Vec<u64>,
}

impl ChebyshevSeries {
    pub fn new(table: &PrimeTable, n_max: u64) -> Result<Self> {
        table.check("n_max", n_max)?;
        let len = n_max as usize + 1;
        // log of the prime whose power n is, if any
        let mut mangoldt = vec![0.0f64; len];
        let mut is_prime = vec![false; len];
        for &p in table.up_to(n_max) {
            is_prime[p as usize] = true;
            let log_p = (p as f64).ln();
            let mut power = p;
            while power <= n_max {
                mangoldt[power as usize] = log_p;
                power = match power.checked_mul(p) {
                    Some(x) => x,
                    None => break,
                };
            }
        }
        let (mut theta_acc, mut psi_acc) = (CompensatedSum::new(), CompensatedSum::new());
        let mut count = 0;
        let (mut theta, mut psi, mut pi) =
            (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
        for n in 0..len {
            if mangoldt[n] != 0.0 {
                psi_acc.add(mangoldt[n]);
                if is_prime[n] {
                    theta_acc.add(mangoldt[n]);
                    count += 1;
                }
            }
            theta.push(theta_acc.value());
            psi.push(psi_acc.value());
            pi.push(count);
        }
        Ok(Self { theta, psi, pi })
    }

    pub fn n_max(&self) -> u64 {
        self.theta.len() as u64 - 1
    }

    pub fn theta(&self, n: u64) -> f64 {
        self.theta[n as usize]
    }

    pub fn psi(&self, n: u64) -> f64 {
        self.psi[n as usize]
    }

    pub fn pi(&self, n: u64) -> u64 {
        self.pi[n as usize]
    }
}
