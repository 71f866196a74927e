use clap::ValueEnum;

use prodsq_core::{DEFAULT_N_DIRECT, DEFAULT_PRECISION_GUARD, DEFAULT_SIEVE_LIMIT};

use crate::Failure;

pub const DEFAULT_TARGET_HI: u64 = 1830;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sieve_limit: u64,
    pub n_direct: u64,
    pub target_hi: u64,
    pub precision_guard: f64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            n_direct: DEFAULT_N_DIRECT,
            target_hi: DEFAULT_TARGET_HI,
            precision_guard: DEFAULT_PRECISION_GUARD,
            output_format: OutputFormat::Table,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.sieve_limit < 2 * self.target_hi + 2 {
            return Err(Failure::usage(format!(
                "sieve limit {} must be at least 2 * target_hi + 2 = {}",
                self.sieve_limit,
                2 * self.target_hi + 2
            )));
        }
        if self.n_direct > self.target_hi {
            return Err(Failure::usage(format!(
                "n_direct {} must not exceed target_hi {}",
                self.n_direct, self.target_hi
            )));
        }
        if self.precision_guard.is_nan() || self.precision_guard <= 0.0 {
            return Err(Failure::usage("precision guard must be positive"));
        }
        Ok(())
    }
}
