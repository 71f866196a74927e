//! Exact-arithmetic tools for deciding when ∏_{k=1}^n (k² + 1) is a perfect
//! square: prime tables, p-adic valuations of the product, the analytic
//! inequality that rules out large n, and interval certificates for the rest.

pub mod bounds;
pub mod certificates;
mod decimal;
pub mod error;
pub mod hp;
pub mod primes;
pub mod product;
pub mod summation;
pub mod valuations;

pub use bounds::{
    angle_sum, bound_constant, conditional_inequality_report, find_threshold, interval_theta_sum,
    log_sum_asymptotic_report, restricted_log_sum, BoundReport, Term, Threshold, DEFAULT_PRECISION_GUARD,
};
pub use certificates::{
    build_chain, covering_prime, full_verification, verify_certificate, CoverageChain, NonSquareCertificate,
    Rejection, VerificationReport,
};
pub use error::{Error, Result};
pub use primes::{
    chebyshev_psi, chebyshev_theta, hensel_lift, legendre_symbol, sqrt_minus_one, PrimeTable, RootLift,
    DEFAULT_SIEVE_LIMIT,
};
pub use product::{
    check_factorial_bound, classify, find_nonsquare_witness, is_perfect_square, isqrt, product_pn, ProductValue,
    SquareStatus, Witness, DEFAULT_N_DIRECT,
};
pub use valuations::{
    alpha_bruteforce, alpha_exact, alpha_upper_bound, beta_factorial, check_half_alpha_bound,
    check_p_squared_theorem, ValuationProfile,
};
