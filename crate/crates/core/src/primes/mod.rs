//! Sieve, prime counting, quadratic residues, square roots of -1 modulo
//! prime powers, and Chebyshev functions.

mod chebyshev;
mod lift;
mod modular;
mod table;

pub use chebyshev::{chebyshev_psi, chebyshev_theta, ChebyshevSeries};
pub use lift::{hensel_lift, sqrt_minus_one, RootLift, ENUMERATION_CUTOFF};
pub use modular::{inv_mod, is_prime, legendre_symbol, mul_mod, pow_mod};
pub use table::{PrimeTable, DEFAULT_SIEVE_LIMIT};

pub(crate) use lift::checked_power;
