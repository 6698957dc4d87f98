//! Unbounded-integer primitives: primality, budgeted factorization,
//! squarefree determination and prime valuations.

mod factor;
mod prime;

pub use factor::{
    factorize, perfect_power, squarefree_status, valuation, ArithError, Factorization,
    SquarefreeStatus, DEFAULT_BUDGET,
};
pub use prime::{is_prime, is_prime_u64, small_primes, DETERMINISTIC_BOUND, TRIAL_BOUND};
