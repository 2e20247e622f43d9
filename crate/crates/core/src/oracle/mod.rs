//! Ground truth computed directly from the sequence: Hankel determinants,
//! constrained permutation counts and per-type parities.

mod counts;
mod hankel;
mod state;
mod typed;

use thiserror::Error;

pub use counts::{
    count_exact, count_parity, exact_counts, permanent, state_parity, state_range, ExactCounts,
    DEFAULT_BRUTE_BOUND, MAX_BRUTE_BOUND,
};
pub use hankel::{apwenian_bit, bareiss, det_mod, hankel_exact, hankel_mod, hankel_normalized, is_prime, residue};
pub use state::StateVec;
pub use typed::{count_type_brute, count_type_exact};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("m = {m} exceeds the brute-force bound {bound}")]
    BruteBound { m: usize, bound: usize },
    #[error("H_{m} is not divisible by 2^{}", m.saturating_sub(1))]
    Divisibility { m: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
}
