//! Mechanical Apwenian proofs for sequences `f = Φ(ṽ(x)) = ∏ ṽ(x^{d^k})`.
//!
//! The pipeline generates a mod-2 recurrence system for the parities of
//! constrained permutation counts, validates it against determinant
//! oracles, and closes over reachable parity states to decide whether
//! `H_m(f) / 2^{m-1}` is odd for every `m`.

pub mod gf2;
pub mod oracle;
pub mod pattern;
pub mod poly;
pub mod prover;
pub mod recgen;

pub use pattern::{named, parse_pattern, Family, Pattern, PatternError, Sign};
pub use poly::{Fam, Gf2Poly, Monomial, Shift, SymVar};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/patterns.md")]
mod book_patterns {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/oracles.md")]
mod book_oracles {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/types.md")]
mod book_types {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/recurrences.md")]
mod book_recurrences {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/proofs.md")]
mod book_proofs {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
