//! Counts of permutations `σ ∈ S_m` with `i + σ(i)` in a family for every
//! row but one.
//!
//! Modulo 2 the inversion sign disappears, so the parity of such a count is
//! the permanent of a 0/1 matrix mod 2, which is its determinant over GF(2).

use rayon::prelude::*;

use super::{OracleError, StateVec};
use crate::gf2::BitMatrix;
use crate::pattern::{Family, Pattern, Sign};
use crate::poly::Fam;

/// Default size limit for exact enumeration.
pub const DEFAULT_BRUTE_BOUND: usize = 12;

/// Hard ceiling: the subset table needs `2^m` entries.
pub const MAX_BRUTE_BOUND: usize = 22;

fn membership(p: &Pattern, family: Family, m: usize) -> Vec<bool> {
    (0..2 * m as u64).map(|t| p.in_family(family, t)).collect()
}

/// Parity of `#{σ ∈ S_m : i + σ(i) ∈ family for all i ≠ ℓ}`.
pub fn count_parity(p: &Pattern, family: Family, m: usize, ell: usize) -> bool {
    let mem = membership(p, family, m);
    BitMatrix::from_fn(m, |i, j| i == ell || mem[i + j]).det()
}

/// All parity bits at index `n`.
pub fn state_parity(p: &Pattern, n: usize) -> StateVec {
    let full = p.last_sign() == Sign::Minus;
    let mut s = StateVec::empty(full);
    let fams: &[(Family, [Fam; 3])] = if full {
        &[(Family::J, Fam::XYZ), (Family::K, Fam::UVW)]
    } else {
        &[(Family::J, Fam::XYZ)]
    };
    for &(family, [x, y, z]) in fams {
        let xb = (0..n).fold(false, |acc, l| acc ^ count_parity(p, family, n, l));
        s.set(x, xb);
        s.set(y, count_parity(p, family, n, n));
        s.set(z, count_parity(p, family, n, n - 1));
    }
    s
}

/// States for `n = from..=to`, computed in parallel, in index order.
pub fn state_range(p: &Pattern, from: usize, to: usize) -> Vec<StateVec> {
    (from..=to).into_par_iter().map(|n| state_parity(p, n)).collect()
}

/// Permanent of a 0/1 matrix given by row masks, by a DP over column subsets.
pub fn permanent(rows: &[u64]) -> u128 {
    let m = rows.len();
    assert!(m <= MAX_BRUTE_BOUND, "permanent of size {m} too large");
    let mut dp = vec![0u128; 1 << m];
    dp[0] = 1;
    for mask in 0..(1usize << m) {
        let ways = dp[mask];
        if ways == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == m {
            continue;
        }
        let mut free = rows[row] & !(mask as u64) & ((1u64 << m) - 1);
        while free != 0 {
            let j = free.trailing_zeros();
            free &= free - 1;
            dp[mask | 1 << j] += ways;
        }
    }
    dp[(1 << m) - 1]
}

/// Exact `#{σ ∈ S_m : i + σ(i) ∈ family for all i ≠ ℓ}`.
pub fn count_exact(p: &Pattern, family: Family, m: usize, ell: usize, bound: usize) -> Result<u128, OracleError> {
    let bound = bound.min(MAX_BRUTE_BOUND);
    if m > bound {
        return Err(OracleError::BruteBound { m, bound });
    }
    let mem = membership(p, family, m);
    let rows: Vec<u64> = (0..m)
        .map(|i| (0..m).filter(|&j| i == ell || mem[i + j]).fold(0u64, |r, j| r | 1 << j))
        .collect();
    Ok(permanent(&rows))
}

/// `X … W` with `T` and `R` as exact integers at index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ExactCounts {
    pub m: usize,
    pub x: u128,
    pub y: u128,
    pub z: u128,
    pub u: u128,
    pub v: u128,
    pub w: u128,
    pub t: u128,
    pub r: u128,
}

pub fn exact_counts(p: &Pattern, m: usize, bound: usize) -> Result<ExactCounts, OracleError> {
    let agg = |family| -> Result<(u128, u128, u128), OracleError> {
        let mut x = 0;
        for l in 0..m {
            x += count_exact(p, family, m, l, bound)?;
        }
        Ok((x, count_exact(p, family, m, m, bound)?, count_exact(p, family, m, m - 1, bound)?))
    };
    let (x, y, z) = agg(Family::J)?;
    let (u, v, w) = agg(Family::K)?;
    Ok(ExactCounts { m, x, y, z, u, v, w, t: x + x * y + y, r: u + u * v + v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::named;

    #[test]
    fn permanent_basics() {
        assert_eq!(permanent(&[]), 1);
        assert_eq!(permanent(&[0b111, 0b111, 0b111]), 6);
        assert_eq!(permanent(&[0b01, 0b01]), 0);
        // 4x4 all ones
        assert_eq!(permanent(&[0xf; 4]), 24);
    }

    #[test]
    fn f3_small() {
        let f3 = named("F3").unwrap();
        assert!(count_parity(&f3, Family::J, 3, 2));
        assert!(count_parity(&f3, Family::J, 1, 0));
        // every permutation of S_3 listed by hand against J = {0, 3, 5, ...}
        let z3 = count_exact(&f3, Family::J, 3, 2, 12).unwrap();
        assert_eq!(z3 % 2, 1);
    }

    #[test]
    fn bound_enforced() {
        let f3 = named("F3").unwrap();
        assert!(matches!(
            count_exact(&f3, Family::J, 13, 0, 12),
            Err(OracleError::BruteBound { m: 13, bound: 12 })
        ));
    }
}
