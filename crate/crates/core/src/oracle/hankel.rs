//! Hankel determinants of `f`: exact, modulo a prime, and the parity of
//! `H_m / 2^{m-1}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::OracleError;
use crate::gf2::BitMatrix;
use crate::pattern::{Pattern, Sign};

/// Determinant by fraction-free elimination with row exchanges.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn sign_int(s: Sign) -> i64 {
    s.value() as i64
}

/// `H_n(f)` exactly.
pub fn hankel_exact(p: &Pattern, n: usize) -> BigInt {
    let f: Vec<i64> = (0..2 * n as u64).map(|t| sign_int(p.sign_at(t))).collect();
    let a = (0..n).map(|i| (0..n).map(|j| BigInt::from(f[i + j])).collect()).collect();
    bareiss(a)
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|i| i * i <= q).all(|i| !q.is_multiple_of(i))
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % q as u128) as u64;
        }
        b = (b as u128 * b as u128 % q as u128) as u64;
        e >>= 1;
    }
    r
}

/// Determinant of a square matrix over `F_q`, `q` prime.
pub fn det_mod(mut a: Vec<Vec<u64>>, q: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !a[r][c].is_multiple_of(q)) else {
            return 0;
        };
        if r != c {
            a.swap(r, c);
            det = (q - det) % q;
        }
        let piv = a[c][c] % q;
        det = (det as u128 * piv as u128 % q as u128) as u64;
        let inv = pow_mod(piv, q - 2, q);
        let (top, rest) = a.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest.iter_mut() {
            let factor = (row[c] % q) as u128 * inv as u128 % q as u128;
            if factor == 0 {
                continue;
            }
            for j in c..n {
                let sub = factor * prow[j] as u128 % q as u128;
                row[j] = ((row[j] as u128 + q as u128 - sub) % q as u128) as u64;
            }
        }
    }
    det
}

/// `H_n(f) mod q` in `[0, q)`.
pub fn hankel_mod(p: &Pattern, n: usize, q: u64) -> Result<u64, OracleError> {
    if !is_prime(q) {
        return Err(OracleError::NotPrime(q));
    }
    let f: Vec<u64> = (0..2 * n as u64)
        .map(|t| match p.sign_at(t) {
            Sign::Plus => 1 % q,
            Sign::Minus => q - 1,
        })
        .collect();
    let a = (0..n).map(|i| (0..n).map(|j| f[i + j]).collect()).collect();
    Ok(det_mod(a, q))
}

/// `H_m / 2^{m-1}`, failing if the division is not exact.
pub fn hankel_normalized(p: &Pattern, m: usize) -> Result<BigInt, OracleError> {
    let h = hankel_exact(p, m);
    let pow = BigInt::one() << (m.saturating_sub(1));
    if !(&h % &pow).is_zero() {
        return Err(OracleError::Divisibility { m });
    }
    Ok(h / pow)
}

/// `(H_m / 2^{m-1}) mod 2` through the `δ`-matrix with an all-ones last column.
pub fn apwenian_bit(p: &Pattern, m: usize) -> bool {
    let delta: Vec<bool> = (0..2 * m as u64).map(|t| p.delta(t)).collect();
    BitMatrix::from_fn(m, |i, j| j + 1 == m || delta[i + j]).det()
}

/// Least nonnegative residue of a big integer modulo `q`.
pub fn residue(v: &BigInt, q: u64) -> u64 {
    let r = v % BigInt::from(q);
    let r = if r.is_negative() { r + BigInt::from(q) } else { r };
    u64::try_from(r).expect("residue below q")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::named;

    #[test]
    fn bareiss_small() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(bareiss(m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(bareiss(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss(m(&[&[0, 1, 2], &[0, 3, 4], &[5, 6, 7]])), BigInt::from(-10));
        assert_eq!(bareiss(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(bareiss(Vec::new()), BigInt::one());
    }

    #[test]
    fn f3_table() {
        let f3 = named("F3").unwrap();
        let want = [1i64, -2, -4, 8, 16, -32, -64, 128, 4864, -9728];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(hankel_exact(&f3, i + 1), BigInt::from(w), "n={}", i + 1);
        }
    }

    #[test]
    fn mod_q() {
        let f3 = named("F3").unwrap();
        let got: Vec<u64> = (1..=8).map(|n| hankel_mod(&f3, n, 3).unwrap()).collect();
        assert_eq!(got, [1, 1, 2, 2, 1, 1, 2, 2]);
        assert_eq!(hankel_mod(&f3, 12, 3).unwrap(), 2);
        assert!(matches!(hankel_mod(&f3, 3, 4), Err(OracleError::NotPrime(4))));
        let pp: Pattern = "++".parse().unwrap();
        assert_eq!(hankel_mod(&pp, 2, 2).unwrap(), 0);
    }

    #[test]
    fn apwenian_small() {
        let f3 = named("F3").unwrap();
        assert!((1..=10).all(|m| apwenian_bit(&f3, m)));
        let pp: Pattern = "++".parse().unwrap();
        assert!(!apwenian_bit(&pp, 2));
        assert!(apwenian_bit(&pp, 1));
    }
}
