//! Parity of the permutations of a single type.
//!
//! A permutation has type `s_0 … s_{d-1}[s_d]` when every row `i ≠ ℓ` of
//! class `a` is friendly (column class `d-1-a`) except, for each `a` with a
//! non-friendly letter, exactly one row that lands in class `s_a`; row `ℓ`
//! lands in class `s_d`.

use super::OracleError;
use crate::gf2::BitMatrix;
use crate::pattern::Pattern;
use crate::recgen::{Direction, Kind, TypeWord};

struct Shape {
    d: usize,
    m: usize,
    member: Vec<bool>,
    letters: Vec<usize>,
    tail: Option<usize>,
}

impl Shape {
    fn new(p: &Pattern, dir: Direction, t: &TypeWord, n: usize) -> Shape {
        let d = p.d();
        let m = d * n + t.h;
        let family = dir.family();
        Shape {
            d,
            m,
            member: (0..2 * m as u64).map(|s| p.in_family(family, s)).collect(),
            letters: t.letters.iter().map(|&l| l as usize).collect(),
            tail: t.tail.map(|l| l as usize),
        }
    }

    fn friendly(&self, a: usize) -> usize {
        self.d - 1 - a
    }

    /// Relaxed rows to sum over.
    fn ells(&self, t: &TypeWord) -> Vec<Option<usize>> {
        match t.kind {
            Kind::Py => vec![None],
            Kind::Pz if self.m == 0 => Vec::new(),
            Kind::Pz => vec![Some(self.m - 1)],
            Kind::Px => (0..self.m).filter(|l| l % self.d == t.k).map(Some).collect(),
        }
    }
}

/// Parity via one GF(2) determinant per choice of the unsociable row in each
/// class.
pub fn count_type_exact(p: &Pattern, dir: Direction, t: &TypeWord, n: usize) -> bool {
    let s = Shape::new(p, dir, t, n);
    let (d, m) = (s.d, s.m);
    let mut parity = false;
    for ell in s.ells(t) {
        let rows_of: Vec<Vec<usize>> =
            (0..d).map(|a| (0..m).filter(|&i| i % d == a && Some(i) != ell).collect()).collect();
        let classes: Vec<usize> = (0..d).filter(|&a| s.letters[a] != s.friendly(a)).collect();
        if classes.iter().any(|&a| rows_of[a].is_empty()) {
            continue;
        }
        // odometer over one chosen row per non-friendly class
        let mut pick = vec![0usize; classes.len()];
        loop {
            let mut chosen = vec![false; m];
            for (ci, &a) in classes.iter().enumerate() {
                chosen[rows_of[a][pick[ci]]] = true;
            }
            let mat = BitMatrix::from_fn(m, |i, j| {
                if Some(i) == ell {
                    return Some(j % d) == s.tail;
                }
                let a = i % d;
                let target = if chosen[i] { s.letters[a] } else { s.friendly(a) };
                j % d == target && s.member[i + j]
            });
            parity ^= mat.det();
            let mut c = 0;
            loop {
                if c == classes.len() {
                    break;
                }
                pick[c] += 1;
                if pick[c] < rows_of[classes[c]].len() {
                    break;
                }
                pick[c] = 0;
                c += 1;
            }
            if c == classes.len() {
                break;
            }
        }
    }
    parity
}

/// Parity by walking every permutation with the right column classes and
/// keeping those with the exact unsociable counts.
pub fn count_type_brute(p: &Pattern, dir: Direction, t: &TypeWord, n: usize, bound: usize) -> Result<bool, OracleError> {
    let s = Shape::new(p, dir, t, n);
    if s.m > bound {
        return Err(OracleError::BruteBound { m: s.m, bound });
    }
    struct Walk<'a> {
        s: &'a Shape,
        ell: Option<usize>,
        unsociable: Vec<usize>,
        count: u64,
    }
    fn go(w: &mut Walk<'_>, i: usize, used: u64) {
        let s = w.s;
        if i == s.m {
            let ok = (0..s.d).all(|a| w.unsociable[a] == (s.letters[a] != s.friendly(a)) as usize);
            w.count += ok as u64;
            return;
        }
        let a = i % s.d;
        for j in 0..s.m {
            if used >> j & 1 == 1 {
                continue;
            }
            let c = j % s.d;
            if Some(i) == w.ell {
                if Some(c) != s.tail {
                    continue;
                }
                go(w, i + 1, used | 1 << j);
                continue;
            }
            if !s.member[i + j] {
                continue;
            }
            if c == s.friendly(a) {
                go(w, i + 1, used | 1 << j);
            } else if c == s.letters[a] && w.unsociable[a] == 0 {
                w.unsociable[a] += 1;
                go(w, i + 1, used | 1 << j);
                w.unsociable[a] -= 1;
            }
        }
    }
    let mut total = 0u64;
    for ell in s.ells(t) {
        let mut w = Walk { s: &s, ell, unsociable: vec![0; s.d], count: 0 };
        go(&mut w, 0, 0);
        total += w.count;
    }
    Ok(total % 2 == 1)
}
