//! Dense square matrices over GF(2), 64 columns per word.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> BitMatrix {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, data: vec![0; n * words] }
    }

    pub fn from_fn(n: usize, mut entry: impl FnMut(usize, usize) -> bool) -> BitMatrix {
        let mut m = BitMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if entry(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        let bit = 1u64 << (j % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn set_row_ones(&mut self, i: usize) {
        for j in 0..self.n {
            self.set(i, j, true);
        }
    }

    /// Determinant, i.e. whether the matrix is invertible. Consumes a copy.
    pub fn det(&self) -> bool {
        self.clone().det_in_place()
    }

    pub fn det_in_place(&mut self) -> bool {
        let (n, w) = (self.n, self.words);
        for col in 0..n {
            let (cw, cb) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (col..n).find(|&r| self.data[r * w + cw] & cb != 0) else {
                return false;
            };
            if pivot != col {
                for k in 0..w {
                    self.data.swap(pivot * w + k, col * w + k);
                }
            }
            let (head, tail) = self.data.split_at_mut((col + 1) * w);
            let prow = &head[col * w..];
            for r in tail.chunks_exact_mut(w) {
                if r[cw] & cb != 0 {
                    // columns below `cw` are already zero in the pivot row
                    for k in cw..w {
                        r[k] ^= prow[k];
                    }
                }
            }
        }
        true
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_singular() {
        assert!(BitMatrix::from_fn(70, |i, j| i == j).det());
        assert!(!BitMatrix::from_fn(5, |_, _| true).det());
        assert!(BitMatrix::from_fn(1, |_, _| true).det());
        assert!(!BitMatrix::from_fn(1, |_, _| false).det());
    }

    #[test]
    fn small_cases() {
        // [[1,1],[1,0]] has det -1
        assert!(BitMatrix::from_fn(2, |i, j| !(i == 1 && j == 1)).det());
        // upper triangular with unit diagonal across a word boundary
        assert!(BitMatrix::from_fn(130, |i, j| j >= i && (i * 7 + j) % 3 != 1 || i == j).det());
    }
}
