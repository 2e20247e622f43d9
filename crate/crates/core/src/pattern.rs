//! Finite sign patterns and the infinite sequences they generate.
//!
//! A pattern `v = (v_0, ..., v_{d-1})` with `v_0 = +1` defines the sequence
//! `f` through `f_0 = 1` and `f_{dn+i} = v_i f_n`. Adjacent sign changes in
//! `v` split the residues `1..d` into the classes `P` (change) and `Q` (no
//! change), and those classes determine the index sets `J` and `K` that the
//! permutation counting works with.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported pattern length. Residue classes are kept in `u64` masks.
pub const MAX_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern must have length at least 2, got {0}")]
    TooShort(usize),
    #[error("pattern length {0} exceeds the supported maximum of {MAX_LEN}")]
    TooLong(usize),
    #[error("invalid sign symbol {0:?}")]
    BadSymbol(String),
    #[error("pattern must start with +1")]
    LeadingMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One of the two complementary index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    J,
    K,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::J => Family::K,
            Family::K => Family::J,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::J => f.write_str("J"),
            Family::K => f.write_str("K"),
        }
    }
}

/// A `±1` word with leading `+1`, together with its residue classes `P`, `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    coeffs: Vec<Sign>,
    /// Bit `r` set iff `r ∈ P` (for `1 <= r < d`).
    p_mask: u64,
}

impl Pattern {
    pub fn new(coeffs: Vec<Sign>) -> Result<Pattern, PatternError> {
        let d = coeffs.len();
        if d < 2 {
            return Err(PatternError::TooShort(d));
        }
        if d > MAX_LEN {
            return Err(PatternError::TooLong(d));
        }
        if coeffs[0] != Sign::Plus {
            return Err(PatternError::LeadingMinus);
        }
        let p_mask = (1..d)
            .filter(|&i| coeffs[i - 1] != coeffs[i])
            .fold(0u64, |m, i| m | (1 << i));
        Ok(Pattern { coeffs, p_mask })
    }

    /// Builds a pattern from the bits of `mask`: bit `i - 1` set means `v_i = -1`.
    pub fn from_tail_bits(d: usize, mask: u64) -> Result<Pattern, PatternError> {
        let coeffs = (0..d)
            .map(|i| {
                if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        Pattern::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Sign] {
        &self.coeffs
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn last_sign(&self) -> Sign {
        self.coeffs[self.d() - 1]
    }

    pub fn p_set(&self) -> Vec<usize> {
        (1..self.d()).filter(|&r| self.in_p(r)).collect()
    }

    pub fn q_set(&self) -> Vec<usize> {
        (1..self.d()).filter(|&r| !self.in_p(r)).collect()
    }

    /// `r ∈ P`; residues outside `1..d` are in neither class.
    pub fn in_p(&self, r: usize) -> bool {
        r >= 1 && r < self.d() && (self.p_mask >> r) & 1 == 1
    }

    pub fn in_q(&self, r: usize) -> bool {
        r >= 1 && r < self.d() && !self.in_p(r)
    }

    /// Mask of the residue class that seeds `family` (`P` for `J`, `Q` for `K`).
    pub fn class_mask(&self, family: Family) -> u64 {
        let all = ((1u64 << (self.d() - 1)) - 1) << 1;
        match family {
            Family::J => self.p_mask,
            Family::K => all & !self.p_mask,
        }
    }

    /// `f_k`, read off the base-`d` digits of `k`.
    pub fn sign_at(&self, mut k: u64) -> Sign {
        let d = self.d() as u64;
        let mut s = Sign::Plus;
        while k > 0 {
            s = s.mul(self.coeffs[(k % d) as usize]);
            k /= d;
        }
        s
    }

    /// `δ_t = |f_t − f_{t+1}| / 2`.
    pub fn delta(&self, t: u64) -> bool {
        self.sign_at(t) != self.sign_at(t + 1)
    }

    /// Membership in `J` through the digit factorisation `t + 1 = (dn + l)·d^k`.
    pub fn in_j(&self, t: u64) -> bool {
        let d = self.d() as u64;
        let mut x = t + 1;
        let mut k = 0u32;
        while x.is_multiple_of(d) {
            x /= d;
            k += 1;
        }
        let l = (x % d) as usize;
        match self.last_sign() {
            Sign::Plus => self.in_p(l),
            Sign::Minus => {
                if k.is_multiple_of(2) {
                    self.in_p(l)
                } else {
                    self.in_q(l)
                }
            }
        }
    }

    /// Membership in `J` through `δ_t = 1`.
    pub fn in_j_by_delta(&self, t: u64) -> bool {
        self.delta(t)
    }

    pub fn in_k(&self, t: u64) -> bool {
        !self.in_j(t)
    }

    pub fn in_family(&self, family: Family, t: u64) -> bool {
        match family {
            Family::J => self.in_j(t),
            Family::K => self.in_k(t),
        }
    }

    /// The family `β` maps `A_{d-1} ∩ family` onto.
    pub fn bar(&self, family: Family) -> Family {
        match self.last_sign() {
            Sign::Plus => family,
            Sign::Minus => family.other(),
        }
    }

    /// The first `count` members of `family`.
    pub fn family_prefix(&self, family: Family, count: usize) -> Vec<u64> {
        (0u64..)
            .filter(|&t| self.in_family(family, t))
            .take(count)
            .collect()
    }

    /// The pattern of `f(−x)`, which is `Φ(ṽ(−x))` when `d` is odd.
    pub fn negate_variable(&self) -> Pattern {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &s)| if i % 2 == 1 { s.flip() } else { s })
            .collect();
        Pattern::new(coeffs).expect("v_0 is unchanged")
    }

    pub fn sign_word(&self) -> String {
        self.coeffs.iter().map(|s| s.as_char()).collect()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sign_word())
    }
}

fn parse_token(tok: &str) -> Result<Sign, PatternError> {
    match tok.trim() {
        "+" | "1" | "+1" => Ok(Sign::Plus),
        "-" | "\u{2212}" | "-1" | "\u{2212}1" => Ok(Sign::Minus),
        other => Err(PatternError::BadSymbol(other.to_string())),
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    /// Accepts a sign word (`+--`) or a comma separated list (`1,-1,-1`).
    fn from_str(text: &str) -> Result<Pattern, PatternError> {
        let text = text.trim();
        let coeffs = if text.contains(',') {
            text.split(',').map(parse_token).collect::<Result<Vec<_>, _>>()?
        } else {
            text.chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Plus),
                    '-' | '\u{2212}' => Ok(Sign::Minus),
                    other => Err(PatternError::BadSymbol(other.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Pattern::new(coeffs)
    }
}

/// Convenience wrapper around [`Pattern::from_str`].
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    text.parse()
}

/// Named patterns from the literature, keyed by the usual `F_d` names.
pub fn named(name: &str) -> Option<Pattern> {
    let word = match name {
        "F2" => "+-",
        "F3" => "+--",
        "F5" => "+---+",
        "F11" => "+--+-++++--",
        "F13" => "+--+-----+--+",
        "F17a" => "+--+-+++++++-+--+",
        "F17b" => "+---++-+++-++---+",
        "F19" => "+---+-+--++-----+--",
        _ => return None,
    };
    Some(word.parse().expect("well-formed literal"))
}
