//! Multilinear polynomials over GF(2) in the twelve count symbols.
//!
//! The symbols are `X, Y, Z, U, V, W` at index `n` or `n + 1` (rendered `Xn`,
//! `Xm`, ...). Since every symbol stands for a parity bit, `x² = x` and a
//! monomial is just a subset of the twelve symbols; a polynomial is a set of
//! monomials, so it fits in a 4096-bit set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The six aggregate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fam {
    X,
    Y,
    Z,
    U,
    V,
    W,
}

impl Fam {
    pub const ALL: [Fam; 6] = [Fam::X, Fam::Y, Fam::Z, Fam::U, Fam::V, Fam::W];
    pub const XYZ: [Fam; 3] = [Fam::X, Fam::Y, Fam::Z];
    pub const UVW: [Fam; 3] = [Fam::U, Fam::V, Fam::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Fam {
        Fam::ALL[i]
    }

    pub fn as_char(self) -> char {
        b"XYZUVW"[self.index()] as char
    }

    /// `X ↔ U`, `Y ↔ V`, `Z ↔ W`.
    pub fn partner(self) -> Fam {
        Fam::from_index((self.index() + 3) % 6)
    }

    pub fn from_char(c: char) -> Option<Fam> {
        "XYZUVW".find(c).map(Fam::from_index)
    }
}

impl fmt::Display for Fam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Index offset of a symbol: `n` (0) or `n + 1` (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    N,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymVar {
    pub fam: Fam,
    pub shift: Shift,
}

impl SymVar {
    pub fn new(fam: Fam, shift: Shift) -> SymVar {
        SymVar { fam, shift }
    }

    /// Bit position; family-major so the natural order is `Xn Xm Yn ... Wm`.
    pub fn bit(self) -> u16 {
        (self.fam.index() * 2 + self.shift as usize) as u16
    }

    pub fn from_bit(b: u16) -> SymVar {
        let shift = if b.is_multiple_of(2) { Shift::N } else { Shift::M };
        SymVar { fam: Fam::from_index(b as usize / 2), shift }
    }
}

impl fmt::Display for SymVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.shift {
            Shift::N => 'n',
            Shift::M => 'm',
        };
        write!(f, "{}{}", self.fam, s)
    }
}

impl FromStr for SymVar {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<SymVar, PolyParseError> {
        let mut cs = s.chars();
        let (Some(fc), Some(sc), None) = (cs.next(), cs.next(), cs.next()) else {
            return Err(PolyParseError(s.to_string()));
        };
        let fam = Fam::from_char(fc).ok_or_else(|| PolyParseError(s.to_string()))?;
        let shift = match sc {
            'n' => Shift::N,
            'm' => Shift::M,
            _ => return Err(PolyParseError(s.to_string())),
        };
        Ok(SymVar { fam, shift })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term {0:?}")]
pub struct PolyParseError(pub String);

/// A product of distinct symbols, as a 12-bit set. The empty set is `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub u16);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: SymVar) -> Monomial {
        Monomial(1 << v.bit())
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    pub fn vars(self) -> impl Iterator<Item = SymVar> {
        (0..12u16).filter(move |b| (self.0 >> b) & 1 == 1).map(SymVar::from_bit)
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    /// Value at the assignment whose true symbols are the bits of `assign`.
    pub fn eval(self, assign: u16) -> bool {
        self.0 & !assign == 0
    }

    fn sort_key(self) -> Vec<u16> {
        (0..12u16).filter(|b| (self.0 >> b) & 1 == 1).collect()
    }
}

impl Ord for Monomial {
    /// Lexicographic on the ascending symbol sequence.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for v in self.vars() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

const POLY_WORDS: usize = 64;

/// Element of `GF(2)[Xn, ..., Wm] / (x² − x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    bits: [u64; POLY_WORDS],
}

impl Default for Gf2Poly {
    fn default() -> Self {
        Gf2Poly::zero()
    }
}

impl Gf2Poly {
    pub fn zero() -> Gf2Poly {
        Gf2Poly { bits: [0; POLY_WORDS] }
    }

    pub fn one() -> Gf2Poly {
        Gf2Poly::from_monomial(Monomial::ONE)
    }

    pub fn var(v: SymVar) -> Gf2Poly {
        Gf2Poly::from_monomial(Monomial::var(v))
    }

    pub fn from_monomial(m: Monomial) -> Gf2Poly {
        let mut p = Gf2Poly::zero();
        p.toggle(m);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, m: Monomial) -> bool {
        (self.bits[m.0 as usize / 64] >> (m.0 % 64)) & 1 == 1
    }

    /// Adds a monomial (mod 2).
    pub fn toggle(&mut self, m: Monomial) {
        self.bits[m.0 as usize / 64] ^= 1 << (m.0 % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Monomials in raw bit order.
    pub fn raw_monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| (w >> b) & 1 == 1).map(move |b| Monomial((wi * 64 + b) as u16))
        })
    }

    /// Monomials in canonical (report) order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut ms: Vec<Monomial> = self.raw_monomials().collect();
        ms.sort();
        ms
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        let rhs: Vec<Monomial> = other.raw_monomials().collect();
        for a in self.raw_monomials() {
            for &b in &rhs {
                out.toggle(a.times(b));
            }
        }
        out
    }

    pub fn eval(&self, assign: u16) -> bool {
        self.raw_monomials().filter(|m| m.eval(assign)).count() % 2 == 1
    }

    /// Symbols occurring in some monomial.
    pub fn support(&self) -> u16 {
        self.raw_monomials().fold(0, |acc, m| acc | m.0)
    }

    /// Comma separated three-digit hex monomials, e.g. `450,550`.
    pub fn to_hex(&self) -> String {
        self.raw_monomials().map(|m| format!("{:03x}", m.0)).collect::<Vec<_>>().join(",")
    }

    pub fn from_hex(s: &str) -> Result<Gf2Poly, PolyParseError> {
        let mut p = Gf2Poly::zero();
        for tok in s.split(',').filter(|t| !t.is_empty()) {
            let v = u16::from_str_radix(tok, 16).map_err(|_| PolyParseError(tok.to_string()))?;
            if v >= 1 << 12 {
                return Err(PolyParseError(tok.to_string()));
            }
            p.toggle(Monomial(v));
        }
        Ok(p)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign<&Gf2Poly> for Gf2Poly {
    fn add_assign(&mut self, rhs: &Gf2Poly) {
        for (a, b) in self.bits.iter_mut().zip(rhs.bits.iter()) {
            *a ^= b;
        }
    }
}

impl std::ops::Add<&Gf2Poly> for Gf2Poly {
    type Output = Gf2Poly;
    fn add(mut self, rhs: &Gf2Poly) -> Gf2Poly {
        self += rhs;
        self
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.monomials();
        if ms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in ms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl FromStr for Gf2Poly {
    type Err = PolyParseError;

    /// Parses the report syntax: `Un Wm + Vn Wm`, `1`, `0`. Whitespace is free.
    fn from_str(s: &str) -> Result<Gf2Poly, PolyParseError> {
        let s = s.trim();
        let mut p = Gf2Poly::zero();
        if s == "0" {
            return Ok(p);
        }
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(PolyParseError(s.to_string()));
            }
            let mut m = Monomial::ONE;
            if term != "1" {
                for tok in term.split_whitespace() {
                    m = m.times(Monomial::var(tok.parse()?));
                }
            }
            p.toggle(m);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> SymVar {
        s.parse().unwrap()
    }

    #[test]
    fn var_order_and_names() {
        let names: Vec<String> = (0..12).map(|b| SymVar::from_bit(b).to_string()).collect();
        assert_eq!(names, ["Xn", "Xm", "Yn", "Ym", "Zn", "Zm", "Un", "Um", "Vn", "Vm", "Wn", "Wm"]);
    }

    #[test]
    fn canonical_rendering() {
        let p: Gf2Poly = "Vn Wn + Un Wn + Wn Vn Un".parse().unwrap();
        assert_eq!(p.to_string(), "Un Vn Wn + Un Wn + Vn Wn");
        let q: Gf2Poly = "Zm Yn + Xn Zm".parse().unwrap();
        assert_eq!(q.to_string(), "Xn Zm + Yn Zm");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
        assert_eq!(Gf2Poly::one().to_string(), "1");
        let r: Gf2Poly = "Xm + Xn + 1".parse().unwrap();
        assert_eq!(r.to_string(), "1 + Xn + Xm");
    }

    #[test]
    fn idempotent_product() {
        let x = Gf2Poly::var(v("Xn"));
        assert_eq!(x.mul(&x), x);
        // (Xn + Yn)^2 = Xn + Yn over GF(2) with x^2 = x
        let s: Gf2Poly = "Xn + Yn".parse().unwrap();
        assert_eq!(s.mul(&s), s);
    }

    #[test]
    fn parse_errors() {
        assert!("Qn".parse::<Gf2Poly>().is_err());
        assert!("Xn +".parse::<Gf2Poly>().is_err());
        assert!("Xk".parse::<Gf2Poly>().is_err());
    }

    #[test]
    fn hex_round_trip() {
        let p: Gf2Poly = "Un Vn Wm + Un Wm + Vn Wm + 1".parse().unwrap();
        assert_eq!(Gf2Poly::from_hex(&p.to_hex()).unwrap(), p);
        assert!(Gf2Poly::from_hex("1000").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Gf2Poly> {
        proptest::collection::vec(0u16..4096, 0..12).prop_map(|ms| {
            let mut p = Gf2Poly::zero();
            for m in ms {
                p.toggle(Monomial(m));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(), assign in 0u16..4096) {
            prop_assert_eq!((a.clone() + &b).eval(assign), a.eval(assign) ^ b.eval(assign));
            prop_assert_eq!(a.mul(&b).eval(assign), a.eval(assign) & b.eval(assign));
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            let back: Gf2Poly = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
