use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::poly::Fam;

/// Parity bits of `X, Y, Z` and, for patterns ending in `−1`, `U, V, W` at
/// one index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVec {
    bits: u8,
    full: bool,
}

impl StateVec {
    pub fn empty(full: bool) -> StateVec {
        StateVec { bits: 0, full }
    }

    /// Bit `i` is family `i` in `X, Y, Z, U, V, W` order.
    pub fn from_bits(bits: u8, full: bool) -> StateVec {
        let mask = if full { 0x3f } else { 0x07 };
        StateVec { bits: bits & mask, full }
    }

    pub fn bits(self) -> u8 {
        self.bits
    }

    pub fn is_full(self) -> bool {
        self.full
    }

    pub fn width(self) -> usize {
        if self.full {
            6
        } else {
            3
        }
    }

    pub fn get(self, fam: Fam) -> bool {
        self.bits >> fam.index() & 1 == 1
    }

    pub fn set(&mut self, fam: Fam, v: bool) {
        let i = fam.index();
        debug_assert!(i < self.width(), "{fam} slot absent");
        self.bits = (self.bits & !(1 << i)) | (v as u8) << i;
    }

    pub fn z(self) -> bool {
        self.get(Fam::Z)
    }

    pub fn w(self) -> Option<bool> {
        self.full.then(|| self.get(Fam::W))
    }

    /// `T = X + XY + Y`.
    pub fn t(self) -> bool {
        let (x, y) = (self.get(Fam::X), self.get(Fam::Y));
        x ^ (x & y) ^ y
    }

    /// `R = U + UV + V`.
    pub fn r(self) -> Option<bool> {
        self.full.then(|| {
            let (u, v) = (self.get(Fam::U), self.get(Fam::V));
            u ^ (u & v) ^ v
        })
    }

    /// Symbol assignment for polynomial evaluation: `n` slots from `sn`,
    /// `n + 1` slots from `sm`.
    pub fn assignment(sn: StateVec, sm: StateVec) -> u16 {
        let mut a = 0u16;
        for i in 0..6 {
            a |= ((sn.bits >> i & 1) as u16) << (2 * i);
            a |= ((sm.bits >> i & 1) as u16) << (2 * i + 1);
        }
        a
    }

    /// Parses the bit string form (`"101"` or `"101111"`).
    pub fn parse(s: &str) -> Option<StateVec> {
        if s.len() != 3 && s.len() != 6 {
            return None;
        }
        let mut bits = 0u8;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(StateVec { bits, full: s.len() == 6 })
    }
}

impl fmt::Display for StateVec {
    /// Bits in `X Y Z [U V W]` order, e.g. `101111`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        Ok(())
    }
}

impl Serialize for StateVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StateVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<StateVec, D::Error> {
        let s = String::deserialize(d)?;
        StateVec::parse(&s).ok_or_else(|| de::Error::custom(format!("bad state `{s}`")))
    }
}
