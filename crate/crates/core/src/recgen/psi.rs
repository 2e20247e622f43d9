//! Atom evaluation: the `(ν, η)` case of each position and the Ψ lookup.

use std::fmt;

use super::types::{Kind, TypeWord};
use crate::poly::Shift;

/// Which Ψ table applies at a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nu {
    G,
    Z,
    X,
}

/// `(ν, η₀η₁η₂[η₃])`. For `ν = G` the fourth bit is not part of the case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaCase {
    pub nu: Nu,
    pub eta: [bool; 4],
}

impl EtaCase {
    pub fn new(nu: Nu, eta: [bool; 4]) -> EtaCase {
        let mut eta = eta;
        if nu == Nu::G {
            eta[3] = false;
        }
        EtaCase { nu, eta }
    }

    /// Table row: 3-bit index for `G`, 4-bit otherwise, `η₀` most significant.
    pub fn index(self) -> usize {
        let width = if self.nu == Nu::G { 3 } else { 4 };
        self.eta[..width].iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    /// Parses `G100`, `Z1000`, `X1111`.
    pub fn parse(s: &str) -> Option<EtaCase> {
        let mut cs = s.chars();
        let nu = match cs.next()? {
            'G' => Nu::G,
            'Z' => Nu::Z,
            'X' => Nu::X,
            _ => return None,
        };
        let bits: Vec<bool> = cs
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()?;
        let width = if nu == Nu::G { 3 } else { 4 };
        if bits.len() != width {
            return None;
        }
        let mut eta = [false; 4];
        eta[..width].copy_from_slice(&bits);
        Some(EtaCase { nu, eta })
    }
}

impl fmt::Display for EtaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, width) = match self.nu {
            Nu::G => ('G', 3),
            Nu::Z => ('Z', 4),
            Nu::X => ('X', 4),
        };
        write!(f, "{c}")?;
        for &b in &self.eta[..width] {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// A barred family before resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bar {
    X,
    Y,
    Z,
}

/// A nonzero Ψ value `X̄_n`, `Ȳ_{n+1}`, …
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiValue {
    pub bar: Bar,
    pub shift: Shift,
}

impl PsiValue {
    /// Local variable index `0..6` (`bar·2 + shift`).
    pub fn local_bit(self) -> u8 {
        self.bar as u8 * 2 + self.shift as u8
    }
}

impl fmt::Display for PsiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.bar {
            Bar::X => "X̄",
            Bar::Y => "Ȳ",
            Bar::Z => "Z̄",
        };
        let s = match self.shift {
            Shift::N => "n",
            Shift::M => "n+1",
        };
        write!(f, "{b}_{s}")
    }
}

const fn pv(bar: Bar, shift: Shift) -> Option<PsiValue> {
    Some(PsiValue { bar, shift })
}

const XN: Option<PsiValue> = pv(Bar::X, Shift::N);
const XM: Option<PsiValue> = pv(Bar::X, Shift::M);
const YN: Option<PsiValue> = pv(Bar::Y, Shift::N);
const YM: Option<PsiValue> = pv(Bar::Y, Shift::M);
const ZN: Option<PsiValue> = pv(Bar::Z, Shift::N);
const ZM: Option<PsiValue> = pv(Bar::Z, Shift::M);

const PSI_G: [Option<PsiValue>; 8] = [XN, YN, None, ZM, ZM, None, XM, YM];

const PSI_Z: [Option<PsiValue>; 16] = [
    None, None, ZN, ZN, None, None, None, None, // 0000..0111
    XN, XN, YN, None, None, None, ZM, ZM, // 1000..1111
];

const PSI_X: [Option<PsiValue>; 16] = [
    None, None, XN, XN, None, None, None, None, // 0000..0111
    None, None, ZM, None, None, None, XM, XM, // 1000..1111
];

/// The three Ψ tables. `standard()` is the only table used for real runs;
/// `set` exists for fault injection in self-tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiTable {
    g: [Option<PsiValue>; 8],
    z: [Option<PsiValue>; 16],
    x: [Option<PsiValue>; 16],
}

impl Default for PsiTable {
    fn default() -> Self {
        PsiTable::standard()
    }
}

impl PsiTable {
    pub fn standard() -> PsiTable {
        PsiTable { g: PSI_G, z: PSI_Z, x: PSI_X }
    }

    pub fn lookup(&self, case: EtaCase) -> Option<PsiValue> {
        let i = case.index();
        match case.nu {
            Nu::G => self.g[i],
            Nu::Z => self.z[i],
            Nu::X => self.x[i],
        }
    }

    pub fn set(&mut self, case: EtaCase, value: Option<PsiValue>) {
        let i = case.index();
        match case.nu {
            Nu::G => self.g[i] = value,
            Nu::Z => self.z[i] = value,
            Nu::X => self.x[i] = value,
        }
    }

    pub fn is_standard(&self) -> bool {
        *self == PsiTable::standard()
    }
}

/// Standard table lookup.
pub fn psi(case: EtaCase) -> Option<PsiValue> {
    PsiTable::standard().lookup(case)
}

/// `(ν, η)` for position `i` of a type with parameters `(kind, h, k)`.
pub fn eta_case_raw(d: usize, kind: Kind, h: usize, k: usize, letter: u8, tail: Option<u8>, i: usize) -> EtaCase {
    let friendly = (d - 1 - i) as u8;
    let eta = [
        i < h,
        d - i <= h,
        letter == friendly,
        kind != Kind::Py && tail == Some(friendly),
    ];
    let nu = match kind {
        Kind::Pz if i == (h + d - 1) % d => Nu::Z,
        Kind::Px if i == k => Nu::X,
        _ => Nu::G,
    };
    EtaCase::new(nu, eta)
}

pub fn eta_case(t: &TypeWord, i: usize) -> EtaCase {
    eta_case_raw(t.d(), t.kind, t.h, t.k, t.letters[i], t.tail, i)
}
