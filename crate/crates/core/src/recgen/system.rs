//! The generated recurrence system and its text forms.

use std::fmt::Write as _;

use super::generate::ListedType;
use super::types::{Direction, Kind};
use crate::oracle::StateVec;
use crate::pattern::{Pattern, Sign};
use crate::poly::{Fam, Gf2Poly};

/// `F_{dn+h} ≡ poly(state(n), state(n+1))`, with the number of listed types
/// that contributed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub fam: Fam,
    pub h: usize,
    pub poly: Gf2Poly,
    pub types: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSystem {
    pattern: Pattern,
    entries: Vec<Entry>,
    /// Set once the prover has validated the system against the oracle.
    pub n_valid: Option<u64>,
}

impl RecurrenceSystem {
    pub(crate) fn new(pattern: Pattern, entries: Vec<Entry>) -> RecurrenceSystem {
        RecurrenceSystem { pattern, entries, n_valid: None }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn d(&self) -> usize {
        self.pattern.d()
    }

    /// Families with entries: `X, Y, Z`, plus `U, V, W` when the last sign is `−1`.
    pub fn families(&self) -> &'static [Fam] {
        match self.pattern.last_sign() {
            Sign::Plus => &Fam::XYZ,
            Sign::Minus => &Fam::ALL,
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn entry(&self, fam: Fam, h: usize) -> Option<&Entry> {
        let d = self.d();
        let fi = self.families().iter().position(|&f| f == fam)?;
        (h < d).then(|| &self.entries[fi * d + h])
    }

    /// Number of listed types in one generation run.
    pub fn type_count(&self, dir: Direction) -> u64 {
        let fams = dir.targets();
        self.entries.iter().filter(|e| fams.contains(&e.fam)).map(|e| e.types).sum()
    }

    /// `state(dn + h)` from `state(n)` and `state(n + 1)`.
    pub fn step(&self, h: usize, sn: StateVec, sm: StateVec) -> StateVec {
        let assign = StateVec::assignment(sn, sm);
        let mut out = StateVec::empty(self.families().len() == 6);
        for &fam in self.families() {
            let e = self.entry(fam, h).expect("entry exists");
            out.set(fam, e.poly.eval(assign));
        }
        out
    }

    /// `X(3n+0) = Un`.
    pub fn line(&self, e: &Entry) -> String {
        format!("{}({}n+{}) = {}", e.fam, self.d(), e.h, e.poly)
    }

    /// One line per entry, `X` block first, trailing newline.
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| self.line(e) + "\n").collect()
    }

    /// Listing of every contributing type, grouped as in the entries, each
    /// group followed by its recurrence line.
    pub fn listing_text(&self, listing: &[ListedType]) -> String {
        let d = self.d();
        let mut out = String::new();
        let mut idx = 0usize;
        for &dir in Direction::runs(&self.pattern) {
            let _ = writeln!(out, "direction = {dir}");
            let mut number = 0usize;
            for kind in Kind::ALL {
                for h in 0..d {
                    for k in 0..kind.k_range(d) {
                        if kind == Kind::Px {
                            let _ = writeln!(out, " k : {d}N+{k}");
                        }
                        while idx < listing.len() {
                            let t = &listing[idx];
                            if (t.dir, t.word.kind, t.word.h, t.word.k) != (dir, kind, h, k) {
                                break;
                            }
                            number += 1;
                            let atoms: Vec<String> = t.atoms.iter().map(|a| a.to_string()).collect();
                            let _ = writeln!(out, " {number} {}: {}", t.word, atoms.join(" "));
                            idx += 1;
                        }
                    }
                    let e = self.entry(kind.target(dir), h).expect("entry exists");
                    let _ = writeln!(out, "{}", self.line(e));
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Parses one canonical line back into `(family, d, h, poly)`.
pub fn parse_line(line: &str) -> Option<(Fam, usize, usize, Gf2Poly)> {
    let (lhs, rhs) = line.split_once('=')?;
    let lhs = lhs.trim();
    let mut cs = lhs.chars();
    let fam = Fam::from_char(cs.next()?)?;
    let inner = cs.as_str().strip_prefix('(')?.strip_suffix(')')?;
    let (dpart, hpart) = inner.split_once("n+")?;
    let poly = rhs.trim().parse().ok()?;
    Some((fam, dpart.parse().ok()?, hpart.parse().ok()?, poly))
}

/// Collapses runs of spaces, trims each line and drops blank lines.
pub fn normalize_text(text: &str) -> String {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .map(|l| l + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonical_line() {
        let (f, d, h, p) = parse_line("Z(3n+1) =  Un Vn Wm + Un Wm + Vn Wm").unwrap();
        assert_eq!((f, d, h), (Fam::Z, 3, 1));
        assert_eq!(p.to_string(), "Un Vn Wm + Un Wm + Vn Wm");
        assert!(parse_line("Q(3n+1) = Un").is_none());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_text("X(3n+0) =  Un\n\n  Y(3n+0) = Un +  Vn \n"), "X(3n+0) = Un\nY(3n+0) = Un + Vn\n");
    }
}
