//! Permutation types: the words `s_0 … s_{d-1}[s_d]` that classify the
//! surviving permutations after the pairwise cancellations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pattern::{Family, Pattern};
use crate::poly::Fam;

/// Which aggregate a type contributes to: `PX` (sum over a residue class of
/// relaxed positions), `PY` (no relaxed position), `PZ` (last row relaxed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Px,
    Py,
    Pz,
}

impl Kind {
    /// Generation order.
    pub const ALL: [Kind; 3] = [Kind::Px, Kind::Py, Kind::Pz];

    pub fn has_tail(self) -> bool {
        self != Kind::Py
    }

    pub fn target(self, dir: Direction) -> Fam {
        let base = match self {
            Kind::Px => Fam::X,
            Kind::Py => Fam::Y,
            Kind::Pz => Fam::Z,
        };
        match dir {
            Direction::Forward => base,
            Direction::Swapped => base.partner(),
        }
    }

    /// Number of relaxed-position residues `k` to sum over.
    pub fn k_range(self, d: usize) -> usize {
        if self == Kind::Px {
            d
        } else {
            1
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Px => "PX",
            Kind::Py => "PY",
            Kind::Pz => "PZ",
        })
    }
}

/// Generation run: `Forward` counts in `J` (targets `X, Y, Z`), `Swapped`
/// exchanges `P ↔ Q` and `J ↔ K` (targets `U, V, W`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Swapped,
}

impl Direction {
    pub fn family(self) -> Family {
        match self {
            Direction::Forward => Family::J,
            Direction::Swapped => Family::K,
        }
    }

    pub fn targets(self) -> [Fam; 3] {
        match self {
            Direction::Forward => Fam::XYZ,
            Direction::Swapped => Fam::UVW,
        }
    }

    /// Families the atoms evaluate to (`X̄, Ȳ, Z̄` resolved).
    pub fn bar_targets(self, p: &Pattern) -> [Fam; 3] {
        match p.bar(self.family()) {
            Family::J => Fam::XYZ,
            Family::K => Fam::UVW,
        }
    }

    /// Runs needed for `p`: the swapped run only when the last sign is `−1`.
    pub fn runs(p: &Pattern) -> &'static [Direction] {
        match p.last_sign() {
            crate::pattern::Sign::Plus => &[Direction::Forward],
            crate::pattern::Sign::Minus => &[Direction::Forward, Direction::Swapped],
        }
    }

    pub fn code(self) -> char {
        match self {
            Direction::Forward => 'F',
            Direction::Swapped => 'S',
        }
    }

    pub fn from_code(c: char) -> Option<Direction> {
        match c {
            'F' => Some(Direction::Forward),
            'S' => Some(Direction::Swapped),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "XYZ",
            Direction::Swapped => "UVW",
        })
    }
}

/// A type `s_0 … s_{d-1}` (`PY`) or `s_0 … s_{d-1} s_d` (`PX`, `PZ`), letters
/// as residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeWord {
    pub kind: Kind,
    pub h: usize,
    pub k: usize,
    pub letters: Vec<u8>,
    pub tail: Option<u8>,
}

impl TypeWord {
    /// Parses letters `a, b, c, …`; the tail is present iff `kind` has one.
    pub fn parse(kind: Kind, h: usize, k: usize, word: &str) -> Option<TypeWord> {
        let mut letters: Vec<u8> = word
            .bytes()
            .map(|b| b.checked_sub(b'a').filter(|&x| x < 26))
            .collect::<Option<_>>()?;
        let tail = if kind.has_tail() { Some(letters.pop()?) } else { None };
        Some(TypeWord { kind, h, k, letters, tail })
    }

    pub fn d(&self) -> usize {
        self.letters.len()
    }

    pub fn word(&self) -> String {
        self.letters
            .iter()
            .chain(self.tail.iter())
            .map(|&l| (b'a' + l) as char)
            .collect()
    }
}

impl fmt::Display for TypeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// Letters admissible at each position of a type for one generation run.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    d: usize,
    /// `allowed[i]`: letters `j` with `(i + j + 1) mod d` in the run's class or `0`.
    allowed: Vec<u64>,
}

impl TypeSpace {
    pub fn new(p: &Pattern, dir: Direction) -> TypeSpace {
        let d = p.d();
        let class = p.class_mask(dir.family());
        let allowed = (0..d)
            .map(|i| {
                (0..d)
                    .filter(|&j| {
                        let r = (i + j + 1) % d;
                        r == 0 || (class >> r) & 1 == 1
                    })
                    .fold(0u64, |m, j| m | (1 << j))
            })
            .collect();
        TypeSpace { d, allowed }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The friendly letter `a_{d-1-i}`.
    pub fn friendly(&self, i: usize) -> u8 {
        (self.d - 1 - i) as u8
    }

    pub fn allowed(&self, i: usize) -> u64 {
        self.allowed[i]
    }

    pub fn is_allowed(&self, i: usize, letter: u8) -> bool {
        (self.allowed[i] >> letter) & 1 == 1
    }

    /// Position constraint, the distinctness filter on non-friendly
    /// occurrences (the tail always counts as non-friendly) and column balance.
    pub fn admits(&self, t: &TypeWord) -> bool {
        if t.letters.len() != self.d || t.tail.is_some() != t.kind.has_tail() {
            return false;
        }
        let mut used = 0u64;
        if let Some(l) = t.tail {
            if l as usize >= self.d {
                return false;
            }
            used |= 1 << l;
        }
        for (i, &l) in t.letters.iter().enumerate() {
            if !self.is_allowed(i, l) {
                return false;
            }
            if l != self.friendly(i) {
                if used >> l & 1 == 1 {
                    return false;
                }
                used |= 1 << l;
            }
        }
        balanced(self.d, t, used)
    }
}

/// Residue class of the relaxed row: `m - 1` for `PZ`, `k` for `PX`.
pub fn ell_class(d: usize, kind: Kind, h: usize, k: usize) -> Option<usize> {
    match kind {
        Kind::Py => None,
        Kind::Pz => Some((h + d - 1) % d),
        Kind::Px => Some(k),
    }
}

/// Column balance at position `a`.
///
/// With `m = dn + h`, column class `c` holds `n + [c < h]` indices. Rows of
/// class `a = d-1-c` send all but their unsociable row to `c`, and `c`
/// also receives every non-friendly occurrence of the letter `c` (tail
/// included). Equating the two gives, for the friendly letter of `a`,
/// whether it must occur non-friendly somewhere (`Some(true)`), must not
/// (`Some(false)`), or whether no word balances (`None`).
pub fn balance_need(d: usize, kind: Kind, h: usize, k: usize, a: usize, non_friendly: bool) -> Option<bool> {
    let v = (d - 1 - a < h) as i32 - (a < h) as i32
        + (ell_class(d, kind, h, k) == Some(a)) as i32
        + non_friendly as i32;
    match v {
        0 => Some(false),
        1 => Some(true),
        _ => None,
    }
}

/// Every column class receives as many biletters as it has indices.
/// `used` is the set of non-friendly letters, tail included.
fn balanced(d: usize, t: &TypeWord, used: u64) -> bool {
    (0..d).all(|a| {
        let f = (d - 1 - a) as u8;
        let nf = t.letters[a] != f;
        balance_need(d, t.kind, t.h, t.k, a, nf) == Some(used >> f & 1 == 1)
    })
}

/// All admissible types for `(kind, h, k)` in lexicographic order.
pub fn enumerate_types(
    p: &Pattern,
    dir: Direction,
    kind: Kind,
    h: usize,
    k: usize,
) -> impl Iterator<Item = TypeWord> {
    let space = TypeSpace::new(p, dir);
    let d = space.d;
    raw_types(p, dir, kind, h, k).filter(move |t| {
        let used = t
            .letters
            .iter()
            .enumerate()
            .filter(|&(i, &l)| l != space.friendly(i))
            .chain(t.tail.iter().map(|l| (d, l)))
            .fold(0u64, |m, (_, &l)| m | 1 << l);
        balanced(d, t, used)
    })
}

/// Types satisfying the position constraint and distinctness, before the
/// balance condition.
pub fn raw_types(p: &Pattern, dir: Direction, kind: Kind, h: usize, k: usize) -> TypeIter {
    let space = TypeSpace::new(p, dir);
    let d = space.d;
    let k = if kind == Kind::Px { k } else { 0 };
    let mut opts: Vec<Vec<u8>> = (0..d)
        .map(|i| (0..d as u8).filter(|&l| space.is_allowed(i, l)).collect())
        .collect();
    let mut friendly: Vec<Option<u8>> = (0..d).map(|i| Some(space.friendly(i))).collect();
    if kind.has_tail() {
        opts.push((0..d as u8).collect());
        friendly.push(None);
    }
    let len = opts.len();
    TypeIter {
        kind,
        h,
        k,
        d,
        opts,
        friendly,
        cursor: vec![0; len],
        word: vec![0; len],
        used: vec![0; len + 1],
        depth: 0,
        exhausted: false,
    }
}

/// Depth-first odometer over admissible types.
pub struct TypeIter {
    kind: Kind,
    h: usize,
    k: usize,
    d: usize,
    opts: Vec<Vec<u8>>,
    friendly: Vec<Option<u8>>,
    cursor: Vec<usize>,
    word: Vec<u8>,
    used: Vec<u64>,
    depth: usize,
    exhausted: bool,
}

impl Iterator for TypeIter {
    type Item = TypeWord;

    fn next(&mut self) -> Option<TypeWord> {
        let len = self.opts.len();
        while !self.exhausted {
            if self.depth == len {
                let t = TypeWord {
                    kind: self.kind,
                    h: self.h,
                    k: self.k,
                    letters: self.word[..self.d].to_vec(),
                    tail: self.kind.has_tail().then(|| self.word[self.d]),
                };
                self.depth -= 1;
                return Some(t);
            }
            let pos = self.depth;
            let mut chosen = None;
            while self.cursor[pos] < self.opts[pos].len() {
                let l = self.opts[pos][self.cursor[pos]];
                self.cursor[pos] += 1;
                let non_friendly = self.friendly[pos] != Some(l);
                if non_friendly && self.used[pos] >> l & 1 == 1 {
                    continue;
                }
                chosen = Some((l, non_friendly));
                break;
            }
            match chosen {
                Some((l, non_friendly)) => {
                    self.word[pos] = l;
                    self.used[pos + 1] = self.used[pos] | if non_friendly { 1 << l } else { 0 };
                    self.depth += 1;
                    if self.depth < len {
                        self.cursor[self.depth] = 0;
                    }
                }
                None if pos == 0 => self.exhausted = true,
                None => self.depth -= 1,
            }
        }
        None
    }
}
