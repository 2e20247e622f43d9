//! Recurrence generation over independent work units.
//!
//! A naive unit fixes `(direction, kind, h, k, s_d, s_0)` and walks every
//! type whose atoms are all nonzero. A DP unit fixes `(direction, kind, h)`
//! and folds positions left to right over one bit per letter, choosing `k`
//! and the tail along the way. Per `(direction, kind, h)` both give the same
//! polynomial and type count.

use std::cell::RefCell;
use std::collections::HashMap;

use rayon::prelude::*;

use super::checkpoint::{Checkpoint, CheckpointError};
use super::eval::{atoms, local_to_global, Atom};
use super::psi::{eta_case_raw, PsiTable};
use super::system::{Entry, RecurrenceSystem};
use super::types::{balance_need, Direction, Kind, TypeSpace, TypeWord};
use crate::pattern::Pattern;
use crate::poly::{Gf2Poly, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitKey {
    pub dir: Direction,
    pub kind: Kind,
    pub h: usize,
    pub k: usize,
    /// Naive units: `s_d · d + s_0` (`s_d = 0` for `PY`). DP units cover
    /// every `k` and `s_d` at once and use `k = part = 0`.
    pub part: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitResult {
    pub types: u64,
    pub poly: Gf2Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Naive,
    Fast,
}

#[derive(Debug, Clone, Default)]
pub struct GenOptions {
    pub strategy: Strategy,
    pub table: PsiTable,
    /// Also return every listed type with its atoms (forces the naive walk).
    pub listing: bool,
}

/// A type with nonzero product, as shown in verbose listings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListedType {
    pub dir: Direction,
    pub word: TypeWord,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub system: RecurrenceSystem,
    pub listing: Vec<ListedType>,
    /// Units served from a checkpoint rather than recomputed.
    pub resumed_units: usize,
}

/// Every work unit for `p`, in the fixed reduction order.
pub fn unit_keys(p: &Pattern, strategy: Strategy) -> Vec<UnitKey> {
    let d = p.d();
    let mut keys = Vec::new();
    for &dir in Direction::runs(p) {
        let space = TypeSpace::new(p, dir);
        for kind in Kind::ALL {
            let tails = if kind.has_tail() { d } else { 1 };
            for h in 0..d {
                if strategy == Strategy::Fast {
                    keys.push(UnitKey { dir, kind, h, k: 0, part: 0 });
                    continue;
                }
                for k in 0..kind.k_range(d) {
                    for tail in 0..tails {
                        for s0 in 0..d {
                            if space.is_allowed(0, s0 as u8) {
                                keys.push(UnitKey { dir, kind, h, k, part: tail * d + s0 });
                            }
                        }
                    }
                }
            }
        }
    }
    keys
}

#[derive(Clone, Copy)]
struct Opt {
    letter: u8,
    non_friendly: bool,
    bit: u8,
    /// Whether the friendly letter of this position must end up used.
    need: bool,
}

struct Unit {
    tail: Option<u8>,
    friendly: Vec<u8>,
    /// Friendly letters of positions before `i`.
    done: Vec<u64>,
    opts: Vec<Vec<Opt>>,
}

/// Walk state: letters used by non-friendly occurrences, and the friendly
/// letters of processed positions that are required to be used.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct State {
    used: u64,
    need: u64,
}

impl Unit {
    fn new(p: &Pattern, space: &TypeSpace, table: &PsiTable, key: UnitKey) -> Unit {
        let d = p.d();
        let (tail, s0) = ((key.part / d) as u8, (key.part % d) as u8);
        let tail = key.kind.has_tail().then_some(tail);
        let opts = (0..d)
            .map(|i| {
                options(space, table, key.kind, key.h, key.k, tail, i)
                    .into_iter()
                    .filter(|o| i > 0 || o.letter == s0)
                    .collect()
            })
            .collect();
        let friendly: Vec<u8> = (0..d).map(|i| space.friendly(i)).collect();
        Unit { tail, done: done_masks(&friendly), friendly, opts }
    }

    fn start(&self) -> State {
        State { used: self.tail.map_or(0, |t| 1 << t), need: 0 }
    }

    /// Takes option `o` at `pos`, or `None` if it breaks distinctness or balance.
    fn advance(&self, pos: usize, s: State, o: &Opt) -> Option<State> {
        let f = self.friendly[pos];
        // friendly letters of earlier positions that must stay unused
        let forbidden = self.done[pos] & !s.need;
        let mut used = s.used;
        if o.non_friendly {
            if (used | forbidden) >> o.letter & 1 == 1 {
                return None;
            }
            used |= 1 << o.letter;
        }
        let mut need = s.need;
        if o.need {
            need |= 1 << f;
        } else if used >> f & 1 == 1 {
            return None;
        }
        Some(State { used, need })
    }

    fn accepts(s: State) -> bool {
        s.need & !s.used == 0
    }

    fn naive(&self, words: Option<&mut Vec<Vec<u8>>>) -> (u64, u64) {
        struct Walk<'a> {
            unit: &'a Unit,
            poly: u64,
            count: u64,
            cur: Vec<u8>,
            words: Option<&'a mut Vec<Vec<u8>>>,
        }
        fn go(w: &mut Walk<'_>, pos: usize, s: State, mono: u8) {
            if pos == w.unit.opts.len() {
                if Unit::accepts(s) {
                    w.poly ^= 1 << mono;
                    w.count += 1;
                    if let Some(ws) = w.words.as_deref_mut() {
                        ws.push(w.cur.clone());
                    }
                }
                return;
            }
            for o in &w.unit.opts[pos] {
                if let Some(next) = w.unit.advance(pos, s, o) {
                    w.cur[pos] = o.letter;
                    go(w, pos + 1, next, mono | 1 << o.bit);
                }
            }
        }
        let mut w = Walk { unit: self, poly: 0, count: 0, cur: vec![0; self.opts.len()], words };
        go(&mut w, 0, self.start(), 0);
        (w.poly, w.count)
    }
}

fn done_masks(friendly: &[u8]) -> Vec<u64> {
    (0..friendly.len()).map(|i| friendly[..i].iter().fold(0u64, |m, &f| m | 1 << f)).collect()
}

/// Options at position `i`, already filtered by balance and a nonzero Ψ value.
fn options(
    space: &TypeSpace,
    table: &PsiTable,
    kind: Kind,
    h: usize,
    k: usize,
    tail: Option<u8>,
    i: usize,
) -> Vec<Opt> {
    let d = space.d();
    (0..d as u8)
        .filter(|&l| space.is_allowed(i, l))
        .filter_map(|l| {
            let non_friendly = l != space.friendly(i);
            let need = balance_need(d, kind, h, k, i, non_friendly)?;
            let case = eta_case_raw(d, kind, h, k, l, tail, i);
            table.lookup(case).map(|v| Opt { letter: l, non_friendly, bit: v.local_bit(), need })
        })
        .collect()
}

/// Widest pattern whose DP layers are dense arrays (`4 · 2^d` entries).
const DENSE_MAX_D: usize = 20;

struct PosOpts {
    /// Non-friendly letters with an option.
    letters: u64,
    by_letter: Vec<Opt>,
    friendly: Option<Opt>,
}

impl PosOpts {
    fn new(d: usize, opts: &[Opt]) -> PosOpts {
        let blank = Opt { letter: 0, non_friendly: false, bit: 0, need: false };
        let mut po = PosOpts { letters: 0, by_letter: vec![blank; d], friendly: None };
        for &o in opts {
            if o.non_friendly {
                po.letters |= 1 << o.letter;
                po.by_letter[o.letter as usize] = o;
            } else {
                po.friendly = Some(o);
            }
        }
        po
    }
}

/// DP unit for one (direction, kind, h). `k` and the tail letter only
/// change the options at a single position each, so both are chosen
/// inside the walk and tracked by a flag bit.
struct FastUnit {
    d: usize,
    friendly: Vec<u8>,
    done: Vec<u64>,
    /// Indexed by `[is_k as usize | (is_tail as usize) << 1]`.
    opts: Vec<[PosOpts; 4]>,
    /// Per position, letter bits that make a state hopeless once it is
    /// processed: owed letters no later position can supply, and used
    /// letters whose own position never allows them to be used.
    dead: Vec<u64>,
    pick_k: bool,
    pick_tail: bool,
}

impl FastUnit {
    fn new(p: &Pattern, space: &TypeSpace, table: &PsiTable, kind: Kind, h: usize) -> FastUnit {
        let d = p.d();
        let friendly: Vec<u8> = (0..d).map(|i| space.friendly(i)).collect();
        let (pick_k, pick_tail) = (kind == Kind::Px, kind.has_tail());
        let opts = (0..d)
            .map(|i| {
                std::array::from_fn(|v| {
                    let (is_k, is_tail) = (v & 1 == 1, v & 2 == 2);
                    if (is_k && !pick_k) || (is_tail && !pick_tail) {
                        return Vec::new();
                    }
                    // k = d matches no position
                    let k = if is_k { i } else { d };
                    options(space, table, kind, h, k, is_tail.then_some(friendly[i]), i)
                })
            })
            .collect::<Vec<[Vec<Opt>; 4]>>();
        let mut supply = vec![0u64; d + 1];
        for i in (0..d).rev() {
            let here = opts[i].iter().flatten().filter(|o| o.non_friendly).fold(0, |m, o| m | 1 << o.letter);
            supply[i] = supply[i + 1] | here;
        }
        let needable = (0..d)
            .filter(|&i| opts[i].iter().flatten().any(|o| o.need))
            .fold(0u64, |m, i| m | 1 << friendly[i]);
        let done = done_masks(&friendly);
        let dead = (0..d)
            .map(|i| {
                let behind = done[i] | 1 << friendly[i];
                behind & !supply[i + 1] | !behind & !needable
            })
            .collect();
        let opts = opts.iter().map(|v| std::array::from_fn(|j| PosOpts::new(d, &v[j]))).collect();
        FastUnit { d, done, friendly, opts, dead, pick_k, pick_tail }
    }

    /// Subset DP. Bit `c` of the letter mask is "c used" while the balance
    /// position of letter `c` is ahead, and "c owed" once it is behind. Two
    /// flag bits record whether `k` and the tail have been placed.
    fn run(&self) -> (u64, u64) {
        if self.d > DENSE_MAX_D {
            return self.run_sparse();
        }
        thread_local! {
            static BUF: RefCell<[Vec<(u64, u64)>; 2]> = const { RefCell::new([Vec::new(), Vec::new()]) };
        }
        BUF.with_borrow_mut(|[cur, nxt]| {
            let size = 4usize << self.d;
            if cur.len() < size {
                cur.resize(size, (0, 0));
                nxt.resize(size, (0, 0));
            }
            self.run_dense(cur, nxt)
        })
    }

    fn accept(&self) -> (u64, u8) {
        (0, self.pick_k as u8 | (self.pick_tail as u8) << 1)
    }

    fn run_dense<'a>(&self, mut cur: &'a mut [(u64, u64)], mut nxt: &'a mut [(u64, u64)]) -> (u64, u64) {
        let d = self.d;
        let mut live = vec![0usize];
        let mut touched = Vec::new();
        cur[0] = (1, 1);
        for pos in 0..d {
            for &s in &live {
                let (poly, count) = std::mem::take(&mut cur[s]);
                let (letters, flags) = (s as u64 & ((1 << d) - 1), (s >> d) as u8);
                self.step(pos, letters, flags, |t, g, bit| {
                    let i = t as usize | (g as usize) << d;
                    let e = &mut nxt[i];
                    if e.1 == 0 {
                        touched.push(i);
                    }
                    e.0 ^= times_local(poly, bit);
                    e.1 += count;
                });
            }
            std::mem::swap(&mut cur, &mut nxt);
            std::mem::swap(&mut live, &mut touched);
            touched.clear();
        }
        let (al, af) = self.accept();
        let accept = al as usize | (af as usize) << d;
        let mut out = (0, 0);
        for &i in &live {
            let e = std::mem::take(&mut cur[i]);
            if i == accept {
                out = e;
            }
        }
        out
    }

    fn run_sparse(&self) -> (u64, u64) {
        let mut cur: HashMap<(u64, u8), (u64, u64)> = HashMap::from([((0, 0), (1, 1))]);
        for pos in 0..self.d {
            let mut nxt: HashMap<(u64, u8), (u64, u64)> = HashMap::with_capacity(cur.len());
            for (&(letters, flags), &(poly, count)) in &cur {
                self.step(pos, letters, flags, |t, g, bit| {
                    let e = nxt.entry((t, g)).or_default();
                    e.0 ^= times_local(poly, bit);
                    e.1 += count;
                });
            }
            cur = nxt;
        }
        cur.get(&self.accept()).copied().unwrap_or_default()
    }

    /// Every successor of state `(letters, flags)` at `pos`, with the local
    /// symbol its atom contributes.
    fn step(&self, pos: usize, letters: u64, flags: u8, mut emit: impl FnMut(u64, u8, u8)) {
        let f = self.friendly[pos];
        let fbit = 1u64 << f;
        let processed = self.done[pos];
        let dead = self.dead[pos];
        for (v, pos_opts) in self.opts[pos].iter().enumerate() {
            if pos_opts.letters == 0 && pos_opts.friendly.is_none() {
                continue;
            }
            // bit 0 places k here, bit 1 the tail
            let v = v as u8;
            if flags & v != 0 {
                continue;
            }
            let mut base = letters;
            if v & 2 != 0 {
                // the tail is the friendly letter of this position
                if base & fbit != 0 {
                    continue;
                }
                base |= fbit;
            }
            let g = flags | v;
            // letters this state may take non-friendly: owed if processed,
            // unused otherwise
            let mut avail = !(base ^ processed) & pos_opts.letters;
            let mut friendly_opt = pos_opts.friendly;
            loop {
                let o = if avail != 0 {
                    let c = avail.trailing_zeros();
                    avail &= avail - 1;
                    pos_opts.by_letter[c as usize]
                } else if let Some(o) = friendly_opt.take() {
                    o
                } else {
                    break;
                };
                let mut t = base ^ (o.non_friendly as u64) << o.letter;
                let used = t & fbit != 0;
                if used && !o.need {
                    continue;
                }
                t = t & !fbit | ((o.need && !used) as u64) << f;
                if t & dead != 0 {
                    continue;
                }
                emit(t, g, o.bit);
            }
        }
    }
}

/// Monomial indices (over six local symbols) that contain symbol `b`.
const HAS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Multiplies a local polynomial (a set of 64 monomials) by symbol `b`.
fn times_local(p: u64, b: u8) -> u64 {
    (p & HAS[b as usize]) ^ ((p & !HAS[b as usize]) << (1u32 << b))
}

fn globalize(local: u64, map: [u16; 6]) -> Gf2Poly {
    let mut out = Gf2Poly::zero();
    for lm in (0..64u32).filter(|&i| local >> i & 1 == 1) {
        let g = (0..6).filter(|&b| lm >> b & 1 == 1).fold(0u16, |acc, b| acc | map[b]);
        out.toggle(Monomial(g));
    }
    out
}

/// Generation with explicit options and an optional resumable checkpoint.
pub fn generate(
    p: &Pattern,
    opts: &GenOptions,
    checkpoint: Option<&Checkpoint>,
) -> Result<Generated, CheckpointError> {
    let d = p.d();
    let naive = opts.listing || opts.strategy == Strategy::Naive;
    let strategy = if naive { Strategy::Naive } else { Strategy::Fast };
    if let Some(c) = checkpoint {
        if c.strategy() != strategy {
            return Err(CheckpointError::WrongStrategy { path: c.path().to_path_buf() });
        }
    }
    let keys = unit_keys(p, strategy);
    let spaces: HashMap<Direction, TypeSpace> =
        Direction::runs(p).iter().map(|&dir| (dir, TypeSpace::new(p, dir))).collect();
    let maps: HashMap<Direction, [u16; 6]> =
        Direction::runs(p).iter().map(|&dir| (dir, local_to_global(dir.bar_targets(p)))).collect();

    let results: Vec<(UnitResult, Vec<Vec<u8>>, bool)> = keys
        .par_iter()
        .map(|key| {
            if !opts.listing {
                if let Some(r) = checkpoint.and_then(|c| c.get(key)) {
                    return Ok((r.clone(), Vec::new(), true));
                }
            }
            let space = &spaces[&key.dir];
            let mut words = Vec::new();
            let (local, types) = if naive {
                Unit::new(p, space, &opts.table, *key).naive(opts.listing.then_some(&mut words))
            } else {
                FastUnit::new(p, space, &opts.table, key.kind, key.h).run()
            };
            let r = UnitResult { types, poly: globalize(local, maps[&key.dir]) };
            if let Some(c) = checkpoint {
                c.record(key, &r)?;
            }
            Ok((r, words, false))
        })
        .collect::<Result<_, CheckpointError>>()?;

    let mut acc: HashMap<(Direction, Kind, usize), (Gf2Poly, u64)> = HashMap::new();
    let mut listing = Vec::new();
    let mut resumed_units = 0;
    for (key, (r, words, resumed)) in keys.iter().zip(results) {
        resumed_units += resumed as usize;
        let e = acc.entry((key.dir, key.kind, key.h)).or_default();
        e.0 += &r.poly;
        e.1 += r.types;
        for w in words {
            // words only come from naive units
            let tail = key.kind.has_tail().then(|| (key.part / d) as u8);
            let word = TypeWord { kind: key.kind, h: key.h, k: key.k, letters: w, tail };
            let atoms = atoms(p, key.dir, &word, &opts.table);
            listing.push(ListedType { dir: key.dir, word, atoms });
        }
    }
    listing.sort_by(|a, b| {
        (a.dir, a.word.kind, a.word.h, a.word.k, &a.word.letters, a.word.tail).cmp(&(
            b.dir,
            b.word.kind,
            b.word.h,
            b.word.k,
            &b.word.letters,
            b.word.tail,
        ))
    });

    let mut entries = Vec::new();
    for &dir in Direction::runs(p) {
        for kind in [Kind::Px, Kind::Py, Kind::Pz] {
            for h in 0..d {
                let (poly, types) = acc.remove(&(dir, kind, h)).unwrap_or_default();
                entries.push(Entry { fam: kind.target(dir), h, poly, types });
            }
        }
    }
    Ok(Generated { system: RecurrenceSystem::new(p.clone(), entries), listing, resumed_units })
}

/// Naive path: enumerate every contributing type.
pub fn generate_system(p: &Pattern) -> RecurrenceSystem {
    generate(p, &GenOptions::default(), None).expect("no checkpoint, no I/O").system
}

/// DP path over used-letter sets.
pub fn fast_generate_system(p: &Pattern) -> RecurrenceSystem {
    let opts = GenOptions { strategy: Strategy::Fast, ..GenOptions::default() };
    generate(p, &opts, None).expect("no checkpoint, no I/O").system
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_multiplication() {
        // 1 · s0 = s0; s0 · s0 = s0; (1 + s1) · s0 = s0 + s0 s1
        assert_eq!(times_local(1, 0), 1 << 1);
        assert_eq!(times_local(1 << 1, 0), 1 << 1);
        assert_eq!(times_local(1 | 1 << 2, 0), 1 << 1 | 1 << 3);
        // s5 · s5 stays; 1 · s5 lands on index 32
        assert_eq!(times_local(1, 5), 1 << 32);
        assert_eq!(times_local(1 << 32, 5), 1 << 32);
        // s0 + s0 s1 times s1 cancels
        assert_eq!(times_local(1 << 1 | 1 << 3, 1), 0);
    }

    #[test]
    fn sparse_layers_match_dense() {
        for word in ["+--", "+-+-+", "+--+-++"] {
            let p: Pattern = word.parse().unwrap();
            for &dir in Direction::runs(&p) {
                let space = TypeSpace::new(&p, dir);
                for kind in Kind::ALL {
                    for h in 0..p.d() {
                        let u = FastUnit::new(&p, &space, &PsiTable::standard(), kind, h);
                        assert_eq!(u.run(), u.run_sparse(), "{word} {dir} {kind} {h}");
                    }
                }
            }
        }
    }
}
