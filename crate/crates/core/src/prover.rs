//! From a recurrence system and oracle seeds to a verdict.
//!
//! Seeds are exact parity states for `n = 1..N₀`. Once the system agrees
//! with them from some `nValid` on, every state at `m ≥ d·nValid` is a
//! polynomial image of two earlier states, so the set of consecutive state
//! triples reachable from the seeds is exactly the set of triples the
//! sequence realizes. Checking that set for even `Z` bits decides the
//! question for every `m`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::oracle::{apwenian_bit, state_range, StateVec};
use crate::pattern::Pattern;
use crate::recgen::{generate, CheckpointError, Checkpoint, Direction, GenOptions, RecurrenceSystem, Strategy};

pub const DEFAULT_CHECK_DEPTH: usize = 3;
pub const DEFAULT_WITNESS_BOUND: u64 = 4096;

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("seed window {have} is too short, need {need}")]
    SeedWindow { have: usize, need: usize },
    #[error("recurrences say H_{m}/2^(m-1) is even but the determinant oracle disagrees")]
    WitnessRejected { m: u64 },
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
}

/// `max(2d + 2, 16)`, widened so validation to `check_depth` has its seeds.
pub fn default_seed_window(d: usize, check_depth: usize) -> usize {
    (2 * d + 2).max(16).max(d * (check_depth + 1))
}

/// `state(n)` for `n = 1..=n0`, at position `n - 1`.
pub fn seed_states(p: &Pattern, n0: usize) -> Vec<StateVec> {
    let d = p.d();
    assert!(n0 >= (2 * d).max(d + 3), "seed window {n0} below max(2d, d+3)");
    state_range(p, 1, n0)
}

fn seed(seeds: &[StateVec], n: usize) -> StateVec {
    seeds[n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub n: u64,
    /// Entries whose evaluation disagreed with the oracle, as `Z(3n+2)`.
    pub failed: Vec<String>,
}

impl ValidationRow {
    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    /// Smallest `n` from which every row passes, if the last one does.
    pub n_valid: Option<u64>,
}

/// Checks every entry at `n = 1..=n_max` against the seeds.
pub fn validate_recurrences(
    sys: &RecurrenceSystem,
    seeds: &[StateVec],
    n_max: usize,
) -> Result<ValidationReport, ProverError> {
    let d = sys.d();
    let need = d * n_max + d;
    if seeds.len() < need {
        return Err(ProverError::SeedWindow { have: seeds.len(), need });
    }
    let rows: Vec<ValidationRow> = (1..=n_max)
        .map(|n| {
            let (sn, sm) = (seed(seeds, n), seed(seeds, n + 1));
            let mut failed = Vec::new();
            for h in 0..d {
                let got = sys.step(h, sn, sm);
                let want = seed(seeds, d * n + h);
                for &fam in sys.families() {
                    if got.get(fam) != want.get(fam) {
                        failed.push(format!("{fam}({d}n+{h})"));
                    }
                }
            }
            ValidationRow { n: n as u64, failed }
        })
        .collect();
    let n_valid = rows.iter().rposition(|r| !r.passed()).map_or(Some(1), |i| (i + 1 < rows.len()).then_some(i as u64 + 2));
    Ok(ValidationReport { rows, n_valid })
}

/// Top-down evaluation of `state(m)` for arbitrarily large `m`.
pub struct StateEvaluator<'a> {
    sys: &'a RecurrenceSystem,
    seeds: &'a [StateVec],
    memo: HashMap<u128, StateVec>,
}

impl<'a> StateEvaluator<'a> {
    /// Panics unless the system has been validated and the seeds reach
    /// `d·nValid - 1`.
    pub fn new(sys: &'a RecurrenceSystem, seeds: &'a [StateVec]) -> StateEvaluator<'a> {
        let n_valid = sys.n_valid.expect("system not validated");
        assert!(seeds.len() as u128 + 1 >= sys.d() as u128 * n_valid as u128, "seeds stop below d·nValid");
        StateEvaluator { sys, seeds, memo: HashMap::new() }
    }

    pub fn state(&mut self, m: u128) -> StateVec {
        assert!(m >= 1, "states start at 1");
        if m <= self.seeds.len() as u128 {
            return self.seeds[m as usize - 1];
        }
        if let Some(&s) = self.memo.get(&m) {
            return s;
        }
        let d = self.sys.d() as u128;
        let (n, h) = (m / d, (m % d) as usize);
        let (sn, sm) = (self.state(n), self.state(n + 1));
        let s = self.sys.step(h, sn, sm);
        self.memo.insert(m, s);
        s
    }

    /// Number of memoized indices beyond the seeds.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

pub fn eval_state(sys: &RecurrenceSystem, seeds: &[StateVec], m: u128) -> StateVec {
    StateEvaluator::new(sys, seeds).state(m)
}

/// `state(1..=len)` bottom up, seeds first.
pub fn state_prefix(sys: &RecurrenceSystem, seeds: &[StateVec], len: usize) -> Vec<StateVec> {
    let _ = sys.n_valid.expect("system not validated");
    let d = sys.d();
    let mut out: Vec<StateVec> = seeds.iter().copied().take(len).collect();
    for m in out.len() + 1..=len {
        let (n, h) = (m / d, m % d);
        out.push(sys.step(h, out[n - 1], out[n]));
    }
    out
}

/// Three consecutive states `(state(n), state(n+1), state(n+2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple(pub [StateVec; 3]);

impl Triple {
    pub fn all_z(&self) -> bool {
        self.0.iter().all(|s| s.z())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for Triple {
    type Err = String;

    fn from_str(s: &str) -> Result<Triple, String> {
        let v: Vec<StateVec> = s.split(' ').map(StateVec::parse).collect::<Option<_>>().ok_or(format!("bad triple `{s}`"))?;
        match v[..] {
            [a, b, c] if a.width() == b.width() && b.width() == c.width() => Ok(Triple([a, b, c])),
            _ => Err(format!("bad triple `{s}`")),
        }
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Triple, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

pub struct Closure {
    /// Each reachable triple with the first index found to realize it
    /// (saturating at `u128::MAX`).
    pub triples: BTreeMap<Triple, u128>,
    /// Breadth-first rounds until nothing new appeared.
    pub iterations: usize,
}

/// Fixed point of the block map over the seed triples from `nValid` on.
pub fn close(sys: &RecurrenceSystem, seeds: &[StateVec]) -> Closure {
    let n_valid = sys.n_valid.expect("system not validated") as usize;
    let d = sys.d();
    let mut triples = BTreeMap::new();
    let mut frontier = Vec::new();
    for n in n_valid..=seeds.len().saturating_sub(2) {
        let t = Triple([seed(seeds, n), seed(seeds, n + 1), seed(seeds, n + 2)]);
        if let std::collections::btree_map::Entry::Vacant(e) = triples.entry(t) {
            e.insert(n as u128);
            frontier.push((t, n as u128));
        }
    }
    let mut iterations = 0;
    let mut block = vec![StateVec::empty(false); 2 * d];
    while !frontier.is_empty() {
        iterations += 1;
        let mut next = Vec::new();
        for (Triple([a, b, c]), at) in frontier {
            for h in 0..d {
                block[h] = sys.step(h, a, b);
                block[d + h] = sys.step(h, b, c);
            }
            let base = at.saturating_mul(d as u128);
            for j in 0..2 * d - 2 {
                let t = Triple([block[j], block[j + 1], block[j + 2]]);
                if let std::collections::btree_map::Entry::Vacant(e) = triples.entry(t) {
                    let i = base.saturating_add(j as u128);
                    e.insert(i);
                    next.push((t, i));
                }
            }
        }
        frontier = next;
    }
    Closure { triples, iterations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Apwenian,
    NotApwenian,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Apwenian => "APWENIAN",
            Verdict::NotApwenian => "NOT_APWENIAN",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Verdict, String> {
        match s {
            "APWENIAN" => Ok(Verdict::Apwenian),
            "NOT_APWENIAN" => Ok(Verdict::NotApwenian),
            "INCONCLUSIVE" => Ok(Verdict::Inconclusive),
            _ => Err(format!("unknown verdict `{s}`")),
        }
    }
}

/// Smallest `m ≤ bound` whose recurrence-evaluated `Z` bit is 0, confirmed
/// by the determinant oracle.
pub fn find_witness(sys: &RecurrenceSystem, seeds: &[StateVec], bound: u64) -> Result<Option<u64>, ProverError> {
    let states = state_prefix(sys, seeds, bound as usize);
    match states.iter().position(|s| !s.z()) {
        Some(i) => confirm(sys.pattern(), i as u64 + 1).map(Some),
        None => Ok(None),
    }
}

fn confirm(p: &Pattern, m: u64) -> Result<u64, ProverError> {
    if apwenian_bit(p, m as usize) {
        Err(ProverError::WitnessRejected { m })
    } else {
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureEntry {
    pub triple: Triple,
    /// An index `n` with `(state(n), state(n+1), state(n+2)) = triple`.
    pub at: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    pub closure_size: usize,
    pub iterations: usize,
    pub types_xyz: u64,
    pub types_uvw: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub pattern: String,
    pub verdict: Verdict,
    pub witness: Option<u64>,
    /// A closure triple with a zero `Z` bit, when no witness lies in range.
    pub offending: Option<Triple>,
    pub n_valid: Option<u64>,
    /// `state(n)` for `n = 1..=N₀`.
    pub seeds: Vec<StateVec>,
    pub recurrences: Vec<String>,
    pub stats: ProofStats,
    pub closure: Vec<ClosureEntry>,
}

/// Decides the pattern from a validated (or failed) system.
pub fn closure_prove(
    sys: &RecurrenceSystem,
    seeds: &[StateVec],
    witness_bound: u64,
) -> Result<ProofCertificate, ProverError> {
    let mut cert = ProofCertificate {
        pattern: sys.pattern().sign_word(),
        verdict: Verdict::Inconclusive,
        witness: None,
        offending: None,
        n_valid: sys.n_valid,
        seeds: seeds.to_vec(),
        recurrences: sys.entries().iter().map(|e| sys.line(e)).collect(),
        stats: ProofStats {
            closure_size: 0,
            iterations: 0,
            types_xyz: sys.type_count(Direction::Forward),
            types_uvw: sys.type_count(Direction::Swapped),
        },
        closure: Vec::new(),
    };
    // a zero among the seeds settles it whatever the recurrences say
    if let Some(i) = seeds.iter().position(|s| !s.z()) {
        cert.verdict = Verdict::NotApwenian;
        cert.witness = Some(confirm(sys.pattern(), i as u64 + 1)?);
        return Ok(cert);
    }
    if sys.n_valid.is_none() {
        return Ok(cert);
    }
    let closure = close(sys, seeds);
    cert.stats.closure_size = closure.triples.len();
    cert.stats.iterations = closure.iterations;
    cert.closure = closure.triples.iter().map(|(&triple, &at)| ClosureEntry { triple, at }).collect();
    match closure.triples.keys().find(|t| !t.all_z()) {
        None => cert.verdict = Verdict::Apwenian,
        Some(&bad) => {
            cert.verdict = Verdict::NotApwenian;
            cert.witness = find_witness(sys, seeds, witness_bound)?;
            if cert.witness.is_none() {
                cert.offending = Some(bad);
            }
        }
    }
    Ok(cert)
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("none".to_string(), |v| v.to_string())
}

impl ProofCertificate {
    /// Line-oriented form; [`ProofCertificate::from_text`] reads it back.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[StateVec]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "pattern = {}", self.pattern);
        let _ = writeln!(s, "verdict = {}", self.verdict);
        let _ = writeln!(s, "witness = {}", opt(&self.witness));
        let _ = writeln!(s, "offending = {}", opt(&self.offending));
        let _ = writeln!(s, "n_valid = {}", opt(&self.n_valid));
        let _ = writeln!(s, "seeds = {}", join(&self.seeds));
        let _ = writeln!(s, "types = {} {}", self.stats.types_xyz, self.stats.types_uvw);
        let _ = writeln!(s, "closure_size = {}", self.stats.closure_size);
        let _ = writeln!(s, "iterations = {}", self.stats.iterations);
        s.push_str("recurrences:\n");
        for l in &self.recurrences {
            let _ = writeln!(s, "{l}");
        }
        s.push_str("closure:\n");
        for e in &self.closure {
            let _ = writeln!(s, "{} @ {}", e.triple, e.at);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<ProofCertificate, String> {
        let mut lines = text.lines();
        let mut field = |key: &str| -> Result<String, String> {
            let l = lines.next().ok_or(format!("missing `{key}`"))?;
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(" = "))
                .map(str::to_string)
                .ok_or(format!("expected `{key} = …`, found `{l}`"))
        };
        fn parse_opt<T: FromStr>(s: &str) -> Result<Option<T>, String> {
            if s == "none" {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| format!("bad value `{s}`"))
        }
        let pattern = field("pattern")?;
        let verdict = field("verdict")?.parse()?;
        let witness = parse_opt(&field("witness")?)?;
        let offending = parse_opt(&field("offending")?)?;
        let n_valid = parse_opt(&field("n_valid")?)?;
        let seeds_line = field("seeds")?;
        let seeds = seeds_line
            .split(' ')
            .filter(|s| !s.is_empty())
            .map(|s| StateVec::parse(s).ok_or(format!("bad state `{s}`")))
            .collect::<Result<_, _>>()?;
        let types = field("types")?;
        let (x, u) = types.split_once(' ').ok_or("bad types line")?;
        let num = |s: &str| s.parse::<u64>().map_err(|e| e.to_string());
        let (types_xyz, types_uvw) = (num(x)?, num(u)?);
        let closure_size = field("closure_size")?.parse().map_err(|_| "bad closure_size")?;
        let iterations = field("iterations")?.parse().map_err(|_| "bad iterations")?;
        if lines.next() != Some("recurrences:") {
            return Err("expected `recurrences:`".into());
        }
        let mut recurrences = Vec::new();
        for l in lines.by_ref() {
            if l == "closure:" {
                break;
            }
            recurrences.push(l.to_string());
        }
        let closure = lines
            .map(|l| {
                let (t, at) = l.split_once(" @ ").ok_or(format!("bad closure line `{l}`"))?;
                Ok(ClosureEntry { triple: t.parse()?, at: at.parse().map_err(|_| format!("bad index `{at}`"))? })
            })
            .collect::<Result<_, String>>()?;
        Ok(ProofCertificate {
            pattern,
            verdict,
            witness,
            offending,
            n_valid,
            seeds,
            recurrences,
            stats: ProofStats { closure_size, iterations, types_xyz, types_uvw },
            closure,
        })
    }

    /// Checks the verdict-level invariants against the closure and seeds.
    pub fn check(&self) -> Result<(), String> {
        match self.verdict {
            Verdict::Apwenian => {
                if let Some(i) = self.seeds.iter().position(|s| !s.z()) {
                    return Err(format!("seed {} has an even Z", i + 1));
                }
                if let Some(e) = self.closure.iter().find(|e| !e.triple.all_z()) {
                    return Err(format!("closure triple {} has an even Z", e.triple));
                }
            }
            Verdict::NotApwenian => {
                if self.witness.is_none() && self.offending.is_none() {
                    return Err("negative verdict without witness or offending triple".into());
                }
            }
            Verdict::Inconclusive => {}
        }
        if self.closure.len() != self.stats.closure_size {
            return Err("closure size mismatch".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ProveConfig {
    pub strategy: Strategy,
    pub check_depth: usize,
    /// `N₀`; `None` picks [`default_seed_window`].
    pub seed_window: Option<usize>,
    pub witness_bound: u64,
}

impl Default for ProveConfig {
    fn default() -> ProveConfig {
        ProveConfig {
            strategy: Strategy::Fast,
            check_depth: DEFAULT_CHECK_DEPTH,
            seed_window: None,
            witness_bound: DEFAULT_WITNESS_BOUND,
        }
    }
}

pub struct Analysis {
    pub system: RecurrenceSystem,
    pub validation: ValidationReport,
    pub certificate: ProofCertificate,
}

/// Generate, validate and close.
pub fn analyze(p: &Pattern, cfg: &ProveConfig, checkpoint: Option<&Checkpoint>) -> Result<Analysis, ProverError> {
    let opts = GenOptions { strategy: cfg.strategy, ..GenOptions::default() };
    let sys = generate(p, &opts, checkpoint)?.system;
    prove_system(sys, cfg)
}

/// Validate and close an already generated system.
pub fn prove_system(mut sys: RecurrenceSystem, cfg: &ProveConfig) -> Result<Analysis, ProverError> {
    let d = sys.d();
    let n0 = cfg.seed_window.unwrap_or_else(|| default_seed_window(d, cfg.check_depth));
    let need = (d * cfg.check_depth + d).max((2 * d).max(d + 3));
    if n0 < need {
        return Err(ProverError::SeedWindow { have: n0, need });
    }
    let seeds = seed_states(sys.pattern(), n0);
    let validation = validate_recurrences(&sys, &seeds, cfg.check_depth)?;
    sys.n_valid = validation.n_valid;
    let certificate = closure_prove(&sys, &seeds, cfg.witness_bound)?;
    Ok(Analysis { system: sys, validation, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;
    use crate::recgen::generate_system;

    fn validated(p: &Pattern) -> (RecurrenceSystem, Vec<StateVec>) {
        let mut sys = generate_system(p);
        let seeds = seed_states(p, default_seed_window(p.d(), 3));
        sys.n_valid = validate_recurrences(&sys, &seeds, 3).unwrap().n_valid;
        (sys, seeds)
    }

    #[test]
    fn n_valid_from_rows() {
        let (sys, seeds) = validated(&named("F3").unwrap());
        assert_eq!(sys.n_valid, Some(1));
        let mut bad = seeds.clone();
        // corrupt state(6), checked by the n = 2 row only
        bad[5] = StateVec::from_bits(!bad[5].bits(), true);
        let r = validate_recurrences(&sys, &bad, 3).unwrap();
        assert!(!r.rows[1].passed());
        assert_eq!(r.n_valid, Some(3));
    }

    #[test]
    fn triple_text_round_trip() {
        let t: Triple = "111111 101111 110111".parse().unwrap();
        assert_eq!(t.to_string().parse::<Triple>().unwrap(), t);
        assert!(!t.all_z());
        assert!("111 111".parse::<Triple>().is_err());
        assert!("111 111 111111".parse::<Triple>().is_err());
    }

    #[test]
    fn evaluator_matches_prefix() {
        let (sys, seeds) = validated(&named("F5").unwrap());
        let prefix = state_prefix(&sys, &seeds, 3000);
        let mut ev = StateEvaluator::new(&sys, &seeds);
        for m in [1usize, 9, 17, 30, 31, 256, 1234, 2999, 3000] {
            assert_eq!(ev.state(m as u128), prefix[m - 1], "m = {m}");
        }
    }
}
