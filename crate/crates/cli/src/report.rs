use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use apwen::oracle::{apwenian_bit, exact_counts, hankel_exact, hankel_mod, state_range};
use apwen::prover::{prove_system, Analysis, ProveConfig, Verdict};
use apwen::recgen::{generate, Checkpoint, Direction, GenOptions, Generated, Strategy};
use apwen::{Family, Pattern, Sign};

use crate::{parse_pattern_arg, parse_range, GenArgs, OracleCmd};

const MAX_HANKEL_EXACT: usize = 600;
const MAX_MODULAR: usize = 4096;
const MAX_SET_PREFIX: usize = 1_000_000;
pub const MAX_SEARCH_D: usize = 16;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Naive => "naive",
        Strategy::Fast => "fast",
    }
}

pub fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Apwenian => 0,
        Verdict::NotApwenian => 1,
        Verdict::Inconclusive => 2,
    }
}

fn build(p: &Pattern, gen: &GenArgs) -> Result<(Generated, Strategy)> {
    let strategy = if gen.fast && !gen.verbose { Strategy::Fast } else { Strategy::Naive };
    let checkpoint = match &gen.resume {
        Some(path) => Some(Checkpoint::open(path, p, strategy)?),
        None => None,
    };
    let opts = GenOptions { strategy, listing: gen.verbose, ..GenOptions::default() };
    let g = generate(p, &opts, checkpoint.as_ref())?;
    if g.resumed_units > 0 {
        eprintln!("resumed {} work units from checkpoint", g.resumed_units);
    }
    Ok((g, strategy))
}

fn has_uvw(p: &Pattern) -> bool {
    p.last_sign() == Sign::Minus
}

fn type_counts(a: &Analysis) -> Value {
    let p = a.system.pattern();
    let mut v = json!({ "xyz": a.system.type_count(Direction::Forward) });
    if has_uvw(p) {
        v["uvw"] = json!(a.system.type_count(Direction::Swapped));
    }
    v
}

pub fn analyze(p: &Pattern, gen: &GenArgs, depth: usize, cert_path: Option<&Path>, json: bool) -> Result<(String, u8)> {
    let (g, strategy) = build(p, gen)?;
    let cfg = ProveConfig { strategy, check_depth: depth, ..ProveConfig::default() };
    let a = prove_system(g.system.clone(), &cfg)?;
    let c = &a.certificate;
    if let Some(path) = cert_path {
        let body = if json { serde_json::to_string_pretty(c)? + "\n" } else { c.to_text() };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    let code = verdict_code(c.verdict);
    if json {
        let mut v = json!({
            "pattern": p.sign_word(),
            "generator": strategy_name(strategy),
            "types": type_counts(&a),
            "recurrences": c.recurrences,
            "validation": a.validation,
            "certificate": c,
        });
        if gen.verbose {
            v["listing"] = json!(g.system.listing_text(&g.listing).lines().collect::<Vec<_>>());
        }
        return Ok((pretty(&v), code));
    }
    let mut s = String::new();
    let _ = writeln!(s, "pattern = {p}");
    let _ = writeln!(s, "generator = {}", strategy_name(strategy));
    let _ = writeln!(s, "types XYZ = {}", a.system.type_count(Direction::Forward));
    if has_uvw(p) {
        let _ = writeln!(s, "types UVW = {}", a.system.type_count(Direction::Swapped));
    }
    s.push('\n');
    if gen.verbose {
        s.push_str(&g.system.listing_text(&g.listing));
    } else {
        s.push_str(&a.system.to_text());
        s.push('\n');
    }
    for row in &a.validation.rows {
        if row.passed() {
            let _ = writeln!(s, "validation n={} ok", row.n);
        } else {
            let _ = writeln!(s, "validation n={} FAILED {}", row.n, row.failed.join(" "));
        }
    }
    let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
    let _ = writeln!(s, "n_valid = {}", opt(c.n_valid.map(|n| n.to_string())));
    let _ = writeln!(s, "seeds = {}", c.seeds.len());
    let _ = writeln!(s, "closure_size = {}", c.stats.closure_size);
    let _ = writeln!(s, "iterations = {}", c.stats.iterations);
    let _ = writeln!(s, "verdict = {}", c.verdict);
    let _ = writeln!(s, "witness = {}", opt(c.witness.map(|m| m.to_string())));
    if let Some(t) = c.offending {
        let _ = writeln!(s, "offending = {t}");
    }
    Ok((s, code))
}

pub fn recurrences(p: &Pattern, gen: &GenArgs, json: bool) -> Result<String> {
    let (g, strategy) = build(p, gen)?;
    let sys = &g.system;
    if json {
        let entries: Vec<Value> = sys
            .entries()
            .iter()
            .map(|e| json!({ "line": sys.line(e), "types": e.types }))
            .collect();
        let mut v = json!({ "pattern": p.sign_word(), "generator": strategy_name(strategy), "entries": entries });
        if gen.verbose {
            v["listing"] = json!(sys.listing_text(&g.listing).lines().collect::<Vec<_>>());
        }
        return Ok(pretty(&v));
    }
    Ok(if gen.verbose { sys.listing_text(&g.listing) } else { sys.to_text() })
}

fn check_end(r: &std::ops::RangeInclusive<usize>, max: usize) -> Result<()> {
    if *r.end() > max {
        bail!("range end {} exceeds the oracle bound {max}", r.end());
    }
    Ok(())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn oracle(cmd: &OracleCmd, json: bool) -> Result<String> {
    let mut s = String::new();
    let value = match cmd {
        OracleCmd::Hankel { pattern, range, modulus } => {
            let p = parse_pattern_arg(pattern)?;
            let r = parse_range(range)?;
            match modulus {
                None => {
                    check_end(&r, MAX_HANKEL_EXACT)?;
                    let rows: Vec<(usize, String)> = r.map(|n| (n, hankel_exact(&p, n).to_string())).collect();
                    for (n, h) in &rows {
                        let _ = writeln!(s, "H({n}) = {h}");
                    }
                    json!(rows.iter().map(|(n, h)| json!({ "n": n, "value": h })).collect::<Vec<_>>())
                }
                Some(q) => {
                    check_end(&r, MAX_MODULAR)?;
                    let rows: Vec<(usize, u64)> =
                        r.map(|n| Ok((n, hankel_mod(&p, n, *q)?))).collect::<Result<_, apwen::oracle::OracleError>>()?;
                    for (n, h) in &rows {
                        let _ = writeln!(s, "H({n}) mod {q} = {h}");
                    }
                    json!(rows.iter().map(|(n, h)| json!({ "n": n, "modulus": q, "value": h })).collect::<Vec<_>>())
                }
            }
        }
        OracleCmd::Bits { pattern, range } => {
            let p = parse_pattern_arg(pattern)?;
            let r = parse_range(range)?;
            check_end(&r, MAX_MODULAR)?;
            let rows: Vec<(usize, bool)> = r.map(|m| (m, apwenian_bit(&p, m))).collect();
            for (m, b) in &rows {
                let _ = writeln!(s, "bit({m}) = {}", *b as u8);
            }
            json!(rows.iter().map(|(m, b)| json!({ "m": m, "odd": b })).collect::<Vec<_>>())
        }
        OracleCmd::State { pattern, range } => {
            let p = parse_pattern_arg(pattern)?;
            let r = parse_range(range)?;
            check_end(&r, MAX_MODULAR)?;
            let states = state_range(&p, *r.start(), *r.end());
            for (n, st) in r.clone().zip(&states) {
                let _ = writeln!(s, "state({n}) = {st}");
            }
            json!(r.zip(&states).map(|(n, st)| json!({ "n": n, "state": st })).collect::<Vec<_>>())
        }
        OracleCmd::Counts { pattern, range, max_brute } => {
            let p = parse_pattern_arg(pattern)?;
            let r = parse_range(range)?;
            let rows = r.map(|m| exact_counts(&p, m, *max_brute)).collect::<Result<Vec<_>, _>>()?;
            for e in &rows {
                let _ = writeln!(
                    s,
                    "m={} X={} Y={} Z={} U={} V={} W={} T={} R={}",
                    e.m, e.x, e.y, e.z, e.u, e.v, e.w, e.t, e.r
                );
            }
            // u128 counts as decimal strings
            json!(rows
                .iter()
                .map(|e| json!({
                    "m": e.m, "X": e.x.to_string(), "Y": e.y.to_string(), "Z": e.z.to_string(),
                    "U": e.u.to_string(), "V": e.v.to_string(), "W": e.w.to_string(),
                    "T": e.t.to_string(), "R": e.r.to_string(),
                }))
                .collect::<Vec<_>>())
        }
        OracleCmd::Sets { pattern, count } => {
            let p = parse_pattern_arg(pattern)?;
            if *count > MAX_SET_PREFIX {
                bail!("prefix length {count} exceeds the bound {MAX_SET_PREFIX}");
            }
            let (ps, qs) = (p.p_set(), p.q_set());
            let j = p.family_prefix(Family::J, *count);
            let k = p.family_prefix(Family::K, *count);
            let _ = writeln!(s, "P = {{{}}}", join(&ps));
            let _ = writeln!(s, "Q = {{{}}}", join(&qs));
            let _ = writeln!(s, "J = {{{}}}", join(&j));
            let _ = writeln!(s, "K = {{{}}}", join(&k));
            json!({ "P": ps, "Q": qs, "J": j, "K": k })
        }
    };
    Ok(if json { pretty(&value) } else { s })
}

enum Outcome {
    Scanned(usize),
    Proved(Box<Analysis>),
}

pub fn search(d: usize, scan: usize, strategy: Strategy, depth: usize, json: bool) -> Result<String> {
    if !(2..=MAX_SEARCH_D).contains(&d) {
        bail!("d = {d} is outside 2..={MAX_SEARCH_D}");
    }
    let patterns: Vec<Pattern> =
        (0..1u64 << (d - 1)).map(|mask| Pattern::from_tail_bits(d, mask)).collect::<Result<_, _>>()?;
    let cfg = ProveConfig { strategy, check_depth: depth, ..ProveConfig::default() };
    let outcomes: Vec<Outcome> = patterns
        .par_iter()
        .map(|p| -> Result<Outcome> {
            if let Some(m) = (1..=scan).find(|&m| !apwenian_bit(p, m)) {
                return Ok(Outcome::Scanned(m));
            }
            let opts = GenOptions { strategy, ..GenOptions::default() };
            let sys = generate(p, &opts, None)?.system;
            Ok(Outcome::Proved(Box::new(prove_system(sys, &cfg)?)))
        })
        .collect::<Result<_>>()?;

    let partner = |p: &Pattern| (d % 2 == 1).then(|| p.negate_variable().sign_word());
    let mut rows = Vec::new();
    let mut proven = Vec::new();
    for (p, o) in patterns.iter().zip(&outcomes) {
        let (verdict, witness, by) = match o {
            Outcome::Scanned(m) => (Verdict::NotApwenian, Some(*m as u64), "scan"),
            Outcome::Proved(a) => (a.certificate.verdict, a.certificate.witness, "proof"),
        };
        if verdict == Verdict::Apwenian {
            proven.push(p.sign_word());
        }
        rows.push((p.sign_word(), verdict, witness, by, partner(p)));
    }
    let survivors = outcomes.iter().filter(|o| matches!(o, Outcome::Proved(_))).count();

    if json {
        let list: Vec<Value> = rows
            .iter()
            .map(|(w, v, m, by, part)| json!({ "pattern": w, "verdict": v, "witness": m, "by": by, "partner": part }))
            .collect();
        return Ok(pretty(&json!({
            "d": d, "patterns": patterns.len(), "scan": scan, "survivors": survivors,
            "results": list, "proven": proven,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "d = {d}");
    let _ = writeln!(s, "patterns = {}", patterns.len());
    let _ = writeln!(s, "scan = {scan}");
    let _ = writeln!(s, "survivors = {survivors}");
    for (w, v, m, by, part) in &rows {
        let _ = write!(s, "{w} {v}");
        if let Some(m) = m {
            let _ = write!(s, " witness={m}");
        }
        let _ = write!(s, " by={by}");
        if let Some(q) = part {
            let _ = write!(s, " partner={q}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "proven = {{{}}}", proven.join(", "));
    Ok(s)
}
