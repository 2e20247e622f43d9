use std::fmt::Write as _;

use serde_json::json;

use apwen::oracle::{
    apwenian_bit, count_parity, count_type_exact, exact_counts, hankel_exact, hankel_mod, residue, state_parity,
    StateVec,
};
use apwen::prover::{prove_system, seed_states, validate_recurrences, ProveConfig, Verdict};
use apwen::recgen::{enumerate_types, eval_type_with, generate, Direction, GenOptions, Kind, PsiTable, RecurrenceSystem, Strategy};
use apwen::{named, Family, Pattern};

type Check = Result<(), String>;
type Property<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn pat(s: &str) -> Pattern {
    named(s).unwrap_or_else(|| s.parse().expect("literal pattern"))
}

fn system(p: &Pattern, table: &PsiTable, strategy: Strategy) -> RecurrenceSystem {
    let opts = GenOptions { strategy, table: table.clone(), listing: false };
    generate(p, &opts, None).expect("no checkpoint").system
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hankel_table() -> Check {
    let want = [1i64, -2, -4, 8, 16, -32, -64, 128, 4864, -9728];
    let f3 = pat("F3");
    for (i, &w) in want.iter().enumerate() {
        let h = hankel_exact(&f3, i + 1);
        ensure(h == w.into(), || format!("H_{} = {h}, want {w}", i + 1))?;
    }
    Ok(())
}

fn modular_agreement(n_max: usize) -> Check {
    for name in ["F3", "F5", "+-+"] {
        let p = pat(name);
        for n in 1..=n_max {
            let h = hankel_exact(&p, n);
            for q in [2, 3, 5] {
                let m = hankel_mod(&p, n, q).map_err(|e| e.to_string())?;
                ensure(residue(&h, q) == m, || format!("{name} n={n} q={q}"))?;
            }
        }
    }
    Ok(())
}

fn mod_three_law(n_max: usize) -> Check {
    let f3 = pat("F3");
    for n in 1..=n_max {
        let want = if matches!(n % 4, 1 | 2) { 1 } else { 2 };
        let got = hankel_mod(&f3, n, 3).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n={n}: {got}"))?;
    }
    Ok(())
}

fn bit_is_z(m_max: usize) -> Check {
    for name in ["F2", "F3", "F5", "+-+", "++-+"] {
        let p = pat(name);
        for m in 1..=m_max {
            ensure(apwenian_bit(&p, m) == count_parity(&p, Family::J, m, m - 1), || format!("{name} m={m}"))?;
        }
    }
    Ok(())
}

fn states_vs_counts(m_max: usize) -> Check {
    for name in ["F3", "F5"] {
        let p = pat(name);
        for m in 1..=m_max {
            let e = exact_counts(&p, m, 12).map_err(|e| e.to_string())?;
            let s = state_parity(&p, m);
            ensure(s.z() == (e.z % 2 == 1) && s.t() == (e.t % 2 == 1), || format!("{name} m={m}"))?;
        }
    }
    Ok(())
}

fn type_parity(names: &[&str], table: &PsiTable) -> Check {
    for name in names {
        let p = pat(name);
        let d = p.d();
        for n in 2..=3 {
            let assign = StateVec::assignment(state_parity(&p, n), state_parity(&p, n + 1));
            for &dir in Direction::runs(&p) {
                for kind in Kind::ALL {
                    for h in 0..d {
                        for k in 0..kind.k_range(d) {
                            for t in enumerate_types(&p, dir, kind, h, k) {
                                let want = eval_type_with(&p, dir, &t, table).is_some_and(|m| m.eval(assign));
                                ensure(count_type_exact(&p, dir, &t, n) == want, || {
                                    format!("{name} {dir} type {t} n={n}")
                                })?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn recurrences_validate(cases: &[(&str, usize)], table: &PsiTable) -> Check {
    for &(name, n_max) in cases {
        let p = pat(name);
        let sys = system(&p, table, Strategy::Fast);
        let seeds = seed_states(&p, p.d() * n_max + p.d());
        let r = validate_recurrences(&sys, &seeds, n_max).map_err(|e| e.to_string())?;
        if let Some(row) = r.rows.iter().find(|r| !r.passed()) {
            return Err(format!("{name} n={}: {}", row.n, row.failed.join(" ")));
        }
    }
    Ok(())
}

fn fast_equals_naive(names: &[&str], table: &PsiTable) -> Check {
    for name in names {
        let p = pat(name);
        ensure(system(&p, table, Strategy::Fast) == system(&p, table, Strategy::Naive), || name.to_string())?;
    }
    Ok(())
}

fn verdicts(table: &PsiTable) -> Check {
    let cfg = ProveConfig::default();
    for (name, want, witness) in
        [("F2", Verdict::Apwenian, None), ("F3", Verdict::Apwenian, None), ("F5", Verdict::Apwenian, None), ("++", Verdict::NotApwenian, Some(2))]
    {
        let p = pat(name);
        let c = prove_system(system(&p, table, Strategy::Fast), &cfg).map_err(|e| e.to_string())?.certificate;
        ensure(c.verdict == want && c.witness == witness, || format!("{name}: {} witness {:?}", c.verdict, c.witness))?;
    }
    Ok(())
}

/// Runs every property; returns the report and whether all passed.
pub fn run(quick: bool, table: &PsiTable, json: bool) -> (String, bool) {
    let (n, m) = if quick { (24, 64) } else { (64, 200) };
    let checks: Vec<Property> = vec![
        ("hankel-table", Box::new(hankel_table)),
        ("hankel-modular-agreement", Box::new(move || modular_agreement(n))),
        ("mod-three-law", Box::new(move || mod_three_law(m))),
        ("apwenian-bit-is-z", Box::new(move || bit_is_z(m))),
        ("states-match-exact-counts", Box::new(move || states_vs_counts(if quick { 7 } else { 9 }))),
        (
            "type-parity-is-atom-product",
            Box::new(move || type_parity(if quick { &["F3"] } else { &["F3", "F5"] }, table)),
        ),
        (
            "recurrences-validate",
            Box::new(move || {
                let cases: &[(&str, usize)] = if quick { &[("F3", 3), ("F5", 3)] } else { &[("F3", 3), ("F5", 3), ("F11", 2)] };
                recurrences_validate(cases, table)
            }),
        ),
        (
            "fast-equals-naive",
            Box::new(move || {
                fast_equals_naive(if quick { &["F2", "F3", "F5"] } else { &["F2", "F3", "F5", "F11"] }, table)
            }),
        ),
        ("verdicts", Box::new(move || verdicts(table))),
    ];
    let results: Vec<(&str, Check)> = checks.iter().map(|(name, f)| (*name, f())).collect();
    let ok = results.iter().all(|(_, r)| r.is_ok());
    if json {
        let list: Vec<_> = results
            .iter()
            .map(|(name, r)| json!({ "property": name, "ok": r.is_ok(), "detail": r.as_ref().err() }))
            .collect();
        let v = json!({ "quick": quick, "ok": ok, "properties": list });
        return (serde_json::to_string_pretty(&v).expect("values serialize") + "\n", ok);
    }
    let mut s = String::new();
    for (name, r) in &results {
        match r {
            Ok(()) => {
                let _ = writeln!(s, "ok   {name}");
            }
            Err(e) => {
                let _ = writeln!(s, "FAIL {name}: {e}");
            }
        }
    }
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    let _ = writeln!(s, "{} passed, {failed} failed", results.len() - failed);
    (s, ok)
}
