use apwen::oracle::{apwenian_bit, state_parity, StateVec};
use apwen::prover::{
    analyze, close, default_seed_window, eval_state, prove_system, seed_states, state_prefix, validate_recurrences,
    ProofCertificate, ProveConfig, StateEvaluator, Verdict,
};
use apwen::recgen::{fast_generate_system, generate_system, RecurrenceSystem};
use apwen::{named, Pattern};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn pat(s: &str) -> Pattern {
    named(s).unwrap_or_else(|| s.parse().unwrap())
}

fn validated(p: &Pattern) -> (RecurrenceSystem, Vec<StateVec>) {
    let mut sys = fast_generate_system(p);
    let seeds = seed_states(p, default_seed_window(p.d(), 3));
    sys.n_valid = validate_recurrences(&sys, &seeds, 3).unwrap().n_valid;
    (sys, seeds)
}

#[test]
fn seed_examples() {
    let f3 = seed_states(&pat("F3"), 16);
    for s in &f3[..2] {
        assert!(s.z() && s.t() && s.w() == Some(true) && s.r() == Some(true));
    }
    let f11 = seed_states(&pat("F11"), 24);
    assert!(f11[..10].iter().all(|s| s.z()));
    let pp = seed_states(&pat("++"), 16);
    assert!(!pp[1].z());
}

#[test]
fn validation_examples() {
    for (name, n_max) in [("F3", 3), ("F5", 3), ("F11", 2)] {
        let p = pat(name);
        let sys = fast_generate_system(&p);
        let seeds = seed_states(&p, p.d() * n_max + p.d());
        let r = validate_recurrences(&sys, &seeds, n_max).unwrap();
        assert!(r.rows.iter().all(|row| row.passed()), "{name}: {:?}", r.rows);
        assert_eq!(r.n_valid, Some(1));
    }
}

#[test]
fn short_seed_window_is_rejected() {
    let p = pat("F3");
    let sys = generate_system(&p);
    let seeds = seed_states(&p, 8);
    assert!(validate_recurrences(&sys, &seeds, 3).is_err());
}

#[test]
fn positive_verdicts() {
    for name in ["F2", "F3", "F5"] {
        let a = analyze(&pat(name), &ProveConfig::default(), None).unwrap();
        let c = &a.certificate;
        assert_eq!(c.verdict, Verdict::Apwenian, "{name}");
        assert_eq!(c.witness, None);
        c.check().unwrap();
    }
}

#[test]
fn positive_verdicts_keep_w_odd() {
    for name in ["F3", "F11"] {
        let a = analyze(&pat(name), &ProveConfig::default(), None).unwrap();
        let c = &a.certificate;
        assert_eq!(c.verdict, Verdict::Apwenian);
        assert!(c.seeds.iter().all(|s| s.w() == Some(true)));
        assert!(c.closure.iter().all(|e| e.triple.0.iter().all(|s| s.w() == Some(true))));
    }
}

#[test]
fn negative_control() {
    let a = analyze(&pat("++"), &ProveConfig::default(), None).unwrap();
    assert_eq!(a.certificate.verdict, Verdict::NotApwenian);
    assert_eq!(a.certificate.witness, Some(2));
    assert!(!apwenian_bit(&pat("++"), 2));
}

#[test]
fn three_letter_alternating_pattern() {
    let p = pat("+-+");
    let first_even = (1..=256).find(|&m| !apwenian_bit(&p, m));
    let a = analyze(&p, &ProveConfig::default(), None).unwrap();
    match first_even {
        Some(m) => {
            assert_eq!(a.certificate.verdict, Verdict::NotApwenian);
            assert_eq!(a.certificate.witness, Some(m as u64));
        }
        None => assert_eq!(a.certificate.verdict, Verdict::Apwenian),
    }
}

#[test]
fn witness_beyond_the_seeds() {
    // first even index is 16; a short window leaves it to the closure
    let p = pat("+--+--");
    assert_eq!((1..=16).find(|&m| !apwenian_bit(&p, m)), Some(16));
    let cfg = ProveConfig { check_depth: 1, seed_window: Some(12), ..ProveConfig::default() };
    let a = analyze(&p, &cfg, None).unwrap();
    let c = &a.certificate;
    assert_eq!(c.verdict, Verdict::NotApwenian);
    assert_eq!(c.witness, Some(16));
    assert!(c.closure.iter().any(|e| !e.triple.all_z()));
}

#[test]
fn offending_triple_when_bound_is_short() {
    let p = pat("+--+--");
    let cfg = ProveConfig { check_depth: 1, seed_window: Some(12), witness_bound: 15, ..ProveConfig::default() };
    let c = analyze(&p, &cfg, None).unwrap().certificate;
    assert_eq!(c.verdict, Verdict::NotApwenian);
    assert_eq!(c.witness, None);
    assert!(!c.offending.unwrap().all_z());
    c.check().unwrap();
}

#[test]
fn soundness_to_512() {
    for name in ["F3", "F5"] {
        let p = pat(name);
        let a = analyze(&p, &ProveConfig::default(), None).unwrap();
        assert_eq!(a.certificate.verdict, Verdict::Apwenian);
        assert!((1..=512).all(|m| apwenian_bit(&p, m)), "{name}");
    }
}

#[test]
fn top_down_evaluation() {
    let (sys, seeds) = validated(&pat("F3"));
    let s500 = eval_state(&sys, &seeds, 500);
    assert!(s500.z());
    assert_eq!(s500.z(), apwenian_bit(&pat("F3"), 500));
    assert!(eval_state(&sys, &seeds, 1_000_000).z());
    let mut ev = StateEvaluator::new(&sys, &seeds);
    ev.state(10u128.pow(30));
    assert!(ev.memo_len() < 200);

    let (sys5, seeds5) = validated(&pat("F5"));
    assert_eq!(eval_state(&sys5, &seeds5, 9), seeds5[8]);
}

#[test]
fn evaluation_matches_oracle_beyond_seeds() {
    for name in ["F3", "F5", "+--+"] {
        let p = pat(name);
        let (sys, seeds) = validated(&p);
        let prefix = state_prefix(&sys, &seeds, 60);
        for m in seeds.len() + 1..=60 {
            assert_eq!(prefix[m - 1], state_parity(&p, m), "{name} m={m}");
        }
    }
}

#[test]
fn closure_triples_are_realized() {
    for name in ["F3", "F5", "+--+"] {
        let (sys, seeds) = validated(&pat(name));
        let closure = close(&sys, &seeds);
        let mut ev = StateEvaluator::new(&sys, &seeds);
        for (t, &at) in &closure.triples {
            let got = [ev.state(at), ev.state(at + 1), ev.state(at + 2)];
            assert_eq!(&got, &t.0, "{name} at {at}");
        }
        // and some realizing index turns up in a plain forward scan
        let prefix = state_prefix(&sys, &seeds, 1_000_002);
        let mut keys: Vec<_> = closure.triples.keys().copied().collect();
        keys.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(11));
        for t in keys.iter().take(8) {
            assert!(prefix.windows(3).any(|w| w == t.0), "{name} {t}");
        }
    }
}

#[test]
fn naive_and_fast_certificates_agree() {
    let p = pat("F5");
    let cfg = ProveConfig::default();
    let fast = prove_system(fast_generate_system(&p), &cfg).unwrap().certificate;
    let naive = prove_system(generate_system(&p), &cfg).unwrap().certificate;
    assert_eq!(fast, naive);
}

#[test]
fn certificate_round_trips() {
    for name in ["F3", "++", "+--+--"] {
        let c = analyze(&pat(name), &ProveConfig::default(), None).unwrap().certificate;
        let json = serde_json::to_string_pretty(&c).unwrap();
        assert_eq!(serde_json::from_str::<ProofCertificate>(&json).unwrap(), c);
        assert_eq!(ProofCertificate::from_text(&c.to_text()).unwrap(), c);
        let again = analyze(&pat(name), &ProveConfig::default(), None).unwrap().certificate;
        assert_eq!(serde_json::to_string_pretty(&again).unwrap(), json);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdicts_agree_with_the_determinant_oracle(d in 2usize..=6, mask in any::<u64>()) {
        let p = Pattern::from_tail_bits(d, mask & ((1 << (d - 1)) - 1)).unwrap();
        let c = analyze(&p, &ProveConfig::default(), None).unwrap().certificate;
        prop_assert_ne!(c.verdict, Verdict::Inconclusive);
        match c.verdict {
            Verdict::Apwenian => prop_assert!((1..=64).all(|m| apwenian_bit(&p, m))),
            _ => {
                let w = c.witness.unwrap() as usize;
                prop_assert!(!apwenian_bit(&p, w));
                prop_assert!((1..w).all(|m| apwenian_bit(&p, m)));
            }
        }
    }
}
