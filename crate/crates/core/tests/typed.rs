use apwen::oracle::{count_type_brute, count_type_exact, state_parity, StateVec};
use apwen::recgen::{enumerate_types, eval_type, Direction, Kind};
use apwen::{named, Pattern};

/// Every type for `p`, with the monomial its atoms multiply to (if any).
fn each_type(p: &Pattern, mut f: impl FnMut(Direction, &apwen::recgen::TypeWord, Option<apwen::Monomial>)) {
    let d = p.d();
    for &dir in Direction::runs(p) {
        for kind in Kind::ALL {
            for h in 0..d {
                for k in 0..kind.k_range(d) {
                    for t in enumerate_types(p, dir, kind, h, k) {
                        f(dir, &t, eval_type(p, dir, &t));
                    }
                }
            }
        }
    }
}

#[test]
fn type_parity_is_the_atom_product() {
    for name in ["F3", "F5"] {
        let p = named(name).unwrap();
        for n in 2..=3 {
            let assign = StateVec::assignment(state_parity(&p, n), state_parity(&p, n + 1));
            let mut checked = 0;
            each_type(&p, |dir, t, mono| {
                let want = mono.is_some_and(|m| m.eval(assign));
                assert_eq!(count_type_exact(&p, dir, t, n), want, "{name} {dir} {t} n={n}");
                checked += mono.is_some() as usize;
            });
            assert!(checked > 0);
        }
    }
}

#[test]
fn brute_agrees_on_five_letters() {
    let p = named("F5").unwrap();
    let mut seen = 0;
    each_type(&p, |dir, t, mono| {
        if mono.is_some() && seen < 40 {
            seen += 1;
            assert_eq!(count_type_brute(&p, dir, t, 2, 12).unwrap(), count_type_exact(&p, dir, t, 2), "{t}");
        }
    });
}
