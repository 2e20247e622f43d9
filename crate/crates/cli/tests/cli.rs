use std::process::Command;

use apwen::prover::ProofCertificate;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn apwen(args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_apwen")).args(args).output().expect("binary runs");
    Run {
        code: o.status.code().expect("exited"),
        out: String::from_utf8(o.stdout).unwrap(),
        err: String::from_utf8(o.stderr).unwrap(),
    }
}

#[test]
fn analyze_three_letters() {
    let r = apwen(&["analyze", "+--"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("types XYZ = 24\ntypes UVW = 26\n"));
    assert!(r.out.contains("Z(3n+2) = Wm\n"));
    assert!(r.out.contains("verdict = APWENIAN\n"));
}

#[test]
fn analyze_five_letters() {
    let r = apwen(&["analyze", "+---+"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("types XYZ = 225\n"));
    assert!(!r.out.contains("UVW"));
}

#[test]
fn negative_exit_code() {
    let r = apwen(&["analyze", "++"]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("verdict = NOT_APWENIAN\nwitness = 2\n"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(apwen(&["analyze", "+x-"]).code, 2);
    assert_eq!(apwen(&["analyze", "-+"]).code, 2);
    assert_eq!(apwen(&["oracle", "hankel", "+--", "1..100000"]).code, 2);
    assert_eq!(apwen(&["oracle", "hankel", "+--", "1..8", "--mod", "4"]).code, 2);
    assert_eq!(apwen(&["search", "1"]).code, 2);
}

#[test]
fn recurrence_lines() {
    assert!(apwen(&["recurrences", "F5"]).out.contains("Y(5n+1) = Xn Zm + Yn Zm\n"));
    let f3 = apwen(&["recurrences", "1,-1,-1"]).out;
    assert!(f3.contains("W(3n+2) = Zm\n"));
    assert_eq!(f3.lines().count(), 18);
    let verbose = apwen(&["recurrences", "+--", "--verbose"]).out;
    assert!(verbose.starts_with("direction = XYZ\n k : 3N+0\n 1 cbac: [Un:X0011]"));
    assert_eq!(apwen(&["recurrences", "+--", "--fast"]).out, f3);
}

#[test]
fn oracle_tables() {
    let h = apwen(&["oracle", "hankel", "+--", "1..10"]).out;
    let vals: Vec<&str> = h.lines().map(|l| l.rsplit(' ').next().unwrap()).collect();
    assert_eq!(vals, ["1", "-2", "-4", "8", "16", "-32", "-64", "128", "4864", "-9728"]);
    let m = apwen(&["oracle", "hankel", "+--", "1..8", "--mod", "3"]).out;
    let vals: Vec<&str> = m.lines().map(|l| l.rsplit(' ').next().unwrap()).collect();
    assert_eq!(vals, ["1", "1", "2", "2", "1", "1", "2", "2"]);
    let s = apwen(&["oracle", "sets", "+--", "10"]).out;
    assert!(s.contains("J = {0, 3, 5, 6, 8, 9, 12, 14, 15, 18}\n"));
    let s = apwen(&["oracle", "sets", "+---+", "11"]).out;
    assert!(s.contains("P = {1, 4}\nQ = {2, 3}\nJ = {0, 3, 4, 5, 8, 10, 13, 15, 18, 19, 20}\n"));
    let c = apwen(&["oracle", "counts", "F11", "9"]).out;
    let last = c.lines().last().unwrap();
    assert!(last.starts_with("m=9 ") && last.contains(" Z=739 "), "{last}");
    assert!(c.contains(" R=5151\n"));
    let b = apwen(&["oracle", "bits", "++", "3"]).out;
    assert_eq!(b, "bit(1) = 1\nbit(2) = 0\nbit(3) = 0\n");
    assert!(apwen(&["oracle", "state", "F3", "2"]).out.starts_with("state(1) = "));
}

#[test]
fn search_small_lengths() {
    let s3 = apwen(&["search", "3"]).out;
    assert!(s3.contains("proven = {++-, +--}\n"));
    assert!(s3.contains("+-- APWENIAN by=proof partner=++-\n"));
    assert!(apwen(&["search", "5"]).out.contains("+---+ APWENIAN"));
    assert!(apwen(&["search", "7"]).out.ends_with("proven = {}\n"));
}

#[test]
fn selftest_and_fault_injection() {
    let ok = apwen(&["selftest", "--quick"]);
    assert_eq!(ok.code, 0, "{}", ok.out);
    let bad = apwen(&["selftest", "--quick", "--corrupt-psi", "G000"]);
    assert_ne!(bad.code, 0);
    assert!(bad.out.contains("FAIL type-parity-is-atom-product"));
}

#[test]
fn thread_count_never_changes_output() {
    let cases: &[&[&str]] = &[
        &["analyze", "F5"],
        &["analyze", "F5", "--fast", "--json"],
        &["recurrences", "+--", "--verbose"],
        &["search", "5", "--json"],
        &["oracle", "state", "F3", "1..40"],
        &["selftest", "--quick"],
    ];
    for args in cases {
        let one = apwen(&[&["--jobs", "1"], *args].concat());
        let eight = apwen(&[&["--jobs", "8"], *args].concat());
        assert_eq!(one.out, eight.out, "{args:?}");
        assert_eq!(one.code, eight.code);
    }
}

#[test]
fn json_and_text_certificates_agree() {
    let dir = tempfile::tempdir().unwrap();
    for pattern in ["+--", "++", "+---+"] {
        let tj = dir.path().join("c.json");
        let tt = dir.path().join("c.txt");
        let rj = apwen(&["analyze", pattern, "--json", "--certificate", tj.to_str().unwrap()]);
        apwen(&["analyze", pattern, "--certificate", tt.to_str().unwrap()]);
        let from_json: ProofCertificate = serde_json::from_str(&std::fs::read_to_string(&tj).unwrap()).unwrap();
        let from_text = ProofCertificate::from_text(&std::fs::read_to_string(&tt).unwrap()).unwrap();
        assert_eq!(from_json, from_text);
        let report: serde_json::Value = serde_json::from_str(&rj.out).unwrap();
        assert_eq!(serde_json::from_value::<ProofCertificate>(report["certificate"].clone()).unwrap(), from_text);
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let r = apwen(&["--out", path.to_str().unwrap(), "recurrences", "F3"]);
    assert_eq!(r.out, "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), apwen(&["recurrences", "F3"]).out);
}

#[test]
fn resume_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.txt");
    let ck = ck.to_str().unwrap();
    let first = apwen(&["analyze", "F5", "--fast", "--resume", ck]);
    let again = apwen(&["analyze", "F5", "--fast", "--resume", ck]);
    assert_eq!(first.out, again.out);
    assert!(again.err.contains("resumed"));
    assert_eq!(apwen(&["analyze", "F3", "--fast", "--resume", ck]).code, 2);
    assert_eq!(apwen(&["analyze", "F5", "--resume", ck]).code, 2);
}
