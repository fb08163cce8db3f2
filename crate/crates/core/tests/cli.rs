use std::path::{Path, PathBuf};

use saproof::cli::{run, EXIT_HYP_MISMATCH, EXIT_INPUT, EXIT_NOT_REFUTATION, EXIT_OK, EXIT_RULE, EXIT_SAT};
use saproof::format::{emit_proof, parse_proof};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn saproof(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("saproof").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn refute_then_check() {
    let dir = tempfile::tempdir().unwrap();
    for (sys, extra) in [
        ("cycle3.sys", vec![]),
        ("cycle3.sys", vec!["--mode", "fp"]),
        ("pair_f3.sys", vec![]),
        ("pair_f3.sys", vec!["--basis", "extended"]),
        ("mixed_f5.sys", vec![]),
    ] {
        let input = fixture(sys);
        let proof = dir.path().join("out.saj");
        let mut args = vec!["refute", s(&input), "-o", s(&proof)];
        args.extend(extra.iter().copied());
        let (code, _, err) = saproof(&args);
        assert_eq!(code, EXIT_OK, "{sys} {extra:?}: {err}");
        let (code, out, err) = saproof(&["check", s(&proof), "--system", s(&input)]);
        assert_eq!(code, EXIT_OK, "{sys} {extra:?}: {out}{err}");
        let (code, out, _) = saproof(&["stats", s(&proof)]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("degree="), "{out}");
    }
}

#[test]
fn satisfiable_input() {
    let sat = fixture("sat.sys");
    let out_path = tempfile::tempdir().unwrap().path().join("never.saj");
    let (code, out, _) = saproof(&["refute", s(&sat), "-o", s(&out_path)]);
    assert_eq!(code, EXIT_SAT);
    assert_eq!(out.trim(), "SAT x=(1,0)");
    assert!(!out_path.exists());
    let (code, out, _) = saproof(&["solve", s(&sat)]);
    // Only `refute` treats a satisfiable input as a failure.
    assert_eq!((code, out.trim()), (EXIT_OK, "SAT x=(1,0)"));
    let (code, out, _) = saproof(&["oracle", s(&sat)]);
    assert_eq!((code, out.trim()), (EXIT_OK, "SAT x=(1,0)"));
}

#[test]
fn solve_and_oracle_on_unsat() {
    let (code, out, _) = saproof(&["solve", s(&fixture("pair_f3.sys"))]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "UNSAT J={1,2} y=(2,2)");
    let (code, out, _) = saproof(&["oracle", s(&fixture("cycle3.sys"))]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("UNSAT"), "{out}");
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.sys");
    let (code, _, err) = saproof(&["solve", s(&missing)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("missing.sys"), "{err}");

    let bad = dir.path().join("bad.sys");
    std::fs::write(&bad, "field 4\nvars 1\nx1 = 1\n").unwrap();
    assert_eq!(saproof(&["solve", s(&bad)]).0, EXIT_INPUT);
    std::fs::write(&bad, "field 3\nvars 1\nx2 = 1\n").unwrap();
    assert_eq!(saproof(&["solve", s(&bad)]).0, EXIT_INPUT);

    let junk = dir.path().join("junk.saj");
    std::fs::write(&junk, "not a proof\n").unwrap();
    assert_eq!(saproof(&["check", s(&junk), "--system", s(&fixture("cycle3.sys"))]).0, EXIT_INPUT);

    assert_eq!(saproof(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(saproof(&["refute", s(&fixture("cycle3.sys")), "-o", s(&junk), "--mode", "f2"]).0, EXIT_OK);
    assert_eq!(saproof(&["refute", s(&fixture("pair_f3.sys")), "-o", s(&junk), "--mode", "f2"]).0, EXIT_INPUT);
}

#[test]
fn check_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cycle = fixture("cycle3.sys");
    let proof = dir.path().join("cycle.saj");
    assert_eq!(saproof(&["refute", s(&cycle), "-o", s(&proof)]).0, EXIT_OK);

    // Same proof, different system.
    let (code, _, _) = saproof(&["check", s(&proof), "--system", s(&fixture("sat.sys"))]);
    assert_eq!(code, EXIT_HYP_MISMATCH);

    // Dropping the final rescaling leaves a valid proof of a negative
    // constant that is not -1.
    let mut file = parse_proof(&std::fs::read_to_string(&proof).unwrap()).unwrap();
    file.proof.lines.pop();
    let short = dir.path().join("short.saj");
    std::fs::write(&short, emit_proof(&file)).unwrap();
    let (code, out, _) = saproof(&["check", s(&short), "--system", s(&cycle)]);
    assert_eq!(code, EXIT_NOT_REFUTATION, "{out}");

    // A wrong polynomial on one line.
    let k = file.proof.lines.len() / 2;
    let line = &mut file.proof.lines[k];
    line.poly = line.poly.add(&saproof::poly::Poly::one());
    let bad = dir.path().join("bad.saj");
    std::fs::write(&bad, emit_proof(&file)).unwrap();
    let (code, out, _) = saproof(&["check", s(&bad), "--system", s(&cycle)]);
    assert_eq!(code, EXIT_RULE);
    assert!(out.contains(&format!("line {k}:")), "{out}");
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let (code, _, err) = saproof(&["bench", "--family", "tseitin-cycle", "--n", "3:5", "--csv", s(&csv)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], saproof::bench::CSV_HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("tseitin-cycle,3,2,"));

    let (code, out, _) = saproof(&["bench", "--family", "random", "--n", "3,4", "--field", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(saproof(&["bench", "--family", "nope", "--n", "3"]).0, EXIT_INPUT);
}
