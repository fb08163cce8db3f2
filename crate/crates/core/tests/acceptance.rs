//! End-to-end acceptance run: prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saproof::bench::{self, loglog_slope, random_system, random_unsat, Family};
use saproof::cli::{cmd_check, EXIT_RULE};
use saproof::derive::{level_forms, refute, threshold_plan, Basis, Deriver, RefuteOptions};
use saproof::encoder::{all_vectors, EncodingMode, HypothesisBank};
use saproof::format::{emit_proof, emit_system, ProofFile};
use saproof::gf::{brute_force_sat, solve, Certificate, LinSystemFp, OracleVerdict, Solution};
use saproof::kernel::{check, is_refutation, soundness_probe, Justification, Proof, DEFAULT_PROBE_CAP};
use saproof::poly::{Monomial, Poly, VarId};
use saproof::rational::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn certificate(sys: &LinSystemFp) -> Certificate {
    match solve(sys).expect("prime field") {
        Solution::Unsatisfiable(c) => c,
        Solution::Satisfiable(x) => panic!("expected an unsatisfiable system, found x={x:?}"),
    }
}

fn modes_for(p: u64) -> Vec<EncodingMode> {
    if p == 2 {
        vec![EncodingMode::F2, EncodingMode::Fp]
    } else {
        vec![EncodingMode::Fp]
    }
}

/// The constant proved just before the final rescaling to -1.
fn endgame_constant(proof: &Proof) -> Option<Rational> {
    match &proof.lines.last()?.just {
        Justification::LinComb { p1, .. } => proof.lines[*p1].poly.as_constant(),
        _ => None,
    }
}

fn criterion_1() -> Outcome {
    let cycle = LinSystemFp::from_rows(2, 3, &[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]).unwrap();
    let pair = LinSystemFp::from_rows(3, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap();
    let mut report = Vec::new();
    for (name, sys, mode, expected) in [
        ("F2 3-cycle", &cycle, EncodingMode::F2, Rational::new(-1, 4)),
        ("F3 pair", &pair, EncodingMode::Fp, Rational::new(-2, 9)),
    ] {
        let start = Instant::now();
        let cert = certificate(sys);
        let proof = refute(sys, &cert, mode, RefuteOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let m = check(&proof).map_err(|e| format!("{name}: rejected: {e}"))?;
        let elapsed = start.elapsed();
        ensure(is_refutation(&proof), || format!("{name}: final line is not -1"))?;
        let c = endgame_constant(&proof);
        ensure(c.as_ref() == Some(&expected), || format!("{name}: endgame constant {c:?}, expected {expected}"))?;
        ensure(elapsed.as_secs_f64() < 1.0, || format!("{name}: took {elapsed:?}"))?;
        report.push(format!("{name}: {} lines, endgame {expected}, {:.0?}", m.line_count, elapsed));
    }
    Ok(report.join("; "))
}

fn random_suite(count: usize, seed: u64) -> Vec<(LinSystemFp, Certificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let p = [2, 3, 5][k % 3];
            let n = rng.gen_range(2..=6);
            let w = rng.gen_range(1..=3);
            random_unsat(&mut rng, n, p, w)
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let suite = random_suite(200, 2024);
    let mut worst_gap = 0;
    let mut runs = 0;
    for (idx, (sys, cert)) in suite.iter().enumerate() {
        let (p, w) = (sys.p(), sys.width() as u32);
        for mode in modes_for(p) {
            let proof = refute(sys, cert, mode, RefuteOptions::default()).map_err(|e| format!("instance {idx}: {e}"))?;
            let m = check(&proof).map_err(|e| format!("instance {idx}: rejected: {e}"))?;
            ensure(is_refutation(&proof), || format!("instance {idx}: not a refutation"))?;
            let bound = match mode {
                EncodingMode::F2 => (w + 2).max(3),
                EncodingMode::Fp => w * p as u32 + 3,
            };
            ensure(m.degree <= bound, || {
                format!("instance {idx} ({mode:?}, p={p}, w={w}): degree {} > {bound}", m.degree)
            })?;
            runs += 1;

            // The gap lines on their own.
            let forms = level_forms(sys, cert, mode).unwrap();
            let plan = threshold_plan(sys, cert, mode).unwrap();
            if let (Some(top), Some(cs)) = (forms.last(), plan.levels.last()) {
                let mut d = Deriver::new(HypothesisBank::for_system(sys, mode).unwrap());
                d.prove_gaps(&top.form, cs).map_err(|e| format!("instance {idx}: gap: {e}"))?;
                let gm = check(d.proof()).map_err(|e| format!("instance {idx}: gap rejected: {e}"))?;
                let gap_degree = d.proof().lines.iter().map(|l| l.poly.degree()).max().unwrap_or(0);
                ensure(gap_degree <= 3, || format!("instance {idx}: gap line of degree {gap_degree}"))?;
                worst_gap = worst_gap.max(gm.degree.min(gap_degree));
            }
        }
    }
    Ok(format!("{} instances, {runs} refutations within bounds; max gap-line degree {worst_gap}", suite.len()))
}

/// One lemma family run inside a single proof: checked, degree-bounded, and
/// (when small enough) probed for soundness.
struct LemmaRun {
    proofs: usize,
    probed: usize,
}

fn probe_ok(proof: &Proof, universe: &[VarId]) -> Result<bool, String> {
    if universe.len() > 12 {
        return Ok(false);
    }
    let r = soundness_probe(proof, universe, DEFAULT_PROBE_CAP).map_err(|e| e.to_string())?;
    ensure(r.satisfying_points > 0, || "lemma hypotheses unsatisfiable".into())?;
    match r.violation {
        None => Ok(true),
        Some(v) => Err(format!("line {} is {} at {:?}", v.line, v.value, v.point)),
    }
}

fn universe(n: u32, p: Option<u64>) -> Vec<VarId> {
    match p {
        None => (1..=n).map(VarId::Plain).collect(),
        Some(p) => (1..=n).flat_map(|i| (0..p as u32).map(move |l| VarId::Indicator(i, l))).collect(),
    }
}

/// Checks a deriver's proof and that every line produced by `body` stays
/// within `bound`.
fn run_lemma<F>(sys: &LinSystemFp, mode: EncodingMode, label: &str, run: &mut LemmaRun, mut body: F) -> Result<Proof, String>
where
    F: FnMut(&mut Deriver) -> Result<Vec<(usize, u32)>, String>,
{
    let mut d = Deriver::new(HypothesisBank::for_system(sys, mode).unwrap());
    let spans = body(&mut d)?;
    let proof = d.finish();
    check(&proof).map_err(|e| format!("{label}: rejected: {e}"))?;
    let mut start = 0;
    for (end, bound) in spans {
        let deg = proof.lines[start..end].iter().map(|l| l.poly.degree()).max().unwrap_or(0);
        ensure(deg <= bound, || format!("{label}: degree {deg} > {bound}"))?;
        start = end;
        run.proofs += 1;
    }
    Ok(proof)
}

fn lemma_suite(probe: bool) -> Result<LemmaRun, String> {
    let mut run = LemmaRun { proofs: 0, probed: 0 };
    for k in 1..=4u32 {
        let support: Vec<u32> = (1..=k).collect();
        let ones = vec![1u64; k as usize];
        // F2: one bank per right-hand side; every T of the violating parity
        // is killed, every T gets a weight identity.
        for b in 0..2u64 {
            let sys = LinSystemFp::from_rows(2, k as usize, &[(&ones, b)]).unwrap();
            let label = format!("F2 |I|={k} b={b}");
            let proof = run_lemma(&sys, EncodingMode::F2, &label, &mut run, |d| {
                let mut spans = Vec::new();
                d.prove_partition_unity_f2(&support).map_err(|e| e.to_string())?;
                spans.push((d.len(), k));
                for mask in 0..1u64 << k {
                    if u64::from(mask.count_ones()) % 2 != b {
                        d.prove_violated_monomial_f2(&ones, b, mask).map_err(|e| e.to_string())?;
                        spans.push((d.len(), k));
                    }
                    d.prove_weight_identity_f2(&support, mask).map_err(|e| e.to_string())?;
                    spans.push((d.len(), k + 1));
                }
                Ok(spans)
            })?;
            if probe && probe_ok(&proof, &universe(k, None)).map_err(|e| format!("{label}: {e}"))? {
                run.probed += 1;
            }
        }
        for p in [2u64, 3] {
            let pk = k * p as u32;
            let coeffs: Vec<u64> = (0..k as u64).map(|i| 1 + i % (p - 1)).collect();
            for basis in [Basis::Extended, Basis::Product] {
                for b in 0..p {
                    let sys = LinSystemFp::from_rows(p, k as usize, &[(&coeffs, b)]).unwrap();
                    let label = format!("F{p} {basis:?} |I|={k} b={b}");
                    let (kill_bound, id_bound) = match basis {
                        Basis::Extended => (pk, pk + 1),
                        Basis::Product => (k, k + 1),
                    };
                    let proof = run_lemma(&sys, EncodingMode::Fp, &label, &mut run, |d| {
                        let mut spans = Vec::new();
                        match basis {
                            Basis::Extended => d.prove_partition_unity_fp(&support),
                            Basis::Product => d.prove_partition_unity_product(&support),
                        }
                        .map_err(|e| e.to_string())?;
                        spans.push((d.len(), pk));
                        for z in all_vectors(k as usize, p) {
                            let t: u64 = coeffs.iter().zip(&z).map(|(&a, &v)| a * u64::from(v)).sum();
                            if t % p != b {
                                match basis {
                                    Basis::Extended => d.prove_violated_monomial_fp(&coeffs, b, &z),
                                    Basis::Product => d.prove_violated_product(&coeffs, b, &z),
                                }
                                .map_err(|e| e.to_string())?;
                                spans.push((d.len(), kill_bound));
                            }
                            if b == 0 {
                                match basis {
                                    Basis::Extended => d.prove_weight_identity_fp(&support, &coeffs, &z),
                                    Basis::Product => d.prove_weight_identity_product(&support, &coeffs, &z),
                                }
                                .map_err(|e| e.to_string())?;
                                spans.push((d.len(), id_bound));
                            }
                        }
                        Ok(spans)
                    })?;
                    if probe && probe_ok(&proof, &universe(k, Some(p))).map_err(|e| format!("{label}: {e}"))? {
                        run.probed += 1;
                    }
                }
            }
        }
    }
    Ok(run)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let run = lemma_suite(false)?;
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 30.0, || format!("lemma suite took {elapsed:?}"))?;
    Ok(format!("{} lemma proofs accepted within their degree bounds in {:.1?}", run.proofs, elapsed))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = 0;
    let mut unsat = 0;
    for k in 0..400 {
        let p = [2u64, 3, 5][k % 3];
        let n = rng.gen_range(1..=6);
        let w = rng.gen_range(1..=3);
        let rows = rng.gen_range(1..=2 * n + 1);
        let sys = random_system(&mut rng, n, p, w, rows);
        if (p as f64).powi(n as i32) > 4096.0 {
            continue;
        }
        compared += 1;
        let oracle = brute_force_sat(&sys, 1 << 12).map_err(|e| e.to_string())?;
        match (solve(&sys).map_err(|e| e.to_string())?, oracle) {
            (Solution::Satisfiable(x), OracleVerdict::Satisfiable(_)) => {
                ensure(sys.satisfies(&x), || format!("system {k}: solution {x:?} violates a row"))?;
            }
            (Solution::Unsatisfiable(c), OracleVerdict::Unsatisfiable) => {
                ensure(c.is_valid_for(&sys), || format!("system {k}: invalid certificate {c}"))?;
                unsat += 1;
            }
            (s, o) => return Err(format!("system {k}: solve says {s:?}, oracle says {o:?}")),
        }
    }
    Ok(format!("{compared} systems agree with exhaustive search ({unsat} unsatisfiable)"))
}

fn criterion_5() -> Outcome {
    let run = lemma_suite(true)?;
    let suite = random_suite(60, 99);
    let mut refutations = 0;
    for (idx, (sys, cert)) in suite.iter().enumerate() {
        for mode in modes_for(sys.p()) {
            let vars = match mode {
                EncodingMode::F2 => universe(sys.n() as u32, None),
                EncodingMode::Fp => universe(sys.n() as u32, Some(sys.p())),
            };
            if vars.len() > 20 {
                continue;
            }
            let proof = refute(sys, cert, mode, RefuteOptions::default()).map_err(|e| e.to_string())?;
            let r = soundness_probe(&proof, &vars, DEFAULT_PROBE_CAP).map_err(|e| e.to_string())?;
            ensure(r.satisfying_points == 0, || {
                format!("instance {idx}: {} points satisfy every hypothesis", r.satisfying_points)
            })?;
            refutations += 1;
        }
    }
    Ok(format!(
        "{} lemma proof sets sound at every satisfying point; {refutations} refutations have no satisfying point",
        run.probed
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let ns = [4usize, 6, 8, 12, 16];
    let records = bench::run(Family::TseitinCycle, &ns, 2, 2, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.metrics.size as f64)).collect();
    let slope = loglog_slope(&pts);
    let ratio = records[4].metrics.size as f64 / records[2].metrics.size as f64;
    let sizes: Vec<String> = records.iter().map(|r| format!("n={}:{}", r.n, r.metrics.size)).collect();
    let summary = format!(
        "slope {slope:.3}, size(16)/size(8) = {ratio:.2}, {:.1?} [{}]",
        elapsed,
        sizes.join(" ")
    );
    ensure(slope <= 4.0, || format!("slope too steep: {summary}"))?;
    ensure(ratio <= 2.5f64.powi(4), || format!("ratio too large: {summary}"))?;
    ensure(elapsed.as_secs_f64() < 60.0, || format!("too slow: {summary}"))?;
    Ok(summary)
}

/// Rewrites one line of `proof` so that it no longer follows from its
/// justification; returns the mutated line id and a description.
fn mutate(proof: &mut Proof, rng: &mut ChaCha8Rng) -> (usize, String) {
    loop {
        let k = rng.gen_range(0..proof.lines.len());
        let premise_nonzero = |proof: &Proof, id: usize| !proof.lines[id].poly.is_zero();
        let choice = rng.gen_range(0..4);
        let line = proof.lines[k].clone();
        let mut new = line.clone();
        let what = match (choice, &line.just) {
            (0, _) => {
                let terms: Vec<(Monomial, Rational)> = line.poly.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                let (m, c) = if terms.is_empty() {
                    (Monomial::one(), Rational::zero())
                } else {
                    terms[rng.gen_range(0..terms.len())].clone()
                };
                let delta = Rational::new(rng.gen_range(1..4), rng.gen_range(1..3));
                new.poly = line.poly.add(&Poly::monomial(m.clone(), delta));
                format!("coefficient of {} changed from {c}", m.name())
            }
            (1, Justification::LinComb { p1, a, p2, b }) => {
                let bump = Rational::new(1, rng.gen_range(1..4));
                if premise_nonzero(proof, *p1) {
                    new.just = Justification::LinComb { p1: *p1, a: a + &bump, p2: *p2, b: b.clone() };
                } else if premise_nonzero(proof, *p2) {
                    new.just = Justification::LinComb { p1: *p1, a: a.clone(), p2: *p2, b: b + &bump };
                } else {
                    continue;
                }
                "scalar changed".to_string()
            }
            (2, Justification::LinComb { p1, a, p2, b }) => {
                let (target_is_p1, src) = if !a.is_zero() { (true, *p1) } else if !b.is_zero() { (false, *p2) } else { continue };
                let alts: Vec<usize> = (0..k).filter(|&j| proof.lines[j].poly != proof.lines[src].poly).collect();
                if alts.is_empty() {
                    continue;
                }
                let r = alts[rng.gen_range(0..alts.len())];
                new.just = if target_is_p1 {
                    Justification::LinComb { p1: r, a: a.clone(), p2: *p2, b: b.clone() }
                } else {
                    Justification::LinComb { p1: *p1, a: a.clone(), p2: r, b: b.clone() }
                };
                format!("reference {src} -> {r}")
            }
            (2, Justification::MultVar { p1, var } | Justification::MultCompl { p1, var }) => {
                let alts: Vec<usize> = (0..k).filter(|&j| proof.lines[j].poly != proof.lines[*p1].poly).collect();
                if alts.is_empty() {
                    continue;
                }
                let r = alts[rng.gen_range(0..alts.len())];
                new.just = match line.just {
                    Justification::MultVar { .. } => Justification::MultVar { p1: r, var: *var },
                    _ => Justification::MultCompl { p1: r, var: *var },
                };
                format!("reference {p1} -> {r}")
            }
            (3, Justification::MultVar { p1, var }) if premise_nonzero(proof, *p1) => {
                new.just = Justification::MultCompl { p1: *p1, var: *var };
                "mult_var -> mult_compl".to_string()
            }
            (3, Justification::MultCompl { p1, var }) if premise_nonzero(proof, *p1) => {
                new.just = Justification::MultVar { p1: *p1, var: *var };
                "mult_compl -> mult_var".to_string()
            }
            (3, Justification::Axiom { kind, var }) => {
                use saproof::kernel::AxiomKind::*;
                let next = match kind {
                    NonNeg => Compl,
                    Compl => BoolUp,
                    BoolUp => BoolDown,
                    BoolDown => NonNeg,
                };
                new.just = Justification::Axiom { kind: next, var: *var };
                format!("axiom {} -> {}", kind.tag(), next.tag())
            }
            (3, Justification::Hypothesis(i)) => {
                let alts: Vec<usize> = (0..proof.hypotheses.len())
                    .filter(|&j| proof.hypotheses[j] != proof.hypotheses[*i])
                    .collect();
                if alts.is_empty() {
                    continue;
                }
                let j = alts[rng.gen_range(0..alts.len())];
                new.just = Justification::Hypothesis(j);
                format!("hypothesis {i} -> {j}")
            }
            _ => continue,
        };
        proof.lines[k] = new;
        return (k, what);
    }
}

fn criterion_7() -> Outcome {
    let sys = bench::tseitin_cycle(5, 3);
    let cert = certificate(&sys);
    let proof = refute(&sys, &cert, EncodingMode::Fp, RefuteOptions::default()).map_err(|e| e.to_string())?;
    check(&proof).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sys_path = dir.path().join("cycle.sys");
    std::fs::write(&sys_path, emit_system(&sys)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut kinds = BTreeSet::new();
    for trial in 0..50 {
        let mut bad = proof.clone();
        let (line, what) = mutate(&mut bad, &mut rng);
        kinds.insert(what.split_whitespace().next().unwrap_or("").to_string());
        let path = dir.path().join(format!("tampered{trial}.saj"));
        let file = ProofFile { field: 3, mode: EncodingMode::Fp, proof: bad };
        std::fs::write(&path, emit_proof(&file)).map_err(|e| e.to_string())?;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cmd_check(&path, &sys_path, &mut out, &mut err);
        let out = String::from_utf8_lossy(&out);
        ensure(code == EXIT_RULE, || format!("trial {trial} ({what} at line {line}): exit {code}, output {out}"))?;
        ensure(out.contains(&format!("line {line}:")), || {
            format!("trial {trial} ({what} at line {line}): report does not name the line: {out}")
        })?;
    }
    Ok(format!(
        "50/50 mutations rejected with the offending line named (kinds: {})",
        kinds.into_iter().collect::<Vec<_>>().join(", ")
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("fixture refutations", criterion_1),
        ("degree bounds", criterion_2),
        ("lemma suite", criterion_3),
        ("oracle equivalence", criterion_4),
        ("soundness probe", criterion_5),
        ("polynomial scaling", criterion_6),
        ("tamper resistance", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS criterion {} ({name}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
