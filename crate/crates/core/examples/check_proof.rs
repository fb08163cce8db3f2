//! Building a small proof by hand, checking it, and probing it for soundness.
//!
//! The hypotheses `1/2 − x1 ≥ 0` and `x1 − 1/4 ≥ 0` have no common 0/1 point.
//! Multiplying the first by `x1` and using `x1² − x1 ≥ 0` gives `−x1/2 ≥ 0`;
//! half of the second then cancels `x1` and leaves a negative constant.

use saproof::kernel::{check, is_refutation, soundness_probe, AxiomKind, ProofBuilder, DEFAULT_PROBE_CAP};
use saproof::poly::{Poly, VarId};
use saproof::rational::Rational;

fn main() {
    let x1 = VarId::Plain(1);
    let hyps: Vec<Poly> = ["1/2 - x1", "x1 - 1/4"].iter().map(|s| s.parse().unwrap()).collect();
    let mut b = ProofBuilder::new(hyps);

    let h1 = b.hypothesis(0);
    let h2 = b.hypothesis(1);
    let hx = b.mult_var(h1, x1);
    let up = b.axiom(AxiomKind::BoolUp, x1);
    let neg = b.lin_comb(hx, Rational::one(), up, Rational::one());
    println!("derived: {} >= 0", b.poly(neg));
    let c = b.lin_comb(neg, Rational::one(), h2, Rational::new(1, 2));
    println!("derived: {} >= 0", b.poly(c));
    b.scaled(c, Rational::from_integer(8));

    let proof = b.finish();
    let metrics = check(&proof).expect("every line follows");
    println!("{metrics}");
    println!("refutation: {}", is_refutation(&proof));

    let report = soundness_probe(&proof, &[x1], DEFAULT_PROBE_CAP).unwrap();
    println!("0/1 points satisfying every hypothesis: {}", report.satisfying_points);
}
