//! The building blocks of a refutation, one proof each: killing a monomial
//! that violates a row, and the weight identity `M·(a·x − t) = 0`.

use saproof::derive::Deriver;
use saproof::encoder::{EncodingMode, HypothesisBank};
use saproof::gf::LinSystemFp;
use saproof::kernel::check;

fn main() {
    // x1 + x2 + x3 = 1 over F_2; the pattern {1, 2} has the wrong parity.
    let sys = LinSystemFp::from_rows(2, 3, &[(&[1, 1, 1], 1)]).unwrap();
    let mut d = Deriver::new(HypothesisBank::for_system(&sys, EncodingMode::F2).unwrap());
    let eq = d.prove_violated_monomial_f2(&[1, 1, 1], 1, 0b011).unwrap();
    println!("violated monomial: {} = 0", d.poly(eq.pos));
    let id = d.prove_weight_identity_f2(&[1, 2, 3], 0b101).unwrap();
    println!("weight identity:   {} = 0", d.poly(id.pos));
    println!("  {}", check(d.proof()).unwrap());

    // x1 + 2*x2 = 0 over F_3, with indicator variables.
    let sys = LinSystemFp::from_rows(3, 2, &[(&[1, 2], 0)]).unwrap();
    let mut d = Deriver::new(HypothesisBank::for_system(&sys, EncodingMode::Fp).unwrap());
    let eq = d.prove_violated_product(&[1, 2], 0, &[1, 0]).unwrap();
    println!("violated product:  {} = 0", d.poly(eq.pos));
    let id = d.prove_weight_identity_product(&[1, 2], &[1, 2], &[2, 1]).unwrap();
    println!("weight identity:   {} = 0", d.poly(id.pos));
    let unity = d.prove_partition_unity_product(&[1, 2]).unwrap();
    println!("partition of unity: {} = 0 (negated side)", d.poly(unity.neg));
    println!("  {}", check(d.proof()).unwrap());
}
