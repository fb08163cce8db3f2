//! Perturbing a checked proof: the checker names the first bad line.

use saproof::bench::{refute_checked, tseitin_cycle};
use saproof::derive::RefuteOptions;
use saproof::encoder::EncodingMode;
use saproof::kernel::{check, Justification};
use saproof::rational::Rational;

fn main() {
    let sys = tseitin_cycle(4, 2);
    let (proof, metrics) = refute_checked(&sys, EncodingMode::F2, RefuteOptions::default()).unwrap();
    println!("original: {metrics}");

    let mut bad = proof.clone();
    let k = bad.lines.len() / 3;
    bad.lines[k].poly = bad.lines[k].poly.add(&"1/7*x1".parse().unwrap());
    println!("coefficient changed at line {k}: {}", check(&bad).unwrap_err());

    let mut bad = proof.clone();
    let k = bad
        .lines
        .iter()
        .position(|l| matches!(&l.just, Justification::LinComb { a, .. } if !a.is_zero()))
        .unwrap();
    if let Justification::LinComb { a, .. } = &mut bad.lines[k].just {
        *a = &*a + &Rational::new(1, 2);
    }
    println!("scalar changed at line {k}: {}", check(&bad).unwrap_err());
}
