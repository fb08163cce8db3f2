//! A full refutation of the 3-cycle `x1+x2 = x2+x3 = x1+x3 = 1` over F_2.

use saproof::derive::refute_f2;
use saproof::gf::{solve, LinSystemFp, Solution};
use saproof::kernel::{check, is_refutation};

fn main() {
    let sys = LinSystemFp::from_rows(2, 3, &[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]).unwrap();
    let Solution::Unsatisfiable(cert) = solve(&sys).unwrap() else {
        unreachable!()
    };
    println!("certificate: {cert}");
    let proof = refute_f2(&sys, &cert).unwrap();
    println!("{}", check(&proof).unwrap());
    for line in &proof.lines[proof.lines.len() - 3..] {
        println!("  {:>4}: {} >= 0", line.id, line.poly);
    }
    println!("refutation: {}", is_refutation(&proof));
}
