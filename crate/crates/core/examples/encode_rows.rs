//! Turning one row into polynomial inequalities, in both encodings.

use saproof::encoder::{encode_f2, encode_fp, z_axioms};

fn main() {
    println!("x1 + x2 + x3 = 1 over F_2 (one inequality per even-weight pattern):");
    for h in encode_f2(&[1, 1, 1], 1).unwrap() {
        println!("  {h} >= 0");
    }
    println!("x1 + 2*x2 = 0 over F_3 (one inequality per violating assignment):");
    for h in encode_fp(&[1, 2], 0, 3).unwrap() {
        println!("  {h} >= 0");
    }
    println!("each variable takes exactly one value:");
    for (up, down) in z_axioms(2, 3) {
        println!("  {up} >= 0, {down} >= 0");
    }
}
