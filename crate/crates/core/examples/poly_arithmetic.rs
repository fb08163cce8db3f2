//! Exact polynomial arithmetic, evaluation, and multilinear reduction.

use std::collections::HashMap;

use saproof::poly::{Poly, VarId};
use saproof::rational::Rational;

fn main() {
    let p: Poly = "x1*x2 - 1/2*x3 + 2".parse().unwrap();
    let q: Poly = "x1 - x1_2".parse().unwrap();
    println!("p       = {p}");
    println!("q       = {q}");
    println!("p + q   = {}", p.add(&q));
    println!("p * q   = {}", p.mul(&q));
    println!("q^2     = {}", q.pow(2));

    let (reduced, cofactors) = q.pow(2).multilinear_cofactors();
    println!("q^2 mod (v^2 - v) = {reduced}");
    for (v, c) in &cofactors {
        println!("  cofactor of {v}^2 - {v}: {c}");
    }

    let mut at = HashMap::new();
    at.insert(VarId::Plain(1), Rational::new(1, 3));
    at.insert(VarId::Plain(2), Rational::from_integer(3));
    at.insert(VarId::Plain(3), Rational::new(-2, 5));
    println!("p(1/3, 3, -2/5) = {}", p.eval(&at).unwrap());
    println!("deg p = {}, size p = {}", p.degree(), p.size());
}
