//! Proving `(L − c)(L − c + 1) ≥ 0` for an integer linear form over 0/1
//! variables, for several thresholds at once.

use saproof::derive::{Deriver, LinearForm};
use saproof::encoder::{EncodingMode, HypothesisBank};
use saproof::gf::LinSystemFp;
use saproof::kernel::check;
use saproof::poly::VarId;
use saproof::rational::Rational;

fn main() {
    let mut form = LinearForm::constant(Rational::zero());
    for (i, c) in [(1, 1), (2, 2), (3, 1)] {
        form.add_var(VarId::Plain(i), &Rational::from_integer(c));
    }
    // The gap proof uses no hypotheses; the bank only fixes the variables.
    let sys = LinSystemFp::from_rows(2, 3, &[(&[1, 1, 1], 0)]).unwrap();
    let bank = HypothesisBank::for_system(&sys, EncodingMode::F2).unwrap();
    let mut d = Deriver::new(bank);
    let cs: Vec<Rational> = (0..=4).map(Rational::from_integer).collect();
    let lines = d.prove_gaps(&form, &cs).unwrap();
    for (c, &id) in cs.iter().zip(&lines) {
        println!("c={c}: line {id}: {} >= 0", d.poly(id));
    }
    let metrics = check(&d.finish()).unwrap();
    println!("{metrics}");
}
