//! Refuting over F_3 and F_5 with the indicator encoding, in both monomial
//! bases.

use saproof::derive::{refute_fp, Basis, RefuteOptions};
use saproof::gf::{solve, LinSystemFp, Solution};
use saproof::kernel::{check, is_refutation};

fn main() {
    let systems = [
        LinSystemFp::from_rows(3, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap(),
        LinSystemFp::from_rows(5, 3, &[(&[1, 2, 0], 3), (&[0, 1, 1], 1), (&[1, 1, 4], 3)]).unwrap(),
    ];
    for sys in &systems {
        let Solution::Unsatisfiable(cert) = solve(sys).unwrap() else {
            unreachable!()
        };
        for basis in [Basis::Product, Basis::Extended] {
            let proof = refute_fp(sys, &cert, RefuteOptions { basis }).unwrap();
            let m = check(&proof).unwrap();
            println!("p={} {basis:?}: {m} refutation={}", sys.p(), is_refutation(&proof));
        }
    }
}
