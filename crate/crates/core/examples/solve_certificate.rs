//! Gaussian elimination over F_p: a solution or an infeasibility certificate,
//! cross-checked against exhaustive search.

use saproof::format::parse_system;
use saproof::gf::{brute_force_sat, solve, Solution, DEFAULT_ORACLE_CAP};

fn main() {
    let texts = [
        "field 5\nvars 3\nx1 + 2*x2 = 3\nx2 + x3 = 1\nx1 + x2 + 4*x3 = 3\n",
        "field 3\nvars 3\nx1 + x2 = 1\nx2 + 2*x3 = 0\n",
    ];
    for text in texts {
        let sys = parse_system(text).unwrap();
        let oracle = brute_force_sat(&sys, DEFAULT_ORACLE_CAP).unwrap();
        match solve(&sys).unwrap() {
            Solution::Satisfiable(x) => {
                println!("SAT x={x:?} (satisfies: {})", sys.satisfies(&x));
            }
            Solution::Unsatisfiable(cert) => {
                println!("UNSAT {cert} (valid: {})", cert.is_valid_for(&sys));
            }
        }
        println!("  oracle: {oracle:?}");
    }
}
