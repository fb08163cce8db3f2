//! Exhaustive satisfiability search on random systems, compared with
//! elimination.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use saproof::bench::random_system;
use saproof::gf::{brute_force_sat, solve, OracleVerdict, Solution};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut unsat) = (0, 0);
    for k in 0..100 {
        let p = [2, 3, 5][k % 3];
        let sys = random_system(&mut rng, 4, p, 3, 5);
        let oracle = brute_force_sat(&sys, 1 << 12).unwrap();
        let same = match (solve(&sys).unwrap(), oracle) {
            (Solution::Satisfiable(_), OracleVerdict::Satisfiable(_)) => true,
            (Solution::Unsatisfiable(_), OracleVerdict::Unsatisfiable) => {
                unsat += 1;
                true
            }
            _ => false,
        };
        agree += usize::from(same);
    }
    println!("{agree}/100 verdicts agree ({unsat} unsatisfiable)");
}
