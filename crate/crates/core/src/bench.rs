//! Instance families and the refute-and-check measurement loop.

use std::fmt;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive::{refute, DeriveError, RefuteOptions};
use crate::encoder::EncodingMode;
use crate::gf::{solve, Certificate, LinSystemFp, Row, Solution};
use crate::kernel::{check, is_refutation, CheckError, Proof, ProofMetrics};

pub const CSV_HEADER: &str = "family,n,p,w,length,size,degree,lines,ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    TseitinCycle,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TseitinCycle => "tseitin-cycle",
            Family::Random => "random",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "tseitin-cycle" => Some(Family::TseitinCycle),
            "random" => Some(Family::Random),
            _ => None,
        }
    }
}

/// The cycle `x_i − x_{i+1} = b_i` (indices mod n) with charges
/// `b = (1, 0, …, 0)`: the rows sum to `0 = 1`.
pub fn tseitin_cycle(n: usize, p: u64) -> LinSystemFp {
    assert!(n >= 2, "a cycle needs at least two vertices");
    let rows = (0..n)
        .map(|i| {
            let mut a = vec![0u64; n];
            a[i] = 1;
            a[(i + 1) % n] = (a[(i + 1) % n] + p - 1) % p;
            Row {
                a,
                b: u64::from(i == 0),
            }
        })
        .collect();
    LinSystemFp::new(p, n, rows).expect("valid cycle")
}

/// The cycle with arbitrary charges.
pub fn tseitin_cycle_with(b: &[u64], p: u64) -> LinSystemFp {
    let mut sys = tseitin_cycle(b.len(), p);
    let rows = sys
        .rows()
        .iter()
        .zip(b)
        .map(|(r, &bi)| Row { a: r.a.clone(), b: bi % p })
        .collect();
    sys = LinSystemFp::new(p, b.len(), rows).expect("valid cycle");
    sys
}

fn random_row(rng: &mut ChaCha8Rng, n: usize, p: u64, w: usize) -> Row {
    let k = rng.gen_range(1..=w.min(n));
    let mut a = vec![0u64; n];
    for i in sample(rng, n, k).into_iter() {
        a[i] = rng.gen_range(1..p);
    }
    Row { a, b: rng.gen_range(0..p) }
}

/// A random system of width at most `w` over `n ≥ 1` variables.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, p: u64, w: usize, rows: usize) -> LinSystemFp {
    let rs = (0..rows).map(|_| random_row(rng, n, p, w)).collect();
    LinSystemFp::new(p, n, rs).expect("valid random system")
}

/// Draws random systems until one is unsatisfiable.
pub fn random_unsat(rng: &mut ChaCha8Rng, n: usize, p: u64, w: usize) -> (LinSystemFp, Certificate) {
    loop {
        let rows = rng.gen_range(n..=2 * n + 1);
        let sys = random_system(rng, n, p, w, rows);
        if let Ok(Solution::Unsatisfiable(c)) = solve(&sys) {
            return (sys, c);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub family: Family,
    pub n: usize,
    pub p: u64,
    pub w: usize,
    pub metrics: ProofMetrics,
    pub ms: u128,
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{},{},{},{}",
            self.family.name(),
            self.n,
            self.p,
            self.w,
            self.metrics.length,
            self.metrics.size,
            self.metrics.degree,
            self.metrics.line_count,
            self.ms
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("system is satisfiable")]
    Satisfiable,
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error("builder output rejected: {0}")]
    Rejected(#[from] CheckError),
    #[error("builder output does not end in -1")]
    NotRefutation,
    #[error(transparent)]
    Gf(#[from] crate::gf::GfError),
}

/// The default encoding for a field: plain variables over F_2, indicators otherwise.
pub fn auto_mode(p: u64) -> EncodingMode {
    if p == 2 {
        EncodingMode::F2
    } else {
        EncodingMode::Fp
    }
}

/// Solves, refutes, and checks; the proof and its metrics on success.
pub fn refute_checked(
    sys: &LinSystemFp,
    mode: EncodingMode,
    options: RefuteOptions,
) -> Result<(Proof, ProofMetrics), BenchError> {
    let Solution::Unsatisfiable(cert) = solve(sys)? else {
        return Err(BenchError::Satisfiable);
    };
    let proof = refute(sys, &cert, mode, options)?;
    let metrics = check(&proof)?;
    if !is_refutation(&proof) {
        return Err(BenchError::NotRefutation);
    }
    Ok((proof, metrics))
}

pub fn measure(family: Family, sys: &LinSystemFp) -> Result<BenchRecord, BenchError> {
    let start = Instant::now();
    let (_, metrics) = refute_checked(sys, auto_mode(sys.p()), RefuteOptions::default())?;
    Ok(BenchRecord {
        family,
        n: sys.n(),
        p: sys.p(),
        w: sys.width(),
        metrics,
        ms: start.elapsed().as_millis(),
    })
}

/// One record per `n`; random instances are drawn from a generator seeded
/// with `seed`, so the instance sequence is reproducible.
pub fn run(family: Family, ns: &[usize], p: u64, w: usize, seed: u64) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ns.iter()
        .map(|&n| {
            let sys = match family {
                Family::TseitinCycle => tseitin_cycle(n, p),
                Family::Random => random_unsat(&mut rng, n, p, w).0,
            };
            measure(family, &sys)
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}
