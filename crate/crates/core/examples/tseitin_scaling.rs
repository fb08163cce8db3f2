//! Proof size of odd-charge Tseitin cycles as the cycle grows.
//!
//!     cargo run --release --example tseitin_scaling -- 4 6 8 12 16

use saproof::bench::{loglog_slope, run, Family, CSV_HEADER};

fn main() {
    let mut ns: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if ns.is_empty() {
        ns = vec![4, 6, 8, 12, 16];
    }
    let records = run(Family::TseitinCycle, &ns, 2, 2, 0).expect("cycles refute");
    println!("{CSV_HEADER}");
    for r in &records {
        println!("{r}");
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.metrics.size as f64)).collect();
    if pts.len() > 1 {
        println!("log-log slope of size: {:.3}", loglog_slope(&pts));
    }
}
