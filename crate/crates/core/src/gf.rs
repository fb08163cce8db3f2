//! Linear systems over F_p: Gaussian elimination with certificate extraction.
//!
//! `solve` returns either a solution or a certificate of inconsistency: rows
//! `J` and multipliers `y` with `Σ y_j a_j = 0` and `Σ y_j b_j = 1` over F_p.
//! `brute_force_sat` is the exhaustive oracle used to cross-check it.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("{0} has no inverse modulo {1}")]
    ZeroInverse(u64, u64),
    #[error("row {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, found: usize, expected: usize },
    #[error("exhaustive search over {0}^{1} assignments exceeds the cap of {2}")]
    TooLarge(u64, usize, u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative inverse of `c` modulo the prime `p`.
pub fn fp_inverse(c: u64, p: u64) -> Result<u64, GfError> {
    let c = c % p;
    if c == 0 {
        return Err(GfError::ZeroInverse(c, p));
    }
    let (mut r0, mut r1) = (p as i128, c as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub a: Vec<u64>,
    pub b: u64,
}

impl Row {
    /// Column indices (0-based) with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&c| c == 0)
    }
}

/// `A x = b` over F_p with `n` variables. Entries are stored reduced mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSystemFp {
    p: u64,
    n: usize,
    rows: Vec<Row>,
}

impl LinSystemFp {
    pub fn new(p: u64, n: usize, rows: Vec<Row>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrimeModulus(p));
        }
        let mut reduced = Vec::with_capacity(rows.len());
        for (j, row) in rows.into_iter().enumerate() {
            if row.a.len() != n {
                return Err(GfError::DimensionMismatch {
                    row: j,
                    found: row.a.len(),
                    expected: n,
                });
            }
            reduced.push(Row {
                a: row.a.into_iter().map(|c| c % p).collect(),
                b: row.b % p,
            });
        }
        Ok(LinSystemFp { p, n, rows: reduced })
    }

    /// Convenience constructor from `(coefficients, rhs)` pairs.
    pub fn from_rows(p: u64, n: usize, rows: &[(&[u64], u64)]) -> Result<Self, GfError> {
        Self::new(
            p,
            n,
            rows.iter().map(|(a, b)| Row { a: a.to_vec(), b: *b }).collect(),
        )
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Maximum number of nonzero coefficients in a row.
    pub fn width(&self) -> usize {
        self.rows.iter().map(|r| r.support().len()).max().unwrap_or(0)
    }

    pub fn satisfies(&self, x: &[u64]) -> bool {
        self.rows.iter().all(|r| {
            let lhs = r.a.iter().zip(x).fold(0u64, |acc, (&a, &v)| (acc + a * (v % self.p)) % self.p);
            lhs == r.b
        })
    }
}

/// Rows `J` (0-based indices into the system) with nonzero multipliers `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub rows: Vec<usize>,
    pub multipliers: Vec<u64>,
}

impl Certificate {
    /// Checks `Σ y_j a_j = 0` and `Σ y_j b_j = 1` over F_p.
    pub fn is_valid_for(&self, sys: &LinSystemFp) -> bool {
        let p = sys.p;
        if self.rows.len() != self.multipliers.len() || self.rows.is_empty() {
            return false;
        }
        if self.rows.iter().any(|&j| j >= sys.rows.len()) || self.multipliers.iter().any(|&y| y % p == 0) {
            return false;
        }
        let mut acc = vec![0u64; sys.n];
        let mut rhs = 0u64;
        for (&j, &y) in self.rows.iter().zip(&self.multipliers) {
            let row = &sys.rows[j];
            for (s, &a) in acc.iter_mut().zip(&row.a) {
                *s = (*s + y * a) % p;
            }
            rhs = (rhs + y * row.b) % p;
        }
        acc.iter().all(|&s| s == 0) && rhs == 1 % p
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: Vec<String> = self.rows.iter().map(|r| (r + 1).to_string()).collect();
        let y: Vec<String> = self.multipliers.iter().map(u64::to_string).collect();
        write!(f, "J={{{}}} y=({})", j.join(","), y.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Satisfiable(Vec<u64>),
    Unsatisfiable(Certificate),
}

struct Pivot {
    col: usize,
    a: Vec<u64>,
    b: u64,
    combo: Vec<u64>,
}

/// Incremental row reduction in row order, tracking how each reduced row is
/// combined from the original rows.
///
/// The first row that reduces to `(0 | c)` with `c ≠ 0` yields the
/// certificate, scaled by `c⁻¹` so that `Σ y_j b_j = 1`. Pivot column is the
/// first nonzero entry of the reduced row.
pub fn solve(sys: &LinSystemFp) -> Result<Solution, GfError> {
    let p = sys.p;
    if !is_prime(p) {
        return Err(GfError::NonPrimeModulus(p));
    }
    let m = sys.rows.len();
    for (j, row) in sys.rows.iter().enumerate() {
        if row.is_zero() && row.b != 0 {
            return Ok(Solution::Unsatisfiable(Certificate {
                rows: vec![j],
                multipliers: vec![fp_inverse(row.b, p)?],
            }));
        }
    }
    let mut pivots: Vec<Pivot> = Vec::new();
    for (j, row) in sys.rows.iter().enumerate() {
        if row.is_zero() {
            continue;
        }
        let mut a = row.a.clone();
        let mut b = row.b;
        let mut combo = vec![0u64; m];
        combo[j] = 1;
        for pv in &pivots {
            let f = a[pv.col];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for (x, &y) in a.iter_mut().zip(&pv.a) {
                *x = (*x + nf * y) % p;
            }
            b = (b + nf * pv.b) % p;
            for (x, &y) in combo.iter_mut().zip(&pv.combo) {
                *x = (*x + nf * y) % p;
            }
        }
        match a.iter().position(|&c| c != 0) {
            Some(col) => {
                let inv = fp_inverse(a[col], p)?;
                a.iter_mut().for_each(|x| *x = *x * inv % p);
                combo.iter_mut().for_each(|x| *x = *x * inv % p);
                pivots.push(Pivot {
                    col,
                    a,
                    b: b * inv % p,
                    combo,
                });
            }
            None if b != 0 => {
                let inv = fp_inverse(b, p)?;
                let (rows, multipliers) = combo
                    .iter()
                    .enumerate()
                    .filter(|(_, &y)| y != 0)
                    .map(|(r, &y)| (r, y * inv % p))
                    .unzip();
                return Ok(Solution::Unsatisfiable(Certificate { rows, multipliers }));
            }
            None => {}
        }
    }
    let mut x = vec![0u64; sys.n];
    for pv in pivots.iter().rev() {
        let mut v = pv.b;
        for (c, &coef) in pv.a.iter().enumerate() {
            if c != pv.col && coef != 0 {
                v = (v + (p - coef) * x[c]) % p;
            }
        }
        x[pv.col] = v;
    }
    Ok(Solution::Satisfiable(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Satisfiable(Vec<u64>),
    Unsatisfiable,
}

pub const DEFAULT_ORACLE_CAP: u64 = 1 << 20;

/// Exhaustive search in mixed-radix order (`x1` varies fastest).
pub fn brute_force_sat(sys: &LinSystemFp, cap: u64) -> Result<OracleVerdict, GfError> {
    let p = sys.p;
    let total = (0..sys.n).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&t| t <= cap));
    let Some(total) = total else {
        return Err(GfError::TooLarge(p, sys.n, cap));
    };
    let mut x = vec![0u64; sys.n];
    for _ in 0..total {
        if sys.satisfies(&x) {
            return Ok(OracleVerdict::Satisfiable(x));
        }
        for d in x.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    Ok(OracleVerdict::Unsatisfiable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> LinSystemFp {
        LinSystemFp::from_rows(2, 3, &[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]).unwrap()
    }

    fn pair_f3() -> LinSystemFp {
        LinSystemFp::from_rows(3, 2, &[(&[1, 1], 1), (&[2, 2], 1)]).unwrap()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(fp_inverse(2, 5), Ok(3));
        assert_eq!(fp_inverse(1, 2), Ok(1));
        assert_eq!(fp_inverse(4, 7), Ok(2));
        assert_eq!(fp_inverse(7, 7), Err(GfError::ZeroInverse(0, 7)));
    }

    #[test]
    fn three_cycle_certificate() {
        let sys = three_cycle();
        assert_eq!(sys.width(), 2);
        let Solution::Unsatisfiable(c) = solve(&sys).unwrap() else { panic!() };
        assert_eq!(c.rows, vec![0, 1, 2]);
        assert_eq!(c.multipliers, vec![1, 1, 1]);
        assert!(c.is_valid_for(&sys));
        assert_eq!(c.to_string(), "J={1,2,3} y=(1,1,1)");
    }

    #[test]
    fn pair_certificate_mod3() {
        let sys = pair_f3();
        let Solution::Unsatisfiable(c) = solve(&sys).unwrap() else { panic!() };
        assert_eq!(c.rows, vec![0, 1]);
        assert_eq!(c.multipliers, vec![2, 2]);
        assert!(c.is_valid_for(&sys));
    }

    #[test]
    fn single_row_solution() {
        let sys = LinSystemFp::from_rows(2, 2, &[(&[1, 1], 1)]).unwrap();
        assert_eq!(solve(&sys).unwrap(), Solution::Satisfiable(vec![1, 0]));
        assert_eq!(
            brute_force_sat(&sys, DEFAULT_ORACLE_CAP).unwrap(),
            OracleVerdict::Satisfiable(vec![1, 0])
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(brute_force_sat(&three_cycle(), 1 << 20), Ok(OracleVerdict::Unsatisfiable));
        assert_eq!(brute_force_sat(&pair_f3(), 1 << 20), Ok(OracleVerdict::Unsatisfiable));
        assert_eq!(brute_force_sat(&three_cycle(), 4), Err(GfError::TooLarge(2, 3, 4)));
    }

    #[test]
    fn empty_rows() {
        let sys = LinSystemFp::from_rows(5, 2, &[(&[0, 0], 0), (&[1, 0], 1), (&[0, 0], 3)]).unwrap();
        let Solution::Unsatisfiable(c) = solve(&sys).unwrap() else { panic!() };
        assert_eq!(c.rows, vec![2]);
        assert_eq!(c.multipliers, vec![2]);
        assert!(c.is_valid_for(&sys));
        let sys = LinSystemFp::from_rows(5, 2, &[(&[0, 0], 0), (&[1, 0], 1)]).unwrap();
        assert_eq!(solve(&sys).unwrap(), Solution::Satisfiable(vec![1, 0]));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(LinSystemFp::from_rows(4, 1, &[]), Err(GfError::NonPrimeModulus(4)));
        assert!(!is_prime(1));
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7919));
    }
}
