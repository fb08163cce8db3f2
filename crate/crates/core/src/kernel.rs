//! Semi-algebraic proofs and their checker.
//!
//! A proof is a list of lines, each asserting `poly >= 0` and carrying the
//! rule that produced it: one of the four Boolean axiom templates, a copy of
//! a hypothesis, a non-negative linear combination of two earlier lines, or a
//! lift of an earlier line by `v` or `1 - v`. The checker recomputes every
//! line from its justification and compares the result exactly.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::poly::{Flavor, Poly, PolyError, VarId};
use crate::rational::Rational;

pub type LineId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum AxiomKind {
    /// `v >= 0`
    NonNeg,
    /// `1 - v >= 0`
    Compl,
    /// `v^2 - v >= 0`
    BoolUp,
    /// `v - v^2 >= 0`
    BoolDown,
}

impl AxiomKind {
    pub fn instance(self, v: VarId) -> Poly {
        let x = Poly::var(v);
        let sq = x.mul(&x);
        match self {
            AxiomKind::NonNeg => x,
            AxiomKind::Compl => Poly::compl(v),
            AxiomKind::BoolUp => sq.sub(&x),
            AxiomKind::BoolDown => x.sub(&sq),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            AxiomKind::NonNeg => "nonneg",
            AxiomKind::Compl => "compl",
            AxiomKind::BoolUp => "bool_up",
            AxiomKind::BoolDown => "bool_down",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "nonneg" => AxiomKind::NonNeg,
            "compl" => AxiomKind::Compl,
            "bool_up" => AxiomKind::BoolUp,
            "bool_down" => AxiomKind::BoolDown,
            _ => return None,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Axiom { kind: AxiomKind, var: VarId },
    Hypothesis(usize),
    LinComb { p1: LineId, a: Rational, p2: LineId, b: Rational },
    MultVar { p1: LineId, var: VarId },
    MultCompl { p1: LineId, var: VarId },
}

impl Justification {
    pub fn premises(&self) -> Vec<LineId> {
        match self {
            Justification::Axiom { .. } | Justification::Hypothesis(_) => vec![],
            Justification::LinComb { p1, p2, .. } => vec![*p1, *p2],
            Justification::MultVar { p1, .. } | Justification::MultCompl { p1, .. } => vec![*p1],
        }
    }

    /// True for the rules counted as inferences.
    pub fn is_inference(&self) -> bool {
        !matches!(self, Justification::Axiom { .. } | Justification::Hypothesis(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub id: LineId,
    pub poly: Poly,
    pub just: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub hypotheses: Vec<Poly>,
    pub lines: Vec<ProofLine>,
    pub goal: Option<Poly>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ProofMetrics {
    pub degree: u32,
    pub length: u64,
    pub size: u64,
    pub tree_like: bool,
    pub line_count: u64,
    pub max_coeff_bits: u64,
}

impl fmt::Display for ProofMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lines={} length={} size={} degree={} tree_like={} max_coeff_bits={}",
            self.line_count, self.length, self.size, self.degree, self.tree_like, self.max_coeff_bits
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("line {line}: id out of sequence (found {found})")]
    BadId { line: LineId, found: LineId },
    #[error("line {line}: reference to line {referenced} is not backward")]
    BadReference { line: LineId, referenced: LineId },
    #[error("line {line}: negative scalar in linear combination")]
    NegativeScalar { line: LineId },
    #[error("line {line}: recorded polynomial {found} differs from derived {expected}")]
    PolyMismatch { line: LineId, expected: Poly, found: Poly },
    #[error("line {line}: plain and indicator variables mixed in one proof")]
    FlavorMixing { line: LineId },
    #[error("line {line}: hypothesis index {index} out of range")]
    BadHypIndex { line: LineId, index: usize },
}

impl CheckError {
    pub fn line(&self) -> LineId {
        match self {
            CheckError::BadId { line, .. }
            | CheckError::BadReference { line, .. }
            | CheckError::NegativeScalar { line }
            | CheckError::PolyMismatch { line, .. }
            | CheckError::FlavorMixing { line }
            | CheckError::BadHypIndex { line, .. } => *line,
        }
    }
}

fn derive_line(proof: &Proof, idx: usize) -> Result<(), CheckError> {
    let line = &proof.lines[idx];
    if line.id != idx {
        return Err(CheckError::BadId { line: idx, found: line.id });
    }
    let get = |r: LineId| -> Result<&Poly, CheckError> {
        if r >= idx {
            Err(CheckError::BadReference { line: idx, referenced: r })
        } else {
            Ok(&proof.lines[r].poly)
        }
    };
    let expected = match &line.just {
        Justification::Axiom { kind, var } => kind.instance(*var),
        Justification::Hypothesis(h) => proof
            .hypotheses
            .get(*h)
            .cloned()
            .ok_or(CheckError::BadHypIndex { line: idx, index: *h })?,
        Justification::LinComb { p1, a, p2, b } => {
            let (pa, pb) = (get(*p1)?, get(*p2)?);
            if a.is_negative() || b.is_negative() {
                return Err(CheckError::NegativeScalar { line: idx });
            }
            pa.lin_comb(a, pb, b)
        }
        Justification::MultVar { p1, var } => get(*p1)?.mul_var(*var, false),
        Justification::MultCompl { p1, var } => get(*p1)?.mul_var(*var, true),
    };
    if expected != line.poly {
        return Err(CheckError::PolyMismatch {
            line: idx,
            expected,
            found: line.poly.clone(),
        });
    }
    Ok(())
}

fn check_flavor(proof: &Proof) -> Result<(), CheckError> {
    let mut seen: Option<Flavor> = None;
    let mut note = |plain: bool, ind: bool, line: LineId| -> Result<(), CheckError> {
        for (present, fl) in [(plain, Flavor::Plain), (ind, Flavor::Indicator)] {
            if present {
                match seen {
                    None => seen = Some(fl),
                    Some(s) if s != fl => return Err(CheckError::FlavorMixing { line }),
                    _ => {}
                }
            }
        }
        Ok(())
    };
    for h in &proof.hypotheses {
        let (p, i) = h.flavors();
        note(p, i, 0)?;
    }
    for line in &proof.lines {
        let (mut p, mut i) = line.poly.flavors();
        match &line.just {
            Justification::Axiom { var, .. }
            | Justification::MultVar { var, .. }
            | Justification::MultCompl { var, .. } => match var.flavor() {
                Flavor::Plain => p = true,
                Flavor::Indicator => i = true,
            },
            _ => {}
        }
        note(p, i, line.id)?;
    }
    Ok(())
}

/// Verifies every line and returns the proof's metrics.
///
/// Lines are verified independently in parallel; the reported error is always
/// the one with the smallest line id.
pub fn check(proof: &Proof) -> Result<ProofMetrics, CheckError> {
    let first_err = (0..proof.lines.len())
        .into_par_iter()
        .find_map_first(|i| derive_line(proof, i).err());
    if let Some(e) = first_err {
        return Err(e);
    }
    check_flavor(proof)?;
    Ok(metrics(proof))
}

/// True iff the final line is the constant `-1`.
pub fn is_refutation(proof: &Proof) -> bool {
    proof
        .lines
        .last()
        .and_then(|l| l.poly.as_constant())
        .is_some_and(|c| c == Rational::from_integer(-1))
}

pub fn metrics(proof: &Proof) -> ProofMetrics {
    let mut m = ProofMetrics {
        line_count: proof.lines.len() as u64,
        tree_like: true,
        ..Default::default()
    };
    let mut uses = vec![0u32; proof.lines.len()];
    for h in &proof.hypotheses {
        m.degree = m.degree.max(h.degree());
    }
    for line in &proof.lines {
        m.degree = m.degree.max(line.poly.degree());
        m.size += line.poly.size();
        m.max_coeff_bits = m.max_coeff_bits.max(line.poly.max_coeff_bits());
        if line.just.is_inference() {
            m.length += 1;
        }
        for r in line.just.premises() {
            if let Some(u) = uses.get_mut(r) {
                *u += 1;
            }
        }
    }
    m.tree_like = uses.iter().all(|&u| u <= 1);
    m
}

pub const DEFAULT_PROBE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("2^{0} assignments exceed the cap of {1}")]
    UniverseTooLarge(usize, u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub line: LineId,
    pub point: Vec<(VarId, bool)>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub points: u64,
    pub satisfying_points: u64,
    pub violation: Option<Violation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violation.is_none()
    }
}

/// Terms of a polynomial as (bitmask over the universe, coefficient).
fn masked(poly: &Poly, index: &HashMap<VarId, usize>) -> Result<Vec<(u64, Rational)>, PolyError> {
    poly.terms()
        .map(|(m, c)| {
            let mut mask = 0u64;
            for v in m.vars() {
                let bit = index.get(&v).ok_or(PolyError::MissingVariable(v))?;
                mask |= 1 << bit;
            }
            Ok((mask, c.clone()))
        })
        .collect()
}

fn eval_masked(terms: &[(u64, Rational)], point: u64) -> Rational {
    let mut total = Rational::zero();
    for (mask, c) in terms {
        if mask & point == *mask {
            total += c;
        }
    }
    total
}

/// Evaluates every hypothesis and line at every 0/1 point of `universe`.
///
/// Points where some hypothesis is negative are skipped; at the remaining
/// points every line must be non-negative.
pub fn soundness_probe(proof: &Proof, universe: &[VarId], cap: u64) -> Result<SoundnessReport, ProbeError> {
    let n = universe.len();
    if n >= 63 || (1u64 << n) > cap {
        return Err(ProbeError::UniverseTooLarge(n, cap));
    }
    let index: HashMap<VarId, usize> = universe.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let hyps = proof
        .hypotheses
        .iter()
        .map(|h| masked(h, &index))
        .collect::<Result<Vec<_>, _>>()?;
    let lines = proof
        .lines
        .iter()
        .map(|l| masked(&l.poly, &index))
        .collect::<Result<Vec<_>, _>>()?;
    let total = 1u64 << n;
    let results: Vec<(bool, Option<Violation>)> = (0..total)
        .into_par_iter()
        .map(|point| {
            if hyps.iter().any(|h| eval_masked(h, point).is_negative()) {
                return (false, None);
            }
            let bad = lines.iter().enumerate().find_map(|(i, l)| {
                let v = eval_masked(l, point);
                v.is_negative().then(|| Violation {
                    line: i,
                    point: universe.iter().enumerate().map(|(b, &v)| (v, point >> b & 1 == 1)).collect(),
                    value: v,
                })
            });
            (true, bad)
        })
        .collect();
    let satisfying_points = results.iter().filter(|r| r.0).count() as u64;
    let violation = results.into_iter().find_map(|r| r.1);
    Ok(SoundnessReport {
        points: total,
        satisfying_points,
        violation,
    })
}

/// Appends lines whose polynomials are computed from their justifications.
///
/// Every method computes the exact polynomial the checker will expect, so
/// a builder-produced proof is correct by construction; `check` re-derives it
/// independently anyway.
#[derive(Debug, Default)]
pub struct ProofBuilder {
    proof: Proof,
}

impl ProofBuilder {
    pub fn new(hypotheses: Vec<Poly>) -> Self {
        ProofBuilder {
            proof: Proof {
                hypotheses,
                lines: Vec::new(),
                goal: None,
            },
        }
    }

    fn push(&mut self, poly: Poly, just: Justification) -> LineId {
        let id = self.proof.lines.len();
        self.proof.lines.push(ProofLine { id, poly, just });
        id
    }

    pub fn poly(&self, id: LineId) -> &Poly {
        &self.proof.lines[id].poly
    }

    pub fn hypotheses(&self) -> &[Poly] {
        &self.proof.hypotheses
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.lines.is_empty()
    }

    pub fn axiom(&mut self, kind: AxiomKind, var: VarId) -> LineId {
        self.push(kind.instance(var), Justification::Axiom { kind, var })
    }

    pub fn hypothesis(&mut self, index: usize) -> LineId {
        let poly = self.proof.hypotheses[index].clone();
        self.push(poly, Justification::Hypothesis(index))
    }

    /// `a·P1 + b·P2`. Panics on a negative scalar: emitting one is a bug in
    /// the caller, never a property of the input.
    pub fn lin_comb(&mut self, p1: LineId, a: Rational, p2: LineId, b: Rational) -> LineId {
        assert!(
            !a.is_negative() && !b.is_negative(),
            "negative scalar in linear combination"
        );
        let poly = self.poly(p1).lin_comb(&a, self.poly(p2), &b);
        self.push(poly, Justification::LinComb { p1, a, p2, b })
    }

    pub fn mult_var(&mut self, p1: LineId, var: VarId) -> LineId {
        let poly = self.poly(p1).mul_var(var, false);
        self.push(poly, Justification::MultVar { p1, var })
    }

    pub fn mult_compl(&mut self, p1: LineId, var: VarId) -> LineId {
        let poly = self.poly(p1).mul_var(var, true);
        self.push(poly, Justification::MultCompl { p1, var })
    }

    pub fn lift(&mut self, p1: LineId, var: VarId, complemented: bool) -> LineId {
        if complemented {
            self.mult_compl(p1, var)
        } else {
            self.mult_var(p1, var)
        }
    }

    /// `c·P` for `c >= 0`; returns the line itself when `c == 1`.
    pub fn scaled(&mut self, p1: LineId, c: Rational) -> LineId {
        if c.is_one() {
            p1
        } else {
            self.lin_comb(p1, c, p1, Rational::zero())
        }
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn finish(self) -> Proof {
        self.proof
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> VarId {
        VarId::Plain(i)
    }

    #[test]
    fn single_axiom_proof() {
        let mut b = ProofBuilder::new(vec![]);
        b.axiom(AxiomKind::BoolUp, x(1));
        let proof = b.finish();
        let m = check(&proof).unwrap();
        assert_eq!(m.degree, 2);
        assert_eq!(m.length, 0);
        assert_eq!(m.size, 3);
        assert!(m.tree_like);
        assert_eq!(metrics(&proof), m);
    }

    #[test]
    fn negative_scalar_rejected() {
        let mut b = ProofBuilder::new(vec![]);
        b.axiom(AxiomKind::NonNeg, x(1));
        let mut proof = b.finish();
        proof.lines.push(ProofLine {
            id: 1,
            poly: Poly::var(x(1)).neg(),
            just: Justification::LinComb {
                p1: 0,
                a: Rational::from_integer(-1),
                p2: 0,
                b: Rational::zero(),
            },
        });
        assert_eq!(check(&proof), Err(CheckError::NegativeScalar { line: 1 }));
    }

    #[test]
    fn poly_mismatch_rejected() {
        let mut b = ProofBuilder::new(vec![]);
        b.axiom(AxiomKind::NonNeg, x(1));
        let mut proof = b.finish();
        proof.lines.push(ProofLine {
            id: 1,
            poly: Poly::var(x(1)),
            just: Justification::MultVar { p1: 0, var: x(2) },
        });
        match check(&proof) {
            Err(CheckError::PolyMismatch { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forward_reference_and_bad_hypothesis() {
        let mut proof = Proof::default();
        proof.lines.push(ProofLine {
            id: 0,
            poly: Poly::zero(),
            just: Justification::MultVar { p1: 0, var: x(1) },
        });
        assert_eq!(check(&proof), Err(CheckError::BadReference { line: 0, referenced: 0 }));
        proof.lines[0].just = Justification::Hypothesis(3);
        assert_eq!(check(&proof), Err(CheckError::BadHypIndex { line: 0, index: 3 }));
    }

    #[test]
    fn flavor_mixing_rejected() {
        let mut b = ProofBuilder::new(vec![]);
        b.axiom(AxiomKind::NonNeg, x(1));
        b.axiom(AxiomKind::NonNeg, VarId::Indicator(1, 0));
        assert_eq!(check(&b.finish()), Err(CheckError::FlavorMixing { line: 1 }));
    }

    #[test]
    fn refutation_detection() {
        let mk = |c: Rational| Proof {
            hypotheses: vec![Poly::constant(c.clone())],
            lines: vec![ProofLine {
                id: 0,
                poly: Poly::constant(c),
                just: Justification::Hypothesis(0),
            }],
            goal: None,
        };
        assert!(is_refutation(&mk(Rational::from_integer(-1))));
        assert!(!is_refutation(&mk(Rational::zero())));
        assert!(!is_refutation(&mk(Rational::new(-1, 4))));
    }

    #[test]
    fn reuse_breaks_tree_likeness() {
        let mut b = ProofBuilder::new(vec![]);
        let a = b.axiom(AxiomKind::NonNeg, x(1));
        let c = b.axiom(AxiomKind::Compl, x(1));
        b.lin_comb(a, Rational::one(), c, Rational::one());
        assert!(check(b.proof()).unwrap().tree_like);
        b.lin_comb(a, Rational::one(), c, Rational::from_integer(2));
        assert!(!check(b.proof()).unwrap().tree_like);
    }

    #[test]
    fn probe_empty_proof_is_vacuously_sound() {
        let r = soundness_probe(&Proof::default(), &[], DEFAULT_PROBE_CAP).unwrap();
        assert!(r.is_sound());
        assert_eq!(r.points, 1);
        assert_eq!(r.satisfying_points, 1);
    }

    #[test]
    fn probe_catches_unsound_line() {
        let mut proof = Proof::default();
        proof.lines.push(ProofLine {
            id: 0,
            poly: "x1 - 1/2".parse().unwrap(),
            just: Justification::Hypothesis(0),
        });
        let r = soundness_probe(&proof, &[x(1)], DEFAULT_PROBE_CAP).unwrap();
        let v = r.violation.unwrap();
        assert_eq!(v.line, 0);
        assert_eq!(v.point, vec![(x(1), false)]);
    }

    #[test]
    fn probe_cap() {
        let vars: Vec<VarId> = (1..=5).map(x).collect();
        assert!(matches!(
            soundness_probe(&Proof::default(), &vars, 16),
            Err(ProbeError::UniverseTooLarge(5, 16))
        ));
    }
}
