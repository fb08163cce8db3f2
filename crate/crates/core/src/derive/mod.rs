//! Builders that emit checker-verifiable derivations.
//!
//! Everything here appends lines to a single [`ProofBuilder`] through a
//! [`Deriver`], which also memoizes lifts, axiom and hypothesis lines, and
//! the small equalities (`v² = v`, `x_i(a)·x_i(b) = 0`) that the bigger
//! constructions are assembled from.

mod gap;
mod ideal;
mod lemmas;
mod refute;

use std::collections::HashMap;

use crate::encoder::{EncodeError, HypKey, HypothesisBank};
use crate::kernel::{AxiomKind, LineId, Proof, ProofBuilder};
use crate::poly::{Monomial, Poly, VarId};
use crate::rational::Rational;

pub use gap::{GapStatement, LinearForm};
pub use ideal::Generator;
pub use lemmas::weight_form;
pub use refute::{
    level_forms, refute, refute_f2, refute_fp, threshold_plan, Basis, LevelForm, RefuteOptions, ThresholdPlan,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeriveError {
    #[error("constant {0} is negative")]
    NegativeConstant(Rational),
    #[error("no variable available to anchor a constant line")]
    NoVariables,
    #[error("P − Q differs from the supplied decomposition by {0}")]
    DecompositionMismatch(Poly),
    #[error("linear form has a non-integer coefficient or threshold")]
    NonIntegerInput,
    #[error("selector has the parity of a satisfying assignment")]
    WrongParity,
    #[error("assignment satisfies the row")]
    NotViolating,
    #[error("hypothesis bank lacks the Z axioms for x{0}")]
    MissingZAxioms(u32),
    #[error("hypothesis bank lacks {0} >= 0")]
    MissingHypothesis(Poly),
    #[error("certificate is not valid for the system")]
    InvalidCertificate,
    #[error("threshold {threshold} at level {level} lies outside 0..={bound}")]
    PlanOutOfRange { level: usize, threshold: Rational, bound: u64 },
    #[error("derived line for threshold {threshold} at level {level} does not match its statement")]
    Inconsistent { level: usize, threshold: Rational },
    #[error("assignments equal to each other: {0} = {0}")]
    SameIndex(u32),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Two lines asserting `P ≥ 0` and `−P ≥ 0`, i.e. the equation `P = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EqProof {
    pub pos: LineId,
    pub neg: LineId,
}

impl EqProof {
    pub fn flipped(self) -> EqProof {
        EqProof {
            pos: self.neg,
            neg: self.pos,
        }
    }

    /// The line asserting `sign·P ≥ 0`.
    pub fn side(self, negative: bool) -> LineId {
        if negative {
            self.neg
        } else {
            self.pos
        }
    }
}

/// Proof under construction plus caches of reusable lines.
#[derive(Debug)]
pub struct Deriver {
    b: ProofBuilder,
    bank: HypothesisBank,
    lifts: HashMap<(LineId, VarId, bool), LineId>,
    axioms: HashMap<(AxiomKind, VarId), LineId>,
    hyps: HashMap<usize, LineId>,
    orthos: HashMap<(u32, u32, u32), EqProof>,
    zero: Option<LineId>,
}

impl Deriver {
    pub fn new(bank: HypothesisBank) -> Self {
        Deriver {
            b: ProofBuilder::new(bank.polys().to_vec()),
            bank,
            lifts: HashMap::new(),
            axioms: HashMap::new(),
            hyps: HashMap::new(),
            orthos: HashMap::new(),
            zero: None,
        }
    }

    pub fn bank(&self) -> &HypothesisBank {
        &self.bank
    }

    pub fn poly(&self, id: LineId) -> &Poly {
        self.b.poly(id)
    }

    pub fn proof(&self) -> &Proof {
        self.b.proof()
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn finish(self) -> Proof {
        self.b.finish()
    }

    pub fn axiom(&mut self, kind: AxiomKind, v: VarId) -> LineId {
        if let Some(&id) = self.axioms.get(&(kind, v)) {
            return id;
        }
        let id = self.b.axiom(kind, v);
        self.axioms.insert((kind, v), id);
        id
    }

    pub fn hypothesis(&mut self, index: usize) -> LineId {
        if let Some(&id) = self.hyps.get(&index) {
            return id;
        }
        let id = self.b.hypothesis(index);
        self.hyps.insert(index, id);
        id
    }

    pub fn hypothesis_by_key(&mut self, key: &HypKey) -> Option<LineId> {
        let idx = self.bank.position(key)?;
        Some(self.hypothesis(idx))
    }

    pub fn lin_comb(&mut self, p1: LineId, a: Rational, p2: LineId, b: Rational) -> LineId {
        self.b.lin_comb(p1, a, p2, b)
    }

    pub fn scaled(&mut self, line: LineId, c: Rational) -> LineId {
        self.b.scaled(line, c)
    }

    /// Multiplies a line by `v` (or `1 − v`), reusing an earlier identical lift.
    pub fn lift(&mut self, line: LineId, v: VarId, complemented: bool) -> LineId {
        if let Some(&id) = self.lifts.get(&(line, v, complemented)) {
            return id;
        }
        let id = self.b.lift(line, v, complemented);
        self.lifts.insert((line, v, complemented), id);
        id
    }

    pub fn lift_all(&mut self, mut line: LineId, lifts: &[(VarId, bool)]) -> LineId {
        for &(v, c) in lifts {
            line = self.lift(line, v, c);
        }
        line
    }

    pub fn lift_monomial(&mut self, line: LineId, m: &Monomial) -> LineId {
        let seq: Vec<(VarId, bool)> = m.var_sequence().into_iter().map(|v| (v, false)).collect();
        self.lift_all(line, &seq)
    }

    /// An anchor variable for constant lines: the first variable of any
    /// hypothesis.
    fn anchor(&self) -> Option<VarId> {
        self.bank.polys().iter().find_map(|h| h.vars().into_iter().next())
    }

    /// The line `k ≥ 0`, derived as `k·v + k·(1 − v)`.
    pub fn prove_const_nonneg(&mut self, k: &Rational) -> Result<LineId, DeriveError> {
        if k.is_negative() {
            return Err(DeriveError::NegativeConstant(k.clone()));
        }
        let v = self.anchor().ok_or(DeriveError::NoVariables)?;
        let a = self.axiom(AxiomKind::NonNeg, v);
        let c = self.axiom(AxiomKind::Compl, v);
        Ok(self.lin_comb(a, k.clone(), c, k.clone()))
    }

    /// The line `0 ≥ 0`.
    pub fn zero_line(&mut self) -> Result<LineId, DeriveError> {
        if let Some(z) = self.zero {
            return Ok(z);
        }
        let z = self.prove_const_nonneg(&Rational::zero())?;
        self.zero = Some(z);
        Ok(z)
    }

    /// `Σ c_i·line_i` for non-negative `c_i`, summed as a balanced tree.
    pub fn sum_weighted(&mut self, items: &[(LineId, Rational)]) -> Result<LineId, DeriveError> {
        let items: Vec<(LineId, Rational)> = items.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        match items.len() {
            0 => return self.zero_line(),
            1 => return Ok(self.scaled(items[0].0, items[0].1.clone())),
            _ => {}
        }
        let mut layer: Vec<LineId> = items
            .chunks(2)
            .map(|ch| match ch {
                [(a, ca), (b, cb)] => self.lin_comb(*a, ca.clone(), *b, cb.clone()),
                [(a, ca)] => self.scaled(*a, ca.clone()),
                _ => unreachable!(),
            })
            .collect();
        while layer.len() > 1 {
            layer = layer
                .chunks(2)
                .map(|ch| match ch {
                    [a, b] => self.lin_comb(*a, Rational::one(), *b, Rational::one()),
                    [a] => *a,
                    _ => unreachable!(),
                })
                .collect();
        }
        Ok(layer[0])
    }

    /// Sums signed multiples of equalities together with plain inequality
    /// lines: `Σ w_j·E_j + Σ line_i`, taking each `E_j` from the side given by
    /// the sign of `w_j`.
    pub fn combine(&mut self, lines: &[LineId], eqs: &[(EqProof, Rational)]) -> Result<LineId, DeriveError> {
        let mut items: Vec<(LineId, Rational)> = lines.iter().map(|&l| (l, Rational::one())).collect();
        for (e, w) in eqs {
            items.push((e.side(w.is_negative()), w.abs()));
        }
        self.sum_weighted(&items)
    }

    /// `Σ w_j·E_j` as an equality.
    pub fn combine_eqs(&mut self, eqs: &[(EqProof, Rational)]) -> Result<EqProof, DeriveError> {
        let pos = self.combine(&[], eqs)?;
        let flipped: Vec<(EqProof, Rational)> = eqs.iter().map(|(e, w)| (e.flipped(), w.clone())).collect();
        let neg = self.combine(&[], &flipped)?;
        Ok(EqProof { pos, neg })
    }

    /// The line `sign·C·A ≥ 0` from an equality `A = 0`, lifting only the
    /// sides that are needed.
    pub fn prove_mult_side(&mut self, eq: EqProof, c: &Poly, negative: bool) -> Result<LineId, DeriveError> {
        let mut items = Vec::with_capacity(c.num_terms());
        for (m, coef) in c.terms() {
            let side = eq.side(coef.is_negative() != negative);
            let line = self.lift_monomial(side, m);
            items.push((line, coef.abs()));
        }
        self.sum_weighted(&items)
    }

    /// From `A = 0`, the equality `C·A = 0`.
    pub fn prove_eq_mult(&mut self, eq: EqProof, c: &Poly) -> Result<EqProof, DeriveError> {
        let pos = self.prove_mult_side(eq, c, false)?;
        let neg = self.prove_mult_side(eq, c, true)?;
        Ok(EqProof { pos, neg })
    }

    /// `v² − v = 0` from the two Boolean axioms.
    pub fn bool_eq(&mut self, v: VarId) -> EqProof {
        EqProof {
            pos: self.axiom(AxiomKind::BoolUp, v),
            neg: self.axiom(AxiomKind::BoolDown, v),
        }
    }

    /// `Σ_l x_i(l) − 1 = 0` from the hypothesis bank.
    pub fn z_eq(&mut self, i: u32) -> Result<EqProof, DeriveError> {
        let pos = self.hypothesis_by_key(&HypKey::ZAxiom { var: i, upper: true });
        let neg = self.hypothesis_by_key(&HypKey::ZAxiom { var: i, upper: false });
        match (pos, neg) {
            (Some(pos), Some(neg)) => Ok(EqProof { pos, neg }),
            _ => Err(DeriveError::MissingZAxioms(i)),
        }
    }
}
