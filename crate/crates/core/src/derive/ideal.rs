//! Substituting polynomial equalities: proving `P = Q` whenever `P − Q` is
//! an explicit combination of equations already derived.

use std::collections::BTreeMap;

use super::{DeriveError, Deriver, EqProof};
use crate::kernel::{AxiomKind, LineId};
use crate::poly::{Poly, VarId};
use crate::rational::Rational;

/// The generating equations used to reduce polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `v² − v`
    Bool(VarId),
    /// `x_i(a)·x_i(b)` with `a < b`
    Ortho(u32, u32, u32),
    /// `Σ_l x_i(l) − 1`
    Z(u32),
}

/// The first pair of distinct indicators of the same variable in `m`.
fn ortho_pair(m: &crate::poly::Monomial) -> Option<(u32, u32, u32)> {
    let mut prev: Option<(u32, u32)> = None;
    for v in m.vars() {
        if let VarId::Indicator(i, l) = v {
            if let Some((pi, pl)) = prev {
                if pi == i {
                    return Some((i, pl, l));
                }
            }
            prev = Some((i, l));
        }
    }
    None
}

/// Splits `P` as `remainder + Σ C_g·g` over Boolean and orthogonality
/// generators; the remainder is multilinear and has no two indicators of
/// the same variable in one monomial.
pub fn reduce(p: &Poly) -> (Poly, BTreeMap<Generator, Poly>) {
    let (ml, cof) = p.multilinear_cofactors();
    let mut dec: BTreeMap<Generator, Poly> = cof.into_iter().map(|(v, c)| (Generator::Bool(v), c)).collect();
    let mut rem = Poly::zero();
    for (m, c) in ml.terms() {
        match ortho_pair(m) {
            Some((i, a, b)) => {
                let rest = m
                    .without_one(VarId::Indicator(i, a))
                    .and_then(|r| r.without_one(VarId::Indicator(i, b)))
                    .expect("pair taken from the monomial");
                dec.entry(Generator::Ortho(i, a, b))
                    .or_insert_with(Poly::zero)
                    .add_term(rest, c);
            }
            None => rem.add_term(m.clone(), c),
        }
    }
    dec.retain(|_, c| !c.is_zero());
    (rem, dec)
}

impl Deriver {
    /// `x_i(z)·x_i(l) = 0` for `z ≠ l`.
    ///
    /// Lower side: `x_i(z) ≥ 0` lifted by `x_i(l)`. Upper side: the Z axiom
    /// `1 − Σ x_i(·) ≥ 0` lifted by `x_i(z)`, with `x_i(z)² − x_i(z) ≥ 0`
    /// and the other products `x_i(z)·x_i(l') ≥ 0` added.
    pub fn prove_ortho(&mut self, i: u32, z: u32, l: u32) -> Result<EqProof, DeriveError> {
        if z == l {
            return Err(DeriveError::SameIndex(z));
        }
        let (a, b) = (z.min(l), z.max(l));
        if let Some(&e) = self.orthos.get(&(i, a, b)) {
            return Ok(e);
        }
        let p = self.bank.p() as u32;
        let z_eq = self.z_eq(i)?;
        let xa = VarId::Indicator(i, a);
        let xb = VarId::Indicator(i, b);
        let nonneg = self.axiom(AxiomKind::NonNeg, xa);
        let pos = self.lift(nonneg, xb, false);
        let mut items: Vec<(LineId, Rational)> = Vec::new();
        let lifted = self.lift(z_eq.neg, xa, false);
        items.push((lifted, Rational::one()));
        items.push((self.axiom(AxiomKind::BoolUp, xa), Rational::one()));
        for other in (0..p).filter(|&o| o != a && o != b) {
            let base = self.axiom(AxiomKind::NonNeg, xa);
            let prod = self.lift(base, VarId::Indicator(i, other), false);
            items.push((prod, Rational::one()));
        }
        let neg = self.sum_weighted(&items)?;
        let e = EqProof { pos, neg };
        debug_assert_eq!(self.poly(pos), &Poly::var(xa).mul(&Poly::var(xb)));
        debug_assert_eq!(self.poly(neg), &self.poly(pos).neg());
        self.orthos.insert((i, a, b), e);
        Ok(e)
    }

    pub fn generator_eq(&mut self, g: Generator) -> Result<EqProof, DeriveError> {
        match g {
            Generator::Bool(v) => Ok(self.bool_eq(v)),
            Generator::Ortho(i, a, b) => self.prove_ortho(i, a, b),
            Generator::Z(i) => self.z_eq(i),
        }
    }

    /// `P − Q = 0`, given `P − Q = Σ C_k·A_k` where `eq_k` proves `A_k = 0`.
    pub fn prove_ideal_rewrite(
        &mut self,
        p: &Poly,
        q: &Poly,
        decomposition: &[(Poly, EqProof)],
    ) -> Result<EqProof, DeriveError> {
        let mut total = Poly::zero();
        for (c, e) in decomposition {
            total = total.add(&c.mul(self.poly(e.pos)));
        }
        let diff = p.sub(q).sub(&total);
        if !diff.is_zero() {
            return Err(DeriveError::DecompositionMismatch(diff));
        }
        let mut sides = [Vec::new(), Vec::new()];
        for (negative, items) in [false, true].into_iter().zip(sides.iter_mut()) {
            for (c, e) in decomposition {
                for (m, coef) in c.terms() {
                    let side = e.side(coef.is_negative() != negative);
                    items.push((self.lift_monomial(side, m), coef.abs()));
                }
            }
        }
        let pos = self.sum_weighted(&sides[0])?;
        let neg = self.sum_weighted(&sides[1])?;
        Ok(EqProof { pos, neg })
    }

    /// `P − Q = 0` where `P` reduces to `Q + Σ extra` modulo the Boolean and
    /// orthogonality equations.
    pub fn prove_by_reduction(
        &mut self,
        p: &Poly,
        q: &Poly,
        extra: &[(Poly, EqProof)],
    ) -> Result<EqProof, DeriveError> {
        let (_, dec) = reduce(p);
        let mut decomposition = Vec::with_capacity(dec.len() + extra.len());
        for (g, c) in dec {
            let e = self.generator_eq(g)?;
            decomposition.push((c, e));
        }
        decomposition.extend(extra.iter().cloned());
        self.prove_ideal_rewrite(p, q, &decomposition)
    }
}
