//! Equalities about the monomials that split a row's support into
//! assignments: partitions of unity, vanishing of violating monomials, and
//! the weight identity `(a·X − t)·M = 0`.

use super::{DeriveError, Deriver, EqProof};
use crate::encoder::{
    all_vectors, ext_monomial_f2, ext_monomial_fp, f2_inequality, fp_inequality, indicator_product, indicator_sum,
    weight, ExtendedMonomial,
};
use crate::kernel::{AxiomKind, LineId};
use crate::poly::{Monomial, Poly, VarId};
use crate::rational::Rational;

/// `Σ_i a_i·X_i` with `X_i = x_i` (plain) or `X_i = Σ_l l·x_i(l)` (indicator).
pub fn weight_form(support: &[u32], coeffs: &[u64], p: Option<u64>) -> Poly {
    let mut w = Poly::zero();
    for (&i, &a) in support.iter().zip(coeffs) {
        match p {
            None => w.add_term(Monomial::var(VarId::Plain(i)), &Rational::from_integer(a as i64)),
            Some(p) => {
                for l in 1..p as u32 {
                    w.add_term(
                        Monomial::var(VarId::Indicator(i, l)),
                        &Rational::from_integer(a as i64 * i64::from(l)),
                    );
                }
            }
        }
    }
    w
}

impl Deriver {
    fn hyp_line_for(&mut self, poly: &Poly) -> Result<LineId, DeriveError> {
        let idx = self
            .bank
            .polys()
            .iter()
            .position(|h| h == poly)
            .ok_or_else(|| DeriveError::MissingHypothesis(poly.clone()))?;
        Ok(self.hypothesis(idx))
    }

    /// `Π lifts = 0` from a hypothesis `Σ_k ¬lit_k − 1 ≥ 0` whose literals
    /// are the first lifts.
    ///
    /// Lifting by `lit_k` turns `¬lit_k` into `−(x² − x)` times the current
    /// prefix, which is cancelled by the matching Boolean axiom lifted by
    /// that prefix. After all but the last literal the line is already
    /// `−Π lit ≥ 0`; the remaining `extra` lifts multiply it through.
    pub fn kill_monomial(
        &mut self,
        hyp: LineId,
        hyp_lifts: &[(VarId, bool)],
        extra: &[(VarId, bool)],
    ) -> Result<EqProof, DeriveError> {
        let mut line = hyp;
        let mut prefix: Vec<(VarId, bool)> = Vec::new();
        for &(v, c) in &hyp_lifts[..hyp_lifts.len().saturating_sub(1)] {
            let lifted = self.lift(line, v, c);
            let bool_up = self.axiom(AxiomKind::BoolUp, v);
            let fix = self.lift_all(bool_up, &prefix);
            line = self.lin_comb(lifted, Rational::one(), fix, Rational::one());
            prefix.push((v, c));
        }
        let neg = self.lift_all(line, extra);
        let all: Vec<(VarId, bool)> = hyp_lifts.iter().chain(extra).copied().collect();
        let (v0, c0) = all[0];
        let first = self.axiom(if c0 { AxiomKind::Compl } else { AxiomKind::NonNeg }, v0);
        let pos = self.lift_all(first, &all[1..]);
        debug_assert_eq!(self.poly(neg), &self.poly(pos).neg());
        Ok(EqProof { pos, neg })
    }

    /// `Σ_{T⊆I} M^I_T − 1 = 0`; the left side is the zero polynomial.
    pub fn prove_partition_unity_f2(&mut self, support: &[u32]) -> Result<EqProof, DeriveError> {
        let total = (0..1u64 << support.len()).fold(Poly::zero(), |acc, m| {
            acc.add(&ext_monomial_f2(support, m).poly)
        });
        debug_assert_eq!(total, Poly::one());
        let z = self.zero_line()?;
        Ok(EqProof { pos: z, neg: z })
    }

    /// `M^I_T = 0` for `T` of the parity the row rules out.
    pub fn prove_violated_monomial_f2(&mut self, a: &[u64], b: u64, mask: u64) -> Result<EqProof, DeriveError> {
        let support = support_of(a);
        if support.is_empty() {
            return Err(crate::encoder::EncodeError::EmptySupport.into());
        }
        if u64::from(mask.count_ones()) % 2 != (1 + b) % 2 {
            return Err(DeriveError::WrongParity);
        }
        let hyp = self.hyp_line_for(&f2_inequality(&support, mask))?;
        let m = ext_monomial_f2(&support, mask);
        self.kill_monomial(hyp, &m.lifts, &[])
    }

    /// `(Σ_{i∈I} x_i − |T|)·M^I_T = 0`.
    pub fn prove_weight_identity_f2(&mut self, support: &[u32], mask: u64) -> Result<EqProof, DeriveError> {
        let m = ext_monomial_f2(support, mask);
        let ones = vec![1u64; support.len()];
        self.prove_weight_identity(&m, &weight_form(support, &ones, None), u64::from(mask.count_ones()))
    }

    /// `(W − t)·B = 0` for a monomial `B` on which `W` takes the value `t`.
    pub(crate) fn prove_weight_identity(
        &mut self,
        m: &ExtendedMonomial,
        w: &Poly,
        t: u64,
    ) -> Result<EqProof, DeriveError> {
        let a = w.sub(&Poly::constant(Rational::from_integer(t as i64))).mul(&m.poly);
        self.prove_by_reduction(&a, &Poly::zero(), &[])
    }

    /// `Π_{i∈I} Σ_l x_i(l) − 1 = 0` as `(c, Z_i)` pairs:
    /// `Π S_i − 1 = Σ_j (S_j − 1)·Π_{i<j} S_i`.
    pub(crate) fn z_product_decomposition(&mut self, support: &[u32]) -> Result<Vec<(Poly, EqProof)>, DeriveError> {
        let p = self.bank.p();
        let mut prefix = Poly::one();
        let mut out = Vec::with_capacity(support.len());
        for &i in support {
            let e = self.z_eq(i)?;
            out.push((prefix.clone(), e));
            prefix = prefix.mul(&indicator_sum(i, p));
        }
        Ok(out)
    }

    fn partition_unity(&mut self, support: &[u32], monomials: &[ExtendedMonomial]) -> Result<EqProof, DeriveError> {
        let total = monomials.iter().fold(Poly::zero(), |acc, m| acc.add(&m.poly));
        let extra = self.z_product_decomposition(support)?;
        self.prove_by_reduction(&total, &Poly::one(), &extra)
    }

    /// `Σ_{z∈F_p^I} M_z − 1 = 0` from the Z axioms.
    pub fn prove_partition_unity_fp(&mut self, support: &[u32]) -> Result<EqProof, DeriveError> {
        let p = self.bank.p();
        let ms: Vec<ExtendedMonomial> = all_vectors(support.len(), p)
            .map(|z| ext_monomial_fp(support, &z, p))
            .collect();
        self.partition_unity(support, &ms)
    }

    /// `Σ_{z∈F_p^I} Π_i x_i(z_i) − 1 = 0` from the Z axioms.
    pub fn prove_partition_unity_product(&mut self, support: &[u32]) -> Result<EqProof, DeriveError> {
        let p = self.bank.p();
        let ms: Vec<ExtendedMonomial> = all_vectors(support.len(), p)
            .map(|z| indicator_product(support, &z))
            .collect();
        self.partition_unity(support, &ms)
    }

    fn violating_hyp(&mut self, a: &[u64], b: u64, z: &[u32]) -> Result<(Vec<u32>, LineId), DeriveError> {
        let p = self.bank.p();
        let support = support_of(a);
        if support.is_empty() {
            return Err(crate::encoder::EncodeError::EmptySupport.into());
        }
        let coeffs: Vec<u64> = support.iter().map(|&i| a[i as usize - 1] % p).collect();
        if weight(&coeffs, z) % p == b % p {
            return Err(DeriveError::NotViolating);
        }
        let hyp = self.hyp_line_for(&fp_inequality(&support, z))?;
        Ok((support, hyp))
    }

    /// `M_z = 0` for an assignment `z` violating `a·x = b`.
    pub fn prove_violated_monomial_fp(&mut self, a: &[u64], b: u64, z: &[u32]) -> Result<EqProof, DeriveError> {
        let (support, hyp) = self.violating_hyp(a, b, z)?;
        let m = ext_monomial_fp(&support, z, self.bank.p());
        let k = support.len();
        self.kill_monomial(hyp, &m.lifts[..k], &m.lifts[k..])
    }

    /// `Π_i x_i(z_i) = 0` for an assignment `z` violating `a·x = b`.
    pub fn prove_violated_product(&mut self, a: &[u64], b: u64, z: &[u32]) -> Result<EqProof, DeriveError> {
        let (support, hyp) = self.violating_hyp(a, b, z)?;
        let m = indicator_product(&support, z);
        self.kill_monomial(hyp, &m.lifts, &[])
    }

    /// `(Σ_i a_i X_i − Σ_i a_i z_i)·M_z = 0`.
    pub fn prove_weight_identity_fp(&mut self, support: &[u32], coeffs: &[u64], z: &[u32]) -> Result<EqProof, DeriveError> {
        let p = self.bank.p();
        let m = ext_monomial_fp(support, z, p);
        self.prove_weight_identity(&m, &weight_form(support, coeffs, Some(p)), weight(coeffs, z))
    }

    /// `(Σ_i a_i X_i − Σ_i a_i z_i)·Π_i x_i(z_i) = 0`.
    pub fn prove_weight_identity_product(
        &mut self,
        support: &[u32],
        coeffs: &[u64],
        z: &[u32],
    ) -> Result<EqProof, DeriveError> {
        let p = self.bank.p();
        let m = indicator_product(support, z);
        self.prove_weight_identity(&m, &weight_form(support, coeffs, Some(p)), weight(coeffs, z))
    }
}

fn support_of(a: &[u64]) -> Vec<u32> {
    a.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| i as u32 + 1)
        .collect()
}
