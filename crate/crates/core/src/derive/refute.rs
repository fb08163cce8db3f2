//! Refutations of unsatisfiable linear systems from elimination certificates.
//!
//! With certificate rows `j = 1…m` and multipliers `y_j`, the level forms are
//! `L_k = (1/p)(Σ_{j≤k} y_j·a_j·X + Σ_{j>k} y_j·b_j)`. `L_m` has integer
//! coefficients and no constant, so the gap inequalities `D_c(L_m) ≥ 0` have
//! direct proofs. Walking down, `D_c(L_{k−1}) ≥ 0` is assembled from the
//! pieces `D_c(L_{k−1})·M ≥ 0`, one per assignment `M` to row `k`'s support
//! that satisfies the row, plus one piece covering every other assignment.
//! At level 0 the form is the constant `q + 1/p` and `D_{q+1}(L_0)` is the
//! negative constant `(1 − p)/p²`.

use std::collections::{BTreeSet, HashMap};

use super::lemmas::weight_form;
use super::{DeriveError, Deriver, EqProof, LinearForm};
use crate::encoder::{
    all_vectors, ext_monomial_f2, ext_monomial_fp, f2_inequality, fp_inequality, indicator_product, support_vars, weight, EncodeError,
    EncodingMode, ExtendedMonomial, HypKey, HypothesisBank, Selector,
};
use crate::gf::{Certificate, LinSystemFp};
use crate::kernel::{LineId, Proof};
use crate::poly::{Poly, VarId};
use crate::rational::Rational;

/// How the assignments to an indicator-encoded support are split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Basis {
    /// `Π_i x_i(z_i)`: degree `|I|`, with `x_i(a)·x_i(b) = 0` doing the work
    /// of the complement factors.
    #[default]
    Product,
    /// `Π_i x_i(z_i)·Π_{l≠z_i}(1 − x_i(l))`: degree `|I|·p`, and
    /// `2^{|I|(p−1)}` terms each.
    Extended,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Product => "product",
            Basis::Extended => "extended",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "product" => Some(Basis::Product),
            "extended" => Some(Basis::Extended),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RefuteOptions {
    pub basis: Basis,
}

/// `L_k` as a linear form over the proof variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelForm {
    pub k: usize,
    pub form: LinearForm,
}

/// Thresholds `c` for which `D_c(L_k) ≥ 0` gets derived, per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdPlan {
    pub levels: Vec<Vec<Rational>>,
    /// Upper end of the admissible range `0..=bound` at each level.
    pub bounds: Vec<u64>,
}

impl ThresholdPlan {
    pub fn within_bounds(&self) -> bool {
        self.levels.iter().zip(&self.bounds).all(|(cs, &b)| {
            let b = Rational::from_integer(b as i64);
            cs.iter().all(|c| !c.is_negative() && c <= &b)
        })
    }
}

/// One certificate row with a nonempty support.
#[derive(Clone, Debug)]
struct Step {
    row: usize,
    support: Vec<u32>,
    coeffs: Vec<u64>,
    b: u64,
    y: u64,
}

/// Certificate rows in order, multipliers reduced mod p; zero rows dropped.
fn steps(sys: &LinSystemFp, cert: &Certificate) -> Vec<Step> {
    let p = sys.p();
    cert.rows
        .iter()
        .zip(&cert.multipliers)
        .filter_map(|(&j, &y)| {
            let row = &sys.rows()[j];
            let support = support_vars(row);
            if support.is_empty() {
                return None;
            }
            let coeffs = support.iter().map(|&i| row.a[i as usize - 1]).collect();
            Some(Step {
                row: j,
                support,
                coeffs,
                b: row.b,
                y: y % p,
            })
        })
        .collect()
}

fn plain_or_indicator(mode: EncodingMode, p: u64) -> Option<u64> {
    match mode {
        EncodingMode::F2 => None,
        EncodingMode::Fp => Some(p),
    }
}

fn forms_for(steps: &[Step], mode: EncodingMode, p: u64) -> Vec<LevelForm> {
    let pr = Rational::from_integer(p as i64);
    let m = steps.len();
    (0..=m)
        .map(|k| {
            let mut form = LinearForm::default();
            for s in &steps[..k] {
                let w = weight_form(&s.support, &s.coeffs, plain_or_indicator(mode, p));
                let scale = Rational::from_integer(s.y as i64) / &pr;
                for (mono, c) in w.terms() {
                    let v = mono.vars().next().expect("linear term");
                    form.add_var(v, &(c * &scale));
                }
            }
            let tail: u64 = steps[k..].iter().map(|s| s.y * s.b).sum();
            form.constant = Rational::from_integer(tail as i64) / &pr;
            LevelForm { k, form }
        })
        .collect()
}

/// The level forms `L_0 … L_m` of a valid certificate.
pub fn level_forms(sys: &LinSystemFp, cert: &Certificate, mode: EncodingMode) -> Result<Vec<LevelForm>, DeriveError> {
    if !cert.is_valid_for(sys) {
        return Err(DeriveError::InvalidCertificate);
    }
    Ok(forms_for(&steps(sys, cert), mode, sys.p()))
}

/// An assignment to a step's support with the monomial selecting it.
struct Choice {
    selector: Selector,
    t: u64,
    good: bool,
    mono: ExtendedMonomial,
}

fn choices(step: &Step, mode: EncodingMode, p: u64, basis: Basis) -> Vec<Choice> {
    match mode {
        EncodingMode::F2 => (0..1u64 << step.support.len())
            .map(|mask| {
                let t = u64::from(mask.count_ones());
                Choice {
                    selector: Selector::Subset(mask),
                    t,
                    good: t % 2 == step.b,
                    mono: ext_monomial_f2(&step.support, mask),
                }
            })
            .collect(),
        EncodingMode::Fp => all_vectors(step.support.len(), p)
            .map(|z| {
                let t = weight(&step.coeffs, &z);
                let mono = match basis {
                    Basis::Product => indicator_product(&step.support, &z),
                    Basis::Extended => ext_monomial_fp(&step.support, &z, p),
                };
                Choice {
                    selector: Selector::Vector(z),
                    t,
                    good: t % p == step.b,
                    mono,
                }
            })
            .collect(),
    }
}

fn good_weights(step: &Step, mode: EncodingMode, p: u64) -> BTreeSet<u64> {
    match mode {
        EncodingMode::F2 => (0..=step.support.len() as u64).filter(|t| t % 2 == step.b).collect(),
        EncodingMode::Fp => all_vectors(step.support.len(), p)
            .map(|z| weight(&step.coeffs, &z))
            .filter(|t| t % p == step.b)
            .collect(),
    }
}

fn next_threshold(c: &Rational, t: u64, step: &Step, p: u64) -> Rational {
    let shift = Rational::new((t - step.b) as i64 * step.y as i64, p as i64);
    c + &shift
}

fn plan_for(steps: &[Step], mode: EncodingMode, p: u64, n: usize, q: i64) -> ThresholdPlan {
    let mut levels = vec![vec![Rational::from_integer(q + 1)]];
    for s in steps {
        let ts = good_weights(s, mode, p);
        let next: BTreeSet<Rational> = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|c| ts.iter().map(move |&t| next_threshold(c, t, s, p)))
            .collect();
        levels.push(next.into_iter().collect());
    }
    let unit = match mode {
        EncodingMode::F2 => n as u64,
        EncodingMode::Fp => p * p * n as u64,
    };
    let bounds = (0..levels.len() as u64).map(|k| (k + 1) * unit).collect();
    ThresholdPlan { levels, bounds }
}

/// The threshold plan of a valid certificate.
pub fn threshold_plan(sys: &LinSystemFp, cert: &Certificate, mode: EncodingMode) -> Result<ThresholdPlan, DeriveError> {
    if !cert.is_valid_for(sys) {
        return Err(DeriveError::InvalidCertificate);
    }
    let st = steps(sys, cert);
    let q = endgame_q(&st, sys.p());
    Ok(plan_for(&st, mode, sys.p(), sys.n(), q))
}

/// `q` with `Σ y_j b_j = p·q + 1`.
fn endgame_q(steps: &[Step], p: u64) -> i64 {
    let s: u64 = steps.iter().map(|s| s.y * s.b).sum();
    debug_assert_eq!(s % p, 1 % p);
    (s as i64 - 1) / p as i64
}

/// Refutes `sys` in the F_2 encoding.
pub fn refute_f2(sys: &LinSystemFp, cert: &Certificate) -> Result<Proof, DeriveError> {
    refute(sys, cert, EncodingMode::F2, RefuteOptions::default())
}

/// Refutes `sys` in the indicator encoding.
pub fn refute_fp(sys: &LinSystemFp, cert: &Certificate, options: RefuteOptions) -> Result<Proof, DeriveError> {
    refute(sys, cert, EncodingMode::Fp, options)
}

pub fn refute(
    sys: &LinSystemFp,
    cert: &Certificate,
    mode: EncodingMode,
    options: RefuteOptions,
) -> Result<Proof, DeriveError> {
    let p = sys.p();
    if mode == EncodingMode::F2 && p != 2 {
        return Err(EncodeError::NotBinary(p).into());
    }
    if !cert.is_valid_for(sys) {
        return Err(DeriveError::InvalidCertificate);
    }
    let mut cert = cert.clone();
    for y in cert.multipliers.iter_mut() {
        *y %= p;
    }
    let bank = HypothesisBank::for_system(sys, mode)?;
    let mut d = Deriver::new(bank);

    // A row `0 = b` with `b ≠ 0` is itself the contradiction `-1 >= 0`.
    for &j in &cert.rows {
        if let Some(line) = d.hypothesis_by_key(&HypKey::Contradiction { row: j }) {
            debug_assert_eq!(d.poly(line), &Poly::constant(Rational::from_integer(-1)));
            return Ok(d.finish());
        }
    }

    let st = steps(sys, &cert);
    let forms = forms_for(&st, mode, p);
    let q = endgame_q(&st, p);
    let plan = plan_for(&st, mode, p, sys.n(), q);
    for (k, (cs, &bound)) in plan.levels.iter().zip(&plan.bounds).enumerate() {
        let b = Rational::from_integer(bound as i64);
        if let Some(c) = cs.iter().find(|c| c.is_negative() || *c > &b) {
            return Err(DeriveError::PlanOutOfRange {
                level: k,
                threshold: c.clone(),
                bound,
            });
        }
    }

    let m = st.len();
    let top = &forms[m].form;
    if !top.is_integral() || !top.constant.is_zero() {
        return Err(DeriveError::InvalidCertificate);
    }
    let top_lines = d.prove_gaps(top, &plan.levels[m])?;
    let mut lines: HashMap<Rational, LineId> = plan.levels[m].iter().cloned().zip(top_lines).collect();
    for k in (1..=m).rev() {
        lines = step_down(
            &mut d,
            &st[k - 1],
            &forms[k].form,
            &forms[k - 1].form,
            &plan.levels[k - 1],
            &lines,
            k - 1,
            mode,
            options.basis,
        )?;
    }

    let last = lines[&Rational::from_integer(q + 1)];
    let pr = Rational::from_integer(p as i64);
    let expected = (Rational::one() - &pr) / (&pr * &pr);
    if d.poly(last).as_constant() != Some(expected.clone()) {
        return Err(DeriveError::Inconsistent {
            level: 0,
            threshold: Rational::from_integer(q + 1),
        });
    }
    d.scaled(last, Rational::from_integer(-1) / expected);
    Ok(d.finish())
}

/// Derives `D_c(L_{k−1}) ≥ 0` for every planned `c` from the lines
/// `D_d(L_k) ≥ 0`.
///
/// For a satisfying assignment with weight `t` and `M` its monomial, write
/// `A = (a·X − t)·M`, `u = y/p` and `d = c + (t − b)·u`. Then exactly
/// `D_c(L_{k−1})·M = D_d(L_k)·M − 2u·L_k·A + (u(2d − 1) − u²t)·A + u²·(a·X)·A`.
/// The remaining assignments are covered by `Q = 1 − Σ_good M = 0` through
/// `D_c(L)·Q = L²Q + (1 − 2c)·LQ + c(c − 1)·Q`.
#[allow(clippy::too_many_arguments)]
fn step_down(
    d: &mut Deriver,
    step: &Step,
    upper: &LinearForm,
    lower: &LinearForm,
    thresholds: &[Rational],
    upper_lines: &HashMap<Rational, LineId>,
    level: usize,
    mode: EncodingMode,
    basis: Basis,
) -> Result<HashMap<Rational, LineId>, DeriveError> {
    let p = d.bank().p();
    let u = Rational::new(step.y as i64, p as i64);
    let u2 = &u * &u;
    let w = weight_form(&step.support, &step.coeffs, plain_or_indicator(mode, p));
    let lk = upper.to_poly();
    let lprev = lower.to_poly();

    struct Good {
        t: u64,
        lifts: Vec<(VarId, bool)>,
        a: EqProof,
        la_neg: LineId,
        wa_pos: LineId,
    }
    let mut goods = Vec::new();
    let mut q_parts: Vec<(EqProof, Rational)> = Vec::new();
    for ch in choices(step, mode, p, basis) {
        if ch.good {
            let a = d.prove_weight_identity(&ch.mono, &w, ch.t)?;
            let la_neg = d.prove_mult_side(a, &lk, true)?;
            let wa_pos = d.prove_mult_side(a, &w, false)?;
            goods.push(Good {
                t: ch.t,
                lifts: ch.mono.lifts,
                a,
                la_neg,
                wa_pos,
            });
        } else {
            let key = HypKey::Row {
                row: step.row,
                selector: ch.selector,
            };
            let hyp = d.hypothesis_by_key(&key).ok_or_else(|| {
                DeriveError::MissingHypothesis(match &key {
                    HypKey::Row {
                        selector: Selector::Subset(mask),
                        ..
                    } => f2_inequality(&step.support, *mask),
                    HypKey::Row {
                        selector: Selector::Vector(z),
                        ..
                    } => fp_inequality(&step.support, z),
                    _ => Poly::zero(),
                })
            })?;
            let k = step.support.len();
            let kill = match (mode, basis) {
                (EncodingMode::Fp, Basis::Extended) => d.kill_monomial(hyp, &ch.mono.lifts[..k], &ch.mono.lifts[k..])?,
                _ => d.kill_monomial(hyp, &ch.mono.lifts, &[])?,
            };
            q_parts.push((kill, Rational::one()));
        }
    }
    if mode == EncodingMode::Fp {
        let unity = match basis {
            Basis::Product => d.prove_partition_unity_product(&step.support)?,
            Basis::Extended => d.prove_partition_unity_fp(&step.support)?,
        };
        q_parts.push((unity, Rational::from_integer(-1)));
    }
    let rest = if q_parts.is_empty() {
        None
    } else {
        let q = d.combine_eqs(&q_parts)?;
        let lq = d.prove_eq_mult(q, &lprev)?;
        let llq = d.prove_mult_side(lq, &lprev, false)?;
        Some((q, lq, llq))
    };

    let one = Rational::one();
    let two = Rational::from_integer(2);
    let mut out = HashMap::with_capacity(thresholds.len());
    for c in thresholds {
        let mut items: Vec<(LineId, Rational)> = Vec::new();
        for g in &goods {
            let dd = next_threshold(c, g.t, step, p);
            let base = *upper_lines.get(&dd).ok_or_else(|| DeriveError::Inconsistent {
                level: level + 1,
                threshold: dd.clone(),
            })?;
            let lifted = d.lift_all(base, &g.lifts);
            let alpha = &u * &(&two * &dd - &one) - &u2 * &Rational::from_integer(g.t as i64);
            items.push((lifted, one.clone()));
            items.push((g.la_neg, &two * &u));
            items.push((g.wa_pos, u2.clone()));
            items.push((g.a.side(alpha.is_negative()), alpha.abs()));
        }
        if let Some((q, lq, llq)) = rest {
            let lin = &one - &(&two * c);
            let cst = c * &(c - &one);
            items.push((llq, one.clone()));
            items.push((lq.side(lin.is_negative()), lin.abs()));
            items.push((q.side(cst.is_negative()), cst.abs()));
        }
        let line = d.sum_weighted(&items)?;
        if d.poly(line) != &lower.gap_poly(c) {
            return Err(DeriveError::Inconsistent {
                level,
                threshold: c.clone(),
            });
        }
        out.insert(c.clone(), line);
    }
    Ok(out)
}
