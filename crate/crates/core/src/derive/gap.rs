//! Gap inequalities `(L − c)(L − c + 1) ≥ 0` for integer-valued linear forms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{DeriveError, Deriver};
use crate::kernel::{AxiomKind, LineId};
use crate::poly::{Monomial, Poly, VarId};
use crate::rational::Rational;

/// `Σ coeffs[v]·v + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub coeffs: BTreeMap<VarId, Rational>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn constant(c: Rational) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn add_var(&mut self, v: VarId, c: &Rational) {
        let e = self.coeffs.entry(v).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            p.add_term(Monomial::var(*v), c);
        }
        p
    }

    pub fn is_integral(&self) -> bool {
        self.constant.is_integer() && self.coeffs.values().all(Rational::is_integer)
    }

    /// `D_c(L) = (L − c)(L − c + 1)`.
    pub fn gap_poly(&self, c: &Rational) -> Poly {
        let shifted = self.to_poly().sub(&Poly::constant(c.clone()));
        shifted.mul(&shifted.add(&Poly::one()))
    }
}

/// The claim `D_c(L) ≥ 0` with its expanded polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapStatement {
    pub form: LinearForm,
    pub c: Rational,
    pub poly: Poly,
}

impl GapStatement {
    pub fn new(form: LinearForm, c: Rational) -> Self {
        let poly = form.gap_poly(&c);
        GapStatement { form, c, poly }
    }
}

impl Deriver {
    /// `D_c(L) ≥ 0` for an integer form `L` and integer `c`.
    pub fn prove_gap(&mut self, form: &LinearForm, c: &Rational) -> Result<LineId, DeriveError> {
        Ok(self.prove_gaps(form, std::slice::from_ref(c))?.remove(0))
    }

    /// `D_c(L) ≥ 0` for every `c` in `cs`, sharing all intermediate lines.
    ///
    /// With `L_j` the prefix of `L` over its first `j` variables, the lines
    /// come from `D_c(L_0) = c(c − 1)` and
    /// `D_c(L_j) = x·D_{c−a}(L_{j−1}) + (1 − x)·D_c(L_{j−1}) + a²(x² − x)`.
    pub fn prove_gaps(&mut self, form: &LinearForm, cs: &[Rational]) -> Result<Vec<LineId>, DeriveError> {
        if !form.is_integral() || !cs.iter().all(Rational::is_integer) {
            return Err(DeriveError::NonIntegerInput);
        }
        let int = |r: &Rational| r.to_i64().ok_or(DeriveError::NonIntegerInput);
        let shift = int(&form.constant)?;
        let vars: Vec<(VarId, i64)> = form
            .coeffs
            .iter()
            .map(|(v, c)| Ok((*v, int(c)?)))
            .collect::<Result<_, DeriveError>>()?;
        let top: Vec<i64> = cs.iter().map(|c| Ok(int(c)? - shift)).collect::<Result<_, DeriveError>>()?;

        // Thresholds needed at every prefix length, top down.
        let m = vars.len();
        let mut need: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); m + 1];
        need[m].extend(top.iter().copied());
        for j in (1..=m).rev() {
            let a = vars[j - 1].1;
            let next: BTreeSet<i64> = need[j].iter().flat_map(|&c| [c, c - a]).collect();
            need[j - 1] = next;
        }

        let mut consts: HashMap<i64, LineId> = HashMap::new();
        let mut prev: HashMap<i64, LineId> = HashMap::new();
        for &c in &need[0] {
            let k = c * (c - 1);
            let line = match consts.get(&k) {
                Some(&l) => l,
                None => {
                    let l = self.prove_const_nonneg(&Rational::from_integer(k))?;
                    consts.insert(k, l);
                    l
                }
            };
            prev.insert(c, line);
        }
        for j in 1..=m {
            let (x, a) = vars[j - 1];
            let bool_line = self.axiom(AxiomKind::BoolUp, x);
            let mut cur = HashMap::new();
            for &c in &need[j] {
                let up = self.lift(prev[&(c - a)], x, false);
                let down = self.lift(prev[&c], x, true);
                let both = self.lin_comb(up, Rational::one(), down, Rational::one());
                let line = self.lin_comb(both, Rational::one(), bool_line, Rational::from_integer(a * a));
                cur.insert(c, line);
            }
            prev = cur;
        }
        Ok(top.iter().map(|c| prev[c]).collect())
    }
}
