//! Inequality encodings of linear equations and the extended monomials used
//! to split on the assignments to a row's support.
//!
//! Two regimes: over F_2 a variable is a single 0/1 variable `x{i}`; over
//! F_p it is the indicator vector `x{i}_0 … x{i}_{p-1}`, tied together by
//! the equations `Σ_l x{i}_l = 1` (the Z axioms).

use std::collections::HashMap;

use crate::gf::{LinSystemFp, Row};
use crate::poly::{Monomial, Poly, VarId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("row has empty support")]
    EmptySupport,
    #[error("the two-element encoding needs p = 2, got {0}")]
    NotBinary(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingMode {
    F2,
    Fp,
}

impl EncodingMode {
    pub fn tag(self) -> &'static str {
        match self {
            EncodingMode::F2 => "f2",
            EncodingMode::Fp => "fp",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "f2" => Some(EncodingMode::F2),
            "fp" => Some(EncodingMode::Fp),
            _ => None,
        }
    }
}

/// 1-based variable indices of a row's support, ascending.
pub fn support_vars(row: &Row) -> Vec<u32> {
    row.support().into_iter().map(|c| c as u32 + 1).collect()
}

fn plain(i: u32) -> VarId {
    VarId::Plain(i)
}

fn ind(i: u32, l: u32) -> VarId {
    VarId::Indicator(i, l)
}

/// Subsets of `support` as bitmasks (bit k = `support[k]`), in binary order,
/// restricted to sizes `≡ parity (mod 2)`.
pub fn subsets_with_parity(len: usize, parity: u32) -> impl Iterator<Item = u64> {
    (0..1u64 << len).filter(move |m| m.count_ones() % 2 == parity % 2)
}

/// The members of `support` selected by `mask`.
pub fn mask_members(support: &[u32], mask: u64) -> Vec<u32> {
    support
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &i)| i)
        .collect()
}

/// The F_2 inequality `Σ_{i∈T}(1 − x_i) + Σ_{i∈I∖T} x_i − 1`.
pub fn f2_inequality(support: &[u32], mask: u64) -> Poly {
    let mut p = Poly::constant(Rational::from_integer(-1));
    for (k, &i) in support.iter().enumerate() {
        let term = if mask >> k & 1 == 1 {
            Poly::compl(plain(i))
        } else {
            Poly::var(plain(i))
        };
        p = p.add(&term);
    }
    p
}

/// Inequalities over F_2 equivalent to `a·x = b` on 0/1 points: one for every
/// `T ⊆ supp(a)` with `|T| ≡ 1 − b (mod 2)`, in binary order of `T`.
pub fn encode_f2(a: &[u64], b: u64) -> Result<Vec<Poly>, EncodeError> {
    let row = Row { a: a.to_vec(), b };
    let support = support_vars(&row);
    if support.is_empty() {
        return Err(EncodeError::EmptySupport);
    }
    let parity = (1 + b as u32) % 2;
    Ok(subsets_with_parity(support.len(), parity)
        .map(|mask| f2_inequality(&support, mask))
        .collect())
}

/// All vectors of `F_p^len` in mixed-radix order, first coordinate fastest.
pub fn all_vectors(len: usize, p: u64) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as usize).pow(len as u32);
    (0..total).map(move |mut k| {
        (0..len)
            .map(|_| {
                let d = (k % p as usize) as u32;
                k /= p as usize;
                d
            })
            .collect()
    })
}

/// `Σ_i a_i z_i` over the integers.
pub fn weight(coeffs: &[u64], z: &[u32]) -> u64 {
    coeffs.iter().zip(z).map(|(&a, &v)| a * u64::from(v)).sum()
}

/// The F_p inequality `Σ_{i∈I}(1 − x_i(z_i)) − 1`.
pub fn fp_inequality(support: &[u32], z: &[u32]) -> Poly {
    let mut p = Poly::constant(Rational::from_integer(-1));
    for (&i, &zi) in support.iter().zip(z) {
        p = p.add(&Poly::compl(ind(i, zi)));
    }
    p
}

/// Inequalities over F_p: one for every `z ∈ F_p^I` with `Σ a_i z_i ≢ b`.
pub fn encode_fp(a: &[u64], b: u64, p: u64) -> Result<Vec<Poly>, EncodeError> {
    let row = Row { a: a.to_vec(), b };
    let support = support_vars(&row);
    if support.is_empty() {
        return Err(EncodeError::EmptySupport);
    }
    let coeffs: Vec<u64> = support.iter().map(|&i| a[i as usize - 1] % p).collect();
    Ok(all_vectors(support.len(), p)
        .filter(|z| weight(&coeffs, z) % p != b % p)
        .map(|z| fp_inequality(&support, &z))
        .collect())
}

/// `Σ_l x_i(l)`.
pub fn indicator_sum(i: u32, p: u64) -> Poly {
    Poly::from_terms((0..p as u32).map(|l| (Monomial::var(ind(i, l)), Rational::one())))
}

/// For every `i ∈ [n]` the pair `(Σ_l x_i(l) − 1, 1 − Σ_l x_i(l))`.
pub fn z_axioms(n: usize, p: u64) -> Vec<(Poly, Poly)> {
    (1..=n as u32)
        .map(|i| {
            let s = indicator_sum(i, p).sub(&Poly::one());
            let t = s.neg();
            (s, t)
        })
        .collect()
}

/// Which assignment to a row's support an extended monomial selects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    /// `T ⊆ I` as a bitmask over the support.
    Subset(u64),
    /// `z ∈ F_p^I`.
    Vector(Vec<u32>),
}

/// `M^I_T = Π_{i∈T} x_i · Π_{i∈I∖T}(1 − x_i)` or
/// `M_z = Π_{i∈I} x_i(z_i) · Π_{l≠z_i}(1 − x_i(l))`, with the lift sequence
/// that multiplies a line by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedMonomial {
    pub support: Vec<u32>,
    pub selector: Selector,
    pub poly: Poly,
    /// Variables first, then complements.
    pub lifts: Vec<(VarId, bool)>,
}

impl ExtendedMonomial {
    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }
}

fn product_of_lifts(lifts: &[(VarId, bool)]) -> Poly {
    lifts.iter().fold(Poly::one(), |acc, &(v, c)| acc.mul_var(v, c))
}

pub fn ext_monomial_f2(support: &[u32], mask: u64) -> ExtendedMonomial {
    let mut lifts: Vec<(VarId, bool)> = mask_members(support, mask).into_iter().map(|i| (plain(i), false)).collect();
    lifts.extend(
        mask_members(support, !mask & ((1u64 << support.len()) - 1))
            .into_iter()
            .map(|i| (plain(i), true)),
    );
    ExtendedMonomial {
        support: support.to_vec(),
        selector: Selector::Subset(mask),
        poly: product_of_lifts(&lifts),
        lifts,
    }
}

pub fn ext_monomial_fp(support: &[u32], z: &[u32], p: u64) -> ExtendedMonomial {
    let mut lifts: Vec<(VarId, bool)> = support.iter().zip(z).map(|(&i, &zi)| (ind(i, zi), false)).collect();
    for (&i, &zi) in support.iter().zip(z) {
        for l in (0..p as u32).filter(|&l| l != zi) {
            lifts.push((ind(i, l), true));
        }
    }
    ExtendedMonomial {
        support: support.to_vec(),
        selector: Selector::Vector(z.to_vec()),
        poly: product_of_lifts(&lifts),
        lifts,
    }
}

/// `Π_{i∈I} x_i(z_i)`: the indicator product without complement factors.
pub fn indicator_product(support: &[u32], z: &[u32]) -> ExtendedMonomial {
    let lifts: Vec<(VarId, bool)> = support.iter().zip(z).map(|(&i, &zi)| (ind(i, zi), false)).collect();
    ExtendedMonomial {
        support: support.to_vec(),
        selector: Selector::Vector(z.to_vec()),
        poly: product_of_lifts(&lifts),
        lifts,
    }
}

/// Identifies a hypothesis by the row (or variable) and selector it encodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HypKey {
    Row { row: usize, selector: Selector },
    /// The inequality `-1 >= 0` contributed by a row `0 = b` with `b ≠ 0`.
    Contradiction { row: usize },
    /// `Σ_l x_i(l) − 1 >= 0` when `upper`, else `1 − Σ_l x_i(l) >= 0`.
    ZAxiom { var: u32, upper: bool },
}

/// The hypothesis list of a proof with a reverse index from what each
/// inequality encodes to its position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisBank {
    mode: EncodingMode,
    p: u64,
    polys: Vec<Poly>,
    index: HashMap<HypKey, usize>,
}

impl HypothesisBank {
    pub fn for_system(sys: &LinSystemFp, mode: EncodingMode) -> Result<Self, EncodeError> {
        if mode == EncodingMode::F2 && sys.p() != 2 {
            return Err(EncodeError::NotBinary(sys.p()));
        }
        let mut bank = HypothesisBank {
            mode,
            p: sys.p(),
            polys: Vec::new(),
            index: HashMap::new(),
        };
        for (j, row) in sys.rows().iter().enumerate() {
            let support = support_vars(row);
            if support.is_empty() {
                if row.b != 0 {
                    bank.push(HypKey::Contradiction { row: j }, Poly::constant(Rational::from_integer(-1)));
                }
                continue;
            }
            match mode {
                EncodingMode::F2 => {
                    let parity = (1 + row.b as u32) % 2;
                    for mask in subsets_with_parity(support.len(), parity) {
                        bank.push(
                            HypKey::Row {
                                row: j,
                                selector: Selector::Subset(mask),
                            },
                            f2_inequality(&support, mask),
                        );
                    }
                }
                EncodingMode::Fp => {
                    let coeffs: Vec<u64> = support.iter().map(|&i| row.a[i as usize - 1]).collect();
                    for z in all_vectors(support.len(), sys.p()) {
                        if weight(&coeffs, &z) % sys.p() != row.b {
                            let poly = fp_inequality(&support, &z);
                            bank.push(
                                HypKey::Row {
                                    row: j,
                                    selector: Selector::Vector(z),
                                },
                                poly,
                            );
                        }
                    }
                }
            }
        }
        if mode == EncodingMode::Fp {
            for (i, (up, down)) in z_axioms(sys.n(), sys.p()).into_iter().enumerate() {
                let var = i as u32 + 1;
                bank.push(HypKey::ZAxiom { var, upper: true }, up);
                bank.push(HypKey::ZAxiom { var, upper: false }, down);
            }
        }
        Ok(bank)
    }

    fn push(&mut self, key: HypKey, poly: Poly) {
        self.index.insert(key, self.polys.len());
        self.polys.push(poly);
    }

    pub fn mode(&self) -> EncodingMode {
        self.mode
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Poly> {
        self.polys
    }

    pub fn position(&self, key: &HypKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}
