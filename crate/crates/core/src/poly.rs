//! Canonical sparse multivariate polynomials with exact rational coefficients.
//!
//! Every proof line asserts `poly >= 0` for one of these. Two polynomials are
//! equal exactly when their term maps are equal, so the checker can compare
//! recomputed and recorded lines structurally.
//!
//! The text form is canonical: terms ordered by total degree (descending) and
//! then by monomial name (ascending), factors inside a monomial ordered by
//! variable name, e.g. `x1^2*x2 - 1/2*x1 + 3`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::rational::Rational;

/// A proof variable. `Plain(i)` is the 0/1 variable `x{i}` of the two-element
/// field encoding; `Indicator(i, l)` is `x{i}_{l}`, the indicator that the
/// F_p variable `i` takes value `l`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    Plain(u32),
    Indicator(u32, u32),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Flavor {
    Plain,
    Indicator,
}

impl VarId {
    pub fn flavor(self) -> Flavor {
        match self {
            VarId::Plain(_) => Flavor::Plain,
            VarId::Indicator(..) => Flavor::Indicator,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            VarId::Plain(i) | VarId::Indicator(i, _) => i,
        }
    }

    pub fn name(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Plain(i) => write!(f, "x{i}"),
            VarId::Indicator(i, l) => write!(f, "x{i}_{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("assignment does not cover variable {0}")]
    MissingVariable(VarId),
}

fn parse_err(text: &str, reason: impl Into<String>) -> PolyError {
    PolyError::Parse {
        text: text.to_string(),
        reason: reason.into(),
    }
}

fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for VarId {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix('x')
            .ok_or_else(|| parse_err(s, "variable must start with 'x'"))?;
        let bad = || parse_err(s, "malformed variable name");
        match body.split_once('_') {
            None => {
                let i = parse_index(body).ok_or_else(bad)?;
                if i == 0 {
                    return Err(bad());
                }
                Ok(VarId::Plain(i))
            }
            Some((i, l)) => {
                let i = parse_index(i).ok_or_else(bad)?;
                let l = parse_index(l).ok_or_else(bad)?;
                if i == 0 {
                    return Err(bad());
                }
                Ok(VarId::Indicator(i, l))
            }
        }
    }
}

/// Product of variables with positive exponents. Factors are kept sorted by
/// `VarId` and duplicate-free; the empty product is the constant monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        let mut f = SmallVec::new();
        f.push((v, 1));
        Monomial(f)
    }

    /// Builds a monomial from arbitrary factors, merging repeats and dropping
    /// zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            for _ in 0..e {
                m = m.times_var(v);
            }
        }
        m
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn times_var(&self, v: VarId) -> Monomial {
        let mut f = self.0.clone();
        match f.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => f[i].1 += 1,
            Err(i) => f.insert(i, (v, 1)),
        }
        Monomial(f)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes one power of `v`. Returns `None` if `v` does not divide.
    pub fn without_one(&self, v: VarId) -> Option<Monomial> {
        let i = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let mut f = self.0.clone();
        if f[i].1 == 1 {
            f.remove(i);
        } else {
            f[i].1 -= 1;
        }
        Some(Monomial(f))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    /// The variables with multiplicity, in factor order.
    pub fn var_sequence(&self) -> Vec<VarId> {
        self.0
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
            .collect()
    }

    /// Canonical text, factors sorted by variable name. Empty for the
    /// constant monomial.
    pub fn name(&self) -> String {
        let mut parts: Vec<(String, u32)> = self.0.iter().map(|&(v, e)| (v.to_string(), e)).collect();
        parts.sort();
        let mut s = String::new();
        for (k, (name, e)) in parts.into_iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&name);
            if e > 1 {
                s.push('^');
                s.push_str(&e.to_string());
            }
        }
        s
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            f.write_str(&self.name())
        }
    }
}

impl FromStr for Monomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = Monomial::one();
        let mut seen = Vec::new();
        for factor in s.split('*') {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e = parse_index(e).filter(|&e| e >= 2).ok_or_else(|| parse_err(s, "bad exponent"))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            let v: VarId = name.parse()?;
            if seen.contains(&v) {
                return Err(parse_err(s, "repeated variable in monomial"));
            }
            seen.push(v);
            m = m.times(&Monomial::from_factors([(v, e)]));
        }
        Ok(m)
    }
}

/// Sparse polynomial `Σ coeff · monomial` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        Poly::monomial(Monomial::var(v), Rational::one())
    }

    /// `1 - v`.
    pub fn compl(v: VarId) -> Self {
        Poly::one().sub(&Poly::var(v))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant value, if the polynomial has no non-constant term.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: &Rational, other: &Poly, b: &Rational) -> Poly {
        let mut out = self.scale(a);
        if !b.is_zero() {
            for (m, c) in &other.terms {
                out.add_term(m.clone(), &(c * b));
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.times(m), c.clone())).collect(),
        }
    }

    /// `self · v`, or `self · (1 - v)` when `complemented`.
    pub fn mul_var(&self, v: VarId, complemented: bool) -> Poly {
        let lifted = Poly {
            terms: self.terms.iter().map(|(m, c)| (m.times_var(v), c.clone())).collect(),
        };
        if complemented {
            self.sub(&lifted)
        } else {
            lifted
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Maximum total degree of a term; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Sum of the total degrees of the monomials; constants contribute 0.
    pub fn size(&self) -> u64 {
        self.terms.keys().map(|m| u64::from(m.degree())).sum()
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(Rational::bits).max().unwrap_or(0)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn eval(&self, assignment: &HashMap<VarId, Rational>) -> Result<Rational, PolyError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for &(v, e) in m.factors() {
                let x = assignment.get(&v).ok_or(PolyError::MissingVariable(v))?;
                for _ in 0..e {
                    val = &val * x;
                }
            }
            total += &val;
        }
        Ok(total)
    }

    /// Evaluates at a 0/1 point given as a predicate.
    pub fn eval_boolean(&self, point: impl Fn(VarId) -> Option<bool>) -> Result<Rational, PolyError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut on = true;
            for v in m.vars() {
                if !point(v).ok_or(PolyError::MissingVariable(v))? {
                    on = false;
                }
            }
            if on {
                total += c;
            }
        }
        Ok(total)
    }

    /// Splits `self = reduced + Σ_v cofactors[v]·(v² − v)` with `reduced`
    /// multilinear, by repeatedly replacing `v^e` (e ≥ 2) with `v^(e−1)`.
    pub fn multilinear_cofactors(&self) -> (Poly, BTreeMap<VarId, Poly>) {
        let mut reduced = Poly::zero();
        let mut cofactors: BTreeMap<VarId, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            while let Some(&(v, _)) = m.factors().iter().find(|&&(_, e)| e >= 2) {
                let lower = m.without_one(v).expect("divides");
                let quotient = lower.without_one(v).expect("divides");
                cofactors.entry(v).or_default().add_term(quotient, c);
                m = lower;
            }
            reduced.add_term(m, c);
        }
        cofactors.retain(|_, p| !p.is_zero());
        (reduced, cofactors)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.factors().iter().all(|&(_, e)| e == 1))
    }

    /// Flavors of the variables that occur.
    pub fn flavors(&self) -> (bool, bool) {
        let mut plain = false;
        let mut ind = false;
        for m in self.terms.keys() {
            for v in m.vars() {
                match v.flavor() {
                    Flavor::Plain => plain = true,
                    Flavor::Indicator => ind = true,
                }
            }
        }
        (plain, ind)
    }

    /// Terms in canonical text order.
    fn sorted_terms(&self) -> Vec<(String, u32, &Rational)> {
        let mut v: Vec<(String, u32, &Rational)> =
            self.terms.iter().map(|(m, c)| (m.name(), m.degree(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (name, _, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if name.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&name)?;
            } else {
                write!(f, "{a}*{name}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut tokens = s.split(' ');
        let mut out = Poly::zero();
        let mut seen = std::collections::BTreeSet::new();
        let mut negative = false;
        let mut first = true;
        loop {
            let tok = match tokens.next() {
                Some(t) => t,
                None if first => return Err(parse_err(s, "empty")),
                None => break,
            };
            let mut term = tok;
            if first {
                if let Some(rest) = tok.strip_prefix('-') {
                    negative = true;
                    term = rest;
                }
            }
            let (coeff, mono) = parse_term(s, term)?;
            if !seen.insert(mono.clone()) {
                return Err(parse_err(s, "repeated monomial"));
            }
            let coeff = if negative { -coeff } else { coeff };
            out.add_term(mono, &coeff);
            first = false;
            match tokens.next() {
                None => break,
                Some("+") => negative = false,
                Some("-") => negative = true,
                Some(_) => return Err(parse_err(s, "expected ' + ' or ' - ' between terms")),
            }
            if tokens.clone().next().is_none() {
                return Err(parse_err(s, "dangling operator"));
            }
        }
        Ok(out)
    }
}

fn parse_term(text: &str, term: &str) -> Result<(Rational, Monomial), PolyError> {
    if term.is_empty() {
        return Err(parse_err(text, "empty term"));
    }
    if term.starts_with('x') {
        return Ok((Rational::one(), term.parse()?));
    }
    let (c, m) = match term.split_once('*') {
        Some((c, m)) => (c, Some(m)),
        None => (term, None),
    };
    if c.starts_with('-') {
        return Err(parse_err(text, "sign inside term"));
    }
    let coeff: Rational = c.parse().map_err(|_| parse_err(text, format!("bad coefficient {c:?}")))?;
    if coeff.is_zero() {
        return Err(parse_err(text, "zero coefficient"));
    }
    match m {
        None => Ok((coeff, Monomial::one())),
        Some(m) => {
            if coeff.is_one() {
                return Err(parse_err(text, "explicit unit coefficient"));
            }
            Ok((coeff, m.parse()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Poly {
        Poly::var(VarId::Plain(i))
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(x(1).add(&Poly::compl(VarId::Plain(1))), Poly::one());
        let a = p("x1^2 - x1");
        assert_eq!(a.add(&a.neg()), Poly::zero());
        assert_eq!(x(1).scale(&r(2, 3)).add(&x(1).scale(&r(1, 3))), x(1));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(Poly::constant(r(-1, 4)).scale(&r(4, 1)), Poly::constant(r(-1, 1)));
        assert_eq!(x(1).add(&x(2)).scale(&Rational::zero()), Poly::zero());
        assert_eq!(Poly::constant(r(-2, 9)).scale(&r(9, 2)), Poly::constant(r(-1, 1)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(x(1).sub(&Poly::one()).mul(&x(1)), p("x1^2 - x1"));
        let l = x(1).add(&x(2));
        assert_eq!(l.sub(&Poly::one()).mul(&l), p("x1^2 + 2*x1*x2 + x2^2 - x1 - x2"));
        assert_eq!(x(1).mul(&Poly::compl(VarId::Plain(2))), p("-x1*x2 + x1"));
    }

    #[test]
    fn mul_var_examples() {
        let v1 = VarId::Plain(1);
        assert_eq!(Poly::one().mul_var(v1, false), x(1));
        assert_eq!(Poly::compl(v1).mul_var(v1, false), p("-x1^2 + x1"));
        assert_eq!(x(1).mul_var(VarId::Plain(2), true), p("-x1*x2 + x1"));
    }

    #[test]
    fn degree_and_size() {
        assert_eq!(p("x1^2*x2 + 3").size(), 3);
        let l = x(1).add(&x(2));
        let c = Rational::from_integer(1);
        let lc = l.sub(&Poly::constant(c.clone()));
        let d = lc.mul(&lc.add(&Poly::one()));
        assert_eq!(d.degree(), 2);
        assert_eq!(Poly::zero().size(), 0);
        assert_eq!(Poly::zero().degree(), 0);
    }

    #[test]
    fn eval_examples() {
        let mut a = HashMap::new();
        a.insert(VarId::Plain(1), Rational::one());
        a.insert(VarId::Plain(2), Rational::zero());
        assert_eq!(p("x1 + x2 - 1").eval(&a).unwrap(), Rational::zero());
        a.insert(VarId::Plain(2), Rational::one());
        let l = x(1).add(&x(2));
        let d = l.sub(&Poly::one()).mul(&l);
        assert_eq!(d.eval(&a).unwrap(), r(2, 1));
        assert_eq!(Poly::constant(r(3, 2)).eval(&HashMap::new()).unwrap(), r(3, 2));
        assert!(matches!(x(3).eval(&a), Err(PolyError::MissingVariable(VarId::Plain(3)))));
    }

    #[test]
    fn multilinear_cofactor_examples() {
        let v = VarId::Plain(1);
        let (red, cof) = p("x1^2 - x1").multilinear_cofactors();
        assert_eq!(red, Poly::zero());
        assert_eq!(cof[&v], Poly::one());
        let (red, cof) = p("x1^3").multilinear_cofactors();
        assert_eq!(red, x(1));
        assert_eq!(cof[&v], p("x1 + 1"));
        let (red, cof) = p("x1*x2").multilinear_cofactors();
        assert_eq!(red, p("x1*x2"));
        assert!(cof.is_empty());
    }

    #[test]
    fn text_form() {
        let cases = [
            "0",
            "1",
            "-1",
            "-1/4",
            "x1",
            "-x1^2 + x1",
            "x3_2^2*x5_0 - 2/3*x1_0 + 7",
            "x1*x10 + x1*x2 - x10",
        ];
        for s in cases {
            assert_eq!(p(s).to_string(), s);
        }
        // name-lex: "x10" sorts before "x2"
        assert_eq!(x(2).add(&x(10)).to_string(), "x10 + x2");
    }

    #[test]
    fn text_form_rejects_garbage() {
        for s in ["", "x0", "1*x1", "0*x1", "x1 +", "x1 + x1", "x1  + x2", "- x1", "x1^1", "2/4*x1", "x1*x1"] {
            assert!(s.parse::<Poly>().is_err(), "{s}");
        }
    }
}
