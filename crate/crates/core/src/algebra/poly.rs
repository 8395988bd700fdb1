use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::field::{Parity, Signature};
use super::jet::JetVariable;
use crate::Q;

/// Result of a homogeneity query. The zero polynomial is homogeneous of every
/// degree and reports `Any`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity<T> {
    Any,
    Pure(T),
    Mixed,
}

impl<T: PartialEq + Copy> Homogeneity<T> {
    fn push(self, value: T) -> Self {
        match self {
            Homogeneity::Any => Homogeneity::Pure(value),
            Homogeneity::Pure(v) if v == value => self,
            _ => Homogeneity::Mixed,
        }
    }

    /// True if compatible with `value` (zero is compatible with everything).
    pub fn admits(self, value: T) -> bool {
        match self {
            Homogeneity::Any => true,
            Homogeneity::Pure(v) => v == value,
            Homogeneity::Mixed => false,
        }
    }

    pub fn pure(self) -> Option<T> {
        match self {
            Homogeneity::Pure(v) => Some(v),
            _ => None,
        }
    }
}

/// A raw factor handed to [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Var(JetVariable),
    /// Explicit base coordinate `x^λ`.
    Coord(u8),
}

/// Coefficient-free product of jet variables and base coordinates in
/// canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    vars: SmallVec<[(JetVariable, u32); 4]>,
    base: SmallVec<[(u8, u32); 2]>,
}

impl Term {
    pub fn one() -> Self {
        Term::default()
    }

    pub fn var(v: JetVariable) -> Self {
        let mut t = Term::default();
        t.vars.push((v, 1));
        t
    }

    pub fn coord(lambda: u8, power: u32) -> Self {
        let mut t = Term::default();
        if power > 0 {
            t.base.push((lambda, power));
        }
        t
    }

    pub fn vars(&self) -> &[(JetVariable, u32)] {
        &self.vars
    }

    pub fn base(&self) -> &[(u8, u32)] {
        &self.base
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.base.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.vars.iter().filter(|(v, _)| v.odd).count() % 2 == 1)
    }

    pub fn antifield_number(&self) -> u32 {
        self.vars.iter().map(|(v, e)| v.antifield_number * e).sum()
    }

    /// Total degree in the base coordinates and the antifield-number-zero
    /// variables.
    pub fn coefficient_degree(&self) -> u32 {
        let b: u32 = self.base.iter().map(|(_, p)| p).sum();
        let v: u32 = self
            .vars
            .iter()
            .filter(|(v, _)| v.antifield_number == 0)
            .map(|(_, e)| e)
            .sum();
        b + v
    }

    /// Total degree counting every jet variable and base coordinate.
    pub fn degree(&self) -> u32 {
        self.base.iter().map(|(_, p)| p).sum::<u32>() + self.var_degree()
    }

    /// Number of jet-variable factors counted with multiplicity.
    pub fn var_degree(&self) -> u32 {
        self.vars.iter().map(|(_, e)| e).sum()
    }

    pub fn max_jet_order(&self) -> usize {
        self.vars.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn contains(&self, v: &JetVariable) -> bool {
        self.vars.binary_search_by(|(w, _)| w.cmp(v)).is_ok()
    }

    /// Canonical product. Returns `None` if an odd variable repeats, otherwise
    /// the product and whether the Koszul sign is negative.
    pub fn mul(&self, other: &Term) -> Option<(Term, bool)> {
        let a = &self.vars;
        let b = &other.vars;
        // odd_after[i] = number of odd variables in a[i..]
        let mut odd_after = vec![0usize; a.len() + 1];
        for i in (0..a.len()).rev() {
            odd_after[i] = odd_after[i + 1] + a[i].0.odd as usize;
        }
        let mut vars = SmallVec::with_capacity(a.len() + b.len());
        let mut inversions = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    vars.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if b[j].0.odd {
                        inversions += odd_after[i];
                    }
                    vars.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a[i].0.odd {
                        return None;
                    }
                    vars.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend(a[i..].iter().cloned());
        vars.extend(b[j..].iter().cloned());
        Some((
            Term {
                vars,
                base: merge_base(&self.base, &other.base),
            },
            inversions % 2 == 1,
        ))
    }

    /// Graded left derivative with respect to `v`: the factor is moved to the
    /// front and deleted. Returns the remaining term and the integer factor
    /// (exponent times Koszul sign).
    pub fn left_partial(&self, v: &JetVariable) -> Option<(Term, i64)> {
        let pos = self.vars.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.vars[pos].1;
        let factor = if v.odd {
            let before = self.vars[..pos].iter().filter(|(w, _)| w.odd).count();
            if before % 2 == 1 {
                -1
            } else {
                1
            }
        } else {
            e as i64
        };
        Some((self.drop_one(pos), factor))
    }

    /// Graded right derivative: the factor is moved to the back and deleted.
    pub fn right_partial(&self, v: &JetVariable) -> Option<(Term, i64)> {
        let pos = self.vars.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.vars[pos].1;
        let factor = if v.odd {
            let after = self.vars[pos + 1..].iter().filter(|(w, _)| w.odd).count();
            if after % 2 == 1 {
                -1
            } else {
                1
            }
        } else {
            e as i64
        };
        Some((self.drop_one(pos), factor))
    }

    /// `∂/∂x^λ` of the explicit coordinate dependence.
    pub fn coord_partial(&self, lambda: u8) -> Option<(Term, u32)> {
        let pos = self.base.iter().position(|(l, _)| *l == lambda)?;
        let p = self.base[pos].1;
        let mut t = self.clone();
        if p == 1 {
            t.base.remove(pos);
        } else {
            t.base[pos].1 -= 1;
        }
        Some((t, p))
    }

    fn drop_one(&self, pos: usize) -> Term {
        let mut t = self.clone();
        if t.vars[pos].1 == 1 {
            t.vars.remove(pos);
        } else {
            t.vars[pos].1 -= 1;
        }
        t
    }

    /// Splits the factor list into `(coefficient part, antifield part)`.
    /// No sign is attached; the halves are bookkeeping keys, not algebra
    /// elements whose product reproduces `self`.
    pub fn split_antifields(&self) -> (Term, Term) {
        let mut coeff = Term { vars: SmallVec::new(), base: self.base.clone() };
        let mut anti = Term::default();
        for (v, e) in &self.vars {
            if v.antifield_number == 0 {
                coeff.vars.push((v.clone(), *e));
            } else {
                anti.vars.push((v.clone(), *e));
            }
        }
        (coeff, anti)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

fn merge_base(a: &[(u8, u32)], b: &[(u8, u32)]) -> SmallVec<[(u8, u32); 2]> {
    let mut out: SmallVec<[(u8, u32); 2]> = SmallVec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// A coefficient times a canonical term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Q,
    pub term: Term,
}

/// Brings an ordered product of factors to canonical form, applying the
/// Koszul sign for every transposition of odd factors. Returns `None` when the
/// product vanishes (zero coefficient or a repeated odd variable).
pub fn normalize(factors: &[Factor], coeff: Q) -> Option<Monomial> {
    if coeff.is_zero() {
        return None;
    }
    let mut base: BTreeMap<u8, u32> = BTreeMap::new();
    let mut odd: Vec<&JetVariable> = Vec::new();
    let mut even: BTreeMap<&JetVariable, u32> = BTreeMap::new();
    for f in factors {
        match f {
            Factor::Coord(l) => *base.entry(*l).or_default() += 1,
            Factor::Var(v) if v.odd => odd.push(v),
            Factor::Var(v) => *even.entry(v).or_default() += 1,
        }
    }
    let mut inversions = 0usize;
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            match odd[i].cmp(odd[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut vars: Vec<(JetVariable, u32)> = even.into_iter().map(|(v, e)| (v.clone(), e)).collect();
    vars.extend(odd.into_iter().map(|v| (v.clone(), 1)));
    vars.sort_by(|a, b| a.0.cmp(&b.0));
    let term = Term {
        vars: vars.into_iter().collect(),
        base: base.into_iter().collect(),
    };
    let coeff = if inversions % 2 == 1 { -coeff } else { coeff };
    Some(Monomial { coeff, term })
}

/// Exact-rational polynomial in base coordinates and graded jet variables,
/// kept in canonical form: one entry per distinct term, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    terms: BTreeMap<Term, Q>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        GradedPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        GradedPoly::from_term(Term::one(), c)
    }

    pub fn from_term(term: Term, coeff: Q) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(term, coeff);
        p
    }

    pub fn from_monomial(m: Option<Monomial>) -> Self {
        match m {
            Some(m) => GradedPoly::from_term(m.term, m.coeff),
            None => GradedPoly::zero(),
        }
    }

    pub fn var(v: JetVariable) -> Self {
        GradedPoly::from_term(Term::var(v), Q::one())
    }

    pub fn coord(lambda: u8) -> Self {
        GradedPoly::from_term(Term::coord(lambda, 1), Q::one())
    }

    /// Product of the factors in the given order.
    pub fn product(factors: &[Factor], coeff: Q) -> Self {
        GradedPoly::from_monomial(normalize(factors, coeff))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Term, Q)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, term: &Term) -> Option<&Q> {
        self.terms.get(term)
    }

    pub fn add_term(&mut self, term: Term, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &GradedPoly, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Q) -> GradedPoly {
        if factor.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                if let Some((t, neg)) = ta.mul(tb) {
                    let c = ca * cb;
                    out.add_term(t, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `term * self` with the term on the left.
    pub fn mul_term_left(&self, term: &Term, coeff: &Q) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (tb, cb) in &self.terms {
            if let Some((t, neg)) = term.mul(tb) {
                let c = coeff * cb;
                out.add_term(t, if neg { -c } else { c });
            }
        }
        out
    }

    /// `self * term` with the term on the right.
    pub fn mul_term_right(&self, term: &Term, coeff: &Q) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (ta, ca) in &self.terms {
            if let Some((t, neg)) = ta.mul(term) {
                let c = ca * coeff;
                out.add_term(t, if neg { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> GradedPoly {
        let mut out = GradedPoly::one();
        for _ in 0..k {
            out = GradedPoly::mul(&out, self);
        }
        out
    }

    /// Graded left derivative `∂^Λ_A`.
    pub fn left_partial(&self, v: &JetVariable) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, c) in &self.terms {
            if let Some((rest, f)) = t.left_partial(v) {
                out.add_term(rest, c * Q::from_integer(f.into()));
            }
        }
        out
    }

    /// Graded right derivative.
    pub fn right_partial(&self, v: &JetVariable) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, c) in &self.terms {
            if let Some((rest, f)) = t.right_partial(v) {
                out.add_term(rest, c * Q::from_integer(f.into()));
            }
        }
        out
    }

    pub fn coord_partial(&self, lambda: u8) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, c) in &self.terms {
            if let Some((rest, p)) = t.coord_partial(lambda) {
                out.add_term(rest, c * Q::from_integer(p.into()));
            }
        }
        out
    }

    /// Distinct jet variables occurring in the polynomial, in canonical order.
    pub fn variables(&self) -> BTreeSet<JetVariable> {
        self.terms
            .keys()
            .flat_map(|t| t.vars.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn parity(&self) -> Homogeneity<Parity> {
        self.terms
            .keys()
            .fold(Homogeneity::Any, |h, t| h.push(t.parity()))
    }

    pub fn antifield_number(&self) -> Homogeneity<u32> {
        self.terms
            .keys()
            .fold(Homogeneity::Any, |h, t| h.push(t.antifield_number()))
    }

    pub fn max_jet_order(&self) -> usize {
        self.terms.keys().map(Term::max_jet_order).max().unwrap_or(0)
    }

    /// Part of the polynomial made of terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Term) -> bool) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(t))
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes rational values for base coordinates and for even jet
    /// variables. Odd variables and variables without a value stay symbolic.
    pub fn evaluate(
        &self,
        var_value: &dyn Fn(&JetVariable) -> Option<Q>,
        coord_value: &dyn Fn(u8) -> Option<Q>,
    ) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Term::default();
            for &(l, p) in &t.base {
                match coord_value(l) {
                    Some(x) => coeff *= pow_q(&x, p),
                    None => rest.base.push((l, p)),
                }
            }
            for (v, e) in &t.vars {
                match (v.odd, var_value(v)) {
                    (false, Some(x)) => coeff *= pow_q(&x, *e),
                    _ => rest.vars.push((v.clone(), *e)),
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Coefficient multiplying the leading (first canonical) term.
    pub fn leading(&self) -> Option<(&Term, &Q)> {
        self.terms.iter().next()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, sig }
    }

    pub fn to_text(&self, sig: &Signature) -> String {
        self.display(sig).to_string()
    }
}

fn pow_q(x: &Q, p: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..p {
        r *= x;
    }
    r
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        for (t, c) in rhs.terms {
            self.add_term(t, c);
        }
        self
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        &self - &rhs
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::mul(self, rhs)
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        GradedPoly::mul(&self, &rhs)
    }
}

impl FromIterator<(Term, Q)> for GradedPoly {
    fn from_iter<I: IntoIterator<Item = (Term, Q)>>(iter: I) -> Self {
        let mut p = GradedPoly::zero();
        for (t, c) in iter {
            p.add_term(t, c);
        }
        p
    }
}

/// A horizontal density `ℒ ω`; the volume form is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Density {
    pub body: GradedPoly,
}

impl Density {
    pub fn new(body: GradedPoly) -> Self {
        Density { body }
    }
}

impl From<GradedPoly> for Density {
    fn from(body: GradedPoly) -> Self {
        Density { body }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            Ok(())
        };
        for &(l, p) in &self.term.base {
            sep(f)?;
            f.write_str(self.sig.coord_name(l))?;
            if p > 1 {
                write!(f, "^{p}")?;
            }
        }
        for (v, e) in &self.term.vars {
            sep(f)?;
            f.write_str(&self.sig.format_var(v))?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Canonical text: terms in canonical order, explicit signs and
/// coefficients, `*` between factors.
pub struct PolyDisplay<'a> {
    poly: &'a GradedPoly,
    sig: &'a Signature,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{}", c.abs())?;
            if !t.is_one() {
                write!(f, "*{}", t.display(self.sig))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{FieldSpec, IndexGroup};
    use crate::algebra::multi_index::MultiIndex;

    fn setup() -> (Signature, JetVariable, JetVariable, JetVariable) {
        let mut sig = Signature::new(2);
        let c = sig
            .add(FieldSpec::field("c", Parity::Odd, vec![IndexGroup::plain(1)]))
            .unwrap();
        let y = sig.add(FieldSpec::field("y", Parity::Even, vec![])).unwrap();
        let c1 = sig.jet(c, [1].into_iter().collect(), MultiIndex::empty());
        let c2 = sig.jet(c, [2].into_iter().collect(), MultiIndex::empty());
        let yv = sig.jet(y, Default::default(), MultiIndex::empty());
        (sig, c1, c2, yv)
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn normalize_single_transposition() {
        let (_, c1, c2, _) = setup();
        let m = normalize(&[Factor::Var(c2.clone()), Factor::Var(c1.clone())], q(1)).unwrap();
        assert_eq!(m.coeff, q(-1));
        assert_eq!(m.term.vars().len(), 2);
    }

    #[test]
    fn normalize_odd_square_vanishes() {
        let (_, c1, _, _) = setup();
        assert!(normalize(&[Factor::Var(c1.clone()), Factor::Var(c1)], q(1)).is_none());
    }

    #[test]
    fn normalize_even_factor_commutes() {
        let (_, c1, _, y) = setup();
        let a = normalize(&[Factor::Var(y.clone()), Factor::Var(c1.clone())], q(1)).unwrap();
        let b = normalize(&[Factor::Var(c1), Factor::Var(y)], q(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeff, q(1));
    }

    #[test]
    fn product_sign() {
        let (_, c1, c2, _) = setup();
        let p1 = GradedPoly::var(c1.clone());
        let p2 = GradedPoly::var(c2.clone());
        let a = &p1 * &p2;
        let b = &p2 * &p1;
        assert_eq!(a, -&b);
        assert_eq!(&p1 * &GradedPoly::one(), p1);
    }

    #[test]
    fn partials() {
        let (_, c1, c2, y) = setup();
        let c1c2 = GradedPoly::var(c1.clone()) * GradedPoly::var(c2.clone());
        assert_eq!(c1c2.left_partial(&c2), -GradedPoly::var(c1.clone()));
        assert_eq!(c1c2.right_partial(&c1), -GradedPoly::var(c2.clone()));
        assert_eq!(c1c2.right_partial(&c2), GradedPoly::var(c1.clone()));
        let y2 = GradedPoly::var(y.clone()).pow(2);
        assert_eq!(y2.left_partial(&y), GradedPoly::var(y).scale(&q(2)));
    }

    #[test]
    fn text_form() {
        let (sig, c1, _, y) = setup();
        let p = &GradedPoly::var(y.raised(1).raised(1)).scale(&q(-1))
            + &(GradedPoly::var(c1) * GradedPoly::coord(2)).scale(&Q::new(1.into(), 2.into()));
        assert_eq!(p.to_text(&sig), "1/2*x2*c[1] - 1*y_(1,1)");
        assert_eq!(GradedPoly::zero().to_text(&sig), "0");
    }

    #[test]
    fn zero_is_any_parity() {
        assert_eq!(GradedPoly::zero().parity(), Homogeneity::Any);
        assert!(GradedPoly::zero().parity().admits(Parity::Odd));
    }
}
