//! Finite monomial bases for bounded searches.
//!
//! Every search in the crate works inside an explicit finite ansatz: jet
//! order at most `J` for every variable, coefficient degree (base
//! coordinates plus antifield-number-zero variables) at most `D`, and
//! optionally a cap on the number of antifield factors.

use crate::algebra::{FieldId, Indices, JetVariable, MultiIndex, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub jet_order: usize,
    pub degree: u32,
    /// Maximum number of antifield factors per monomial.
    pub max_factors: Option<u32>,
}

impl Bounds {
    pub fn new(jet_order: usize, degree: u32) -> Self {
        Bounds { jet_order, degree, max_factors: None }
    }

    pub fn with_max_factors(mut self, m: u32) -> Self {
        self.max_factors = Some(m);
        self
    }

    pub fn admits(&self, t: &Term) -> bool {
        t.max_jet_order() <= self.jet_order
            && t.coefficient_degree() <= self.degree
            && self.max_factors.is_none_or(|m| {
                t.vars()
                    .iter()
                    .filter(|(v, _)| v.antifield_number > 0)
                    .map(|(_, e)| e)
                    .sum::<u32>()
                    <= m
            })
    }
}

/// All jets `s_Λ` of the given slots with `|Λ| ≤ jet_order`.
pub fn jets_of(sig: &Signature, slots: &[(FieldId, Indices)], jet_order: usize) -> Vec<JetVariable> {
    let lambdas = MultiIndex::all_up_to(sig.dim(), jet_order);
    let mut out = Vec::with_capacity(slots.len() * lambdas.len());
    for (f, c) in slots {
        for l in &lambdas {
            out.push(sig.jet(*f, c.clone(), l.clone()));
        }
    }
    out.sort();
    out
}

struct Gen {
    term: Term,
    odd: bool,
    weight: u32,
}

/// Products of generators, odd ones at most once, whose total weight is
/// accepted by `accept` while never exceeding `max_weight`; `max_count`
/// caps the number of factors.
fn products(
    gens: &[Gen],
    max_weight: u32,
    max_count: Option<u32>,
    accept: &dyn Fn(u32) -> bool,
) -> Vec<Term> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Term, u32, u32)> = vec![(0, Term::one(), 0, 0)];
    while let Some((start, term, w, count)) = stack.pop() {
        if accept(w) {
            out.push(term.clone());
        }
        if max_count.is_some_and(|m| count >= m) {
            continue;
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            if w + g.weight > max_weight {
                continue;
            }
            let Some((t, _)) = term.mul(&g.term) else { continue };
            // odd generators are used at most once, even ones may repeat
            let next = if g.odd { i + 1 } else { i };
            stack.push((next, t, w + g.weight, count + 1));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Monomials in the base coordinates and the jets of `slots` (which should
/// be antifield-number-zero) of total degree at most `degree`.
pub fn coefficient_terms(
    sig: &Signature,
    slots: &[(FieldId, Indices)],
    jet_order: usize,
    degree: u32,
    with_coords: bool,
) -> Vec<Term> {
    let mut gens: Vec<Gen> = Vec::new();
    if with_coords {
        for l in 1..=sig.dim() as u8 {
            gens.push(Gen { term: Term::coord(l, 1), odd: false, weight: 1 });
        }
    }
    for v in jets_of(sig, slots, jet_order) {
        let odd = v.odd;
        gens.push(Gen { term: Term::var(v), odd, weight: 1 });
    }
    products(&gens, degree, None, &|_| true)
}

/// Monomials in the jets of the antifield `slots` with antifield number
/// exactly `ant`.
pub fn antifield_terms(
    sig: &Signature,
    slots: &[(FieldId, Indices)],
    jet_order: usize,
    ant: u32,
    max_factors: Option<u32>,
) -> Vec<Term> {
    let gens: Vec<Gen> = jets_of(sig, slots, jet_order)
        .into_iter()
        .filter(|v| v.antifield_number > 0 && v.antifield_number <= ant)
        .map(|v| Gen { odd: v.odd, weight: v.antifield_number, term: Term::var(v) })
        .collect();
    products(&gens, ant, max_factors, &|w| w == ant)
}

/// Every product `a * c` (sign dropped) of an antifield monomial and a
/// coefficient monomial.
pub fn product_terms(anti: &[Term], coeff: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(anti.len() * coeff.len());
    for a in anti {
        for c in coeff {
            if let Some((t, _)) = c.mul(a) {
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
