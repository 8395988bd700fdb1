//! Variational calculus on the jet algebra: total derivatives, the
//! Euler-Lagrange operator, prolonged vertical derivations and the
//! total-divergence test.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::algebra::{
    Density, FieldId, FieldRole, GradedPoly, Indices, JetVariable, MultiIndex, Parity, Signature, Term,
};
use crate::ansatz;
use crate::linalg::{BlockSolver, TermIndex};
use crate::Q;

/// `d_λ p = ∂_λ p + Σ s_{λ+Λ} ∂^Λ p`.
pub fn total_derivative(p: &GradedPoly, lambda: u8) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for (t, c) in p.terms() {
        total_derivative_term(t, c, lambda, &mut out);
    }
    out
}

fn total_derivative_term(t: &Term, c: &Q, lambda: u8, out: &mut GradedPoly) {
    if let Some((rest, p)) = t.coord_partial(lambda) {
        out.add_term(rest, c * Q::from_integer(p.into()));
    }
    for (v, _) in t.vars() {
        let (rest, f) = t.left_partial(v).expect("variable occurs in its own term");
        if let Some((prod, neg)) = Term::var(v.raised(lambda)).mul(&rest) {
            let k = c * Q::from_integer(f.into());
            out.add_term(prod, if neg { -k } else { k });
        }
    }
}

/// `d_Λ p`, applying one total derivative per entry of `Λ`.
pub fn total_derivative_multi(p: &GradedPoly, lambda: &MultiIndex) -> GradedPoly {
    let mut out = p.clone();
    for &l in lambda.indices() {
        out = total_derivative(&out, l);
    }
    out
}

/// `Σ_λ d_λ J^λ` for a current given component by component.
pub fn divergence(current: &[GradedPoly]) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for (i, j) in current.iter().enumerate() {
        out = out + total_derivative(j, i as u8 + 1);
    }
    out
}

/// Variational derivative `Σ_Λ (-1)^{|Λ|} d_Λ ∂^Λ_A L` with respect to one
/// generator slot, the sum running over the jets of that slot present in `L`.
pub fn variational_derivative(l: &GradedPoly, field: FieldId, component: &Indices) -> GradedPoly {
    let mut out = GradedPoly::zero();
    for v in l.variables() {
        if v.field != field || v.component != *component {
            continue;
        }
        let part = total_derivative_multi(&l.left_partial(&v), &v.jet);
        if v.order() % 2 == 1 {
            out = out - part;
        } else {
            out = out + part;
        }
    }
    out
}

/// Euler-Lagrange expressions `ℰ_A` for every component of every field
/// (antifield number zero) of the signature, including those that vanish.
pub fn euler_lagrange(sig: &Signature, lagrangian: &Density) -> BTreeMap<(FieldId, Indices), GradedPoly> {
    let mut out = BTreeMap::new();
    for (id, spec) in sig.specs() {
        if spec.role != FieldRole::Field {
            continue;
        }
        for c in spec.components(sig.dim()) {
            let e = variational_derivative(&lagrangian.body, id, &c);
            out.insert((id, c), e);
        }
    }
    out
}

/// Whether a derivation acts from the left (`Σ d_Λυ · ∂^Λ p`) or from the
/// right (`Σ p ←∂^Λ · d_Λυ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A generalized vector field `υ = υ^A ∂_A`, prolonged to every jet by
/// `s^A_Λ ↦ d_Λ υ^A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedVectorField {
    coefficients: BTreeMap<(FieldId, Indices), GradedPoly>,
    parity: Parity,
    side: Side,
}

impl GeneralizedVectorField {
    pub fn new(parity: Parity, side: Side) -> Self {
        GeneralizedVectorField { coefficients: BTreeMap::new(), parity, side }
    }

    pub fn set(&mut self, field: FieldId, component: Indices, value: GradedPoly) {
        if value.is_zero() {
            self.coefficients.remove(&(field, component));
        } else {
            self.coefficients.insert((field, component), value);
        }
    }

    pub fn coefficient(&self, field: FieldId, component: &Indices) -> Option<&GradedPoly> {
        self.coefficients.get(&(field, component.clone()))
    }

    pub fn coefficients(&self) -> &BTreeMap<(FieldId, Indices), GradedPoly> {
        &self.coefficients
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn prolong(&self) -> Prolongation<'_> {
        Prolongation { field: self, cache: HashMap::new() }
    }

    /// Applies the prolonged field once. Use [`Self::prolong`] when applying
    /// repeatedly, so that `d_Λ υ^A` is shared.
    pub fn apply(&self, p: &GradedPoly) -> GradedPoly {
        self.prolong().apply(p)
    }

    /// Residuals `ϑ(υ^A)` for every generator with a nonzero value.
    pub fn square_residuals(&self) -> Vec<((FieldId, Indices), GradedPoly)> {
        let mut pr = self.prolong();
        self.coefficients
            .iter()
            .map(|(k, v)| (k.clone(), pr.apply(v)))
            .collect()
    }

    /// An odd field is nilpotent exactly when it annihilates its own values.
    pub fn is_nilpotent(&self) -> bool {
        self.parity.is_odd() && self.square_residuals().iter().all(|(_, r)| r.is_zero())
    }
}

/// A prolonged vector field with a cache of `d_Λ υ^A`.
pub struct Prolongation<'a> {
    field: &'a GeneralizedVectorField,
    cache: HashMap<JetVariable, GradedPoly>,
}

impl Prolongation<'_> {
    /// `d_Λ υ^A` for the jet variable `s^A_Λ`.
    pub fn image(&mut self, v: &JetVariable) -> GradedPoly {
        if let Some(p) = self.cache.get(v) {
            return p.clone();
        }
        let p = match v.jet.indices().split_last() {
            None => self
                .field
                .coefficient(v.field, &v.component)
                .cloned()
                .unwrap_or_default(),
            Some((&last, rest)) => {
                let lower = JetVariable { jet: MultiIndex::new(rest.iter().copied()), ..v.clone() };
                let below = self.image(&lower);
                total_derivative(&below, last)
            }
        };
        self.cache.insert(v.clone(), p.clone());
        p
    }

    pub fn apply(&mut self, p: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, c) in p.terms() {
            for (v, _) in t.vars() {
                let img = self.image(v);
                if img.is_zero() {
                    continue;
                }
                let part = match self.field.side {
                    Side::Left => {
                        let (rest, f) = t.left_partial(v).expect("variable occurs in its own term");
                        img.mul_term_right(&rest, &(c * Q::from_integer(f.into())))
                    }
                    Side::Right => {
                        let (rest, f) = t.right_partial(v).expect("variable occurs in its own term");
                        img.mul_term_left(&rest, &(c * Q::from_integer(f.into())))
                    }
                };
                out.add_assign_scaled(&part, &Q::one());
            }
        }
        out
    }
}

/// Outcome of [`is_total_divergence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivergenceSearch {
    /// Components `J^λ` with `Σ d_λ J^λ` equal to the density.
    Witness(Vec<GradedPoly>),
    /// Some variational derivative is nonzero, so no current exists at all.
    Obstructed { generator: String, residual: GradedPoly },
    /// Variational derivatives vanish but no current was found inside the
    /// ansatz.
    NotFoundWithinBounds,
}

/// Decides whether a density is a total divergence. A nonzero variational
/// derivative is a definitive obstruction; otherwise a current is searched
/// for among monomials of jet order `≤ jet_order` and degree `≤ degree` in
/// the variables of the density and the base coordinates.
pub fn is_total_divergence(sig: &Signature, density: &Density, jet_order: usize, degree: u32) -> DivergenceSearch {
    let body = &density.body;
    if body.is_zero() {
        return DivergenceSearch::Witness(vec![GradedPoly::zero(); sig.dim()]);
    }
    let mut slots: Vec<(FieldId, Indices)> = body.variables().iter().map(JetVariable::slot).collect();
    slots.sort();
    slots.dedup();
    for (f, c) in &slots {
        let e = variational_derivative(body, *f, c);
        if !e.is_zero() {
            return DivergenceSearch::Obstructed { generator: sig.format_component(*f, c), residual: e };
        }
    }
    // Monomials over all slots of the density, including odd ones.
    let basis = ansatz::coefficient_terms(sig, &slots, jet_order, degree, true);
    let n = sig.dim();
    let mut rows = TermIndex::new();
    let mut columns = Vec::with_capacity(basis.len() * n);
    for lambda in 1..=n as u8 {
        for t in &basis {
            let img = total_derivative(&GradedPoly::from_term(t.clone(), Q::one()), lambda);
            columns.push(rows.encode(&img));
        }
    }
    let Some(rhs) = rows.try_encode(body) else {
        return DivergenceSearch::NotFoundWithinBounds;
    };
    let mut solver = BlockSolver::new(columns);
    match solver.solve(&rhs) {
        None => DivergenceSearch::NotFoundWithinBounds,
        Some(x) => {
            let mut current = vec![GradedPoly::zero(); n];
            for (j, c) in x {
                current[j / basis.len()].add_term(basis[j % basis.len()].clone(), c);
            }
            DivergenceSearch::Witness(current)
        }
    }
}
