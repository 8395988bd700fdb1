use std::collections::BTreeMap;

use crate::algebra::{
    Density, FieldId, FieldRole, FieldSpec, GradedPoly, Homogeneity, IndexGroup, Indices, Parity, Signature,
};
use crate::calculus::{euler_lagrange, GeneralizedVectorField, Side};
use crate::{Error, Result};

/// Default cap on the number of stages a complex may carry.
pub const DEFAULT_MAX_STAGES: usize = 16;

/// A named family of stage operators `Δ_{r_k}` sharing an index structure.
/// Registering the family creates one stage antifield `c̄` per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageFamily {
    pub name: String,
    pub index_groups: Vec<IndexGroup>,
    pub operators: BTreeMap<Indices, GradedPoly>,
}

impl StageFamily {
    pub fn new(name: impl Into<String>, index_groups: Vec<IndexGroup>) -> Self {
        StageFamily { name: name.into(), index_groups, operators: BTreeMap::new() }
    }

    pub fn scalar(name: impl Into<String>, expression: GradedPoly) -> Self {
        StageFamily::new(name, Vec::new()).with(Indices::new(), expression)
    }

    pub fn with(mut self, component: Indices, expression: GradedPoly) -> Self {
        self.operators.insert(component, expression);
        self
    }
}

/// A registered stage operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageOperator {
    pub stage: usize,
    /// The stage antifield `c̄` created for this operator.
    pub antifield: FieldId,
    pub component: Indices,
    pub expression: GradedPoly,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub families: Vec<FieldId>,
    pub operators: Vec<StageOperator>,
}

/// One entry of a nilpotency report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub generator: String,
    /// `None` for field antifields `s̄`, otherwise the stage of `c̄`.
    pub stage: Option<usize>,
    pub residual: GradedPoly,
}

impl GeneratorCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    pub entries: Vec<GeneratorCheck>,
}

impl NilpotencyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(GeneratorCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GeneratorCheck> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

/// The antifield-extended algebra of a Lagrangian system together with its
/// registered stage operators. Values are immutable; registration returns a
/// new complex.
#[derive(Clone, Debug)]
pub struct KTComplex {
    sig: Signature,
    fields: Vec<FieldId>,
    antifields: Vec<FieldId>,
    lagrangian: Density,
    el: BTreeMap<(FieldId, Indices), GradedPoly>,
    stages: Vec<Stage>,
    max_stages: usize,
}

impl KTComplex {
    /// Computes `ℰ_A` and adjoins one antifield `s̄_A` (opposite parity,
    /// antifield number 1) per field, named `<field>_bar`.
    pub fn extend_with_antifields(sig: Signature, lagrangian: Density) -> Result<Self> {
        let mut sig = sig;
        for (_, spec) in sig.specs() {
            if spec.role != FieldRole::Field || spec.antifield_number != 0 {
                return Err(Error::Invalid(format!(
                    "`{}` is not a field of antifield number 0",
                    spec.name
                )));
            }
        }
        if let Some(v) = lagrangian.body.variables().into_iter().find(|v| v.antifield_number > 0) {
            return Err(Error::AntifieldInLagrangian(sig.format_var(&v)));
        }
        if !lagrangian.body.parity().admits(Parity::Even) {
            return Err(Error::LagrangianNotEven("parity-even"));
        }
        let el = euler_lagrange(&sig, &lagrangian);
        let fields: Vec<FieldId> = sig.ids().collect();
        let mut antifields = Vec::with_capacity(fields.len());
        for &f in &fields {
            let spec = sig.get(f).clone();
            let id = sig.add(FieldSpec {
                name: format!("{}_bar", spec.name),
                parity: spec.parity.flip(),
                antifield_number: 1,
                index_groups: spec.index_groups.clone(),
                role: FieldRole::Antifield { of: f },
            })?;
            antifields.push(id);
        }
        Ok(KTComplex {
            sig,
            fields,
            antifields,
            lagrangian,
            el,
            stages: Vec::new(),
            max_stages: DEFAULT_MAX_STAGES,
        })
    }

    pub fn with_max_stages(mut self, max_stages: usize) -> Self {
        self.max_stages = max_stages;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn lagrangian(&self) -> &Density {
        &self.lagrangian
    }

    pub fn euler_lagrange(&self) -> &BTreeMap<(FieldId, Indices), GradedPoly> {
        &self.el
    }

    pub fn fields(&self) -> &[FieldId] {
        &self.fields
    }

    pub fn antifields(&self) -> &[FieldId] {
        &self.antifields
    }

    /// The antifield `s̄` of a field.
    pub fn antifield_of(&self, field: FieldId) -> Option<FieldId> {
        self.fields.iter().position(|&f| f == field).map(|i| self.antifields[i])
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Every `(field, component)` slot of antifield number zero.
    pub fn field_slots(&self) -> Vec<(FieldId, Indices)> {
        self.sig.components_of(&self.fields)
    }

    /// Antifield slots of the sector `P{k}`: all `s̄` plus the stage
    /// antifields of stages `0..=k` (`k = -1` gives `s̄` only).
    pub fn antifield_slots(&self, k: isize) -> Vec<(FieldId, Indices)> {
        let mut ids = self.antifields.clone();
        for (i, st) in self.stages.iter().enumerate() {
            if (i as isize) <= k {
                ids.extend(st.families.iter().copied());
            }
        }
        self.sig.components_of(&ids)
    }

    pub fn generator_name(&self, field: FieldId, component: &[u8]) -> String {
        self.sig.format_component(field, component)
    }

    /// Registers stage `k` and verifies nilpotency of the extended
    /// differential on every new generator.
    pub fn register_stage(&self, k: usize, families: Vec<StageFamily>) -> Result<KTComplex> {
        let next = self.register_stage_unchecked(k, families)?;
        let d = next.differential();
        let mut pr = d.prolong();
        for op in &next.stages[k].operators {
            let residual = pr.apply(&op.expression);
            if !residual.is_zero() {
                return Err(Error::NotNilpotent {
                    generator: next.generator_name(op.antifield, &op.component),
                    residual: residual.to_text(&next.sig),
                });
            }
        }
        Ok(next)
    }

    /// Registers stage `k` checking only the structural invariants
    /// (ordering, antifield numbers, parity, linearity), not nilpotency.
    pub fn register_stage_unchecked(&self, k: usize, families: Vec<StageFamily>) -> Result<KTComplex> {
        if k != self.stages.len() {
            return Err(Error::StageOrder { stage: k, missing: self.stages.len().min(k) });
        }
        if k >= self.max_stages {
            return Err(Error::Invalid(format!("stage {k} exceeds the cap of {} stages", self.max_stages)));
        }
        if families.is_empty() {
            return Err(Error::Invalid(format!("stage {k} has no operators")));
        }
        let mut next = self.clone();
        let mut stage = Stage { families: Vec::new(), operators: Vec::new() };
        let want = k as u32 + 1;
        for fam in families {
            let probe = FieldSpec {
                name: fam.name.clone(),
                parity: Parity::Even,
                antifield_number: k as u32 + 2,
                index_groups: fam.index_groups.clone(),
                role: FieldRole::StageAntifield { stage: k },
            };
            let components = probe.components(self.dim());
            let mut parity: Option<Parity> = None;
            for c in &components {
                let label = self.sig_label(&fam.name, c);
                let Some(expr) = fam.operators.get(c) else {
                    return Err(Error::Invalid(format!("no operator given for `{label}`")));
                };
                if expr.is_zero() {
                    return Err(Error::Invalid(format!("operator `{label}` is zero")));
                }
                match expr.antifield_number() {
                    Homogeneity::Pure(a) if a == want => {}
                    Homogeneity::Pure(a) => {
                        return Err(Error::AntifieldNumberMismatch {
                            stage: k,
                            name: label,
                            expected: want,
                            found: a.to_string(),
                        })
                    }
                    _ => {
                        return Err(Error::AntifieldNumberMismatch {
                            stage: k,
                            name: label,
                            expected: want,
                            found: "mixed".into(),
                        })
                    }
                }
                let p = expr.parity().pure().ok_or_else(|| {
                    Error::Invalid(format!("operator `{label}` is not parity homogeneous"))
                })?;
                if parity.is_some_and(|q| q != p) {
                    return Err(Error::Invalid(format!(
                        "operators of family `{}` have different parities",
                        fam.name
                    )));
                }
                parity = Some(p);
                if k > 0 && !self.has_linear_part(expr, k - 1) {
                    return Err(Error::Invalid(format!(
                        "operator `{label}` has no part linear in the stage {} antifields",
                        k - 1
                    )));
                }
            }
            if let Some(c) = fam.operators.keys().find(|c| !components.contains(c)) {
                return Err(Error::Invalid(format!(
                    "`{}` is not a canonical component of `{}`",
                    self.sig_label(&fam.name, c),
                    fam.name
                )));
            }
            let parity = parity.expect("families have at least one component");
            let id = next.sig.add(FieldSpec { parity: parity.flip(), ..probe })?;
            stage.families.push(id);
            for c in components {
                let expression = fam.operators[&c].clone();
                stage.operators.push(StageOperator { stage: k, antifield: id, component: c, expression, parity });
            }
        }
        next.stages.push(stage);
        Ok(next)
    }

    fn sig_label(&self, name: &str, c: &[u8]) -> String {
        if c.is_empty() {
            name.to_string()
        } else {
            let idx: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            format!("{name}[{}]", idx.join(","))
        }
    }

    /// Whether `expr` has a nonzero part that is linear in the stage-`s`
    /// antifields with antifield-number-zero coefficients.
    fn has_linear_part(&self, expr: &GradedPoly, s: usize) -> bool {
        let fams = &self.stages[s].families;
        expr.terms().any(|(t, _)| {
            let mut hits = 0;
            for (v, e) in t.vars() {
                if v.antifield_number == 0 {
                    continue;
                }
                if fams.contains(&v.field) {
                    hits += e;
                } else {
                    return false;
                }
            }
            hits == 1
        })
    }

    /// The Koszul-Tate differential: an odd right derivation with
    /// `s̄_A ↦ ℰ_A` and `c̄_r ↦ Δ_r`.
    pub fn differential(&self) -> GeneralizedVectorField {
        let mut v = GeneralizedVectorField::new(Parity::Odd, Side::Right);
        for ((f, c), e) in &self.el {
            let bar = self.antifield_of(*f).expect("every field has an antifield");
            v.set(bar, c.clone(), e.clone());
        }
        for st in &self.stages {
            for op in &st.operators {
                v.set(op.antifield, op.component.clone(), op.expression.clone());
            }
        }
        v
    }

    /// `δ(p)`.
    pub fn delta(&self, p: &GradedPoly) -> GradedPoly {
        self.differential().apply(p)
    }

    /// `δ(δ(g))` for every antifield generator `g`.
    pub fn check_nilpotency(&self) -> NilpotencyReport {
        let d = self.differential();
        let mut pr = d.prolong();
        let mut entries = Vec::new();
        for ((f, c), e) in &self.el {
            let bar = self.antifield_of(*f).expect("every field has an antifield");
            entries.push(GeneratorCheck {
                generator: self.generator_name(bar, c),
                stage: None,
                residual: pr.apply(e),
            });
        }
        for st in &self.stages {
            for op in &st.operators {
                entries.push(GeneratorCheck {
                    generator: self.generator_name(op.antifield, &op.component),
                    stage: Some(op.stage),
                    residual: pr.apply(&op.expression),
                });
            }
        }
        NilpotencyReport { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiIndex;
    use crate::calculus::total_derivative;
    use crate::q;

    fn free_scalar() -> KTComplex {
        let mut sig = Signature::new(1);
        let y = sig.add(FieldSpec::field("y", Parity::Even, vec![])).unwrap();
        let y1 = GradedPoly::var(sig.jet(y, Indices::new(), MultiIndex::new([1])));
        let l = (&y1 * &y1).scale(&(q(1) / q(2)));
        KTComplex::extend_with_antifields(sig, Density::new(l)).unwrap()
    }

    #[test]
    fn antifields_flip_parity() {
        let kt = free_scalar();
        let bar = kt.antifields()[0];
        let spec = kt.signature().get(bar);
        assert_eq!(spec.name, "y_bar");
        assert_eq!(spec.parity, Parity::Odd);
        assert_eq!(spec.antifield_number, 1);
    }

    #[test]
    fn delta_of_antifield_is_euler_lagrange() {
        let kt = free_scalar();
        let sig = kt.signature();
        let bar = GradedPoly::var(sig.jet(kt.antifields()[0], Indices::new(), MultiIndex::empty()));
        assert_eq!(kt.delta(&bar).to_text(sig), "-1*y_(1,1)");
        let y = GradedPoly::var(sig.jet(kt.fields()[0], Indices::new(), MultiIndex::empty()));
        assert!(kt.delta(&y).is_zero());
    }

    #[test]
    fn rejects_antifield_lagrangian() {
        let kt = free_scalar();
        let sig = kt.signature().clone();
        let bar = GradedPoly::var(sig.jet(kt.antifields()[0], Indices::new(), MultiIndex::empty()));
        let err = KTComplex::extend_with_antifields(sig, Density::new(bar)).unwrap_err();
        assert!(matches!(err, Error::Invalid(_) | Error::AntifieldInLagrangian(_)));
    }

    #[test]
    fn non_identity_is_rejected_with_residual() {
        let kt = free_scalar();
        let sig = kt.signature();
        let bar = GradedPoly::var(sig.jet(kt.antifields()[0], Indices::new(), MultiIndex::empty()));
        match kt.register_stage(0, vec![StageFamily::scalar("c", bar)]) {
            Err(Error::NotNilpotent { generator, residual }) => {
                assert_eq!(generator, "c");
                assert_eq!(residual, "-1*y_(1,1)");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stage_order_and_antifield_number() {
        let kt = free_scalar();
        let sig = kt.signature();
        let bar = GradedPoly::var(sig.jet(kt.antifields()[0], Indices::new(), MultiIndex::empty()));
        assert!(matches!(
            kt.register_stage(1, vec![StageFamily::scalar("c", bar.clone())]),
            Err(Error::StageOrder { .. })
        ));
        let sq = total_derivative(&bar, 1) * bar;
        assert!(matches!(
            kt.register_stage(0, vec![StageFamily::scalar("c", sq)]),
            Err(Error::AntifieldNumberMismatch { .. })
        ));
    }
}
