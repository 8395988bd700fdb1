use std::collections::{BTreeMap, HashMap};

use super::ast::{Expr, ExprKind, Index, IndexRef, ModelFile, Pos};
use super::ParseError;
use crate::algebra::{
    Density, FieldId, FieldRole, FieldSpec, GradedPoly, Homogeneity, IndexGroup, Indices, MultiIndex, Parity,
    Signature, Term,
};
use crate::bf::levi_civita;
use crate::koszul_tate::{KTComplex, StageFamily};
use crate::{Result, Q};

/// A validated model: field signature, Lagrangian and stage families in
/// registration order.
#[derive(Clone, Debug)]
pub struct Model {
    pub file: ModelFile,
    pub signature: Signature,
    pub lagrangian: Density,
    pub stages: Vec<Vec<StageFamily>>,
}

impl Model {
    /// The complex with every stage registered and checked for nilpotency.
    pub fn complex(&self) -> Result<KTComplex> {
        let mut kt = KTComplex::extend_with_antifields(self.signature.clone(), self.lagrangian.clone())?;
        for (k, fams) in self.stages.iter().enumerate() {
            kt = kt.register_stage(k, fams.clone())?;
        }
        Ok(kt)
    }

    /// The complex with stages registered without the nilpotency check, so
    /// that every generator can be reported on.
    pub fn complex_unchecked(&self) -> Result<KTComplex> {
        let mut kt = KTComplex::extend_with_antifields(self.signature.clone(), self.lagrangian.clone())?;
        for (k, fams) in self.stages.iter().enumerate() {
            kt = kt.register_stage_unchecked(k, fams.clone())?;
        }
        Ok(kt)
    }

    pub fn canonical_text(&self) -> String {
        self.file.canonical_text()
    }
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError::new(pos.line, pos.col, msg))
}

struct Ctx<'a> {
    sig: &'a Signature,
    /// Names visible in this expression.
    visible: &'a HashMap<String, FieldId>,
    /// Antifield names, for the Lagrangian diagnostic.
    antifields: &'a HashMap<String, FieldId>,
    allow_antifields: bool,
}

type Env = Vec<(String, u8)>;

impl Ctx<'_> {
    fn index(&self, env: &Env, r: &IndexRef) -> std::result::Result<u8, ParseError> {
        let n = self.sig.dim();
        match &r.index {
            Index::Num(k) => {
                if *k == 0 || *k as usize > n {
                    return err(r.pos, format!("index out of range: {k} not in 1..={n}"));
                }
                Ok(*k as u8)
            }
            Index::Name(s) => {
                if let Some((_, v)) = env.iter().rev().find(|(name, _)| name == s) {
                    return Ok(*v);
                }
                if let Some(i) = self.sig.coords().iter().position(|c| c == s) {
                    return Ok(i as u8 + 1);
                }
                err(r.pos, format!("undeclared identifier `{s}` used as an index"))
            }
        }
    }

    fn eval(&self, env: &mut Env, e: &Expr) -> std::result::Result<GradedPoly, ParseError> {
        Ok(match &e.kind {
            ExprKind::Num(q) => GradedPoly::constant(q.clone()),
            ExprKind::Add(a, b) => self.eval(env, a)? + self.eval(env, b)?,
            ExprKind::Sub(a, b) => self.eval(env, a)? - self.eval(env, b)?,
            ExprKind::Mul(a, b) => self.eval(env, a)? * self.eval(env, b)?,
            ExprKind::Neg(a) => -self.eval(env, a)?,
            ExprKind::Pow(a, k) => self.eval(env, a)?.pow(*k),
            ExprKind::D(l, a) => {
                let l = self.index(env, l)?;
                crate::calculus::total_derivative(&self.eval(env, a)?, l)
            }
            ExprKind::Eps(idx) => {
                let n = self.sig.dim();
                if idx.len() != n {
                    return err(e.pos, format!("arity mismatch: eps takes {n} indices, got {}", idx.len()));
                }
                let v = idx.iter().map(|r| self.index(env, r)).collect::<std::result::Result<Vec<u8>, _>>()?;
                GradedPoly::constant(Q::from_integer(levi_civita(&v).into()))
            }
            ExprKind::Sum(vars, body) => {
                for v in vars {
                    if self.sig.coords().contains(v) || self.visible.contains_key(v) {
                        return err(e.pos, format!("summation index `{v}` shadows a declared name"));
                    }
                }
                let n = self.sig.dim();
                let mut out = GradedPoly::zero();
                let mut counter = vec![1u8; vars.len()];
                loop {
                    let base = env.len();
                    env.extend(vars.iter().cloned().zip(counter.iter().copied()));
                    let r = self.eval(env, body);
                    env.truncate(base);
                    out = out + r?;
                    // odometer over 1..=n for each variable
                    let mut i = vars.len();
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if (counter[i] as usize) < n {
                            counter[i] += 1;
                            break;
                        }
                        counter[i] = 1;
                    }
                }
            }
            ExprKind::Var { name, indices, jet } => {
                if let Some(l) = self.sig.coords().iter().position(|c| c == name) {
                    if !indices.is_empty() || !jet.is_empty() {
                        return err(e.pos, format!("coordinate `{name}` takes no indices"));
                    }
                    return Ok(GradedPoly::coord(l as u8 + 1));
                }
                if env.iter().any(|(v, _)| v == name) {
                    return err(e.pos, format!("index `{name}` used as a value"));
                }
                let id = match self.visible.get(name) {
                    Some(id) => *id,
                    None if !self.allow_antifields && self.antifields.contains_key(name) => {
                        return err(e.pos, format!("antifield `{name}` is not allowed in the lagrangian"));
                    }
                    None => return err(e.pos, format!("undeclared identifier `{name}`")),
                };
                let spec = self.sig.get(id);
                if indices.len() != spec.arity() {
                    return err(
                        e.pos,
                        format!("arity mismatch: `{name}` takes {} indices, got {}", spec.arity(), indices.len()),
                    );
                }
                let comp = indices.iter().map(|r| self.index(env, r)).collect::<std::result::Result<Vec<u8>, _>>()?;
                let lam = jet.iter().map(|r| self.index(env, r)).collect::<std::result::Result<Vec<u8>, _>>()?;
                match self.sig.jet_signed(id, &comp, MultiIndex::new(lam)) {
                    Ok(Some((v, sign))) => GradedPoly::from_term(Term::var(v), Q::from_integer(sign.into())),
                    Ok(None) => GradedPoly::zero(),
                    Err(x) => return err(e.pos, x.to_string()),
                }
            }
        })
    }
}

fn components(n: usize, groups: &[IndexGroup]) -> Vec<Indices> {
    FieldSpec::field("_", Parity::Even, groups.to_vec()).components(n)
}

/// Resolves names, checks arities and parities and evaluates every
/// expression.
pub fn elaborate(file: &ModelFile) -> std::result::Result<Model, ParseError> {
    let n = file.base_dim;
    let origin = Pos { line: 1, col: 1 };
    let mut sig = match &file.coords {
        Some(c) => Signature::with_coords(n, c.clone()).or_else(|e| err(origin, e.to_string()))?,
        None => Signature::new(n),
    };
    let mut fields_only = sig.clone();
    let mut visible: HashMap<String, FieldId> = HashMap::new();
    for d in &file.fields {
        if sig.coords().contains(&d.name) || visible.contains_key(&d.name) {
            return err(d.pos, format!("`{}` is declared twice", d.name));
        }
        let spec = FieldSpec::field(d.name.clone(), d.parity, d.groups.clone());
        let id = sig.add(spec.clone()).or_else(|e| err(d.pos, e.to_string()))?;
        fields_only.add(spec).expect("same names as above");
        visible.insert(d.name.clone(), id);
    }
    // Antifields, in the same order the complex creates them.
    let mut antifields: HashMap<String, FieldId> = HashMap::new();
    for d in &file.fields {
        let id = visible[&d.name];
        let name = format!("{}_bar", d.name);
        if visible.contains_key(&name) {
            return err(d.pos, format!("`{name}` clashes with a declared field"));
        }
        let bar = sig
            .add(FieldSpec {
                name: name.clone(),
                parity: d.parity.flip(),
                antifield_number: 1,
                index_groups: d.groups.clone(),
                role: FieldRole::Antifield { of: id },
            })
            .or_else(|e| err(d.pos, e.to_string()))?;
        antifields.insert(name, bar);
    }

    let lagrangian = match &file.lagrangian {
        Some(e) => {
            let ctx = Ctx { sig: &sig, visible: &visible, antifields: &antifields, allow_antifields: false };
            let l = ctx.eval(&mut Vec::new(), e)?;
            if !l.parity().admits(Parity::Even) {
                return err(e.pos, "parity mismatch: the lagrangian must be even");
            }
            l
        }
        None => GradedPoly::zero(),
    };

    let mut all = visible.clone();
    all.extend(antifields.iter().map(|(k, v)| (k.clone(), *v)));
    let mut stages: BTreeMap<usize, Vec<StageFamily>> = BTreeMap::new();
    let mut current = 0usize;
    for s in &file.stages {
        if s.stage < current {
            return err(s.pos, format!("stage {} declared after stage {current}", s.stage));
        }
        if s.stage > current && (s.stage > current + 1 || !stages.contains_key(&current)) || (s.stage > 0 && stages.is_empty()) {
            return err(s.pos, format!("stage {} declared before stage {}", s.stage, s.stage - 1));
        }
        current = s.stage;
        if all.contains_key(&s.name) || sig.coords().contains(&s.name) {
            return err(s.pos, format!("`{}` is declared twice", s.name));
        }
        let groups = if s.groups.is_empty() && !s.indices.is_empty() {
            vec![IndexGroup::plain(s.indices.len())]
        } else {
            s.groups.clone()
        };
        let arity: usize = groups.iter().map(|g| g.count).sum();
        if arity != s.indices.len() {
            return err(
                s.pos,
                format!("arity mismatch: `{}` names {} indices but its groups hold {arity}", s.name, s.indices.len()),
            );
        }
        let ctx = Ctx { sig: &sig, visible: &all, antifields: &antifields, allow_antifields: true };
        let mut fam = StageFamily::new(s.name.clone(), groups.clone());
        let mut parity: Option<Parity> = None;
        for comp in components(n, &groups) {
            let mut env: Env = s.indices.iter().cloned().zip(comp.iter().copied()).collect();
            let p = ctx.eval(&mut env, &s.expr)?;
            match p.parity() {
                Homogeneity::Mixed => {
                    return err(s.expr.pos, "parity mismatch: stage operator mixes even and odd terms");
                }
                Homogeneity::Pure(q) => {
                    if parity.is_some_and(|r| r != q) {
                        return err(s.expr.pos, "parity mismatch: components of the stage family differ in parity");
                    }
                    parity = Some(q);
                }
                Homogeneity::Any => {}
            }
            fam = fam.with(comp, p);
        }
        // The family's antifield, visible to later stages.
        let id = sig
            .add(FieldSpec {
                name: s.name.clone(),
                parity: parity.unwrap_or(Parity::Even).flip(),
                antifield_number: s.stage as u32 + 2,
                index_groups: groups,
                role: FieldRole::StageAntifield { stage: s.stage },
            })
            .or_else(|e| err(s.pos, e.to_string()))?;
        all.insert(s.name.clone(), id);
        stages.entry(s.stage).or_default().push(fam);
    }
    Ok(Model {
        file: file.clone(),
        signature: fields_only,
        lagrangian: Density::new(lagrangian),
        stages: stages.into_values().collect(),
    })
}
