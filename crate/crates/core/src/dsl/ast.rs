use std::fmt;

use num_traits::One;

use crate::algebra::{IndexGroup, Parity, Symmetry};
use crate::Q;

/// Source position. Positions never take part in equality, so a parsed
/// model compares equal to the re-parse of its serialization.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Num(u64),
    /// A coordinate name or a bound index variable.
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRef {
    pub index: Index,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    /// Non-negative rational literal.
    Num(Q),
    /// Field, antifield or coordinate reference with optional component
    /// indices and jet subscript.
    Var { name: String, indices: Vec<IndexRef>, jet: Vec<IndexRef> },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    D(IndexRef, Box<Expr>),
    Eps(Vec<IndexRef>),
    Sum(Vec<String>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub parity: Parity,
    pub groups: Vec<IndexGroup>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageDecl {
    pub stage: usize,
    pub name: String,
    pub indices: Vec<String>,
    pub groups: Vec<IndexGroup>,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub base_dim: usize,
    pub coords: Option<Vec<String>>,
    pub fields: Vec<FieldDecl>,
    pub lagrangian: Option<Expr>,
    pub stages: Vec<StageDecl>,
}

impl Expr {
    fn level(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_indices(f: &mut fmt::Formatter<'_>, idx: &[IndexRef]) -> fmt::Result {
    for (i, x) in idx.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        match &x.index {
            Index::Num(n) => write!(f, "{n}")?,
            Index::Name(s) => f.write_str(s)?,
        }
    }
    Ok(())
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, min_level: u8) -> fmt::Result {
    if e.level() < min_level {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            ExprKind::Var { name, indices, jet } => {
                f.write_str(name)?;
                if !indices.is_empty() {
                    f.write_str("[")?;
                    write_indices(f, indices)?;
                    f.write_str("]")?;
                }
                if !jet.is_empty() {
                    f.write_str("_(")?;
                    write_indices(f, jet)?;
                    f.write_str(")")?;
                }
                Ok(())
            }
            ExprKind::Add(a, b) => {
                paren(f, a, 1)?;
                f.write_str(" + ")?;
                paren(f, b, 2)
            }
            ExprKind::Sub(a, b) => {
                paren(f, a, 1)?;
                f.write_str(" - ")?;
                paren(f, b, 2)
            }
            ExprKind::Mul(a, b) => {
                paren(f, a, 2)?;
                f.write_str("*")?;
                paren(f, b, 3)
            }
            ExprKind::Neg(a) => {
                f.write_str("-")?;
                paren(f, a, 3)
            }
            ExprKind::Pow(a, k) => {
                paren(f, a, 5)?;
                write!(f, "^{k}")
            }
            ExprKind::D(l, e) => {
                f.write_str("d(")?;
                write_indices(f, std::slice::from_ref(l))?;
                write!(f, ", {e})")
            }
            ExprKind::Eps(idx) => {
                f.write_str("eps(")?;
                write_indices(f, idx)?;
                f.write_str(")")
            }
            ExprKind::Sum(vars, e) => write!(f, "sum({}: {e})", vars.join(", ")),
        }
    }
}

fn write_groups(f: &mut fmt::Formatter<'_>, groups: &[IndexGroup]) -> fmt::Result {
    for g in groups {
        match g.symmetry {
            Symmetry::Antisymmetric => write!(f, " antisym({})", g.count)?,
            Symmetry::None => write!(f, " plain({})", g.count)?,
        }
    }
    Ok(())
}

/// Canonical model text; parsing it yields an equal [`ModelFile`].
impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base_dim {}", self.base_dim)?;
        if let Some(c) = &self.coords {
            writeln!(f, "coords {}", c.join(" "))?;
        }
        for d in &self.fields {
            write!(f, "field {} {}", d.name, d.parity)?;
            write_groups(f, &d.groups)?;
            writeln!(f)?;
        }
        if let Some(l) = &self.lagrangian {
            writeln!(f, "lagrangian = {l}")?;
        }
        for s in &self.stages {
            write!(f, "stage {} {}", s.stage, s.name)?;
            if !s.indices.is_empty() {
                write!(f, "[{}]", s.indices.join(", "))?;
            }
            write_groups(f, &s.groups)?;
            writeln!(f, " = {}", s.expr)?;
        }
        Ok(())
    }
}

impl ModelFile {
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn num(q: Q, pos: Pos) -> Expr {
    Expr { kind: ExprKind::Num(q), pos }
}
