//! Model files.
//!
//! ```text
//! # topological BF model in two dimensions
//! base_dim 2
//! field A even
//! field B even antisym(1)
//! lagrangian = A*sum(mu, nu: eps(mu, nu)*d(mu, B[nu]))
//! stage 0 c0 = sum(nu: d(nu, B_bar[nu]))
//! ```
//!
//! Declarations: `base_dim N`, optional `coords NAME...` (default
//! `x1..xN`), `field NAME even|odd [antisym(k)|plain(k)]...`,
//! `lagrangian = EXPR` and `stage K NAME[IDX, ...] [groups] = EXPR`.
//! Each field `F` gets an antifield `F_bar`; each stage family name refers
//! to its stage antifield in later stages. Expressions use rational
//! literals `p/q`, `+ - * ^`, components `B[mu, 1]`, jets `y_(1,1)`,
//! `d(λ, e)`, `eps(...)` and `sum(i, j: e)`.

mod ast;
mod elaborate;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{Expr, ExprKind, FieldDecl, Index, IndexRef, ModelFile, Pos, StageDecl};
pub use elaborate::Model;

/// A diagnostic with a 1-based source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses and validates a model file.
pub fn parse_model(src: &str) -> Result<ModelFile, ParseError> {
    Ok(load_model(src)?.file)
}

/// Parses, validates and evaluates a model file.
pub fn load_model(src: &str) -> Result<Model, ParseError> {
    let file = parser::parse_syntax(src)?;
    elaborate::elaborate(&file)
}

#[cfg(test)]
mod tests;
