use super::ast::{num, Expr, ExprKind, FieldDecl, Index, IndexRef, ModelFile, Pos, StageDecl};
use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::algebra::{IndexGroup, Parity};
use crate::Q;

pub const KEYWORDS: &[&str] = &[
    "base_dim", "coords", "field", "lagrangian", "stage", "d", "eps", "sum", "even", "odd", "antisym", "plain",
];

const STATEMENTS: &[&str] = &["base_dim", "coords", "field", "lagrangian", "stage"];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn pos(&self) -> Pos {
        let t = self.peek();
        Pos { line: t.line, col: t.col }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let p = self.pos();
        Err(ParseError::new(p.line, p.col, msg))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}, found {}", tok.describe(), self.peek().tok.describe()))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            ref t => self.err(format!("expected an integer, found {}", t.describe())),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => self.err(format!("`{s}` is a reserved word")),
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected {what}, found {}", t.describe())),
        }
    }

    fn groups(&mut self) -> Result<Vec<IndexGroup>, ParseError> {
        let mut out = Vec::new();
        loop {
            let anti = if self.is_keyword("antisym") {
                true
            } else if self.is_keyword("plain") {
                false
            } else {
                return Ok(out);
            };
            self.bump();
            self.expect(Tok::LParen)?;
            let p = self.pos();
            let k = self.int()? as usize;
            if k == 0 {
                return Err(ParseError::new(p.line, p.col, "index group must have at least one index"));
            }
            self.expect(Tok::RParen)?;
            out.push(if anti { IndexGroup::antisymmetric(k) } else { IndexGroup::plain(k) });
        }
    }

    fn file(&mut self) -> Result<ModelFile, ParseError> {
        let mut base_dim = None;
        let mut coords = None;
        let mut fields = Vec::new();
        let mut lagrangian = None;
        let mut stages = Vec::new();
        while self.peek().tok != Tok::Eof {
            let pos = self.pos();
            let kw = match &self.peek().tok {
                Tok::Ident(s) if STATEMENTS.contains(&s.as_str()) => s.clone(),
                t => return self.err(format!("expected a declaration, found {}", t.describe())),
            };
            self.bump();
            match kw.as_str() {
                "base_dim" => {
                    if base_dim.is_some() {
                        return Err(ParseError::new(pos.line, pos.col, "duplicate base_dim"));
                    }
                    let p = self.pos();
                    let n = self.int()? as usize;
                    if !(1..=9).contains(&n) {
                        return Err(ParseError::new(p.line, p.col, "base_dim must be between 1 and 9"));
                    }
                    base_dim = Some(n);
                }
                "coords" => {
                    let mut names = Vec::new();
                    while let Tok::Ident(s) = &self.peek().tok {
                        if STATEMENTS.contains(&s.as_str()) {
                            break;
                        }
                        names.push(self.ident("a coordinate name")?);
                    }
                    coords = Some(names);
                }
                "field" => {
                    let name = self.ident("a field name")?;
                    let parity = if self.is_keyword("even") {
                        Parity::Even
                    } else if self.is_keyword("odd") {
                        Parity::Odd
                    } else {
                        return self.err("expected `even` or `odd`");
                    };
                    self.bump();
                    let groups = self.groups()?;
                    fields.push(FieldDecl { name, parity, groups, pos });
                }
                "lagrangian" => {
                    if lagrangian.is_some() {
                        return Err(ParseError::new(pos.line, pos.col, "duplicate lagrangian"));
                    }
                    self.expect(Tok::Eq)?;
                    lagrangian = Some(self.expr()?);
                }
                "stage" => {
                    let stage = self.int()? as usize;
                    let name = self.ident("a stage name")?;
                    let mut indices = Vec::new();
                    if self.eat(&Tok::LBracket) {
                        loop {
                            indices.push(self.ident("an index name")?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        self.expect(Tok::RBracket)?;
                    }
                    let groups = self.groups()?;
                    self.expect(Tok::Eq)?;
                    let expr = self.expr()?;
                    stages.push(StageDecl { stage, name, indices, groups, expr, pos });
                }
                _ => unreachable!(),
            }
        }
        let Some(base_dim) = base_dim else {
            return self.err("missing base_dim");
        };
        Ok(ModelFile { base_dim, coords, fields, lagrangian, stages })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat(&Tok::Plus) {
                ExprKind::Add
            } else if self.eat(&Tok::Minus) {
                ExprKind::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr { kind: kind(Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if !self.eat(&Tok::Star) {
                return Ok(lhs);
            }
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        if self.eat(&Tok::Minus) {
            let e = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(e)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat(&Tok::Caret) {
            let p = self.pos();
            let k = self.int()?;
            let k = u32::try_from(k).map_err(|_| ParseError::new(p.line, p.col, "exponent too large"))?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), pos });
        }
        Ok(base)
    }

    fn index(&mut self) -> Result<IndexRef, ParseError> {
        let pos = self.pos();
        let index = match &self.peek().tok {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Index::Num(n)
            }
            Tok::Ident(_) => Index::Name(self.ident("an index")?),
            t => return self.err(format!("expected an index, found {}", t.describe())),
        };
        Ok(IndexRef { index, pos })
    }

    fn index_list(&mut self, close: Tok) -> Result<Vec<IndexRef>, ParseError> {
        let mut out = vec![self.index()?];
        while self.eat(&Tok::Comma) {
            out.push(self.index()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().tok.clone() {
            Tok::Int(p) => {
                self.bump();
                let mut q = Q::from_integer(p.into());
                if self.eat(&Tok::Slash) {
                    let dp = self.pos();
                    let d = self.int()?;
                    if d == 0 {
                        return Err(ParseError::new(dp.line, dp.col, "zero denominator"));
                    }
                    q /= Q::from_integer(d.into());
                }
                Ok(num(q, pos))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "d" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let l = self.index()?;
                self.expect(Tok::Comma)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::D(l, Box::new(e)), pos })
            }
            Tok::Ident(s) if s == "eps" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let idx = self.index_list(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::Eps(idx), pos })
            }
            Tok::Ident(s) if s == "sum" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut vars = vec![self.ident("an index name")?];
                while self.eat(&Tok::Comma) {
                    vars.push(self.ident("an index name")?);
                }
                self.expect(Tok::Colon)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr { kind: ExprKind::Sum(vars, Box::new(e)), pos })
            }
            Tok::Ident(_) => {
                let name = self.ident("an identifier")?;
                let indices = if self.eat(&Tok::LBracket) { self.index_list(Tok::RBracket)? } else { Vec::new() };
                let jet = if self.eat(&Tok::JetOpen) { self.index_list(Tok::RParen)? } else { Vec::new() };
                Ok(Expr { kind: ExprKind::Var { name, indices, jet }, pos })
            }
            t => self.err(format!("expected an expression, found {}", t.describe())),
        }
    }
}

/// Syntax only; see [`super::parse_model`] for the validated entry point.
pub fn parse_syntax(src: &str) -> Result<ModelFile, ParseError> {
    let toks = lex(src)?;
    Parser { toks, at: 0 }.file()
}
