use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::ast::{AExpr, ArithOp, BExpr, CmpOp, Program};
use super::lexer::{tokenize, Token, TokenKind};
use crate::rational::Rational;

const MAX_NESTING: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("{line}:{col}: malformed rational literal: {msg}")]
    MalformedLiteral { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: nesting deeper than {MAX_NESTING} levels")]
    TooDeep { line: usize, col: usize },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::MalformedLiteral { line, col, .. }
            | ParseError::TooDeep { line, col } => (*line, *col),
        }
    }
}

/// Soft failures may be retried by an alternative; hard ones abort the parse.
enum Fail {
    Soft,
    Hard(ParseError),
}

type PResult<T> = Result<T, Fail>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    furthest: usize,
    expected: BTreeSet<String>,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0, depth: 0, furthest: 0, expected: BTreeSet::new() }
    }

    fn peek(&self) -> &TokenKind {
        &self.toks[self.pos].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&mut self, what: &str) -> PResult<T> {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest {
            self.expected.insert(what.to_string());
        }
        Err(Fail::Soft)
    }

    /// Records an alternative that was possible here without failing.
    fn note(&mut self, what: &str) {
        let _: PResult<()> = self.fail(what);
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.fail(&format!("`{}`", kind.text()))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let t = &self.toks[self.pos];
            return Err(Fail::Hard(ParseError::TooDeep { line: t.line, col: t.col }));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn into_error(self, fail: Fail) -> ParseError {
        match fail {
            Fail::Hard(e) => e,
            Fail::Soft => {
                let t = &self.toks[self.furthest];
                ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    found: t.kind.describe(),
                    expected: self.expected.into_iter().collect(),
                }
            }
        }
    }

    fn program(&mut self) -> PResult<Program> {
        if matches!(self.peek(), TokenKind::RBrace | TokenKind::Eof) {
            return Ok(Program::Empty);
        }
        let mut stmts = vec![self.stmt()?];
        while self.eat(&TokenKind::Semi) {
            stmts.push(self.stmt()?);
        }
        self.note("`;`");
        Ok(Program::seq_all(stmts))
    }

    fn braced(&mut self) -> PResult<Program> {
        self.expect(TokenKind::LBrace)?;
        self.enter()?;
        let p = self.program()?;
        self.leave();
        self.expect(TokenKind::RBrace)?;
        Ok(p)
    }

    /// A primary statement optionally followed by choice operators, which
    /// associate to the left.
    fn stmt(&mut self) -> PResult<Program> {
        let mut left = self.primary()?;
        loop {
            if self.eat(&TokenKind::Box) {
                let right = self.primary()?;
                left = Program::nondet(left, right);
            } else if self.eat(&TokenKind::Lt) {
                let p = self.aexpr()?;
                self.expect(TokenKind::Gt)?;
                let right = self.primary()?;
                left = Program::prob(left, p, right);
            } else {
                return Ok(left);
            }
        }
    }

    fn primary(&mut self) -> PResult<Program> {
        match self.peek().clone() {
            TokenKind::Skip => {
                self.bump();
                Ok(Program::Skip)
            }
            TokenKind::Exit => {
                self.bump();
                Ok(Program::Exit)
            }
            TokenKind::Ident(name) => {
                self.bump();
                self.expect(TokenKind::ColonEq)?;
                let e = self.aexpr()?;
                Ok(Program::Assign(name, e))
            }
            TokenKind::While => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let g = self.bexpr()?;
                self.expect(TokenKind::RParen)?;
                let body = self.braced()?;
                Ok(Program::while_loop(g, body))
            }
            TokenKind::If => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let g = self.bexpr()?;
                self.expect(TokenKind::RParen)?;
                let then = self.braced()?;
                let other = if self.eat(&TokenKind::Else) { self.braced()? } else { Program::Empty };
                Ok(Program::if_else(g, then, other))
            }
            TokenKind::LBrace => self.braced(),
            _ => self.fail("a statement"),
        }
    }

    fn aexpr(&mut self) -> PResult<AExpr> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc = AExpr::Bin(op, Box::new(acc), Box::new(rhs));
        }
        self.leave();
        Ok(acc)
    }

    fn term(&mut self) -> PResult<AExpr> {
        let mut acc = self.unary()?;
        while self.eat(&TokenKind::Star) {
            let rhs = self.unary()?;
            acc = AExpr::Bin(ArithOp::Mul, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<AExpr> {
        if self.eat(&TokenKind::Minus) {
            if matches!(self.peek(), TokenKind::Int(_)) {
                let r = self.rational()?;
                return Ok(AExpr::Lit(-r));
            }
            self.enter()?;
            let inner = self.unary()?;
            self.leave();
            return Ok(AExpr::neg(inner));
        }
        self.atom()
    }

    fn rational(&mut self) -> PResult<Rational> {
        let tok = self.bump();
        let TokenKind::Int(num) = tok.kind else {
            unreachable!("caller checked for an integer token")
        };
        let mut den = BigInt::from(1);
        if self.peek() == &TokenKind::Slash {
            self.bump();
            match self.peek().clone() {
                TokenKind::Int(d) => {
                    self.bump();
                    den = d;
                }
                _ => {
                    let t = &self.toks[self.pos];
                    return Err(Fail::Hard(ParseError::MalformedLiteral {
                        line: t.line,
                        col: t.col,
                        msg: format!("denominator must be an integer, found {}", t.kind.describe()),
                    }));
                }
            }
        }
        if den.is_zero() {
            return Err(Fail::Hard(ParseError::MalformedLiteral {
                line: tok.line,
                col: tok.col,
                msg: "zero denominator".to_string(),
            }));
        }
        Ok(Rational::new(num, den))
    }

    fn atom(&mut self) -> PResult<AExpr> {
        match self.peek().clone() {
            TokenKind::Int(_) => Ok(AExpr::Lit(self.rational()?)),
            TokenKind::Ident(name) => {
                self.bump();
                Ok(AExpr::Var(name))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.aexpr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            _ => self.fail("an arithmetic expression"),
        }
    }

    fn bexpr(&mut self) -> PResult<BExpr> {
        self.enter()?;
        let mut acc = self.conj()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.conj()?;
            acc = BExpr::or(acc, rhs);
        }
        self.leave();
        Ok(acc)
    }

    fn conj(&mut self) -> PResult<BExpr> {
        let mut acc = self.negation()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.negation()?;
            acc = BExpr::and(acc, rhs);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> PResult<BExpr> {
        if self.eat(&TokenKind::Not) {
            self.enter()?;
            let inner = self.negation()?;
            self.leave();
            return Ok(BExpr::not(inner));
        }
        self.batom()
    }

    fn batom(&mut self) -> PResult<BExpr> {
        match self.peek() {
            TokenKind::True => {
                self.bump();
                Ok(BExpr::Lit(true))
            }
            TokenKind::False => {
                self.bump();
                Ok(BExpr::Lit(false))
            }
            TokenKind::LParen => {
                let save = self.pos;
                match self.comparison() {
                    Ok(b) => Ok(b),
                    Err(Fail::Hard(e)) => Err(Fail::Hard(e)),
                    Err(Fail::Soft) => {
                        self.pos = save;
                        self.bump();
                        let b = self.bexpr()?;
                        self.expect(TokenKind::RParen)?;
                        Ok(b)
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<BExpr> {
        let lhs = self.aexpr()?;
        let op = match self.peek() {
            TokenKind::Eq => CmpOp::Eq,
            TokenKind::Ne => CmpOp::Ne,
            TokenKind::Lt => CmpOp::Lt,
            TokenKind::Le => CmpOp::Le,
            TokenKind::Gt => CmpOp::Gt,
            TokenKind::Ge => CmpOp::Ge,
            _ => return self.fail("a comparison operator"),
        };
        self.bump();
        let rhs = self.aexpr()?;
        Ok(BExpr::Cmp(op, lhs, rhs))
    }

    fn finish<T>(mut self, r: PResult<T>) -> Result<T, ParseError> {
        match r {
            Ok(v) if self.peek() == &TokenKind::Eof => Ok(v),
            Ok(_) => {
                let e: PResult<()> = self.fail("end of input");
                let Err(f) = e else { unreachable!() };
                Err(self.into_error(f))
            }
            Err(f) => Err(self.into_error(f)),
        }
    }
}

/// Parses program text. An empty source (or `{ }`) is the empty program.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(tokenize(source)?);
    let r = p.program();
    p.finish(r)
}

pub fn parse_aexpr(source: &str) -> Result<AExpr, ParseError> {
    let mut p = Parser::new(tokenize(source)?);
    let r = p.aexpr();
    p.finish(r)
}

pub fn parse_bexpr(source: &str) -> Result<BExpr, ParseError> {
    let mut p = Parser::new(tokenize(source)?);
    let r = p.bexpr();
    p.finish(r)
}
