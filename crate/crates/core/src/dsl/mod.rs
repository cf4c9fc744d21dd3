//! Text format for charts, ideals, spectral problems and connections, with
//! a canonical printer, JSON/text reports and the command-line driver.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! coordinates x, t, u          chart with d(c) = dc
//! independent x, t             jet plane; with `dependent q, ...`
//! param beta, lambda           constants (bindable from the command line)
//! generator omega1 : 1         abstract generator of a free algebra
//! rule d(omega1) = theta1 + 2*i*omega2 ^ omega3
//! let m = u - q                scalar or form definition
//! ideal name ... end           lines `xi1 = du ^ dt - p*dx ^ dt`
//! eliminate p = u_x            ordered section substitutions
//! akns name ... end            fields r, q, A, B, C (A, B, C Laurent in eta)
//! connection name ... end      fields F, G as [[a, b], [c, d]]
//! evolution q_t = q_xxx + 6*q*q_x
//! default order = 5
//! ```
//!
//! Expressions: `+ -` bind loosest, then `* / ^` (left associative, `^` is
//! the wedge product), unary `-`, then `**` with an integer exponent.
//! Atoms are integers, `i`, names, jets such as `u_xxt`, `d(...)`,
//! `exp(...)` and parentheses.

mod ast;
pub mod cli;
mod fixtures;
mod lexer;
mod model;
mod parser;
pub mod report;

pub use ast::{BinOp, Binding, Expr, ExprKind, ModelFile, Stmt, StmtKind};
pub use fixtures::{fixture, FIXTURES};
pub use model::{elaborate, load, Chart, Model, Value};
pub use parser::{parse, parse_expr, MAX_EXPONENT};

use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    UnknownSymbol,
    DegreeMismatch,
    Model,
    Engine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl DslError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        DslError { pos, kind: ErrorKind::Syntax, message: format!("syntax error: {}", msg.into()) }
    }

    pub fn unknown(pos: Pos, name: &str) -> Self {
        DslError { pos, kind: ErrorKind::UnknownSymbol, message: format!("unknown symbol `{name}`") }
    }

    pub fn degree(pos: Pos, left: u32, right: u32) -> Self {
        DslError {
            pos,
            kind: ErrorKind::DegreeMismatch,
            message: format!("degree mismatch: {left}-form against {right}-form"),
        }
    }

    pub fn model(pos: Pos, msg: impl Into<String>) -> Self {
        DslError { pos, kind: ErrorKind::Model, message: msg.into() }
    }

    pub fn engine(pos: Pos, err: impl fmt::Display) -> Self {
        DslError { pos, kind: ErrorKind::Engine, message: err.to_string() }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for DslError {}
