//! Named surface syntax: queries, terms, and the printer back to text.
//!
//! ```text
//! T ::= (x : T) -> T | T -> T | (x : T) * T | T * T | U | Nat | Empty | Id T t t | t
//! t ::= \x:T. t | pair {x:T. T} (t, t) | fst t | snd t | zero | succ t | n
//!     | natrec (x. T) t (x y. t) t | emptyrec (x. T) t | refl T t
//!     | idrec T t (x y. T) t t | x | t t | (t)
//! ```
//!
//! A query is `DIRECTIVE (x : T)* |- PAYLOAD`; `--` starts a comment.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use crate::syntax::{Context, Term};

pub use parser::{parse_derivations, parse_queries, parse_query, parse_term};
pub use printer::print;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Directive {
    Check,
    Infer,
    Conv,
    Whnf,
    Nf,
    Validate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Check { term: Term, ty: Term },
    Infer(Term),
    Conv { lhs: Term, rhs: Term, ty: Term },
    Whnf(Term),
    Nf(Term),
    Validate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub directive: Directive,
    /// Named context entries, outermost first.
    pub ctx: Vec<(String, Term)>,
    pub payload: Payload,
    /// Line on which the query starts.
    pub line: usize,
}

impl Query {
    pub fn context(&self) -> Context {
        self.ctx.iter().map(|(_, t)| t.clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.ctx.iter().map(|(n, _)| n.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceError {
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    Scope {
        line: usize,
        column: usize,
        name: String,
    },
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::Syntax {
                line,
                column,
                expected,
                found,
            } => write!(
                f,
                "syntax error at {line}:{column}: expected {}, found {found}",
                expected.join(" or ")
            ),
            SurfaceError::Scope { line, column, name } => {
                write!(f, "scope error at {line}:{column}: unbound name `{name}`")
            }
        }
    }
}

impl std::error::Error for SurfaceError {}
