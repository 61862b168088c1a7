//! Well-typed generators and the differential and property runners built on
//! them.
//!
//! Every query is generated from its own ChaCha stream, selected by the
//! configuration seed and the query index, so reports are reproducible and
//! independent of evaluation order.

mod diff;
mod gen;
mod props;
mod shrink;

use std::fmt;

use thiserror::Error;

use crate::surface::print;
use crate::syntax::{Context, Term};

pub use diff::{diff_one, diff_run, DiffRecord, DiffReport, Disagreement, DIFF_FUEL};
pub use gen::{gen_term, gen_type, Gen, GEN_FUEL};
pub use props::{property_run, run_suite, PropFailure, PropReport, Suite, PROP_FUEL};
pub use shrink::shrink;

/// Relative frequency of each generator move. Type formers double as codes
/// when the target is the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub univ: u32,
    pub nat: u32,
    pub empty: u32,
    pub pi: u32,
    pub sig: u32,
    pub id: u32,
    /// A type given as a term of the universe.
    pub code: u32,
    pub var: u32,
    pub lam: u32,
    pub pair: u32,
    pub zero: u32,
    pub succ: u32,
    pub refl: u32,
    pub beta: u32,
    pub proj: u32,
    pub natrec: u32,
    /// `natrec` into the universe, computing the target type.
    pub large_elim: u32,
    pub idrec: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            univ: 1,
            nat: 4,
            empty: 1,
            pi: 3,
            sig: 2,
            id: 1,
            code: 2,
            var: 6,
            lam: 4,
            pair: 4,
            zero: 2,
            succ: 3,
            refl: 3,
            beta: 2,
            proj: 1,
            natrec: 2,
            large_elim: 1,
            idrec: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub max_ctx_len: usize,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0x6d6c_7474,
            max_depth: 4,
            max_ctx_len: 3,
            weights: Weights::default(),
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let w = &self.weights;
        if self.max_depth < 1 {
            return Err(HarnessError::Config("max_depth must be at least 1".into()));
        }
        let types = [w.univ, w.nat, w.empty, w.pi, w.sig, w.id, w.code];
        let terms = [w.var, w.lam, w.pair, w.zero, w.succ, w.refl, w.beta, w.proj, w.natrec];
        if types.iter().all(|&k| k == 0) {
            return Err(HarnessError::Config("no type former has positive weight".into()));
        }
        if terms.iter().all(|&k| k == 0) {
            return Err(HarnessError::Config("no term former has positive weight".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A generated query: terms that all check at `ty` in `ctx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ctx: Context,
    pub ty: Term,
    pub terms: Vec<Term>,
}

impl Instance {
    pub fn size(&self) -> usize {
        self.terms.iter().map(Term::size).sum()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.ctx.len()).map(|k| format!("x{k}")).collect();
        for (k, ty) in self.ctx.entries().iter().enumerate() {
            write!(f, "({} : {}) ", names[k], print(ty, &names[..k]))?;
        }
        let terms: Vec<String> = self.terms.iter().map(|t| print(t, &names)).collect();
        write!(f, "|- {} : {}", terms.join(" == "), print(&self.ty, &names))
    }
}
