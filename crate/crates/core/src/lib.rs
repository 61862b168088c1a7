//! A kernel for Martin-Löf type theory with Π, Σ, ℕ, ⊥, identity types and
//! a universe.
//!
//! Two conversion checkers are provided: a type-directed one
//! ([`conv_typed`]) that η-expands at negative types, and a term-directed one
//! ([`conv_untyped`]) that never looks at types. Either can back the
//! bidirectional type checker in [`bidir`]. A validator for declarative
//! derivations ([`declarative`]), a type-directed deep normaliser
//! ([`normalize`]) and a generator-driven differential harness ([`harness`])
//! are used to cross-check them.
//!
//! Every algorithm is fuel-bounded and returns an [`Outcome`]: `Accept`,
//! `Reject` with a reason, or `OutOfFuel`.

pub mod bidir;
pub mod conv_typed;
pub mod conv_untyped;
pub mod declarative;
pub mod driver;
pub mod harness;
pub mod normalize;
pub mod reduction;
pub mod session;
pub mod surface;
pub mod syntax;

pub use bidir::{Backend, ConvBackend};
pub use session::{ConvVerdict, InferVerdict, NeuVerdict, Outcome, Reason, Rejection, Session};
pub use syntax::{Class, Context, Head, Subst, Term};
