//! Terms, contexts, parallel substitution and weak-head classification.

mod class;
mod context;
mod subst;
mod term;

pub use class::Class;
pub use context::Context;
pub use subst::Subst;
pub use term::{Head, Term};
