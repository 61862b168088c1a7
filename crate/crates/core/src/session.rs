//! Fuel, verdicts and the per-query session threaded through every
//! algorithm.
//!
//! All algorithms are partial, so they run against a fuel budget: one unit
//! per one-step reduction and one unit per algorithmic rule application. The
//! reduction wrappers (`TyRed`, `TTmRed`, `UTmRed`, `NRed`, `InfRed`) only pay
//! for the reduction steps they trigger. Nesting depth is bounded as well, so
//! a runaway η-expansion on an ill-typed input ends in `OutOfFuel` instead of
//! exhausting the native stack.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Head, Term};

/// Maximum nesting of rule applications inside one query.
pub const MAX_DEPTH: usize = 1500;

/// Result of a fuel-bounded algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Accept(T),
    Reject(Rejection),
    OutOfFuel,
}

pub type ConvVerdict = Outcome<()>;
pub type NeuVerdict = Outcome<Term>;
pub type InferVerdict = Outcome<Term>;

impl<T> Outcome<T> {
    pub fn is_accept(&self) -> bool {
        matches!(self, Outcome::Accept(_))
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, Outcome::Reject(_))
    }

    pub fn is_out_of_fuel(&self) -> bool {
        matches!(self, Outcome::OutOfFuel)
    }

    pub fn accepted(self) -> Option<T> {
        match self {
            Outcome::Accept(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Accept(t) => Outcome::Accept(f(t)),
            Outcome::Reject(r) => Outcome::Reject(r),
            Outcome::OutOfFuel => Outcome::OutOfFuel,
        }
    }

    /// Forgets the payload, keeping the verdict.
    pub fn kind(&self) -> VerdictKind {
        match self {
            Outcome::Accept(_) => VerdictKind::Accept,
            Outcome::Reject(_) => VerdictKind::Reject,
            Outcome::OutOfFuel => VerdictKind::OutOfFuel,
        }
    }
}

impl<T> From<Res<T>> for Outcome<T> {
    fn from(r: Res<T>) -> Self {
        match r {
            Ok(t) => Outcome::Accept(t),
            Err(Halt::Reject(r)) => Outcome::Reject(r),
            Err(Halt::OutOfFuel) => Outcome::OutOfFuel,
        }
    }
}

/// Payload-free verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerdictKind {
    Accept,
    Reject,
    OutOfFuel,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Accept => "accept",
            VerdictKind::Reject => "reject",
            VerdictKind::OutOfFuel => "out-of-fuel",
        })
    }
}

/// Why a query was rejected: the rule path from the root query to the
/// failing subgoal, and what went wrong there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    /// Rule names from the root to the failing subgoal. The last element
    /// names the judgment at which no rule applied.
    pub path: Vec<&'static str>,
    pub reason: Reason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [at {}]", self.reason, self.path.join(" > "))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Reason {
    #[error("head mismatch: {left} vs {right}")]
    HeadMismatch { left: Head, right: Head },
    #[error("distinct variables #{left} and #{right}")]
    VarMismatch { left: usize, right: usize },
    #[error("variable #{0} is not bound in the context")]
    Unbound(usize),
    #[error("expected {expected}, found {found}")]
    Expected { expected: Head, found: Head },
    #[error("{0} is not a type")]
    NotAType(Head),
    #[error("{0} has no type")]
    Untypable(Head),
    #[error("{0} cannot inhabit the type {1}")]
    IllTyped(Head, Head),
    #[error("{0} is not in weak-head normal form")]
    NotWhnf(Head),
    #[error("context entry {index} is not a well-formed type")]
    BadContextEntry { index: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Internal failure channel; converted to [`Outcome`] at the API boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Halt {
    Reject(Rejection),
    OutOfFuel,
}

pub type Res<T> = Result<T, Halt>;

/// A rule firing, reported to the trace sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub rule: &'static str,
    pub depth: usize,
}

/// Fuel budget. Counts consumed units against a fixed limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    limit: u64,
    used: u64,
}

impl Fuel {
    pub fn new(limit: u64) -> Fuel {
        Fuel { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn tick(&mut self) -> Res<()> {
        if self.used >= self.limit {
            return Err(Halt::OutOfFuel);
        }
        self.used += 1;
        Ok(())
    }
}

/// State of one query: fuel, the active rule stack, an optional trace sink,
/// and whether entry points re-check their typing preconditions.
pub struct Session<'a> {
    fuel: Fuel,
    stack: Vec<&'static str>,
    sink: Option<Box<dyn FnMut(TraceEvent) + 'a>>,
    check_preconditions: bool,
}

impl fmt::Debug for Session<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session")
            .field("fuel", &self.fuel)
            .field("stack", &self.stack)
            .field("tracing", &self.sink.is_some())
            .field("check_preconditions", &self.check_preconditions)
            .finish()
    }
}

impl<'a> Session<'a> {
    pub fn new(fuel: u64) -> Session<'a> {
        Session {
            fuel: Fuel::new(fuel),
            stack: Vec::new(),
            sink: None,
            check_preconditions: false,
        }
    }

    pub fn with_trace(mut self, sink: impl FnMut(TraceEvent) + 'a) -> Session<'a> {
        self.sink = Some(Box::new(sink));
        self
    }

    pub fn with_preconditions(mut self, on: bool) -> Session<'a> {
        self.check_preconditions = on;
        self
    }

    pub fn checks_preconditions(&self) -> bool {
        self.check_preconditions
    }

    pub fn fuel_used(&self) -> u64 {
        self.fuel.used()
    }

    pub fn fuel_limit(&self) -> u64 {
        self.fuel.limit
    }

    /// Pays for one reduction step.
    pub(crate) fn tick(&mut self) -> Res<()> {
        self.fuel.tick()
    }

    fn emit(&mut self, rule: &'static str) {
        let depth = self.stack.len();
        if let Some(sink) = self.sink.as_mut() {
            sink(TraceEvent { rule, depth });
        }
    }

    /// Applies a rule: pays one unit of fuel, reports it, and runs `body`
    /// with the rule on the active stack.
    pub(crate) fn rule<T>(
        &mut self,
        name: &'static str,
        body: impl FnOnce(&mut Self) -> Res<T>,
    ) -> Res<T> {
        self.fuel.tick()?;
        self.enter(name, body)
    }

    /// Like [`Session::rule`], for wrappers whose cost is the reduction they trigger.
    pub(crate) fn wrapper<T>(
        &mut self,
        name: &'static str,
        body: impl FnOnce(&mut Self) -> Res<T>,
    ) -> Res<T> {
        self.enter(name, body)
    }

    /// Runs `body` without reporting a rule: used for `NRed` and `InfRed`,
    /// which only normalise an inferred type.
    pub(crate) fn silent<T>(&mut self, body: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        if self.stack.len() >= MAX_DEPTH {
            return Err(Halt::OutOfFuel);
        }
        body(self)
    }

    fn enter<T>(&mut self, name: &'static str, body: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        if self.stack.len() >= MAX_DEPTH {
            return Err(Halt::OutOfFuel);
        }
        self.emit(name);
        self.stack.push(name);
        let out = body(self);
        self.stack.pop();
        out
    }

    /// Builds a rejection at the current point. `judgment` names the
    /// judgment at which no rule applied.
    pub(crate) fn reject<T>(&self, judgment: &'static str, reason: Reason) -> Res<T> {
        let mut path = self.stack.clone();
        path.push(judgment);
        Err(Halt::Reject(Rejection { path, reason }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuel_counts_exactly() {
        let mut f = Fuel::new(2);
        assert!(f.tick().is_ok());
        assert!(f.tick().is_ok());
        assert_eq!(f.tick(), Err(Halt::OutOfFuel));
        assert_eq!(f.used(), 2);
    }

    #[test]
    fn rejection_path_is_never_empty() {
        let s = Session::new(1);
        let r: Res<()> = s.reject("TmConvRed", Reason::NotAType(Head::Zero));
        match r {
            Err(Halt::Reject(r)) => assert_eq!(r.path, vec!["TmConvRed"]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn trace_depths_follow_nesting() {
        let mut events = Vec::new();
        {
            let mut s = Session::new(10).with_trace(|e| events.push((e.rule, e.depth)));
            s.rule("A", |s| s.rule("B", |s| s.wrapper("C", |_| Ok(()))))
                .unwrap();
            assert_eq!(s.fuel_used(), 2);
        }
        assert_eq!(events, vec![("A", 0), ("B", 1), ("C", 2)]);
    }
}
