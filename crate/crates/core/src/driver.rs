//! Executes parsed queries: picks the algorithm, runs it against a fuel
//! budget, and renders the verdict as an exit code and output text.

use std::cell::RefCell;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::bidir::{self, Backend};
use crate::conv_typed::{self, PRECONDITION_FUEL};
use crate::declarative;
use crate::normalize;
use crate::reduction::whnf_in;
use crate::session::{Outcome, Reason, Rejection, Session};
use crate::surface::{parse_derivations, parse_queries, print, Payload, Query, SurfaceError};
use crate::syntax::Term;

pub const DEFAULT_FUEL: u64 = 100_000;

/// Process exit status of a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exit {
    Accept = 0,
    Reject = 1,
    OutOfFuel = 2,
    Input = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl<T> From<&Outcome<T>> for Exit {
    fn from(o: &Outcome<T>) -> Exit {
        match o {
            Outcome::Accept(_) => Exit::Accept,
            Outcome::Reject(_) => Exit::Reject,
            Outcome::OutOfFuel => Exit::OutOfFuel,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub backend: Backend,
    pub fuel: u64,
    pub trace: bool,
    pub preconditions: bool,
    /// Directory against which `validate` resolves relative paths.
    pub base_dir: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            backend: Backend::Typed,
            fuel: DEFAULT_FUEL,
            trace: false,
            preconditions: false,
            base_dir: None,
        }
    }
}

/// Result of running one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub exit: Exit,
    pub output: String,
    /// One line per rule event: two spaces per depth level, then the rule name.
    pub trace: Vec<String>,
    pub fuel_used: u64,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.output)
    }
}

fn render<T>(o: Outcome<T>, fuel: u64, show: impl FnOnce(T) -> String) -> (Exit, String) {
    let exit = Exit::from(&o);
    let text = match o {
        Outcome::Accept(t) => show(t),
        Outcome::Reject(r) => format!("reject: {r}"),
        Outcome::OutOfFuel => format!("out of fuel (limit {fuel})"),
    };
    (exit, text)
}

/// Untyped conversion has no context; its typing precondition is that both
/// sides check at the stated type.
fn untyped_pre(q: &Query, lhs: &Term, rhs: &Term, ty: &Term) -> Outcome<()> {
    let ctx = q.context();
    for (side, t) in [("left", lhs), ("right", rhs)] {
        match bidir::check(&ctx, t, ty, &Backend::Typed, PRECONDITION_FUEL) {
            Outcome::Accept(()) => {}
            Outcome::OutOfFuel => return Outcome::OutOfFuel,
            Outcome::Reject(r) => {
                return Outcome::Reject(Rejection {
                    path: vec!["precondition"],
                    reason: Reason::Precondition(format!("{side} side is ill-typed: {r}")),
                })
            }
        }
    }
    Outcome::Accept(())
}

fn nf(s: &mut Session, q: &Query, t: &Term, backend: Backend) -> Outcome<Term> {
    let ctx = q.context();
    match bidir::infer_in(s, &ctx, t, &backend) {
        Outcome::Accept(ty) => normalize::deep_nf_tm_in(s, &ctx, &ty, t),
        Outcome::Reject(r) => {
            // `U` and other types without a code are normalised as types.
            if bidir::check_ty(&ctx, t, &backend, PRECONDITION_FUEL).is_accept() {
                normalize::deep_nf_ty_in(s, &ctx, t)
            } else {
                Outcome::Reject(r)
            }
        }
        Outcome::OutOfFuel => Outcome::OutOfFuel,
    }
}

fn validate(path: &str, opts: &Options) -> (Exit, String) {
    let full: PathBuf = match &opts.base_dir {
        Some(dir) if Path::new(path).is_relative() => dir.join(path),
        _ => PathBuf::from(path),
    };
    let src = match std::fs::read_to_string(&full) {
        Ok(s) => s,
        Err(e) => return (Exit::Input, format!("cannot read {}: {e}", full.display())),
    };
    let ds = match parse_derivations(&src) {
        Ok(ds) => ds,
        Err(e) => return (Exit::Input, format!("{}: {e}", full.display())),
    };
    for (i, d) in ds.iter().enumerate() {
        if let Err(e) = declarative::validate(d) {
            return (Exit::Reject, format!("reject: derivation {i}: {e}"));
        }
    }
    (Exit::Accept, format!("valid: {} derivations", ds.len()))
}

/// Runs one query.
pub fn run(q: &Query, opts: &Options) -> Report {
    let lines = RefCell::new(Vec::new());
    let mut s = Session::new(opts.fuel).with_preconditions(opts.preconditions);
    if opts.trace {
        s = s.with_trace(|ev| {
            lines
                .borrow_mut()
                .push(format!("{}{}", "  ".repeat(ev.depth), ev.rule))
        });
    }
    let ctx = q.context();
    let names = q.names();
    let show = |t: Term| print(&t, &names);
    let accept = |()| "accept".to_string();
    let (exit, output) = match &q.payload {
        Payload::Check { term, ty } => {
            render(bidir::check_in(&mut s, &ctx, term, ty, &opts.backend), opts.fuel, accept)
        }
        Payload::Infer(t) => render(bidir::infer_in(&mut s, &ctx, t, &opts.backend), opts.fuel, show),
        Payload::Conv { lhs, rhs, ty } => {
            let o = match opts.backend {
                Backend::Typed => conv_typed::conv_tm_in(&mut s, &ctx, ty, lhs, rhs),
                Backend::Untyped => match opts.preconditions {
                    true => match untyped_pre(q, lhs, rhs, ty) {
                        Outcome::Accept(()) => crate::conv_untyped::uconv_in(&mut s, lhs, rhs),
                        other => other,
                    },
                    false => crate::conv_untyped::uconv_in(&mut s, lhs, rhs),
                },
            };
            render(o, opts.fuel, accept)
        }
        Payload::Whnf(t) => render(whnf_in(&mut s, t).into(), opts.fuel, show),
        Payload::Nf(t) => render(nf(&mut s, q, t, opts.backend), opts.fuel, show),
        Payload::Validate(path) => validate(path, opts),
    };
    let fuel_used = s.fuel_used();
    drop(s);
    Report {
        exit,
        output,
        trace: lines.into_inner(),
        fuel_used,
    }
}

/// Parses and runs every query of a source. A parse or scope error stops
/// everything before any query runs.
pub fn run_source(src: &str, opts: &Options) -> Result<Vec<Report>, SurfaceError> {
    let qs = parse_queries(src)?;
    Ok(qs.iter().map(|q| run(q, opts)).collect())
}

/// Exit status of a batch: the worst of its queries, `Accept` when empty.
pub fn batch_exit(reports: &[Report]) -> Exit {
    reports.iter().map(|r| r.exit).max().unwrap_or(Exit::Accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_query;

    fn go(src: &str, backend: Backend) -> Report {
        let opts = Options {
            backend,
            fuel: 1000,
            trace: true,
            ..Options::default()
        };
        run(&parse_query(src).unwrap(), &opts)
    }

    #[test]
    fn typed_trace_expands_first() {
        let r = go("conv (x : Nat -> Nat) |- x == x : Nat -> Nat", Backend::Typed);
        assert_eq!(r.exit, Exit::Accept);
        assert_eq!(r.trace[0], "TTmRed");
        assert!(r.trace.iter().any(|l| l.trim() == "FunExp"));
    }

    #[test]
    fn untyped_trace_compares_neutrals() {
        let r = go("conv (x : Nat -> Nat) |- x == x : Nat -> Nat", Backend::Untyped);
        assert_eq!(r.exit, Exit::Accept);
        let rules: Vec<&str> = r.trace.iter().map(|l| l.trim()).collect();
        let neu = rules.iter().position(|l| *l == "NeuNeu").unwrap();
        assert!(rules[neu..].contains(&"UVar"));
        assert!(!rules.iter().any(|l| l.contains("Exp") || l.contains("Eta")));
    }

    #[test]
    fn nf_of_two_plus_two() {
        let src = "nf |- natrec (x. Nat) 2 (x y. succ y) 2";
        let r = go(src, Backend::Typed);
        assert_eq!(r.exit, Exit::Accept);
        assert_eq!(r.output, "succ (succ (succ (succ zero)))");
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let r = go("whnf |- (\\x:Nat. x x) (\\x:Nat. x x)", Backend::Typed);
        assert_eq!(r.exit, Exit::OutOfFuel);
    }

    #[test]
    fn infer_prints_the_type() {
        let r = go("infer (n : Nat) |- \\x:Nat. n", Backend::Untyped);
        assert_eq!(r.output, "Nat -> Nat");
    }

    #[test]
    fn rejections_carry_a_reason() {
        let r = go("conv |- zero == succ zero : Nat", Backend::Typed);
        assert_eq!(r.exit, Exit::Reject);
        assert!(r.output.starts_with("reject: head mismatch"), "{}", r.output);
    }

    #[test]
    fn preconditions_catch_ill_typed_untyped_queries() {
        let q = parse_query("conv |- zero == zero : Empty").unwrap();
        let opts = Options {
            backend: Backend::Untyped,
            preconditions: true,
            ..Options::default()
        };
        assert_eq!(run(&q, &opts).exit, Exit::Reject);
        let opts = Options {
            preconditions: false,
            ..opts
        };
        assert_eq!(run(&q, &opts).exit, Exit::Accept);
    }

    #[test]
    fn batch_exit_is_the_worst() {
        let reports = run_source("conv |- zero == zero : Nat\nconv |- zero == succ zero : Nat\n", &Options::default()).unwrap();
        assert_eq!(batch_exit(&reports), Exit::Reject);
    }
}
