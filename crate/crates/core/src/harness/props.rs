//! Property suites over generated instances.

use std::fmt;
use std::str::FromStr;

use super::{shrink, Gen, GenConfig, HarnessError, Instance};
use crate::bidir::{self, Backend};
use crate::conv_typed::conv_tm_in;
use crate::conv_untyped::{uconv, uconv_in};
use crate::normalize::{deep_nf_tm, deep_nf_tm_in};
use crate::reduction::{machine_whnf, step, whnf_in};
use crate::session::{Outcome, Session, VerdictKind};
use crate::syntax::{Context, Term};

pub const PROP_FUEL: u64 = 1_000_000;
const MAX_STEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    SubjectReduction,
    Classification,
    Canonicity,
    Strengthening,
    Symmetry,
    Transitivity,
    Weakening,
    Reflexivity,
    FuelMonotonicity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::SubjectReduction,
        Suite::Classification,
        Suite::Canonicity,
        Suite::Strengthening,
        Suite::Symmetry,
        Suite::Transitivity,
        Suite::Weakening,
        Suite::Reflexivity,
        Suite::FuelMonotonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubjectReduction => "subject-reduction",
            Suite::Classification => "classification",
            Suite::Canonicity => "canonicity",
            Suite::Strengthening => "strengthening",
            Suite::Symmetry => "symmetry",
            Suite::Transitivity => "transitivity",
            Suite::Weakening => "weakening",
            Suite::Reflexivity => "reflexivity",
            Suite::FuelMonotonicity => "fuel-monotonicity",
        }
    }

    fn stream(self, idx: usize) -> u64 {
        let k = Suite::ALL.iter().position(|s| *s == self).expect("listed") as u64;
        (k + 1) << 32 | idx as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Suite, HarnessError> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropFailure {
    pub idx: usize,
    pub stream: u64,
    pub message: String,
    /// The instance, minimised.
    pub instance: Instance,
    pub original: Instance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropReport {
    pub suite: Suite,
    pub total: usize,
    pub passed: usize,
    /// Instances on which the property's premise did not hold.
    pub vacuous: usize,
    pub failures: Vec<PropFailure>,
}

impl fmt::Display for PropReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples, {} failures, {} vacuous",
            self.suite,
            self.total,
            self.failures.len(),
            self.vacuous
        )?;
        for fail in &self.failures {
            write!(f, "\n  #{} {}\n    {}", fail.idx, fail.message, fail.instance)?;
        }
        Ok(())
    }
}

enum Check {
    Pass,
    Vacuous,
    Fail(String),
}

/// Runs the suite named `suite` on `n` generated instances.
pub fn property_run(suite: &str, n: usize, cfg: &GenConfig) -> Result<PropReport, HarnessError> {
    cfg.validate()?;
    Ok(run_suite(suite.parse()?, n, cfg))
}

pub fn run_suite(suite: Suite, n: usize, cfg: &GenConfig) -> PropReport {
    let mut report = PropReport {
        suite,
        total: n,
        passed: 0,
        vacuous: 0,
        failures: Vec::new(),
    };
    for idx in 0..n {
        let stream = suite.stream(idx);
        let inst = sample(suite, &mut Gen::new(cfg, stream));
        match holds(suite, &inst) {
            Check::Pass => report.passed += 1,
            Check::Vacuous => report.vacuous += 1,
            Check::Fail(_) => {
                let min = shrink(&inst, &mut |i| matches!(holds(suite, i), Check::Fail(_)));
                let Check::Fail(message) = holds(suite, &min) else {
                    unreachable!("shrinking keeps the failure");
                };
                report.failures.push(PropFailure {
                    idx,
                    stream,
                    message,
                    instance: min,
                    original: inst,
                });
            }
        }
    }
    report
}

fn sample(suite: Suite, gen: &mut Gen) -> Instance {
    match suite {
        Suite::SubjectReduction | Suite::Classification | Suite::Reflexivity => {
            let (ctx, ty, t) = gen.typed_term();
            Instance {
                ctx,
                ty,
                terms: vec![t],
            }
        }
        Suite::Canonicity => {
            let ctx = Context::new();
            let d = gen.depth();
            let t = gen.tm(&ctx, &Term::Nat, d).unwrap_or(Term::Zero);
            Instance {
                ctx,
                ty: Term::Nat,
                terms: vec![t],
            }
        }
        Suite::Transitivity => {
            let mut q = gen.conv_query();
            let u = q.terms[1].clone();
            let w = if gen.rng().gen_bool(0.7) {
                gen.variant(&q.ctx, &q.ty, &u)
            } else {
                gen.perturb(&q.ctx, &q.ty, &u)
            };
            q.terms.push(w);
            q
        }
        Suite::Strengthening | Suite::Symmetry | Suite::Weakening | Suite::FuelMonotonicity => {
            gen.conv_query()
        }
    }
}

use rand::Rng as _;

fn conv(b: Backend, g: &Context, a: &Term, t: &Term, u: &Term) -> VerdictKind {
    b.conv_tm(g, a, t, u, PROP_FUEL).kind()
}

fn holds(suite: Suite, i: &Instance) -> Check {
    for t in &i.terms {
        if let Outcome::Reject(r) = bidir::check(&i.ctx, t, &i.ty, &Backend::Typed, PROP_FUEL) {
            return Check::Fail(format!("generated term is ill-typed: {r}"));
        }
    }
    match suite {
        Suite::SubjectReduction => subject_reduction(i),
        Suite::Classification => classification(i),
        Suite::Canonicity => canonicity(i),
        Suite::Strengthening => strengthening(i),
        Suite::Symmetry => symmetry(i),
        Suite::Transitivity => transitivity(i),
        Suite::Weakening => weakening(i),
        Suite::Reflexivity => reflexivity(i),
        Suite::FuelMonotonicity => fuel_monotonicity(i),
    }
}

fn subject_reduction(i: &Instance) -> Check {
    let mut cur = i.terms[0].clone();
    for k in 1..=MAX_STEPS {
        let Some(next) = step(&cur) else { break };
        for b in Backend::ALL {
            match bidir::check(&i.ctx, &next, &i.ty, &b, PROP_FUEL) {
                Outcome::Accept(()) => {}
                Outcome::Reject(r) => return Check::Fail(format!("reduct {k} is ill-typed ({b}): {r}")),
                Outcome::OutOfFuel => return Check::Fail(format!("reduct {k} ran out of fuel ({b})")),
            }
        }
        cur = next;
    }
    Check::Pass
}

/// Whether the weak-head normal form `w` fits the weak-head normal type `a`.
fn classified(a: &Term, w: &Term) -> bool {
    if w.is_neutral() {
        return true;
    }
    match a {
        Term::Pi(..) => matches!(w, Term::Lam(..)),
        Term::Sig(..) => matches!(w, Term::Pair(..)),
        Term::Nat => matches!(w, Term::Zero | Term::Succ(_)),
        Term::Id(..) => matches!(w, Term::Refl(..)),
        Term::Univ => matches!(
            w,
            Term::Pi(..) | Term::Sig(..) | Term::Nat | Term::Empty | Term::Id(..)
        ),
        _ => false,
    }
}

fn classification(i: &Instance) -> Check {
    let (Some(a), Some(w)) = (
        machine_whnf(&i.ty, PROP_FUEL).accepted(),
        machine_whnf(&i.terms[0], PROP_FUEL).accepted(),
    ) else {
        return Check::Fail("weak-head normalisation ran out of fuel".into());
    };
    if !a.is_ty() {
        return Check::Fail(format!("type normalises to a non-type {:?}", a.head()));
    }
    if !w.is_whnf() {
        return Check::Fail("term normalises to a non-normal form".into());
    }
    if i.ctx.is_empty() && w.is_neutral() {
        return Check::Fail("closed term normalises to a neutral".into());
    }
    if !classified(&a, &w) {
        return Check::Fail(format!("{:?} normal form at type {:?}", w.head(), a.head()));
    }
    Check::Pass
}

fn canonicity(i: &Instance) -> Check {
    match deep_nf_tm(&Context::new(), &Term::Nat, &i.terms[0], PROP_FUEL) {
        Outcome::Accept(n) if n.as_numeral().is_some() => Check::Pass,
        Outcome::Accept(n) => Check::Fail(format!("normal form is headed by {:?}", n.head())),
        Outcome::Reject(r) => Check::Fail(format!("normalisation rejected: {r}")),
        Outcome::OutOfFuel => Check::Fail("normalisation ran out of fuel".into()),
    }
}

fn strengthening(i: &Instance) -> Check {
    let (t, u) = (&i.terms[0], &i.terms[1]);
    let base = uconv(t, u, PROP_FUEL).kind();
    let (ts, us) = (t.shift(), u.shift());
    if ts.strengthen().as_ref() != Some(t) || us.strengthen().as_ref() != Some(u) {
        return Check::Fail("strengthening does not undo weakening".into());
    }
    let up = uconv(&ts, &us, PROP_FUEL).kind();
    if up != base {
        return Check::Fail(format!("untyped: {base} in the context, {up} after weakening"));
    }
    let Some((outer, _)) = i.ctx.pop() else {
        return Check::Pass;
    };
    let (Some(t0), Some(u0), Some(a0)) = (t.strengthen(), u.strengthen(), i.ty.strengthen()) else {
        return Check::Pass;
    };
    let down = uconv(&t0, &u0, PROP_FUEL).kind();
    if down != base {
        return Check::Fail(format!("untyped: {base} in the context, {down} after strengthening"));
    }
    let typed = conv(Backend::Typed, &i.ctx, &i.ty, t, u);
    let typed0 = conv(Backend::Typed, &outer, &a0, &t0, &u0);
    if typed != typed0 {
        return Check::Fail(format!("typed: {typed} in the context, {typed0} after strengthening"));
    }
    Check::Pass
}

fn symmetry(i: &Instance) -> Check {
    let (t, u) = (&i.terms[0], &i.terms[1]);
    let mut decided = false;
    for b in Backend::ALL {
        let there = conv(b, &i.ctx, &i.ty, t, u);
        let back = conv(b, &i.ctx, &i.ty, u, t);
        if there == VerdictKind::OutOfFuel || back == VerdictKind::OutOfFuel {
            continue;
        }
        decided = true;
        if there != back {
            return Check::Fail(format!("{b}: {there} one way, {back} the other"));
        }
    }
    if decided {
        Check::Pass
    } else {
        Check::Vacuous
    }
}

fn transitivity(i: &Instance) -> Check {
    let [t, u, w] = &i.terms[..] else {
        return Check::Fail("transitivity needs three terms".into());
    };
    let mut premised = false;
    for b in Backend::ALL {
        let accept = |x, y| conv(b, &i.ctx, &i.ty, x, y) == VerdictKind::Accept;
        if accept(t, u) && accept(u, w) {
            premised = true;
            let tw = conv(b, &i.ctx, &i.ty, t, w);
            if tw != VerdictKind::Accept {
                return Check::Fail(format!("{b}: t == u and u == w but t == w gives {tw}"));
            }
        }
    }
    if premised {
        Check::Pass
    } else {
        Check::Vacuous
    }
}

fn weakening(i: &Instance) -> Check {
    let (t, u) = (&i.terms[0], &i.terms[1]);
    let n = i.ctx.len();
    for b in Backend::ALL {
        let base = conv(b, &i.ctx, &i.ty, t, u);
        if base == VerdictKind::OutOfFuel {
            continue;
        }
        for k in 0..=n {
            let mut extra = vec![Term::Nat, Term::Empty];
            if k > 0 {
                extra.push(i.ctx.entries()[k - 1].shift());
            }
            for x in extra {
                let g = i.ctx.insert(k, x);
                let up = |s: &Term| s.shift_above(n - k, 1);
                let got = conv(b, &g, &up(&i.ty), &up(t), &up(u));
                if got != base {
                    return Check::Fail(format!(
                        "{b}: {base} before, {got} after inserting an entry at position {k}"
                    ));
                }
            }
        }
    }
    Check::Pass
}

fn reflexivity(i: &Instance) -> Check {
    let t = &i.terms[0];
    for b in Backend::ALL {
        let v = conv(b, &i.ctx, &i.ty, t, t);
        if v != VerdictKind::Accept {
            return Check::Fail(format!("{b}: t == t gives {v}"));
        }
    }
    match deep_nf_tm(&i.ctx, &i.ty, t, PROP_FUEL) {
        Outcome::Accept(_) => Check::Pass,
        o => Check::Fail(format!("reflexive but not deeply normalising: {}", o.kind())),
    }
}

type Probe<'i> = Box<dyn Fn(&mut Session) -> VerdictKind + 'i>;

fn fuel_monotonicity(i: &Instance) -> Check {
    let (g, a, t, u) = (&i.ctx, &i.ty, &i.terms[0], &i.terms[1]);
    let probes: Vec<(&str, Probe)> = vec![
        ("typed", Box::new(|s| conv_tm_in(s, g, a, t, u).kind())),
        ("untyped", Box::new(|s| uconv_in(s, t, u).kind())),
        ("check", Box::new(|s| bidir::check_in(s, g, t, a, &Backend::Untyped).kind())),
        ("whnf", Box::new(|s| Outcome::from(whnf_in(s, t)).kind())),
        ("nf", Box::new(|s| deep_nf_tm_in(s, g, a, t).kind())),
    ];
    let run = |p: &Probe, fuel: u64| {
        let mut s = Session::new(fuel);
        let v = p(&mut s);
        (v, s.fuel_used())
    };
    for (name, p) in &probes {
        let (v, used) = run(p, PROP_FUEL);
        if v == VerdictKind::OutOfFuel {
            continue;
        }
        for fuel in [used, used + 1, 2 * used + 7] {
            let got = run(p, fuel);
            if got != (v, used) {
                return Check::Fail(format!(
                    "{name}: {v} using {used} units, but {} using {} at fuel {fuel}",
                    got.0, got.1
                ));
            }
        }
        for fuel in [used.saturating_sub(1), used / 2] {
            if fuel < used && run(p, fuel).0 != VerdictKind::OutOfFuel {
                return Check::Fail(format!("{name}: needs {used} units but finishes with {fuel}"));
            }
        }
    }
    Check::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert_eq!(
            property_run("no-such-suite", 1, &GenConfig::default()),
            Err(HarnessError::UnknownSuite("no-such-suite".into()))
        );
    }

    #[test]
    fn fuel_monotonicity_smoke() {
        let r = run_suite(Suite::FuelMonotonicity, 100, &GenConfig::default());
        assert!(r.failures.is_empty(), "{r}");
    }

    #[test]
    fn classification_rejects_mismatched_forms() {
        assert!(classified(&Term::Nat, &Term::succ(Term::Zero)));
        assert!(classified(&Term::Nat, &Term::Var(0)));
        assert!(!classified(&Term::Nat, &Term::lam(Term::Nat, Term::Var(0))));
        assert!(!classified(&Term::Empty, &Term::Zero));
    }
}
