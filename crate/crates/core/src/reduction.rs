//! Weak-head reduction.
//!
//! [`step`] is the one-step relation, [`whnf`] iterates it, and
//! [`machine_whnf`] computes the same result with a head/stack machine. Both
//! drivers charge one unit of fuel per contraction, so they agree on every
//! input at every fuel.

use std::collections::VecDeque;

use crate::session::{Fuel, Outcome, Res, Session};
use crate::syntax::Term;

/// One-step weak-head reduction. `None` on weak-head normal forms (and on
/// ill-typed stuck terms such as `fst zero`).
pub fn step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, u) => match &**f {
            Term::Lam(_, body) => Some(body.subst1(u)),
            _ => step(f).map(|f| Term::app(f, (**u).clone())),
        },
        Term::Fst(p) => match &**p {
            Term::Pair(_, _, a, _) => Some((**a).clone()),
            _ => step(p).map(Term::fst),
        },
        Term::Snd(p) => match &**p {
            Term::Pair(_, _, _, b) => Some((**b).clone()),
            _ => step(p).map(Term::snd),
        },
        Term::NatElim(motive, base, succ, n) => match &**n {
            Term::Zero => Some((**base).clone()),
            Term::Succ(m) => {
                let rec = Term::NatElim(motive.clone(), base.clone(), succ.clone(), m.clone());
                Some(succ.subst2(m, &rec))
            }
            _ => step(n).map(|n| {
                Term::nat_elim((**motive).clone(), (**base).clone(), (**succ).clone(), n)
            }),
        },
        Term::EmptyElim(motive, e) => step(e).map(|e| Term::empty_elim((**motive).clone(), e)),
        Term::IdElim(ty, lhs, motive, branch, e) => match &**e {
            Term::Refl(..) => Some((**branch).clone()),
            _ => step(e).map(|e| {
                Term::id_elim(
                    (**ty).clone(),
                    (**lhs).clone(),
                    (**motive).clone(),
                    (**branch).clone(),
                    e,
                )
            }),
        },
        _ => None,
    }
}

/// Iterates [`step`] until no step applies, paying one unit of fuel per step.
pub fn whnf(t: &Term, fuel: u64) -> Outcome<Term> {
    let mut fuel = Fuel::new(fuel);
    let mut t = t.clone();
    loop {
        match step(&t) {
            None => return Outcome::Accept(t),
            Some(next) => {
                if fuel.tick().is_err() {
                    return Outcome::OutOfFuel;
                }
                t = next;
            }
        }
    }
}

/// An eliminator waiting for its principal argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    AppArg(Term),
    Fst,
    Snd,
    NatElim { motive: Term, base: Term, step: Term },
    EmptyElim { motive: Term },
    IdElim { ty: Term, lhs: Term, motive: Term, branch: Term },
}

impl Frame {
    pub fn plug(&self, t: Term) -> Term {
        match self {
            Frame::AppArg(u) => Term::app(t, u.clone()),
            Frame::Fst => Term::fst(t),
            Frame::Snd => Term::snd(t),
            Frame::NatElim { motive, base, step } => {
                Term::nat_elim(motive.clone(), base.clone(), step.clone(), t)
            }
            Frame::EmptyElim { motive } => Term::empty_elim(motive.clone(), t),
            Frame::IdElim {
                ty,
                lhs,
                motive,
                branch,
            } => Term::id_elim(ty.clone(), lhs.clone(), motive.clone(), branch.clone(), t),
        }
    }
}

/// Eliminator context around a head term. The frame applied directly to the
/// head comes first, the outermost eliminator last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stack {
    frames: VecDeque<Frame>,
}

impl Stack {
    pub fn new() -> Stack {
        Stack::default()
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> {
        self.frames.iter()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Splits a term into its head and the eliminators around it.
    pub fn decompose(t: &Term) -> (Term, Stack) {
        let mut stack = Stack::new();
        let head = stack.push_spine(t);
        (head, stack)
    }

    /// Pushes the eliminator spine of `t` on top of the stack and returns its head.
    fn push_spine(&mut self, t: &Term) -> Term {
        let mut spine = Vec::new();
        let mut cur = t;
        loop {
            let (frame, inner) = match cur {
                Term::App(f, u) => (Frame::AppArg((**u).clone()), &**f),
                Term::Fst(p) => (Frame::Fst, &**p),
                Term::Snd(p) => (Frame::Snd, &**p),
                Term::NatElim(motive, base, step, n) => (
                    Frame::NatElim {
                        motive: (**motive).clone(),
                        base: (**base).clone(),
                        step: (**step).clone(),
                    },
                    &**n,
                ),
                Term::EmptyElim(motive, e) => (
                    Frame::EmptyElim {
                        motive: (**motive).clone(),
                    },
                    &**e,
                ),
                Term::IdElim(ty, lhs, motive, branch, e) => (
                    Frame::IdElim {
                        ty: (**ty).clone(),
                        lhs: (**lhs).clone(),
                        motive: (**motive).clone(),
                        branch: (**branch).clone(),
                    },
                    &**e,
                ),
                _ => break,
            };
            spine.push(frame);
            cur = inner;
        }
        // `spine` is outermost first; the innermost frame goes on top.
        for frame in spine {
            self.frames.push_front(frame);
        }
        cur.clone()
    }

    pub fn plug(&self, head: Term) -> Term {
        self.frames.iter().fold(head, |t, f| f.plug(t))
    }
}

/// Contracts the head against the top frame, if they form a redex.
fn fire(head: &Term, frame: &Frame) -> Option<Term> {
    match (head, frame) {
        (Term::Lam(_, body), Frame::AppArg(u)) => Some(body.subst1(u)),
        (Term::Pair(_, _, a, _), Frame::Fst) => Some((**a).clone()),
        (Term::Pair(_, _, _, b), Frame::Snd) => Some((**b).clone()),
        (Term::Zero, Frame::NatElim { base, .. }) => Some(base.clone()),
        (Term::Succ(m), Frame::NatElim { motive, base, step }) => {
            let rec = Term::nat_elim(motive.clone(), base.clone(), step.clone(), (**m).clone());
            Some(step.subst2(m, &rec))
        }
        (Term::Refl(..), Frame::IdElim { branch, .. }) => Some(branch.clone()),
        _ => None,
    }
}

fn run_machine(t: &Term, mut tick: impl FnMut() -> Res<()>) -> Res<Term> {
    if t.is_canonical() {
        return Ok(t.clone());
    }
    let (mut head, mut stack) = Stack::decompose(t);
    while let Some(frame) = stack.frames.front() {
        let Some(next) = fire(&head, frame) else {
            break;
        };
        tick()?;
        stack.frames.pop_front();
        head = stack.push_spine(&next);
    }
    Ok(stack.plug(head))
}

/// Weak-head normalisation by the head/stack machine. Same contract as
/// [`whnf`], including the fuel accounting.
pub fn machine_whnf(t: &Term, fuel: u64) -> Outcome<Term> {
    let mut fuel = Fuel::new(fuel);
    run_machine(t, || fuel.tick()).into()
}

/// Weak-head normalisation charged to a session's budget.
pub(crate) fn whnf_in(s: &mut Session, t: &Term) -> Res<Term> {
    run_machine(t, || s.tick())
}

/// Whether `target` is reachable from `from` by at most `fuel` steps.
pub fn reaches(from: &Term, target: &Term, fuel: u64) -> bool {
    let mut t = from.clone();
    let mut fuel = Fuel::new(fuel);
    loop {
        if &t == target {
            return true;
        }
        match step(&t) {
            Some(next) if fuel.tick().is_ok() => t = next,
            _ => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Class;

    fn omega() -> Term {
        let delta = Term::lam(Term::Nat, Term::app(Term::Var(0), Term::Var(0)));
        Term::app(delta.clone(), delta)
    }

    fn plus_two(n: Term) -> Term {
        // natrec (x. Nat) 2 (x y. succ y) n
        Term::nat_elim(Term::Nat, Term::numeral(2), Term::succ(Term::Var(0)), n)
    }

    #[test]
    fn beta_fun() {
        let t = Term::app(Term::lam(Term::Nat, Term::Var(0)), Term::Zero);
        assert_eq!(step(&t), Some(Term::Zero));
    }

    #[test]
    fn beta_zero() {
        let t = Term::nat_elim(Term::Nat, Term::Zero, Term::succ(Term::Var(1)), Term::Zero);
        assert_eq!(step(&t), Some(Term::Zero));
    }

    #[test]
    fn neutral_does_not_step() {
        assert_eq!(step(&Term::Var(3)), None);
        assert_eq!(step(&Term::app(Term::Var(0), Term::Zero)), None);
    }

    #[test]
    fn whnf_examples() {
        assert_eq!(whnf(&Term::Zero, 0), Outcome::Accept(Term::Zero));
        // 0 + 1 with base 0 and step succ y: βSucc then βZero under succ
        let t = Term::nat_elim(
            Term::Nat,
            Term::Zero,
            Term::succ(Term::Var(1)),
            Term::succ(Term::Zero),
        );
        assert_eq!(whnf(&t, 100), Outcome::Accept(Term::succ(Term::Zero)));
        assert_eq!(whnf(&omega(), 10), Outcome::OutOfFuel);
    }

    #[test]
    fn machine_examples() {
        let p = Term::fst(Term::pair(
            Term::Nat,
            Term::Nat,
            Term::Zero,
            Term::succ(Term::Zero),
        ));
        assert_eq!(machine_whnf(&p, 10), Outcome::Accept(Term::Zero));
        assert_eq!(machine_whnf(&Term::Var(0), 1), Outcome::Accept(Term::Var(0)));
        assert_eq!(machine_whnf(&omega(), 10), Outcome::OutOfFuel);
    }

    #[test]
    fn drivers_charge_the_same_fuel() {
        // (λx. x) ((λx. x) 0) needs two steps.
        let id = Term::lam(Term::Nat, Term::Var(0));
        let t = Term::app(id.clone(), Term::app(id, Term::Zero));
        assert!(whnf(&t, 1).is_out_of_fuel());
        assert!(machine_whnf(&t, 1).is_out_of_fuel());
        assert_eq!(whnf(&t, 2), Outcome::Accept(Term::Zero));
        assert_eq!(machine_whnf(&t, 2), Outcome::Accept(Term::Zero));
        // 2 + 2 exposes its outer succ after one step.
        let t = plus_two(Term::numeral(2));
        assert!(whnf(&t, 0).is_out_of_fuel());
        assert_eq!(machine_whnf(&t, 1), whnf(&t, 1));
        assert!(whnf(&t, 1).is_accept());
    }

    #[test]
    fn stuck_terms_are_returned_unchanged() {
        let t = Term::app(Term::Zero, Term::Zero);
        assert_eq!(whnf(&t, 5), Outcome::Accept(t.clone()));
        assert_eq!(machine_whnf(&t, 5), Outcome::Accept(t.clone()));
        assert_eq!(t.classify(), Class::NotWhnf);
    }

    #[test]
    fn decompose_plug_roundtrip() {
        let t = Term::app(
            Term::fst(Term::nat_elim(Term::Nat, Term::Zero, Term::Var(0), Term::Var(4))),
            Term::Zero,
        );
        let (head, stack) = Stack::decompose(&t);
        assert_eq!(head, Term::Var(4));
        assert_eq!(stack.len(), 3);
        assert!(matches!(stack.frames().next(), Some(Frame::NatElim { .. })));
        assert!(matches!(stack.frames().last(), Some(Frame::AppArg(_))));
        assert_eq!(stack.plug(head.clone()), t);
        assert_eq!(Stack::decompose(&stack.plug(head)), Stack::decompose(&t));
    }

    #[test]
    fn reachability() {
        let t = plus_two(Term::Zero);
        assert!(reaches(&t, &Term::numeral(2), 5));
        assert!(!reaches(&t, &Term::numeral(3), 5));
    }
}
