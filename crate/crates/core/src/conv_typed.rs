//! Type-directed conversion.
//!
//! Terms are compared at a type: after weak-head reduction, negative types
//! (Π, Σ) trigger η-expansion, positive types compare canonical forms by
//! congruence and neutrals through [`conv_neu`], which infers the type of
//! the spines it compares.
//!
//! Rules report the names `TyRed CProdTy CSigTy CNatTy CEmptyTy CIdTy CUniTy
//! NeuTy` (types), `TTmRed FunExp CSigEta TFun CSig CNat CEmpty CId CZero
//! TSucc ReflRefl NePos` (terms) and `NVar NApp NSig1 NSig2 NNatElim
//! NEmptyElim NIdInd` (neutrals).

use crate::bidir::{self, Backend};
use crate::reduction::whnf_in;
use crate::session::{ConvVerdict, Halt, NeuVerdict, Outcome, Reason, Res, Session};
use crate::syntax::{Context, Head, Term};

/// Fuel for checking typing preconditions, separate from the query's budget.
pub const PRECONDITION_FUEL: u64 = 1_000_000;

pub fn conv_ty(ctx: &Context, a: &Term, b: &Term, fuel: u64) -> ConvVerdict {
    conv_ty_in(&mut Session::new(fuel), ctx, a, b)
}

pub fn conv_ty_red(ctx: &Context, a: &Term, b: &Term, fuel: u64) -> ConvVerdict {
    conv_ty_red_in(&mut Session::new(fuel), ctx, a, b)
}

pub fn conv_tm(ctx: &Context, ty: &Term, t: &Term, u: &Term, fuel: u64) -> ConvVerdict {
    conv_tm_in(&mut Session::new(fuel), ctx, ty, t, u)
}

pub fn conv_tm_red(ctx: &Context, ty: &Term, t: &Term, u: &Term, fuel: u64) -> ConvVerdict {
    conv_tm_red_in(&mut Session::new(fuel), ctx, ty, t, u)
}

pub fn conv_neu(ctx: &Context, n: &Term, m: &Term, fuel: u64) -> NeuVerdict {
    conv_neu_in(&mut Session::new(fuel), ctx, n, m)
}

pub fn conv_neu_red(ctx: &Context, n: &Term, m: &Term, fuel: u64) -> NeuVerdict {
    conv_neu_red_in(&mut Session::new(fuel), ctx, n, m)
}

pub fn conv_ty_in(s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> ConvVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::is_type(ctx, a)?;
            pre::is_type(ctx, b)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| ty(s, ctx, a, b)).into()
}

pub fn conv_ty_red_in(s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> ConvVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::is_type(ctx, a)?;
            pre::is_type(ctx, b)?;
            pre::whnf(a)?;
            pre::whnf(b)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| ty_red(s, ctx, a, b)).into()
}

pub fn conv_tm_in(s: &mut Session, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> ConvVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::has_type(ctx, t, ty)?;
            pre::has_type(ctx, u, ty)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| tm(s, ctx, ty, t, u)).into()
}

pub fn conv_tm_red_in(
    s: &mut Session,
    ctx: &Context,
    ty: &Term,
    t: &Term,
    u: &Term,
) -> ConvVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::has_type(ctx, t, ty)?;
            pre::has_type(ctx, u, ty)?;
            pre::whnf(ty)?;
            pre::whnf(t)?;
            pre::whnf(u)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| tm_red(s, ctx, ty, t, u)).into()
}

pub fn conv_neu_in(s: &mut Session, ctx: &Context, n: &Term, m: &Term) -> NeuVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::neutral_typed(ctx, n)?;
            pre::neutral_typed(ctx, m)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| neu(s, ctx, n, m)).into()
}

pub fn conv_neu_red_in(s: &mut Session, ctx: &Context, n: &Term, m: &Term) -> NeuVerdict {
    let pre = |s: &mut Session| -> Res<()> {
        if s.checks_preconditions() {
            pre::context(ctx)?;
            pre::neutral_typed(ctx, n)?;
            pre::neutral_typed(ctx, m)?;
        }
        Ok(())
    };
    pre(s).and_then(|_| neu_red(s, ctx, n, m)).into()
}

/// Typing preconditions, checked with the typed backend on a separate budget.
mod pre {
    use super::*;

    fn violated<T>(what: String) -> Res<T> {
        Err(Halt::Reject(crate::session::Rejection {
            path: vec!["precondition"],
            reason: Reason::Precondition(what),
        }))
    }

    fn lift(o: ConvVerdict, what: impl FnOnce() -> String) -> Res<()> {
        match o {
            Outcome::Accept(()) => Ok(()),
            Outcome::Reject(r) => violated(format!("{}: {}", what(), r)),
            Outcome::OutOfFuel => Err(Halt::OutOfFuel),
        }
    }

    pub(super) fn context(ctx: &Context) -> Res<()> {
        let o = bidir::check_ctx(ctx, &Backend::Typed, PRECONDITION_FUEL);
        lift(o, || "context is not well formed".into())
    }

    pub(super) fn is_type(ctx: &Context, a: &Term) -> Res<()> {
        let o = bidir::check_ty(ctx, a, &Backend::Typed, PRECONDITION_FUEL);
        lift(o, || "input is not a type".into())
    }

    pub(super) fn has_type(ctx: &Context, t: &Term, ty: &Term) -> Res<()> {
        is_type(ctx, ty)?;
        let o = bidir::check(ctx, t, ty, &Backend::Typed, PRECONDITION_FUEL);
        lift(o, || "input does not have the stated type".into())
    }

    pub(super) fn whnf(t: &Term) -> Res<()> {
        if t.is_whnf() {
            Ok(())
        } else {
            violated(format!("{} is not in weak-head normal form", t.head()))
        }
    }

    pub(super) fn neutral_typed(ctx: &Context, n: &Term) -> Res<()> {
        if !n.is_neutral() {
            return violated(format!("{} is not neutral", n.head()));
        }
        match bidir::infer(ctx, n, &Backend::Typed, PRECONDITION_FUEL) {
            Outcome::Accept(_) => Ok(()),
            Outcome::Reject(r) => violated(format!("neutral is ill-typed: {r}")),
            Outcome::OutOfFuel => Err(Halt::OutOfFuel),
        }
    }
}

fn mismatch<T>(s: &Session, judgment: &'static str, a: &Term, b: &Term) -> Res<T> {
    s.reject(
        judgment,
        Reason::HeadMismatch {
            left: a.head(),
            right: b.head(),
        },
    )
}

/// Types `a` and `b` are convertible.
pub(crate) fn ty(s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> Res<()> {
    s.wrapper("TyRed", |s| {
        let a = whnf_in(s, a)?;
        let b = whnf_in(s, b)?;
        ty_red(s, ctx, &a, &b)
    })
}

/// Weak-head normal types `a` and `b` are convertible.
pub(crate) fn ty_red(s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> Res<()> {
    const J: &str = "conv_ty_red";
    match (a, b) {
        (Term::Pi(a1, b1), Term::Pi(a2, b2)) => s.rule("CProdTy", |s| {
            ty(s, ctx, a1, a2)?;
            ty(s, &ctx.extend((**a2).clone()), b1, b2)
        }),
        (Term::Sig(a1, b1), Term::Sig(a2, b2)) => s.rule("CSigTy", |s| {
            ty(s, ctx, a1, a2)?;
            ty(s, &ctx.extend((**a1).clone()), b1, b2)
        }),
        (Term::Nat, Term::Nat) => s.rule("CNatTy", |_| Ok(())),
        (Term::Empty, Term::Empty) => s.rule("CEmptyTy", |_| Ok(())),
        (Term::Univ, Term::Univ) => s.rule("CUniTy", |_| Ok(())),
        (Term::Id(a1, t1, u1), Term::Id(a2, t2, u2)) => s.rule("CIdTy", |s| {
            ty(s, ctx, a1, a2)?;
            tm(s, ctx, a1, t1, t2)?;
            tm(s, ctx, a1, u1, u2)
        }),
        _ if a.is_neutral() && b.is_neutral() => s.rule("NeuTy", |s| neu(s, ctx, a, b).map(drop)),
        _ if !a.is_ty() => s.reject(J, Reason::NotAType(a.head())),
        _ if !b.is_ty() => s.reject(J, Reason::NotAType(b.head())),
        _ => mismatch(s, J, a, b),
    }
}

/// Terms `t` and `u` are convertible at type `ty`.
pub(crate) fn tm(s: &mut Session, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> Res<()> {
    s.wrapper("TTmRed", |s| {
        let ty = whnf_in(s, ty)?;
        let t = whnf_in(s, t)?;
        let u = whnf_in(s, u)?;
        tm_red(s, ctx, &ty, &t, &u)
    })
}

/// Weak-head normal terms `t` and `u` are convertible at the weak-head
/// normal type `ty`.
pub(crate) fn tm_red(s: &mut Session, ctx: &Context, ty: &Term, t: &Term, u: &Term) -> Res<()> {
    const J: &str = "conv_tm_red";
    match ty {
        Term::Pi(dom, cod) => s.rule("FunExp", |s| {
            let x = Term::Var(0);
            let t = Term::app(t.shift(), x.clone());
            let u = Term::app(u.shift(), x);
            tm(s, &ctx.extend((**dom).clone()), cod, &t, &u)
        }),
        Term::Sig(dom, cod) => s.rule("CSigEta", |s| {
            let t1 = Term::fst(t.clone());
            tm(s, ctx, dom, &t1, &Term::fst(u.clone()))?;
            tm(
                s,
                ctx,
                &cod.subst1(&t1),
                &Term::snd(t.clone()),
                &Term::snd(u.clone()),
            )
        }),
        _ if ty.is_pos() => {
            if t.is_neutral() && u.is_neutral() {
                return s.rule("NePos", |s| neu(s, ctx, t, u).map(drop));
            }
            match (ty, t, u) {
                (Term::Univ, Term::Pi(a1, b1), Term::Pi(a2, b2)) => s.rule("TFun", |s| {
                    tm(s, ctx, &Term::Univ, a1, a2)?;
                    tm(s, &ctx.extend((**a2).clone()), &Term::Univ, b1, b2)
                }),
                (Term::Univ, Term::Sig(a1, b1), Term::Sig(a2, b2)) => s.rule("CSig", |s| {
                    tm(s, ctx, &Term::Univ, a1, a2)?;
                    tm(s, &ctx.extend((**a2).clone()), &Term::Univ, b1, b2)
                }),
                (Term::Univ, Term::Nat, Term::Nat) => s.rule("CNat", |_| Ok(())),
                (Term::Univ, Term::Empty, Term::Empty) => s.rule("CEmpty", |_| Ok(())),
                (Term::Univ, Term::Id(a1, t1, u1), Term::Id(a2, t2, u2)) => s.rule("CId", |s| {
                    tm(s, ctx, &Term::Univ, a1, a2)?;
                    tm(s, ctx, a1, t1, t2)?;
                    tm(s, ctx, a1, u1, u2)
                }),
                (Term::Nat, Term::Zero, Term::Zero) => s.rule("CZero", |_| Ok(())),
                (Term::Nat, Term::Succ(m), Term::Succ(n)) => {
                    s.rule("TSucc", |s| tm(s, ctx, &Term::Nat, m, n))
                }
                (Term::Id(..), Term::Refl(..), Term::Refl(..)) => s.rule("ReflRefl", |_| Ok(())),
                _ if t.head() != u.head() => mismatch(s, J, t, u),
                _ => s.reject(J, Reason::IllTyped(t.head(), ty.head())),
            }
        }
        _ => s.reject(J, Reason::NotAType(ty.head())),
    }
}

/// Neutrals `n` and `m` are convertible; returns the inferred type.
pub(crate) fn neu(s: &mut Session, ctx: &Context, n: &Term, m: &Term) -> Res<Term> {
    const J: &str = "conv_neu";
    match (n, m) {
        (Term::Var(i), Term::Var(j)) if i == j => s.rule("NVar", |s| match ctx.lookup(*i) {
            Some(ty) => Ok(ty),
            None => s.reject(J, Reason::Unbound(*i)),
        }),
        (Term::Var(i), Term::Var(j)) => s.reject(
            J,
            Reason::VarMismatch {
                left: *i,
                right: *j,
            },
        ),
        (Term::App(f, a), Term::App(g, b)) => s.rule("NApp", |s| {
            match neu_red(s, ctx, f, g)? {
                Term::Pi(dom, cod) => {
                    tm(s, ctx, &dom, a, b)?;
                    Ok(cod.subst1(a))
                }
                other => s.reject(J, expected(Head::Pi, &other)),
            }
        }),
        (Term::Fst(p), Term::Fst(q)) => s.rule("NSig1", |s| match neu_red(s, ctx, p, q)? {
            Term::Sig(dom, _) => Ok(*dom),
            other => s.reject(J, expected(Head::Sig, &other)),
        }),
        (Term::Snd(p), Term::Snd(q)) => s.rule("NSig2", |s| match neu_red(s, ctx, p, q)? {
            Term::Sig(_, cod) => Ok(cod.subst1(&Term::fst((**p).clone()))),
            other => s.reject(J, expected(Head::Sig, &other)),
        }),
        (Term::NatElim(p1, z1, s1, n1), Term::NatElim(p2, z2, s2, n2)) => {
            s.rule("NNatElim", |s| {
                match neu_red(s, ctx, n1, n2)? {
                    Term::Nat => {}
                    other => return s.reject(J, expected(Head::Nat, &other)),
                }
                ty(s, &ctx.extend(Term::Nat), p1, p2)?;
                tm(s, ctx, &p1.subst1(&Term::Zero), z1, z2)?;
                tm(s, &ctx.nat_step(p1), &p1.motive_at_succ(), s1, s2)?;
                Ok(p1.subst1(n1))
            })
        }
        (Term::EmptyElim(p1, e1), Term::EmptyElim(p2, e2)) => s.rule("NEmptyElim", |s| {
            match neu_red(s, ctx, e1, e2)? {
                Term::Empty => {}
                other => return s.reject(J, expected(Head::Empty, &other)),
            }
            ty(s, &ctx.extend(Term::Empty), p1, p2)?;
            Ok(p1.subst1(e1))
        }),
        (Term::IdElim(a1, x1, p1, h1, e1), Term::IdElim(_, _, p2, h2, e2)) => {
            s.rule("NIdInd", |s| {
                let rhs = match neu_red(s, ctx, e1, e2)? {
                    Term::Id(_, _, rhs) => *rhs,
                    other => return s.reject(J, expected(Head::Id, &other)),
                };
                ty(s, &ctx.id_motive(a1, x1), p1, p2)?;
                let branch_ty = p1.subst2(x1, &Term::refl((**a1).clone(), (**x1).clone()));
                tm(s, ctx, &branch_ty, h1, h2)?;
                Ok(p1.subst2(&rhs, e1))
            })
        }
        _ if !n.is_neutral() => s.reject(J, Reason::NotWhnf(n.head())),
        _ if !m.is_neutral() => s.reject(J, Reason::NotWhnf(m.head())),
        _ => mismatch(s, J, n, m),
    }
}

fn expected(head: Head, found: &Term) -> Reason {
    Reason::Expected {
        expected: head,
        found: found.head(),
    }
}

/// Neutral comparison followed by reduction of the inferred type.
pub(crate) fn neu_red(s: &mut Session, ctx: &Context, n: &Term, m: &Term) -> Res<Term> {
    s.silent(|s| {
        let ty = neu(s, ctx, n, m)?;
        whnf_in(s, &ty)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::TraceEvent;
    use crate::syntax::Term as T;

    fn nat_to_nat() -> Term {
        T::arrow(T::Nat, T::Nat)
    }

    fn ctx(entries: Vec<Term>) -> Context {
        Context::from_entries(entries)
    }

    fn trace(f: impl FnOnce(&mut Session) -> ConvVerdict) -> (ConvVerdict, Vec<&'static str>) {
        let mut rules = Vec::new();
        let v = {
            let mut s = Session::new(1000).with_trace(|e: TraceEvent| rules.push(e.rule));
            f(&mut s)
        };
        (v, rules)
    }

    #[test]
    fn type_conversion_examples() {
        let e = Context::new();
        assert!(conv_ty(&e, &T::Nat, &T::Nat, 10).is_accept());
        match conv_ty(&e, &nat_to_nat(), &T::Nat, 10) {
            Outcome::Reject(r) => assert_eq!(
                r.reason,
                Reason::HeadMismatch {
                    left: Head::Pi,
                    right: Head::Nat
                }
            ),
            other => panic!("{other:?}"),
        }
        let redex = T::app(T::lam(T::Univ, T::Var(0)), T::Nat);
        assert!(conv_ty(&e, &redex, &T::Nat, 10).is_accept());
    }

    #[test]
    fn reduced_type_examples() {
        let e = Context::new();
        assert!(conv_ty_red(&e, &T::Univ, &T::Univ, 1).is_accept());
        assert!(conv_ty_red(&e, &T::sig(T::Nat, T::Nat), &nat_to_nat(), 1).is_reject());
        let (v, rules) = trace(|s| conv_ty_red_in(s, &ctx(vec![T::Univ]), &T::Var(0), &T::Var(0)));
        assert!(v.is_accept());
        assert_eq!(rules, vec!["NeuTy", "NVar"]);
    }

    #[test]
    fn term_conversion_examples() {
        assert!(conv_tm(&ctx(vec![T::Nat]), &T::Nat, &T::Var(0), &T::Var(0), 10).is_accept());
        assert!(conv_tm(&Context::new(), &T::Nat, &T::Zero, &T::numeral(1), 10).is_reject());
        let id = T::lam(T::Nat, T::Var(0));
        let succ = T::lam(T::Nat, T::succ(T::Var(0)));
        let v = conv_tm(&Context::new(), &nat_to_nat(), &id, &succ, 50);
        match v {
            Outcome::Reject(r) => {
                assert_eq!(r.path[..2], ["TTmRed", "FunExp"]);
                assert_eq!(
                    r.reason,
                    Reason::HeadMismatch {
                        left: Head::Var,
                        right: Head::Succ
                    }
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eta_trace_for_neutral_function() {
        let (v, rules) = trace(|s| {
            conv_tm_red_in(s, &ctx(vec![nat_to_nat()]), &nat_to_nat(), &T::Var(0), &T::Var(0))
        });
        assert!(v.is_accept());
        assert_eq!(
            rules,
            vec!["FunExp", "TTmRed", "NePos", "NApp", "NVar", "TTmRed", "NePos", "NVar"]
        );
    }

    #[test]
    fn refl_annotations_are_not_compared() {
        let ty = T::id(T::Nat, T::Zero, T::Zero);
        let l = T::refl(T::Nat, T::Zero);
        let r = T::refl(T::Nat, T::numeral(1));
        assert!(conv_tm_red(&Context::new(), &ty, &l, &r, 5).is_accept());
        assert!(conv_tm_red(&Context::new(), &T::Nat, &T::Zero, &T::Zero, 1).is_accept());
    }

    #[test]
    fn neutral_examples() {
        assert_eq!(
            conv_neu(&ctx(vec![T::Nat]), &T::Var(0), &T::Var(0), 1),
            Outcome::Accept(T::Nat)
        );
        assert!(conv_neu(&ctx(vec![T::Nat, T::Nat]), &T::Var(0), &T::Var(1), 1).is_reject());
        let g = ctx(vec![nat_to_nat(), T::Nat]);
        let n = T::app(T::Var(1), T::Var(0));
        assert_eq!(conv_neu(&g, &n, &n, 10), Outcome::Accept(T::Nat));
    }

    #[test]
    fn reduced_neutral_examples() {
        assert_eq!(
            conv_neu_red(&ctx(vec![nat_to_nat()]), &T::Var(0), &T::Var(0), 5),
            Outcome::Accept(nat_to_nat())
        );
        let redex = T::app(T::lam(T::Univ, T::Var(0)), T::Nat);
        assert_eq!(
            conv_neu_red(&ctx(vec![redex]), &T::Var(0), &T::Var(0), 5),
            Outcome::Accept(T::Nat)
        );
        assert!(conv_neu_red(&ctx(vec![T::Nat, T::Nat]), &T::Var(0), &T::Var(1), 5).is_reject());
    }

    #[test]
    fn natelim_neutral_uses_binder_consistent_step_context() {
        // Γ = n : ℕ; natrec (x. ℕ) 0 (x y. succ y) n compared with itself.
        let g = ctx(vec![T::Nat]);
        let e = T::nat_elim(T::Nat, T::Zero, T::succ(T::Var(0)), T::Var(0));
        assert_eq!(conv_neu(&g, &e, &e, 50), Outcome::Accept(T::Nat));
        let e2 = T::nat_elim(T::Nat, T::Zero, T::succ(T::Var(1)), T::Var(0));
        assert!(conv_neu(&g, &e, &e2, 50).is_reject());
    }

    #[test]
    fn preconditions_are_checked_on_request() {
        // refl 0 and refl 1 do not both inhabit Id(ℕ, 0, 0).
        let ty = T::id(T::Nat, T::Zero, T::Zero);
        let l = T::refl(T::Nat, T::Zero);
        let r = T::refl(T::Nat, T::numeral(1));
        let mut s = Session::new(10).with_preconditions(true);
        match conv_tm_red_in(&mut s, &Context::new(), &ty, &l, &r) {
            Outcome::Reject(r) => assert!(matches!(r.reason, Reason::Precondition(_))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_of_fuel_is_not_reject() {
        let g = ctx(vec![nat_to_nat()]);
        assert!(conv_tm(&g, &nat_to_nat(), &T::Var(0), &T::Var(0), 3).is_out_of_fuel());
        assert!(conv_tm(&g, &nat_to_nat(), &T::Var(0), &T::Var(0), 6).is_accept());
    }
}
