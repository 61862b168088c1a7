//! Type-directed deep normalisation to η-long normal forms.
//!
//! At Π the result is a λ whose body is the normal form of the applied
//! term; at Σ a pair of normalised projections. At positive types canonical
//! forms are normalised componentwise and neutrals spine by spine. `refl`
//! terms are returned as they are.

use crate::bidir::{self, Backend};
use crate::conv_typed::PRECONDITION_FUEL;
use crate::reduction::whnf_in;
use crate::session::{Halt, Outcome, Reason, Rejection, Res, Session};
use crate::syntax::{Context, Head, Term};

pub fn deep_nf_tm(ctx: &Context, ty: &Term, t: &Term, fuel: u64) -> Outcome<Term> {
    deep_nf_tm_in(&mut Session::new(fuel), ctx, ty, t)
}

pub fn deep_nf_ty(ctx: &Context, ty: &Term, fuel: u64) -> Outcome<Term> {
    deep_nf_ty_in(&mut Session::new(fuel), ctx, ty)
}

/// Normal form of a neutral together with the weak-head normal form of its type.
pub fn deep_nf_ne(ctx: &Context, n: &Term, fuel: u64) -> Outcome<(Term, Term)> {
    deep_nf_ne_in(&mut Session::new(fuel), ctx, n)
}

fn precondition(o: Outcome<impl Sized>, what: &str) -> Res<()> {
    match o {
        Outcome::Accept(_) => Ok(()),
        Outcome::OutOfFuel => Err(Halt::OutOfFuel),
        Outcome::Reject(r) => Err(Halt::Reject(Rejection {
            path: vec!["precondition"],
            reason: Reason::Precondition(format!("{what}: {r}")),
        })),
    }
}

pub fn deep_nf_tm_in(s: &mut Session, ctx: &Context, ty: &Term, t: &Term) -> Outcome<Term> {
    let pre = |s: &mut Session| {
        if s.checks_preconditions() {
            let o = bidir::check(ctx, t, ty, &Backend::Typed, PRECONDITION_FUEL);
            precondition(o, "input does not have the stated type")?;
        }
        Ok(())
    };
    pre(s).and_then(|_| tm(s, ctx, ty, t)).into()
}

pub fn deep_nf_ty_in(s: &mut Session, ctx: &Context, ty: &Term) -> Outcome<Term> {
    let pre = |s: &mut Session| {
        if s.checks_preconditions() {
            let o = bidir::check_ty(ctx, ty, &Backend::Typed, PRECONDITION_FUEL);
            precondition(o, "input is not a type")?;
        }
        Ok(())
    };
    pre(s).and_then(|_| self::ty(s, ctx, ty)).into()
}

pub fn deep_nf_ne_in(s: &mut Session, ctx: &Context, n: &Term) -> Outcome<(Term, Term)> {
    let pre = |s: &mut Session| {
        if s.checks_preconditions() {
            let o = bidir::infer(ctx, n, &Backend::Typed, PRECONDITION_FUEL);
            precondition(o, "neutral is ill-typed")?;
        }
        Ok(())
    };
    pre(s).and_then(|_| ne(s, ctx, n)).into()
}

pub(crate) fn ty(s: &mut Session, ctx: &Context, a: &Term) -> Res<Term> {
    s.wrapper("DnfTyRed", |s| {
        let a = whnf_in(s, a)?;
        ty_red(s, ctx, &a)
    })
}

fn ty_red(s: &mut Session, ctx: &Context, a: &Term) -> Res<Term> {
    match a {
        Term::Univ => s.rule("DnfUnivTy", |_| Ok(Term::Univ)),
        Term::Nat => s.rule("DnfNatTy", |_| Ok(Term::Nat)),
        Term::Empty => s.rule("DnfEmptyTy", |_| Ok(Term::Empty)),
        Term::Pi(dom, cod) => s.rule("DnfPiTy", |s| {
            let d = ty(s, ctx, dom)?;
            let c = ty(s, &ctx.extend((**dom).clone()), cod)?;
            Ok(Term::pi(d, c))
        }),
        Term::Sig(dom, cod) => s.rule("DnfSigTy", |s| {
            let d = ty(s, ctx, dom)?;
            let c = ty(s, &ctx.extend((**dom).clone()), cod)?;
            Ok(Term::sig(d, c))
        }),
        Term::Id(a, x, y) => s.rule("DnfIdTy", |s| {
            let a2 = ty(s, ctx, a)?;
            let x2 = tm(s, ctx, a, x)?;
            let y2 = tm(s, ctx, a, y)?;
            Ok(Term::id(a2, x2, y2))
        }),
        _ if a.is_neutral() => s.rule("DnfNeTy", |s| ne(s, ctx, a).map(|(n, _)| n)),
        _ => s.reject("deep_nf_ty", Reason::NotAType(a.head())),
    }
}

pub(crate) fn tm(s: &mut Session, ctx: &Context, ty: &Term, t: &Term) -> Res<Term> {
    s.wrapper("DnfTmRed", |s| {
        let ty = whnf_in(s, ty)?;
        match &ty {
            Term::Pi(dom, cod) => s.rule("DnfFunEta", |s| {
                let d = self::ty(s, ctx, dom)?;
                let applied = Term::app(t.shift(), Term::Var(0));
                let body = tm(s, &ctx.extend((**dom).clone()), cod, &applied)?;
                Ok(Term::lam(d, body))
            }),
            Term::Sig(dom, cod) => s.rule("DnfSigEta", |s| {
                let d = self::ty(s, ctx, dom)?;
                let c = self::ty(s, &ctx.extend((**dom).clone()), cod)?;
                let first = Term::fst(t.clone());
                let x = tm(s, ctx, dom, &first)?;
                let y = tm(s, ctx, &cod.subst1(&first), &Term::snd(t.clone()))?;
                Ok(Term::pair(d, c, x, y))
            }),
            _ => {
                let t = whnf_in(s, t)?;
                tm_red(s, ctx, &ty, &t)
            }
        }
    })
}

fn tm_red(s: &mut Session, ctx: &Context, ty: &Term, t: &Term) -> Res<Term> {
    const J: &str = "deep_nf_tm";
    let univ = Term::Univ;
    if !ty.is_pos() {
        return s.reject(J, Reason::NotAType(ty.head()));
    }
    if t.is_neutral() {
        return s.rule("DnfNePos", |s| ne(s, ctx, t).map(|(n, _)| n));
    }
    match (ty, t) {
        (Term::Univ, Term::Pi(a, b)) => s.rule("DnfPiCode", |s| {
            let a2 = tm(s, ctx, &univ, a)?;
            let b2 = tm(s, &ctx.extend((**a).clone()), &univ, b)?;
            Ok(Term::pi(a2, b2))
        }),
        (Term::Univ, Term::Sig(a, b)) => s.rule("DnfSigCode", |s| {
            let a2 = tm(s, ctx, &univ, a)?;
            let b2 = tm(s, &ctx.extend((**a).clone()), &univ, b)?;
            Ok(Term::sig(a2, b2))
        }),
        (Term::Univ, Term::Nat) => s.rule("DnfNatCode", |_| Ok(Term::Nat)),
        (Term::Univ, Term::Empty) => s.rule("DnfEmptyCode", |_| Ok(Term::Empty)),
        (Term::Univ, Term::Id(a, x, y)) => s.rule("DnfIdCode", |s| {
            let a2 = tm(s, ctx, &univ, a)?;
            let x2 = tm(s, ctx, a, x)?;
            let y2 = tm(s, ctx, a, y)?;
            Ok(Term::id(a2, x2, y2))
        }),
        (Term::Nat, Term::Zero) => s.rule("DnfZero", |_| Ok(Term::Zero)),
        (Term::Nat, Term::Succ(n)) => s.rule("DnfSucc", |s| Ok(Term::succ(tm(s, ctx, ty, n)?))),
        (Term::Id(..), Term::Refl(..)) => s.rule("DnfRefl", |_| Ok(t.clone())),
        _ => s.reject(J, Reason::IllTyped(t.head(), ty.head())),
    }
}

fn expected<T>(s: &Session, head: Head, found: &Term) -> Res<T> {
    s.reject(
        "deep_nf_ne",
        Reason::Expected {
            expected: head,
            found: found.head(),
        },
    )
}

pub(crate) fn ne(s: &mut Session, ctx: &Context, n: &Term) -> Res<(Term, Term)> {
    const J: &str = "deep_nf_ne";
    match n {
        Term::Var(i) => s.rule("DneVar", |s| match ctx.lookup(*i) {
            Some(ty) => Ok((n.clone(), whnf_in(s, &ty)?)),
            None => s.reject(J, Reason::Unbound(*i)),
        }),
        Term::App(f, u) => s.rule("DneApp", |s| match ne(s, ctx, f)? {
            (f2, Term::Pi(dom, cod)) => {
                let u2 = tm(s, ctx, &dom, u)?;
                Ok((Term::app(f2, u2), whnf_in(s, &cod.subst1(u))?))
            }
            (_, other) => expected(s, Head::Pi, &other),
        }),
        Term::Fst(p) => s.rule("DneFst", |s| match ne(s, ctx, p)? {
            (p2, Term::Sig(dom, _)) => Ok((Term::fst(p2), whnf_in(s, &dom)?)),
            (_, other) => expected(s, Head::Sig, &other),
        }),
        Term::Snd(p) => s.rule("DneSnd", |s| match ne(s, ctx, p)? {
            (p2, Term::Sig(_, cod)) => {
                let ty = cod.subst1(&Term::fst((**p).clone()));
                Ok((Term::snd(p2), whnf_in(s, &ty)?))
            }
            (_, other) => expected(s, Head::Sig, &other),
        }),
        Term::NatElim(p, z, st, m) => s.rule("DneNatElim", |s| {
            let m2 = match ne(s, ctx, m)? {
                (m2, Term::Nat) => m2,
                (_, other) => return expected(s, Head::Nat, &other),
            };
            let p2 = ty(s, &ctx.extend(Term::Nat), p)?;
            let z2 = tm(s, ctx, &p.subst1(&Term::Zero), z)?;
            let st2 = tm(s, &ctx.nat_step(p), &p.motive_at_succ(), st)?;
            let out = whnf_in(s, &p.subst1(m))?;
            Ok((Term::nat_elim(p2, z2, st2, m2), out))
        }),
        Term::EmptyElim(p, e) => s.rule("DneEmptyElim", |s| {
            let e2 = match ne(s, ctx, e)? {
                (e2, Term::Empty) => e2,
                (_, other) => return expected(s, Head::Empty, &other),
            };
            let p2 = ty(s, &ctx.extend(Term::Empty), p)?;
            let out = whnf_in(s, &p.subst1(e))?;
            Ok((Term::empty_elim(p2, e2), out))
        }),
        Term::IdElim(a, x, p, h, e) => s.rule("DneIdElim", |s| {
            let (e2, rhs) = match ne(s, ctx, e)? {
                (e2, Term::Id(_, _, rhs)) => (e2, *rhs),
                (_, other) => return expected(s, Head::Id, &other),
            };
            let a2 = ty(s, ctx, a)?;
            let x2 = tm(s, ctx, a, x)?;
            let p2 = ty(s, &ctx.id_motive(a, x), p)?;
            let refl = Term::refl((**a).clone(), (**x).clone());
            let h2 = tm(s, ctx, &p.subst2(x, &refl), h)?;
            let out = whnf_in(s, &p.subst2(&rhs, e))?;
            Ok((Term::id_elim(a2, x2, p2, h2, e2), out))
        }),
        _ => s.reject(J, Reason::NotWhnf(n.head())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term as T;

    fn nat_to_nat() -> Term {
        T::arrow(T::Nat, T::Nat)
    }

    #[test]
    fn eta_expands_function_variable() {
        let g = Context::from_entries(vec![nat_to_nat()]);
        assert_eq!(
            deep_nf_tm(&g, &nat_to_nat(), &T::Var(0), 50),
            Outcome::Accept(T::lam(T::Nat, T::app(T::Var(1), T::Var(0))))
        );
    }

    #[test]
    fn two_plus_two() {
        let t = T::nat_elim(T::Nat, T::numeral(2), T::succ(T::Var(0)), T::numeral(2));
        assert_eq!(
            deep_nf_tm(&Context::new(), &T::Nat, &t, 500),
            Outcome::Accept(T::numeral(4))
        );
        assert_eq!(deep_nf_tm(&Context::new(), &T::Nat, &T::Zero, 1), Outcome::Accept(T::Zero));
    }

    #[test]
    fn type_examples() {
        let dom = T::app(T::lam(T::Univ, T::Nat), T::Zero);
        assert_eq!(
            deep_nf_ty(&Context::new(), &T::arrow(dom, T::Nat), 50),
            Outcome::Accept(nat_to_nat())
        );
        assert_eq!(deep_nf_ty(&Context::new(), &T::Univ, 1), Outcome::Accept(T::Univ));
        let g = Context::from_entries(vec![T::Univ]);
        assert_eq!(deep_nf_ty(&g, &T::Var(0), 5), Outcome::Accept(T::Var(0)));
    }

    #[test]
    fn neutral_examples() {
        let g = Context::from_entries(vec![nat_to_nat(), T::Nat]);
        assert_eq!(
            deep_nf_ne(&g, &T::app(T::Var(1), T::Var(0)), 20),
            Outcome::Accept((T::app(T::Var(1), T::Var(0)), T::Nat))
        );
        let g = Context::from_entries(vec![T::Nat]);
        assert_eq!(deep_nf_ne(&g, &T::Var(0), 2), Outcome::Accept((T::Var(0), T::Nat)));
        let g = Context::from_entries(vec![nat_to_nat()]);
        let n = T::app(T::Var(0), T::app(T::lam(T::Nat, T::Var(0)), T::Zero));
        assert_eq!(
            deep_nf_ne(&g, &n, 50),
            Outcome::Accept((T::app(T::Var(0), T::Zero), T::Nat))
        );
    }

    #[test]
    fn refl_annotations_untouched() {
        let redex = T::app(T::lam(T::Nat, T::Var(0)), T::Zero);
        let r = T::refl(T::Nat, redex.clone());
        let ty = T::id(T::Nat, redex, T::Zero);
        assert_eq!(deep_nf_tm(&Context::new(), &ty, &r, 50), Outcome::Accept(r));
    }

    #[test]
    fn sigma_eta() {
        let g = Context::from_entries(vec![T::sig(T::Nat, T::Nat)]);
        let out = deep_nf_tm(&g, &T::sig(T::Nat, T::Nat), &T::Var(0), 50);
        assert_eq!(
            out,
            Outcome::Accept(T::pair(T::Nat, T::Nat, T::fst(T::Var(0)), T::snd(T::Var(0))))
        );
    }
}
