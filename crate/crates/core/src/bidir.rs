//! Bidirectional type checking, parameterised by the conversion used at the
//! `Check` rule.
//!
//! Every term infers. Eliminators infer the reduced type of their principal
//! argument; constructors and type formers check their components.

use std::fmt;

use crate::reduction::whnf_in;
use crate::session::{ConvVerdict, Halt, InferVerdict, Reason, Rejection, Res, Session};
use crate::syntax::{Context, Head, Term};
use crate::{conv_typed, conv_untyped};

/// A conversion procedure usable by the type checker.
pub trait ConvBackend {
    /// Types `a` and `b` are convertible in `ctx`.
    fn type_conv(&self, s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> Res<()>;

    /// Terms `t` and `u` are convertible at `ty` in `ctx`.
    fn term_conv(&self, s: &mut Session, ctx: &Context, ty: &Term, t: &Term, u: &Term)
        -> Res<()>;
}

/// The two conversion checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Typed,
    Untyped,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Typed, Backend::Untyped];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Typed => "typed",
            Backend::Untyped => "untyped",
        }
    }

    /// Term conversion with a fresh budget.
    pub fn conv_tm(self, ctx: &Context, ty: &Term, t: &Term, u: &Term, fuel: u64) -> ConvVerdict {
        let mut s = Session::new(fuel);
        self.term_conv(&mut s, ctx, ty, t, u).into()
    }

    /// Type conversion with a fresh budget.
    pub fn conv_ty(self, ctx: &Context, a: &Term, b: &Term, fuel: u64) -> ConvVerdict {
        let mut s = Session::new(fuel);
        self.type_conv(&mut s, ctx, a, b).into()
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ConvBackend for Backend {
    fn type_conv(&self, s: &mut Session, ctx: &Context, a: &Term, b: &Term) -> Res<()> {
        match self {
            Backend::Typed => conv_typed::ty(s, ctx, a, b),
            Backend::Untyped => conv_untyped::tm(s, a, b),
        }
    }

    fn term_conv(
        &self,
        s: &mut Session,
        ctx: &Context,
        ty: &Term,
        t: &Term,
        u: &Term,
    ) -> Res<()> {
        match self {
            Backend::Typed => conv_typed::tm(s, ctx, ty, t, u),
            Backend::Untyped => conv_untyped::tm(s, t, u),
        }
    }
}

pub fn infer(ctx: &Context, t: &Term, conv: &dyn ConvBackend, fuel: u64) -> InferVerdict {
    infer_in(&mut Session::new(fuel), ctx, t, conv)
}

pub fn infer_red(ctx: &Context, t: &Term, conv: &dyn ConvBackend, fuel: u64) -> InferVerdict {
    infer_red_in(&mut Session::new(fuel), ctx, t, conv)
}

pub fn check(ctx: &Context, t: &Term, ty: &Term, conv: &dyn ConvBackend, fuel: u64) -> ConvVerdict {
    check_in(&mut Session::new(fuel), ctx, t, ty, conv)
}

pub fn check_ty(ctx: &Context, ty: &Term, conv: &dyn ConvBackend, fuel: u64) -> ConvVerdict {
    check_ty_in(&mut Session::new(fuel), ctx, ty, conv)
}

pub fn check_ctx(ctx: &Context, conv: &dyn ConvBackend, fuel: u64) -> ConvVerdict {
    check_ctx_in(&mut Session::new(fuel), ctx, conv)
}

fn pre_ctx(s: &mut Session, ctx: &Context, conv: &dyn ConvBackend) -> Res<()> {
    if s.checks_preconditions() {
        let mut inner = Session::new(conv_typed::PRECONDITION_FUEL);
        match ctx_wf(&mut inner, ctx, conv) {
            Err(Halt::Reject(r)) => {
                return Err(Halt::Reject(Rejection {
                    path: vec!["precondition"],
                    reason: Reason::Precondition(format!("context is not well formed: {r}")),
                }))
            }
            other => other?,
        }
    }
    Ok(())
}

pub fn infer_in(s: &mut Session, ctx: &Context, t: &Term, conv: &dyn ConvBackend) -> InferVerdict {
    pre_ctx(s, ctx, conv)
        .and_then(|_| Checker { conv }.infer(s, ctx, t))
        .into()
}

pub fn infer_red_in(
    s: &mut Session,
    ctx: &Context,
    t: &Term,
    conv: &dyn ConvBackend,
) -> InferVerdict {
    pre_ctx(s, ctx, conv)
        .and_then(|_| Checker { conv }.infer_red(s, ctx, t))
        .into()
}

pub fn check_in(
    s: &mut Session,
    ctx: &Context,
    t: &Term,
    ty: &Term,
    conv: &dyn ConvBackend,
) -> ConvVerdict {
    let c = Checker { conv };
    pre_ctx(s, ctx, conv)
        .and_then(|_| {
            if s.checks_preconditions() {
                let mut inner = Session::new(conv_typed::PRECONDITION_FUEL);
                c.check_ty(&mut inner, ctx, ty)?;
            }
            c.check(s, ctx, t, ty)
        })
        .into()
}

pub fn check_ty_in(s: &mut Session, ctx: &Context, ty: &Term, conv: &dyn ConvBackend) -> ConvVerdict {
    pre_ctx(s, ctx, conv)
        .and_then(|_| Checker { conv }.check_ty(s, ctx, ty))
        .into()
}

pub fn check_ctx_in(s: &mut Session, ctx: &Context, conv: &dyn ConvBackend) -> ConvVerdict {
    ctx_wf(s, ctx, conv).into()
}

fn ctx_wf(s: &mut Session, ctx: &Context, conv: &dyn ConvBackend) -> Res<()> {
    let c = Checker { conv };
    let n = ctx.len();
    for (k, entry) in ctx.entries().iter().enumerate() {
        match c.check_ty(s, &ctx.prefix(k), entry) {
            Err(Halt::Reject(mut r)) => {
                r.reason = Reason::BadContextEntry { index: n - 1 - k };
                return Err(Halt::Reject(r));
            }
            other => other?,
        }
    }
    Ok(())
}

struct Checker<'c> {
    conv: &'c dyn ConvBackend,
}

impl Checker<'_> {
    fn infer(&self, s: &mut Session, ctx: &Context, t: &Term) -> Res<Term> {
        const J: &str = "infer";
        let univ = || Term::Univ;
        match t {
            Term::Var(i) => s.rule("Var", |s| match ctx.lookup(*i) {
                Some(ty) => Ok(ty),
                None => s.reject(J, Reason::Unbound(*i)),
            }),
            Term::Univ => s.reject(J, Reason::Untypable(Head::Univ)),
            Term::Pi(a, b) => s.rule("Fun", |s| {
                self.check(s, ctx, a, &univ())?;
                self.check(s, &ctx.extend((**a).clone()), b, &univ())?;
                Ok(univ())
            }),
            Term::Lam(a, body) => s.rule("Abs", |s| {
                self.check_ty(s, ctx, a)?;
                let b = self.infer(s, &ctx.extend((**a).clone()), body)?;
                Ok(Term::Pi(a.clone(), Box::new(b)))
            }),
            Term::App(f, u) => s.rule("App", |s| match self.infer_red(s, ctx, f)? {
                Term::Pi(a, b) => {
                    self.check(s, ctx, u, &a)?;
                    Ok(b.subst1(u))
                }
                other => s.reject(J, expected(Head::Pi, &other)),
            }),
            Term::Sig(a, b) => s.rule("SigUniv", |s| {
                self.check(s, ctx, a, &univ())?;
                self.check(s, &ctx.extend((**a).clone()), b, &univ())?;
                Ok(univ())
            }),
            Term::Pair(a, b, x, y) => s.rule("Pair", |s| {
                self.check_ty(s, ctx, a)?;
                self.check_ty(s, &ctx.extend((**a).clone()), b)?;
                self.check(s, ctx, x, a)?;
                self.check(s, ctx, y, &b.subst1(x))?;
                Ok(Term::Sig(a.clone(), b.clone()))
            }),
            Term::Fst(p) => s.rule("Proj1", |s| match self.infer_red(s, ctx, p)? {
                Term::Sig(a, _) => Ok(*a),
                other => s.reject(J, expected(Head::Sig, &other)),
            }),
            Term::Snd(p) => s.rule("Proj2", |s| match self.infer_red(s, ctx, p)? {
                Term::Sig(_, b) => Ok(b.subst1(&Term::fst((**p).clone()))),
                other => s.reject(J, expected(Head::Sig, &other)),
            }),
            Term::Nat => s.rule("NatUniv", |_| Ok(univ())),
            Term::Zero => s.rule("Zero", |_| Ok(Term::Nat)),
            Term::Succ(n) => s.rule("Succ", |s| {
                self.check(s, ctx, n, &Term::Nat)?;
                Ok(Term::Nat)
            }),
            Term::NatElim(p, z, st, n) => s.rule("NatRec", |s| {
                self.check(s, ctx, n, &Term::Nat)?;
                self.check_ty(s, &ctx.extend(Term::Nat), p)?;
                self.check(s, ctx, z, &p.subst1(&Term::Zero))?;
                self.check(s, &ctx.nat_step(p), st, &p.motive_at_succ())?;
                Ok(p.subst1(n))
            }),
            Term::Empty => s.rule("Empty", |_| Ok(univ())),
            Term::EmptyElim(p, e) => s.rule("EmptyInd", |s| {
                self.check_ty(s, &ctx.extend(Term::Empty), p)?;
                self.check(s, ctx, e, &Term::Empty)?;
                Ok(p.subst1(e))
            }),
            Term::Id(a, x, y) => s.rule("IdTy", |s| {
                self.check(s, ctx, a, &univ())?;
                self.check(s, ctx, x, a)?;
                self.check(s, ctx, y, a)?;
                Ok(univ())
            }),
            Term::Refl(a, x) => s.rule("ReflTm", |s| {
                self.check_ty(s, ctx, a)?;
                self.check(s, ctx, x, a)?;
                Ok(Term::Id(a.clone(), x.clone(), x.clone()))
            }),
            Term::IdElim(a, x, p, h, e) => s.rule("IdInd", |s| {
                self.check_ty(s, ctx, a)?;
                self.check(s, ctx, x, a)?;
                let (a1, x1, y1) = match self.infer_red(s, ctx, e)? {
                    Term::Id(a1, x1, y1) => (a1, x1, y1),
                    other => return s.reject(J, expected(Head::Id, &other)),
                };
                let got = Term::Id(a1, x1, y1.clone());
                let want = Term::Id(a.clone(), x.clone(), y1.clone());
                self.conv.type_conv(s, ctx, &got, &want)?;
                self.check_ty(s, &ctx.id_motive(a, x), p)?;
                let refl = Term::refl((**a).clone(), (**x).clone());
                self.check(s, ctx, h, &p.subst2(x, &refl))?;
                Ok(p.subst2(&y1, e))
            }),
        }
    }

    fn infer_red(&self, s: &mut Session, ctx: &Context, t: &Term) -> Res<Term> {
        s.silent(|s| {
            let ty = self.infer(s, ctx, t)?;
            whnf_in(s, &ty)
        })
    }

    fn check(&self, s: &mut Session, ctx: &Context, t: &Term, ty: &Term) -> Res<()> {
        s.rule("Check", |s| {
            let got = self.infer(s, ctx, t)?;
            self.conv.type_conv(s, ctx, &got, ty)
        })
    }

    fn check_ty(&self, s: &mut Session, ctx: &Context, ty: &Term) -> Res<()> {
        match ty {
            Term::Univ => s.rule("Sort", |_| Ok(())),
            Term::Pi(a, b) => s.rule("FunTy", |s| {
                self.check_ty(s, ctx, a)?;
                self.check_ty(s, &ctx.extend((**a).clone()), b)
            }),
            Term::Sig(a, b) => s.rule("SigTy", |s| {
                self.check_ty(s, ctx, a)?;
                self.check_ty(s, &ctx.extend((**a).clone()), b)
            }),
            Term::Nat => s.rule("NatTy", |_| Ok(())),
            Term::Empty => s.rule("EmptyTy", |_| Ok(())),
            Term::Id(a, x, y) => s.rule("IdTy", |s| {
                self.check_ty(s, ctx, a)?;
                self.check(s, ctx, x, a)?;
                self.check(s, ctx, y, a)
            }),
            _ => s.rule("El", |s| match self.infer_red(s, ctx, ty)? {
                Term::Univ => Ok(()),
                other => s.reject("check_ty", Reason::NotAType(other.head())),
            }),
        }
    }
}

fn expected(head: Head, found: &Term) -> Reason {
    Reason::Expected {
        expected: head,
        found: found.head(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Outcome;
    use crate::syntax::Term as T;

    fn both(f: impl Fn(&Backend)) {
        for b in Backend::ALL {
            f(&b);
        }
    }

    fn ctx(entries: Vec<Term>) -> Context {
        Context::from_entries(entries)
    }

    #[test]
    fn infer_examples() {
        both(|b| {
            assert_eq!(infer(&ctx(vec![T::Nat]), &T::Var(0), b, 5), Outcome::Accept(T::Nat));
            let f = T::lam(T::Nat, T::succ(T::Var(0)));
            assert_eq!(
                infer(&Context::new(), &f, b, 20),
                Outcome::Accept(T::arrow(T::Nat, T::Nat))
            );
            let bad = T::app(T::Zero, T::Zero);
            match infer(&Context::new(), &bad, b, 10) {
                Outcome::Reject(r) => assert_eq!(
                    r.reason,
                    Reason::Expected {
                        expected: Head::Pi,
                        found: Head::Nat
                    }
                ),
                other => panic!("{other:?}"),
            }
        });
    }

    #[test]
    fn infer_red_examples() {
        both(|b| {
            let redex = T::app(T::lam(T::Univ, T::Var(0)), T::Nat);
            assert_eq!(
                infer_red(&ctx(vec![redex]), &T::Var(0), b, 10),
                Outcome::Accept(T::Nat)
            );
            assert_eq!(infer_red(&Context::new(), &T::Zero, b, 2), Outcome::Accept(T::Nat));
            let bad = T::succ(T::lam(T::Nat, T::Var(0)));
            assert!(infer_red(&Context::new(), &bad, b, 10).is_reject());
        });
    }

    #[test]
    fn check_examples() {
        both(|b| {
            assert!(check(&Context::new(), &T::Zero, &T::Nat, b, 5).is_accept());
            assert!(check(&Context::new(), &T::Zero, &T::arrow(T::Nat, T::Nat), b, 10).is_reject());
            let cod = T::app(T::lam(T::Univ, T::Nat), T::Zero);
            let ty = T::pi(T::Nat, cod);
            let id = T::lam(T::Nat, T::Var(0));
            assert!(check(&Context::new(), &id, &ty, b, 50).is_accept());
        });
    }

    #[test]
    fn check_ty_examples() {
        both(|b| {
            assert!(check_ty(&Context::new(), &T::arrow(T::Nat, T::Univ), b, 10).is_accept());
            match check_ty(&Context::new(), &T::Zero, b, 10) {
                Outcome::Reject(r) => assert_eq!(r.reason, Reason::NotAType(Head::Nat)),
                other => panic!("{other:?}"),
            }
            let g = ctx(vec![T::arrow(T::Nat, T::Univ)]);
            assert!(check_ty(&g, &T::app(T::Var(0), T::Zero), b, 10).is_accept());
        });
    }

    #[test]
    fn check_ctx_examples() {
        both(|b| {
            assert!(check_ctx(&Context::new(), b, 1).is_accept());
            assert!(check_ctx(&ctx(vec![T::Univ, T::Var(0)]), b, 10).is_accept());
            match check_ctx(&ctx(vec![T::Zero]), b, 5) {
                Outcome::Reject(r) => assert_eq!(r.reason, Reason::BadContextEntry { index: 0 }),
                other => panic!("{other:?}"),
            }
        });
    }

    #[test]
    fn universe_has_no_type() {
        both(|b| assert!(infer(&Context::new(), &T::Univ, b, 5).is_reject()));
    }

    #[test]
    fn pair_infers_annotated_sigma() {
        // pair {x:Nat. Id Nat x x} (0, refl Nat 0)
        let cod = T::id(T::Nat, T::Var(0), T::Var(0));
        let p = T::pair(T::Nat, cod.clone(), T::Zero, T::refl(T::Nat, T::Zero));
        both(|b| {
            assert_eq!(
                infer(&Context::new(), &p, b, 100),
                Outcome::Accept(T::sig(T::Nat, cod.clone()))
            );
            assert_eq!(
                infer(&Context::new(), &T::snd(p.clone()), b, 100),
                Outcome::Accept(cod.subst1(&T::fst(p.clone())))
            );
        });
    }

    #[test]
    fn natrec_and_idrec() {
        // natrec (x. Nat) 2 (x y. succ y) n : Nat
        let g = ctx(vec![T::Nat]);
        let add2 = T::nat_elim(T::Nat, T::numeral(2), T::succ(T::Var(0)), T::Var(0));
        // idrec Nat 0 (x y. Id Nat x x) (refl Nat 0) (refl Nat 0)
        let motive = T::id(T::Nat, T::Var(1), T::Var(1));
        let j = T::id_elim(
            T::Nat,
            T::Zero,
            motive,
            T::refl(T::Nat, T::Zero),
            T::refl(T::Nat, T::Zero),
        );
        both(|b| {
            assert_eq!(infer(&g, &add2, b, 100), Outcome::Accept(T::Nat));
            assert_eq!(
                infer(&Context::new(), &j, b, 200),
                Outcome::Accept(T::id(T::Nat, T::Zero, T::Zero))
            );
        });
    }

    #[test]
    fn idrec_rejects_mismatched_left_endpoint() {
        let j = T::id_elim(
            T::Nat,
            T::numeral(1),
            T::Nat,
            T::Zero,
            T::refl(T::Nat, T::Zero),
        );
        both(|b| assert!(infer(&Context::new(), &j, b, 200).is_reject()));
    }
}
