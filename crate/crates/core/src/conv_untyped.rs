//! Term-directed conversion.
//!
//! No types are consulted. η is handled where one side is a λ or a pair and
//! the other a neutral; two neutrals are compared structurally. Rule names:
//! `UTmRed CUni CFun CLam CLamNe CNeLam CSig CPair CPairNe CNePair CNat CZero
//! CSucc CEmpty CId ReflRefl NeuNeu` and `UVar UApp NSig1 NSig2 NNatElim
//! NEmptyElim NIdInd`.

use crate::reduction::whnf_in;
use crate::session::{ConvVerdict, Reason, Res, Session};
use crate::syntax::Term;

pub fn uconv(t: &Term, u: &Term, fuel: u64) -> ConvVerdict {
    uconv_in(&mut Session::new(fuel), t, u)
}

pub fn uconv_red(t: &Term, u: &Term, fuel: u64) -> ConvVerdict {
    uconv_red_in(&mut Session::new(fuel), t, u)
}

pub fn uconv_neu(n: &Term, m: &Term, fuel: u64) -> ConvVerdict {
    uconv_neu_in(&mut Session::new(fuel), n, m)
}

pub fn uconv_in(s: &mut Session, t: &Term, u: &Term) -> ConvVerdict {
    tm(s, t, u).into()
}

pub fn uconv_red_in(s: &mut Session, t: &Term, u: &Term) -> ConvVerdict {
    tm_red(s, t, u).into()
}

pub fn uconv_neu_in(s: &mut Session, n: &Term, m: &Term) -> ConvVerdict {
    neu(s, n, m).into()
}

pub(crate) fn tm(s: &mut Session, t: &Term, u: &Term) -> Res<()> {
    s.wrapper("UTmRed", |s| {
        let t = whnf_in(s, t)?;
        let u = whnf_in(s, u)?;
        tm_red(s, &t, &u)
    })
}

fn eta_app(n: &Term) -> Term {
    Term::app(n.shift(), Term::Var(0))
}

pub(crate) fn tm_red(s: &mut Session, t: &Term, u: &Term) -> Res<()> {
    match (t, u) {
        (Term::Univ, Term::Univ) => s.rule("CUni", |_| Ok(())),
        (Term::Pi(a1, b1), Term::Pi(a2, b2)) => s.rule("CFun", |s| {
            tm(s, a1, a2)?;
            tm(s, b1, b2)
        }),
        (Term::Lam(_, b1), Term::Lam(_, b2)) => s.rule("CLam", |s| tm(s, b1, b2)),
        (Term::Lam(_, b), n) if n.is_neutral() => s.rule("CLamNe", |s| tm(s, b, &eta_app(n))),
        (n, Term::Lam(_, b)) if n.is_neutral() => s.rule("CNeLam", |s| tm(s, &eta_app(n), b)),
        (Term::Sig(a1, b1), Term::Sig(a2, b2)) => s.rule("CSig", |s| {
            tm(s, a1, a2)?;
            tm(s, b1, b2)
        }),
        (Term::Pair(_, _, x1, y1), Term::Pair(_, _, x2, y2)) => s.rule("CPair", |s| {
            tm(s, x1, x2)?;
            tm(s, y1, y2)
        }),
        (Term::Pair(_, _, x, y), n) if n.is_neutral() => s.rule("CPairNe", |s| {
            tm(s, x, &Term::fst(n.clone()))?;
            tm(s, y, &Term::snd(n.clone()))
        }),
        (n, Term::Pair(_, _, x, y)) if n.is_neutral() => s.rule("CNePair", |s| {
            tm(s, &Term::fst(n.clone()), x)?;
            tm(s, &Term::snd(n.clone()), y)
        }),
        (Term::Nat, Term::Nat) => s.rule("CNat", |_| Ok(())),
        (Term::Zero, Term::Zero) => s.rule("CZero", |_| Ok(())),
        (Term::Succ(m), Term::Succ(n)) => s.rule("CSucc", |s| tm(s, m, n)),
        (Term::Empty, Term::Empty) => s.rule("CEmpty", |_| Ok(())),
        (Term::Id(a1, x1, y1), Term::Id(a2, x2, y2)) => s.rule("CId", |s| {
            tm(s, a1, a2)?;
            tm(s, x1, x2)?;
            tm(s, y1, y2)
        }),
        (Term::Refl(..), Term::Refl(..)) => s.rule("ReflRefl", |_| Ok(())),
        _ if t.is_neutral() && u.is_neutral() => s.rule("NeuNeu", |s| neu(s, t, u)),
        _ if !t.is_whnf() => s.reject("uconv_red", Reason::NotWhnf(t.head())),
        _ if !u.is_whnf() => s.reject("uconv_red", Reason::NotWhnf(u.head())),
        _ => s.reject(
            "uconv_red",
            Reason::HeadMismatch {
                left: t.head(),
                right: u.head(),
            },
        ),
    }
}

pub(crate) fn neu(s: &mut Session, n: &Term, m: &Term) -> Res<()> {
    const J: &str = "uconv_neu";
    match (n, m) {
        (Term::Var(i), Term::Var(j)) if i == j => s.rule("UVar", |_| Ok(())),
        (Term::Var(i), Term::Var(j)) => s.reject(
            J,
            Reason::VarMismatch {
                left: *i,
                right: *j,
            },
        ),
        (Term::App(f, a), Term::App(g, b)) => s.rule("UApp", |s| {
            neu(s, f, g)?;
            tm(s, a, b)
        }),
        (Term::Fst(p), Term::Fst(q)) => s.rule("NSig1", |s| neu(s, p, q)),
        (Term::Snd(p), Term::Snd(q)) => s.rule("NSig2", |s| neu(s, p, q)),
        (Term::NatElim(p1, z1, s1, n1), Term::NatElim(p2, z2, s2, n2)) => {
            s.rule("NNatElim", |s| {
                neu(s, n1, n2)?;
                tm(s, p1, p2)?;
                tm(s, z1, z2)?;
                tm(s, s1, s2)
            })
        }
        (Term::EmptyElim(p1, e1), Term::EmptyElim(p2, e2)) => s.rule("NEmptyElim", |s| {
            neu(s, e1, e2)?;
            tm(s, p1, p2)
        }),
        (Term::IdElim(_, _, p1, h1, e1), Term::IdElim(_, _, p2, h2, e2)) => {
            s.rule("NIdInd", |s| {
                neu(s, e1, e2)?;
                tm(s, p1, p2)?;
                tm(s, h1, h2)
            })
        }
        _ if !n.is_neutral() => s.reject(J, Reason::NotWhnf(n.head())),
        _ if !m.is_neutral() => s.reject(J, Reason::NotWhnf(m.head())),
        _ => s.reject(
            J,
            Reason::HeadMismatch {
                left: n.head(),
                right: m.head(),
            },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::TraceEvent;
    use crate::syntax::Term as T;

    #[test]
    fn uconv_examples() {
        assert!(uconv(&T::Zero, &T::Zero, 1).is_accept());
        let redex = T::app(T::lam(T::Nat, T::Var(0)), T::Zero);
        assert!(uconv(&redex, &T::Zero, 10).is_accept());
        assert!(uconv(&T::Zero, &T::numeral(1), 5).is_reject());
    }

    #[test]
    fn lambda_annotations_are_ignored() {
        let l = T::lam(T::Nat, T::Var(0));
        let r = T::lam(T::Univ, T::Var(0));
        assert!(uconv_red(&l, &r, 5).is_accept());
    }

    #[test]
    fn lambda_against_neutral() {
        let l = T::lam(T::Nat, T::app(T::Var(1), T::Var(0)));
        assert!(uconv_red(&l, &T::Var(0), 20).is_accept());
        assert!(uconv_red(&T::Var(0), &l, 20).is_accept());
        assert!(uconv_red(&l, &T::Var(1), 20).is_reject());
    }

    #[test]
    fn pair_against_neutral() {
        let p = T::pair(T::Nat, T::Nat, T::fst(T::Var(0)), T::snd(T::Var(0)));
        assert!(uconv_red(&p, &T::Var(0), 20).is_accept());
        assert!(uconv_red(&T::Var(0), &p, 20).is_accept());
    }

    #[test]
    fn neutral_trace_has_no_expansion() {
        let mut rules = Vec::new();
        let v = {
            let mut s = Session::new(10).with_trace(|e: TraceEvent| rules.push((e.rule, e.depth)));
            uconv_red_in(&mut s, &T::Var(0), &T::Var(0))
        };
        assert!(v.is_accept());
        assert_eq!(rules, vec![("NeuNeu", 0), ("UVar", 1)]);
    }

    #[test]
    fn neutral_examples() {
        assert!(uconv_neu(&T::Var(3), &T::Var(3), 1).is_accept());
        assert!(uconv_neu(&T::Var(0), &T::Var(1), 1).is_reject());
        assert!(uconv_neu(&T::fst(T::Var(0)), &T::snd(T::Var(0)), 2).is_reject());
    }

    #[test]
    fn idelim_annotations_are_ignored() {
        let a = T::id_elim(T::Nat, T::Zero, T::Nat, T::Zero, T::Var(0));
        let b = T::id_elim(T::Univ, T::numeral(3), T::Nat, T::Zero, T::Var(0));
        assert!(uconv_neu(&a, &b, 10).is_accept());
    }

    #[test]
    fn canonical_against_neutral_rejects() {
        assert!(uconv_red(&T::Zero, &T::Var(0), 5).is_reject());
        assert!(uconv_red(&T::Var(0), &T::Nat, 5).is_reject());
    }
}
