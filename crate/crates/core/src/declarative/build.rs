//! Smart constructors that assemble derivations bottom-up.
//!
//! Typing derivations are built syntactically: a premise type must match
//! the type the rule expects exactly, otherwise construction fails. Use
//! [`conv`] to bridge a mismatch with an explicit conversion derivation.

use super::{Derivation, Judgment as J, Rule as R, RED_FUEL};
use crate::reduction::whnf;
use crate::session::Outcome;
use crate::syntax::{Context, Term};

pub type Built<T> = Result<T, String>;

fn node(rule: R, conclusion: J, premises: Vec<Derivation>) -> Derivation {
    Derivation::new(rule, conclusion, premises)
}

/// `⊢ Γ`
pub fn ctx(g: &Context) -> Built<Derivation> {
    match g.pop() {
        None => Ok(node(R::CtxEmpty, J::Ctx(g.clone()), vec![])),
        Some((g0, a)) => Ok(node(
            R::CtxExt,
            J::Ctx(g.clone()),
            vec![ctx(&g0)?, ty(&g0, &a)?],
        )),
    }
}

/// `Γ ⊢ A`, by the formation rule for the head of `A`, or by `El`.
pub fn ty(g: &Context, a: &Term) -> Built<Derivation> {
    let j = J::Ty(g.clone(), a.clone());
    Ok(match a {
        Term::Pi(dom, cod) | Term::Sig(dom, cod) => {
            let rule = if matches!(a, Term::Pi(..)) { R::FunTy } else { R::SigTy };
            node(rule, j, vec![ty(g, dom)?, ty(&g.extend((**dom).clone()), cod)?])
        }
        Term::Nat => node(R::NatTy, j, vec![ctx(g)?]),
        Term::Empty => node(R::EmptyTy, j, vec![ctx(g)?]),
        Term::Univ => node(R::UnivTy, j, vec![ctx(g)?]),
        Term::Id(t, x, y) => node(R::IdTy, j, vec![ty(g, t)?, typed(g, x, t)?, typed(g, y, t)?]),
        _ => node(R::El, j, vec![typed(g, a, &Term::Univ)?]),
    })
}

/// `Γ ⊢ t : A` where `A` must be exactly the synthesised type.
pub fn typed(g: &Context, t: &Term, a: &Term) -> Built<Derivation> {
    let (d, got) = infer(g, t)?;
    if &got == a {
        Ok(d)
    } else {
        Err(format!("{t:?} has type {got:?}, not {a:?}"))
    }
}

/// `Γ ⊢ t : B` from `Γ ⊢ t : A` and a derivation of `Γ ⊢ A ≅ B`.
pub fn conv(d: Derivation, eq: Derivation) -> Built<Derivation> {
    let (J::Typed(g, t, a), J::ConvTy(_, a2, b)) = (&d.conclusion, &eq.conclusion) else {
        return Err("conv expects a typing and a type conversion".into());
    };
    if a != a2 {
        return Err("conversion does not start at the inferred type".into());
    }
    let j = J::Typed(g.clone(), t.clone(), b.clone());
    Ok(node(R::Conv, j, vec![d, eq]))
}

/// A typing derivation for `t` together with its syntactic type.
pub fn infer(g: &Context, t: &Term) -> Built<(Derivation, Term)> {
    let done = |rule, a: Term, premises| {
        let j = J::Typed(g.clone(), t.clone(), a.clone());
        Ok((node(rule, j, premises), a))
    };
    match t {
        Term::Var(i) => {
            let a = g.lookup(*i).ok_or("unbound variable")?;
            done(R::Var, a, vec![ctx(g)?])
        }
        Term::Univ => Err("U has no type".into()),
        Term::Pi(a, b) | Term::Sig(a, b) => {
            let rule = if matches!(t, Term::Pi(..)) { R::FunUni } else { R::SigUni };
            let pa = typed(g, a, &Term::Univ)?;
            let pb = typed(&g.extend((**a).clone()), b, &Term::Univ)?;
            done(rule, Term::Univ, vec![pa, pb])
        }
        Term::Lam(a, body) => {
            let ga = g.extend((**a).clone());
            let (pt, b) = infer(&ga, body)?;
            let pi = Term::Pi(a.clone(), Box::new(b.clone()));
            done(R::Abs, pi, vec![ty(g, a)?, ty(&ga, &b)?, pt])
        }
        Term::App(f, u) => {
            let (pf, fty) = infer(g, f)?;
            let Term::Pi(a, b) = &fty else {
                return Err(format!("{f:?} does not have a function type"));
            };
            let pu = typed(g, u, a)?;
            done(R::App, b.subst1(u), vec![pf, pu])
        }
        Term::Pair(a, b, x, y) => {
            let ps = vec![
                ty(g, a)?,
                ty(&g.extend((**a).clone()), b)?,
                typed(g, x, a)?,
                typed(g, y, &b.subst1(x))?,
            ];
            done(R::Pair, Term::Sig(a.clone(), b.clone()), ps)
        }
        Term::Fst(p) | Term::Snd(p) => {
            let (pp, pty) = infer(g, p)?;
            let Term::Sig(a, b) = &pty else {
                return Err(format!("{p:?} does not have a pair type"));
            };
            if matches!(t, Term::Fst(_)) {
                done(R::Proj1, (**a).clone(), vec![pp])
            } else {
                done(R::Proj2, b.subst1(&Term::fst((**p).clone())), vec![pp])
            }
        }
        Term::Nat => done(R::NatUni, Term::Univ, vec![ctx(g)?]),
        Term::Empty => done(R::EmptyUni, Term::Univ, vec![ctx(g)?]),
        Term::Zero => done(R::Zero, Term::Nat, vec![ctx(g)?]),
        Term::Succ(n) => done(R::Succ, Term::Nat, vec![typed(g, n, &Term::Nat)?]),
        Term::NatElim(p, z, s, n) => {
            let ps = vec![
                typed(g, n, &Term::Nat)?,
                ty(&g.extend(Term::Nat), p)?,
                typed(g, z, &p.subst1(&Term::Zero))?,
                typed(&g.nat_step(p), s, &p.motive_at_succ())?,
            ];
            done(R::NatRec, p.subst1(n), ps)
        }
        Term::EmptyElim(p, e) => {
            let ps = vec![typed(g, e, &Term::Empty)?, ty(&g.extend(Term::Empty), p)?];
            done(R::EmptyInd, p.subst1(e), ps)
        }
        Term::Id(a, x, y) => {
            let ps = vec![typed(g, a, &Term::Univ)?, typed(g, x, a)?, typed(g, y, a)?];
            done(R::IdUni, Term::Univ, ps)
        }
        Term::Refl(a, x) => {
            let ps = vec![ty(g, a)?, typed(g, x, a)?];
            done(R::ReflTm, Term::Id(a.clone(), x.clone(), x.clone()), ps)
        }
        Term::IdElim(a, x, p, h, e) => {
            let (pe, ety) = infer(g, e)?;
            let Term::Id(a2, x2, y) = &ety else {
                return Err(format!("{e:?} does not have an identity type"));
            };
            if a2 != a || x2 != x {
                return Err("scrutinee type does not match the annotations".into());
            }
            let refl = Term::refl((**a).clone(), (**x).clone());
            let ps = vec![
                ty(g, a)?,
                typed(g, x, a)?,
                typed(g, y, a)?,
                pe,
                ty(&g.id_motive(a, x), p)?,
                typed(g, h, &p.subst2(x, &refl))?,
            ];
            done(R::IdInd, p.subst2(y, e), ps)
        }
    }
}

/// `Γ ⊢ A ≅ A` by reflexivity.
pub fn refl_ty(g: &Context, a: &Term) -> Built<Derivation> {
    Ok(node(R::ReflTy, J::ConvTy(g.clone(), a.clone(), a.clone()), vec![ty(g, a)?]))
}

/// `Γ ⊢ t ≅ t : A` by reflexivity.
pub fn refl_tm(g: &Context, a: &Term, t: &Term) -> Built<Derivation> {
    let j = J::ConvTm(g.clone(), a.clone(), t.clone(), t.clone());
    Ok(node(R::Refl, j, vec![typed(g, t, a)?]))
}

/// `Γ ⊢ (λx:A. t) u ≅ t[u] : B[u]` where `t` synthesises `B`.
pub fn beta_fun(g: &Context, redex: &Term) -> Built<Derivation> {
    let Term::App(f, u) = redex else {
        return Err("not an application".into());
    };
    let Term::Lam(a, t) = &**f else {
        return Err("not a β-redex".into());
    };
    let ga = g.extend((**a).clone());
    let (pt, b) = infer(&ga, t)?;
    let j = J::ConvTm(g.clone(), b.subst1(u), redex.clone(), t.subst1(u));
    Ok(node(
        R::BetaFun,
        j,
        vec![ty(g, a)?, ty(&ga, &b)?, pt, typed(g, u, a)?],
    ))
}

/// `Γ ⊢ t ≅ u : A` flipped.
pub fn sym(d: Derivation) -> Built<Derivation> {
    match &d.conclusion {
        J::ConvTm(g, a, t, u) => {
            let j = J::ConvTm(g.clone(), a.clone(), u.clone(), t.clone());
            Ok(node(R::Sym, j, vec![d]))
        }
        J::ConvTy(g, a, b) => {
            let j = J::ConvTy(g.clone(), b.clone(), a.clone());
            Ok(node(R::SymTy, j, vec![d]))
        }
        _ => Err("not a conversion".into()),
    }
}

/// Chains two conversions sharing their middle side.
pub fn trans(d: Derivation, e: Derivation) -> Built<Derivation> {
    match (&d.conclusion, &e.conclusion) {
        (J::ConvTm(g, a, t, _), J::ConvTm(_, _, _, v)) => {
            let j = J::ConvTm(g.clone(), a.clone(), t.clone(), v.clone());
            Ok(node(R::Trans, j, vec![d, e]))
        }
        (J::ConvTy(g, a, _), J::ConvTy(_, _, c)) => {
            let j = J::ConvTy(g.clone(), a.clone(), c.clone());
            Ok(node(R::TransTy, j, vec![d, e]))
        }
        _ => Err("not two conversions of the same kind".into()),
    }
}

/// `Γ ⊢ A ≅ B` from `Γ ⊢ A ≅ B : U`.
pub fn el_conv(d: Derivation) -> Built<Derivation> {
    let J::ConvTm(g, Term::Univ, a, b) = &d.conclusion else {
        return Err("not a conversion at U".into());
    };
    let j = J::ConvTy(g.clone(), a.clone(), b.clone());
    Ok(node(R::ElC, j, vec![d]))
}

/// `Γ ⊢ n ~ n : T` with every argument compared by reflexivity.
pub fn neu_refl(g: &Context, n: &Term) -> Built<(Derivation, Term)> {
    let done = |rule, ty: Term, premises| {
        let j = J::Neu(g.clone(), n.clone(), n.clone(), ty.clone());
        Ok((node(rule, j, premises), ty))
    };
    match n {
        Term::Var(i) => done(R::NVar, g.lookup(*i).ok_or("unbound variable")?, vec![]),
        Term::App(m, u) => {
            let (pm, mty) = neu_refl(g, m)?;
            let Term::Pi(a, b) = &mty else {
                return Err("head does not have a function type".into());
            };
            done(R::NApp, b.subst1(u), vec![pm, refl_tm(g, a, u)?])
        }
        Term::Fst(m) | Term::Snd(m) => {
            let (pm, mty) = neu_refl(g, m)?;
            let Term::Sig(a, b) = &mty else {
                return Err("head does not have a pair type".into());
            };
            if matches!(n, Term::Fst(_)) {
                done(R::NSig1, (**a).clone(), vec![pm])
            } else {
                done(R::NSig2, b.subst1(&Term::fst((**m).clone())), vec![pm])
            }
        }
        Term::NatElim(p, z, s, m) => {
            let (pm, mty) = neu_refl(g, m)?;
            if mty != Term::Nat {
                return Err("scrutinee does not have type Nat".into());
            }
            let ps = vec![
                pm,
                refl_ty(&g.extend(Term::Nat), p)?,
                refl_tm(g, &p.subst1(&Term::Zero), z)?,
                refl_tm(&g.nat_step(p), &p.motive_at_succ(), s)?,
            ];
            done(R::NNatElim, p.subst1(m), ps)
        }
        Term::EmptyElim(p, m) => {
            let (pm, mty) = neu_refl(g, m)?;
            if mty != Term::Empty {
                return Err("scrutinee does not have type Empty".into());
            }
            done(R::NEmptyElim, p.subst1(m), vec![pm, refl_ty(&g.extend(Term::Empty), p)?])
        }
        Term::IdElim(a, x, p, h, m) => {
            let (pm, mty) = neu_refl(g, m)?;
            let Term::Id(_, _, y) = &mty else {
                return Err("scrutinee does not have an identity type".into());
            };
            let refl = Term::refl((**a).clone(), (**x).clone());
            let ps = vec![
                pm,
                refl_ty(&g.id_motive(a, x), p)?,
                refl_tm(g, &p.subst2(x, &refl), h)?,
            ];
            done(R::NIdInd, p.subst2(y, m), ps)
        }
        _ => Err("not a neutral term".into()),
    }
}

fn reduce(t: &Term) -> Built<Term> {
    match whnf(t, RED_FUEL) {
        Outcome::Accept(w) => Ok(w),
        _ => Err("reduction did not finish".into()),
    }
}

/// `t ⇒* u`
pub fn red(g: &Context, t: &Term, u: &Term) -> Derivation {
    node(R::RedSteps, J::Red(g.clone(), t.clone(), u.clone()), vec![])
}

/// Deep normalisation of a type.
pub fn dnf_ty(g: &Context, a: &Term) -> Built<Derivation> {
    let w = reduce(a)?;
    let j = J::DnfTy(g.clone(), a.clone());
    Ok(node(R::DnfTyRed, j, vec![red(g, a, &w), dnf_ty_star(g, &w)?]))
}

/// Deep normalisation of a type in weak-head normal form.
pub fn dnf_ty_star(g: &Context, a: &Term) -> Built<Derivation> {
    let j = J::DnfTyStar(g.clone(), a.clone());
    Ok(match a {
        Term::Pi(dom, cod) | Term::Sig(dom, cod) => {
            let rule = if matches!(a, Term::Pi(..)) { R::DnfPiTy } else { R::DnfSigTy };
            let ps = vec![dnf_ty(g, dom)?, dnf_ty(&g.extend((**dom).clone()), cod)?];
            node(rule, j, ps)
        }
        Term::Nat => node(R::DnfNatTy, j, vec![]),
        Term::Empty => node(R::DnfEmptyTy, j, vec![]),
        Term::Univ => node(R::DnfUnivTy, j, vec![]),
        Term::Id(t, x, y) => node(
            R::DnfIdTy,
            j,
            vec![dnf_ty(g, t)?, dnf_tm(g, t, x)?, dnf_tm(g, t, y)?],
        ),
        n if n.is_neutral() => node(R::DnfNeTy, j, vec![dne(g, n)?.0]),
        _ => return Err("not a type in weak-head normal form".into()),
    })
}

/// Deep normalisation of a term at a type.
pub fn dnf_tm(g: &Context, a: &Term, t: &Term) -> Built<Derivation> {
    let wa = reduce(a)?;
    let wt = reduce(t)?;
    let j = J::DnfTm(g.clone(), a.clone(), t.clone());
    Ok(node(
        R::DnfTmRed,
        j,
        vec![red(g, a, &wa), red(g, t, &wt), dnf_tm_star(g, &wa, &wt)?],
    ))
}

/// Deep normalisation of a term when it and its type are weak-head normal.
pub fn dnf_tm_star(g: &Context, a: &Term, t: &Term) -> Built<Derivation> {
    let j = J::DnfTmStar(g.clone(), a.clone(), t.clone());
    Ok(match (a, t) {
        (Term::Pi(dom, cod), _) => {
            let body = Term::app(t.shift(), Term::Var(0));
            node(R::DnfFunEta, j, vec![dnf_tm(&g.extend((**dom).clone()), cod, &body)?])
        }
        (Term::Sig(dom, cod), _) => {
            let p1 = Term::fst(t.clone());
            let ps = vec![
                dnf_tm(g, dom, &p1)?,
                dnf_tm(g, &cod.subst1(&p1), &Term::snd(t.clone()))?,
            ];
            node(R::DnfSigEta, j, ps)
        }
        (Term::Univ, Term::Pi(dom, cod) | Term::Sig(dom, cod)) => {
            let rule = if matches!(t, Term::Pi(..)) { R::DnfPiCode } else { R::DnfSigCode };
            let ps = vec![
                dnf_tm(g, &Term::Univ, dom)?,
                dnf_tm(&g.extend((**dom).clone()), &Term::Univ, cod)?,
            ];
            node(rule, j, ps)
        }
        (Term::Univ, Term::Nat) => node(R::DnfNatCode, j, vec![]),
        (Term::Univ, Term::Empty) => node(R::DnfEmptyCode, j, vec![]),
        (Term::Univ, Term::Id(s, x, y)) => node(
            R::DnfIdCode,
            j,
            vec![dnf_tm(g, &Term::Univ, s)?, dnf_tm(g, s, x)?, dnf_tm(g, s, y)?],
        ),
        (Term::Nat, Term::Zero) => node(R::DnfZero, j, vec![]),
        (Term::Nat, Term::Succ(n)) => node(R::DnfSucc, j, vec![dnf_tm(g, &Term::Nat, n)?]),
        (Term::Id(..), Term::Refl(..)) => node(R::DnfRefl, j, vec![]),
        (_, n) if a.is_pos() && n.is_neutral() => node(R::DnfNePos, j, vec![dne(g, n)?.0]),
        _ => return Err("term and type do not fit any normalisation rule".into()),
    })
}

/// `Γ ⊢ n : T` deeply normalising, with `T` reduced to weak-head normal form.
pub fn dne_star(g: &Context, n: &Term) -> Built<(Derivation, Term)> {
    let (d, t) = dne(g, n)?;
    let s = reduce(&t)?;
    let j = J::DneStar(g.clone(), n.clone(), s.clone());
    let r = red(g, &t, &s);
    Ok((node(R::DneRed, j, vec![d, r]), s))
}

/// `Γ ⊢ n : T` deeply normalising, with `T` the type the rules produce.
pub fn dne(g: &Context, n: &Term) -> Built<(Derivation, Term)> {
    let done = |rule, ty: Term, premises| {
        let j = J::Dne(g.clone(), n.clone(), ty.clone());
        Ok((node(rule, j, premises), ty))
    };
    match n {
        Term::Var(i) => done(R::DneVar, g.lookup(*i).ok_or("unbound variable")?, vec![]),
        Term::App(m, u) => {
            let (pm, mty) = dne_star(g, m)?;
            let Term::Pi(a, b) = &mty else {
                return Err("head does not have a function type".into());
            };
            done(R::DneApp, b.subst1(u), vec![pm, dnf_tm(g, a, u)?])
        }
        Term::Fst(m) | Term::Snd(m) => {
            let (pm, mty) = dne_star(g, m)?;
            let Term::Sig(a, b) = &mty else {
                return Err("head does not have a pair type".into());
            };
            if matches!(n, Term::Fst(_)) {
                done(R::DneFst, (**a).clone(), vec![pm])
            } else {
                done(R::DneSnd, b.subst1(&Term::fst((**m).clone())), vec![pm])
            }
        }
        Term::NatElim(p, z, s, m) => {
            let (pm, mty) = dne(g, m)?;
            if mty != Term::Nat {
                return Err("scrutinee type is not syntactically Nat".into());
            }
            let ps = vec![
                pm,
                dnf_ty(&g.extend(Term::Nat), p)?,
                dnf_tm(g, &p.subst1(&Term::Zero), z)?,
                dnf_tm(&g.nat_step(p), &p.motive_at_succ(), s)?,
            ];
            done(R::DneNatElim, p.subst1(m), ps)
        }
        Term::EmptyElim(p, m) => {
            let (pm, mty) = dne_star(g, m)?;
            if mty != Term::Empty {
                return Err("scrutinee does not have type Empty".into());
            }
            done(R::DneEmptyElim, p.subst1(m), vec![pm, dnf_ty(&g.extend(Term::Empty), p)?])
        }
        Term::IdElim(a, x, p, h, m) => {
            let (pm, mty) = dne_star(g, m)?;
            let Term::Id(_, _, y) = &mty else {
                return Err("scrutinee does not have an identity type".into());
            };
            let refl = Term::refl((**a).clone(), (**x).clone());
            let ps = vec![
                pm,
                dnf_ty(&g.id_motive(a, x), p)?,
                dnf_tm(g, &p.subst2(x, &refl), h)?,
            ];
            done(R::DneIdElim, p.subst2(y, m), ps)
        }
        _ => Err("not a neutral term".into()),
    }
}
