use super::{Derivation, Judgment as J, Rule};
use crate::reduction::reaches;
use crate::syntax::{Context, Subst, Term};

/// Step budget for `⇒*` side conditions.
pub const RED_FUEL: u64 = 1_000_000;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(d: &Derivation, expected: &[J]) -> Check {
    for (i, (p, want)) in d.premises.iter().zip(expected).enumerate() {
        ensure(&p.conclusion == want, || {
            format!("premise {i} should be `{want}`, found `{}`", p.conclusion)
        })?;
    }
    Ok(())
}

fn shape(what: &str) -> String {
    format!("{what} does not have the required shape")
}

fn premise(d: &Derivation, i: usize) -> &J {
    &d.premises[i].conclusion
}

fn lookup(g: &Context, t: &Term) -> Result<Term, String> {
    match t {
        Term::Var(i) => g.lookup(*i).ok_or_else(|| format!("variable {i} is not in the context")),
        _ => Err(shape("subject")),
    }
}

fn pi_of(t: &Term) -> Result<(&Term, &Term), String> {
    match t {
        Term::Pi(a, b) => Ok((a, b)),
        _ => Err(shape("function type")),
    }
}

fn sig_of(t: &Term) -> Result<(&Term, &Term), String> {
    match t {
        Term::Sig(a, b) => Ok((a, b)),
        _ => Err(shape("pair type")),
    }
}

fn id_of(t: &Term) -> Result<(&Term, &Term, &Term), String> {
    match t {
        Term::Id(a, x, y) => Ok((a, x, y)),
        _ => Err(shape("identity type")),
    }
}

fn conclusion_type(got: &Term, want: &Term) -> Check {
    ensure(got == want, || "conclusion type does not match the rule".into())
}

/// Checks that `d` is an instance of its rule, ignoring the validity of its
/// premises.
pub(super) fn check_node(d: &Derivation) -> Check {
    let c = &d.conclusion;
    ensure(d.premises.len() == d.rule.arity(), || {
        format!(
            "{} takes {} premises, found {}",
            d.rule,
            d.rule.arity(),
            d.premises.len()
        )
    })?;
    ensure(c.is_scoped(), || "conclusion is not well scoped".into())?;
    let mismatch = || {
        Err(format!(
            "{} cannot conclude a `{}` judgment of this shape",
            d.rule,
            c.keyword()
        ))
    };
    use Rule as R;
    use Term as T;
    match (d.rule, c) {
        // Contexts and substitutions.
        (R::CtxEmpty, J::Ctx(g)) => ensure(g.is_empty(), || shape("context")),
        (R::CtxExt, J::Ctx(g)) => {
            let (g0, a) = g.pop().ok_or_else(|| shape("context"))?;
            same(d, &[J::Ctx(g0.clone()), J::Ty(g0, a)])
        }
        (R::SubstEmpty, J::Subst(_, s, delta)) => {
            ensure(s.is_empty() && delta.is_empty(), || shape("substitution"))
        }
        (R::SubstExt, J::Subst(g, s, delta)) => {
            let (d0, a) = delta.pop().ok_or_else(|| shape("substitution"))?;
            let (t, s0) = s.split_last().ok_or_else(|| shape("substitution"))?;
            let images: Vec<Term> = s0.iter().rev().cloned().collect();
            let a_s = a.subst(&Subst::parallel(images));
            same(
                d,
                &[
                    J::Subst(g.clone(), s0.to_vec(), d0),
                    J::Typed(g.clone(), t.clone(), a_s),
                ],
            )
        }

        // Types.
        (R::FunTy, J::Ty(g, T::Pi(a, b))) | (R::SigTy, J::Ty(g, T::Sig(a, b))) => same(
            d,
            &[J::Ty(g.clone(), (**a).clone()), J::Ty(g.extend((**a).clone()), (**b).clone())],
        ),
        (R::NatTy, J::Ty(g, T::Nat))
        | (R::EmptyTy, J::Ty(g, T::Empty))
        | (R::UnivTy, J::Ty(g, T::Univ)) => same(d, &[J::Ctx(g.clone())]),
        (R::IdTy, J::Ty(g, T::Id(a, x, y))) => same(
            d,
            &[
                J::Ty(g.clone(), (**a).clone()),
                J::Typed(g.clone(), (**x).clone(), (**a).clone()),
                J::Typed(g.clone(), (**y).clone(), (**a).clone()),
            ],
        ),
        (R::El, J::Ty(g, a)) => same(d, &[J::Typed(g.clone(), a.clone(), T::Univ)]),

        // Typing.
        (R::Conv, J::Typed(g, t, b)) => {
            let J::Typed(_, _, a) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::Typed(g.clone(), t.clone(), a.clone()),
                    J::ConvTy(g.clone(), a.clone(), b.clone()),
                ],
            )
        }
        (R::Var, J::Typed(g, x, a)) => {
            conclusion_type(a, &lookup(g, x)?)?;
            same(d, &[J::Ctx(g.clone())])
        }
        (R::FunUni, J::Typed(g, T::Pi(a, b), T::Univ))
        | (R::SigUni, J::Typed(g, T::Sig(a, b), T::Univ)) => same(
            d,
            &[
                J::Typed(g.clone(), (**a).clone(), T::Univ),
                J::Typed(g.extend((**a).clone()), (**b).clone(), T::Univ),
            ],
        ),
        (R::Abs, J::Typed(g, T::Lam(a, t), ty)) => {
            let (a2, b) = pi_of(ty)?;
            ensure(a2 == &**a, || "annotation and domain differ".into())?;
            let ga = g.extend((**a).clone());
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Ty(ga.clone(), b.clone()),
                    J::Typed(ga, (**t).clone(), b.clone()),
                ],
            )
        }
        (R::App, J::Typed(g, T::App(f, u), ty)) => {
            let J::Typed(_, _, fty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = pi_of(fty)?;
            conclusion_type(ty, &b.subst1(u))?;
            same(
                d,
                &[
                    J::Typed(g.clone(), (**f).clone(), fty.clone()),
                    J::Typed(g.clone(), (**u).clone(), a.clone()),
                ],
            )
        }
        (R::Pair, J::Typed(g, T::Pair(a, b, t, u), ty)) => {
            conclusion_type(ty, &T::Sig(a.clone(), b.clone()))?;
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Ty(g.extend((**a).clone()), (**b).clone()),
                    J::Typed(g.clone(), (**t).clone(), (**a).clone()),
                    J::Typed(g.clone(), (**u).clone(), b.subst1(t)),
                ],
            )
        }
        (R::Proj1 | R::Proj2, J::Typed(g, p @ (T::Fst(q) | T::Snd(q)), ty)) => {
            let J::Typed(_, _, pty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = sig_of(pty)?;
            let want = match (d.rule, p) {
                (R::Proj1, T::Fst(_)) => a.clone(),
                (R::Proj2, T::Snd(_)) => b.subst1(&T::Fst(q.clone())),
                _ => return mismatch(),
            };
            conclusion_type(ty, &want)?;
            same(d, &[J::Typed(g.clone(), (**q).clone(), pty.clone())])
        }
        (R::NatUni, J::Typed(g, T::Nat, T::Univ))
        | (R::EmptyUni, J::Typed(g, T::Empty, T::Univ))
        | (R::Zero, J::Typed(g, T::Zero, T::Nat)) => same(d, &[J::Ctx(g.clone())]),
        (R::Succ, J::Typed(g, T::Succ(n), T::Nat)) => {
            same(d, &[J::Typed(g.clone(), (**n).clone(), T::Nat)])
        }
        (R::NatRec, J::Typed(g, T::NatElim(p, z, s, n), ty)) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::Typed(g.clone(), (**n).clone(), T::Nat),
                    J::Ty(g.extend(T::Nat), (**p).clone()),
                    J::Typed(g.clone(), (**z).clone(), p.subst1(&T::Zero)),
                    J::Typed(g.nat_step(p), (**s).clone(), p.motive_at_succ()),
                ],
            )
        }
        (R::EmptyInd, J::Typed(g, T::EmptyElim(p, e), ty)) => {
            conclusion_type(ty, &p.subst1(e))?;
            same(
                d,
                &[
                    J::Typed(g.clone(), (**e).clone(), T::Empty),
                    J::Ty(g.extend(T::Empty), (**p).clone()),
                ],
            )
        }
        (R::IdUni, J::Typed(g, T::Id(a, x, y), T::Univ)) => same(
            d,
            &[
                J::Typed(g.clone(), (**a).clone(), T::Univ),
                J::Typed(g.clone(), (**x).clone(), (**a).clone()),
                J::Typed(g.clone(), (**y).clone(), (**a).clone()),
            ],
        ),
        (R::ReflTm, J::Typed(g, T::Refl(a, x), ty)) => {
            conclusion_type(ty, &T::Id(a.clone(), x.clone(), x.clone()))?;
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Typed(g.clone(), (**x).clone(), (**a).clone()),
                ],
            )
        }
        (R::IdInd, J::Typed(g, T::IdElim(a, x, p, h, e), ty)) => {
            let J::Typed(_, _, ety) = premise(d, 3) else {
                return Err(shape("premise 3"));
            };
            let (_, _, y) = id_of(ety)?;
            conclusion_type(ty, &p.subst2(y, e))?;
            let refl = T::Refl(a.clone(), x.clone());
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Typed(g.clone(), (**x).clone(), (**a).clone()),
                    J::Typed(g.clone(), y.clone(), (**a).clone()),
                    J::Typed(g.clone(), (**e).clone(), T::Id(a.clone(), x.clone(), Box::new(y.clone()))),
                    J::Ty(g.id_motive(a, x), (**p).clone()),
                    J::Typed(g.clone(), (**h).clone(), p.subst2(x, &refl)),
                ],
            )
        }

        // Type conversion.
        (R::ReflTy, J::ConvTy(g, a, b)) => {
            ensure(a == b, || "sides differ".into())?;
            same(d, &[J::Ty(g.clone(), a.clone())])
        }
        (R::SymTy, J::ConvTy(g, a, b)) => same(d, &[J::ConvTy(g.clone(), b.clone(), a.clone())]),
        (R::TransTy, J::ConvTy(g, a, c)) => {
            let J::ConvTy(_, _, b) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::ConvTy(g.clone(), a.clone(), b.clone()),
                    J::ConvTy(g.clone(), b.clone(), c.clone()),
                ],
            )
        }
        (R::ElC, J::ConvTy(g, a, b)) => {
            same(d, &[J::ConvTm(g.clone(), T::Univ, a.clone(), b.clone())])
        }
        (R::FunTyC, J::ConvTy(g, T::Pi(a, b), T::Pi(a2, b2)))
        | (R::SigTyC, J::ConvTy(g, T::Sig(a, b), T::Sig(a2, b2))) => same(
            d,
            &[
                J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                J::ConvTy(g.extend((**a).clone()), (**b).clone(), (**b2).clone()),
            ],
        ),
        (R::IdTyC, J::ConvTy(g, T::Id(a, x, y), T::Id(a2, x2, y2))) => same(
            d,
            &[
                J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                J::ConvTm(g.clone(), (**a).clone(), (**x).clone(), (**x2).clone()),
                J::ConvTm(g.clone(), (**a).clone(), (**y).clone(), (**y2).clone()),
            ],
        ),

        // Term conversion: equivalence and type conversion.
        (R::Refl, J::ConvTm(g, a, t, u)) => {
            ensure(t == u, || "sides differ".into())?;
            same(d, &[J::Typed(g.clone(), t.clone(), a.clone())])
        }
        (R::Sym, J::ConvTm(g, a, t, u)) => {
            same(d, &[J::ConvTm(g.clone(), a.clone(), u.clone(), t.clone())])
        }
        (R::Trans, J::ConvTm(g, a, t, v)) => {
            let J::ConvTm(_, _, _, u) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::ConvTm(g.clone(), a.clone(), t.clone(), u.clone()),
                    J::ConvTm(g.clone(), a.clone(), u.clone(), v.clone()),
                ],
            )
        }
        (R::ConvC, J::ConvTm(g, b, t, u)) => {
            let J::ConvTm(_, a, _, _) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::ConvTm(g.clone(), a.clone(), t.clone(), u.clone()),
                    J::ConvTy(g.clone(), a.clone(), b.clone()),
                ],
            )
        }

        // Term conversion: congruences.
        (R::FunCong, J::ConvTm(g, T::Univ, T::Pi(a, b), T::Pi(a2, b2)))
        | (R::SigCong, J::ConvTm(g, T::Univ, T::Sig(a, b), T::Sig(a2, b2))) => same(
            d,
            &[
                J::ConvTm(g.clone(), T::Univ, (**a).clone(), (**a2).clone()),
                J::ConvTm(g.extend((**a).clone()), T::Univ, (**b).clone(), (**b2).clone()),
            ],
        ),
        (R::IdCong, J::ConvTm(g, T::Univ, T::Id(a, x, y), T::Id(a2, x2, y2))) => same(
            d,
            &[
                J::ConvTm(g.clone(), T::Univ, (**a).clone(), (**a2).clone()),
                J::ConvTm(g.clone(), (**a).clone(), (**x).clone(), (**x2).clone()),
                J::ConvTm(g.clone(), (**a).clone(), (**y).clone(), (**y2).clone()),
            ],
        ),
        (R::LamCong, J::ConvTm(g, ty, T::Lam(a, t), T::Lam(a2, t2))) => {
            let (dom, b) = pi_of(ty)?;
            ensure(dom == &**a, || "annotation and domain differ".into())?;
            same(
                d,
                &[
                    J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                    J::ConvTm(g.extend((**a).clone()), b.clone(), (**t).clone(), (**t2).clone()),
                ],
            )
        }
        (R::AppCong, J::ConvTm(g, ty, T::App(f, u), T::App(f2, u2))) => {
            let J::ConvTm(_, fty, _, _) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = pi_of(fty)?;
            conclusion_type(ty, &b.subst1(u))?;
            same(
                d,
                &[
                    J::ConvTm(g.clone(), fty.clone(), (**f).clone(), (**f2).clone()),
                    J::ConvTm(g.clone(), a.clone(), (**u).clone(), (**u2).clone()),
                ],
            )
        }
        (R::PairCong, J::ConvTm(g, ty, T::Pair(a, b, t, u), T::Pair(a2, b2, t2, u2))) => {
            conclusion_type(ty, &T::Sig(a.clone(), b.clone()))?;
            same(
                d,
                &[
                    J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                    J::ConvTy(g.extend((**a).clone()), (**b).clone(), (**b2).clone()),
                    J::ConvTm(g.clone(), (**a).clone(), (**t).clone(), (**t2).clone()),
                    J::ConvTm(g.clone(), b.subst1(t), (**u).clone(), (**u2).clone()),
                ],
            )
        }
        (R::FstCong, J::ConvTm(g, ty, T::Fst(p), T::Fst(p2)))
        | (R::SndCong, J::ConvTm(g, ty, T::Snd(p), T::Snd(p2))) => {
            let J::ConvTm(_, pty, _, _) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = sig_of(pty)?;
            let want = if d.rule == R::FstCong {
                a.clone()
            } else {
                b.subst1(&T::Fst(p.clone()))
            };
            conclusion_type(ty, &want)?;
            same(d, &[J::ConvTm(g.clone(), pty.clone(), (**p).clone(), (**p2).clone())])
        }
        (R::SuccCong, J::ConvTm(g, T::Nat, T::Succ(n), T::Succ(n2))) => {
            same(d, &[J::ConvTm(g.clone(), T::Nat, (**n).clone(), (**n2).clone())])
        }
        (
            R::NatRecCong,
            J::ConvTm(g, ty, T::NatElim(p, z, s, n), T::NatElim(p2, z2, s2, n2)),
        ) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::ConvTy(g.extend(T::Nat), (**p).clone(), (**p2).clone()),
                    J::ConvTm(g.clone(), p.subst1(&T::Zero), (**z).clone(), (**z2).clone()),
                    J::ConvTm(g.nat_step(p), p.motive_at_succ(), (**s).clone(), (**s2).clone()),
                    J::ConvTm(g.clone(), T::Nat, (**n).clone(), (**n2).clone()),
                ],
            )
        }
        (R::EmptyIndCong, J::ConvTm(g, ty, T::EmptyElim(p, e), T::EmptyElim(p2, e2))) => {
            conclusion_type(ty, &p.subst1(e))?;
            same(
                d,
                &[
                    J::ConvTy(g.extend(T::Empty), (**p).clone(), (**p2).clone()),
                    J::ConvTm(g.clone(), T::Empty, (**e).clone(), (**e2).clone()),
                ],
            )
        }
        (R::ReflCong, J::ConvTm(g, ty, T::Refl(a, x), T::Refl(a2, x2))) => {
            conclusion_type(ty, &T::Id(a.clone(), x.clone(), x.clone()))?;
            same(
                d,
                &[
                    J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                    J::ConvTm(g.clone(), (**a).clone(), (**x).clone(), (**x2).clone()),
                ],
            )
        }
        (
            R::IdIndCong,
            J::ConvTm(g, ty, T::IdElim(a, x, p, h, e), T::IdElim(a2, x2, p2, h2, e2)),
        ) => {
            let J::ConvTm(_, ety, _, _) = premise(d, 4) else {
                return Err(shape("premise 4"));
            };
            let (_, _, y) = id_of(ety)?;
            conclusion_type(ty, &p.subst2(y, e))?;
            let refl = T::Refl(a.clone(), x.clone());
            same(
                d,
                &[
                    J::ConvTy(g.clone(), (**a).clone(), (**a2).clone()),
                    J::ConvTm(g.clone(), (**a).clone(), (**x).clone(), (**x2).clone()),
                    J::ConvTy(g.id_motive(a, x), (**p).clone(), (**p2).clone()),
                    J::ConvTm(g.clone(), p.subst2(x, &refl), (**h).clone(), (**h2).clone()),
                    J::ConvTm(
                        g.clone(),
                        T::Id(a.clone(), x.clone(), Box::new(y.clone())),
                        (**e).clone(),
                        (**e2).clone(),
                    ),
                ],
            )
        }

        // Term conversion: computation and extensionality.
        (R::BetaFun, J::ConvTm(g, ty, T::App(f, u), rhs)) => {
            let T::Lam(a, t) = &**f else {
                return Err(shape("redex"));
            };
            let J::Ty(_, b) = premise(d, 1) else {
                return Err(shape("premise 1"));
            };
            ensure(rhs == &t.subst1(u), || "right side is not the contractum".into())?;
            conclusion_type(ty, &b.subst1(u))?;
            let ga = g.extend((**a).clone());
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Ty(ga.clone(), b.clone()),
                    J::Typed(ga, (**t).clone(), b.clone()),
                    J::Typed(g.clone(), (**u).clone(), (**a).clone()),
                ],
            )
        }
        (R::EtaFun, J::ConvTm(g, ty, f, rhs)) => {
            let (a, _) = pi_of(ty)?;
            let expanded = T::lam(a.clone(), T::app(f.shift(), T::Var(0)));
            ensure(rhs == &expanded, || "right side is not the η-expansion".into())?;
            same(d, &[J::Typed(g.clone(), f.clone(), ty.clone())])
        }
        (R::BetaSig1 | R::BetaSig2, J::ConvTm(g, ty, lhs, rhs)) => {
            let (T::Fst(p) | T::Snd(p)) = lhs else {
                return Err(shape("redex"));
            };
            let T::Pair(a, b, t, u) = &**p else {
                return Err(shape("redex"));
            };
            let (want_rhs, want_ty) = match (d.rule, lhs) {
                (R::BetaSig1, T::Fst(_)) => ((**t).clone(), (**a).clone()),
                (R::BetaSig2, T::Snd(_)) => ((**u).clone(), b.subst1(t)),
                _ => return mismatch(),
            };
            ensure(rhs == &want_rhs, || "right side is not the contractum".into())?;
            conclusion_type(ty, &want_ty)?;
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Ty(g.extend((**a).clone()), (**b).clone()),
                    J::Typed(g.clone(), (**t).clone(), (**a).clone()),
                    J::Typed(g.clone(), (**u).clone(), b.subst1(t)),
                ],
            )
        }
        (R::EtaSig, J::ConvTm(g, ty, p, rhs)) => {
            let (a, b) = sig_of(ty)?;
            let expanded = T::pair(a.clone(), b.clone(), T::fst(p.clone()), T::snd(p.clone()));
            ensure(rhs == &expanded, || "right side is not the η-expansion".into())?;
            same(
                d,
                &[
                    J::Ty(g.clone(), a.clone()),
                    J::Ty(g.extend(a.clone()), b.clone()),
                    J::Typed(g.clone(), p.clone(), ty.clone()),
                ],
            )
        }
        (R::BetaZero, J::ConvTm(g, ty, T::NatElim(p, z, s, n), rhs)) => {
            ensure(**n == T::Zero, || shape("redex"))?;
            ensure(rhs == &**z, || "right side is not the contractum".into())?;
            conclusion_type(ty, &p.subst1(&T::Zero))?;
            same(
                d,
                &[
                    J::Ty(g.extend(T::Nat), (**p).clone()),
                    J::Typed(g.clone(), (**z).clone(), p.subst1(&T::Zero)),
                    J::Typed(g.nat_step(p), (**s).clone(), p.motive_at_succ()),
                ],
            )
        }
        (R::BetaSucc, J::ConvTm(g, ty, T::NatElim(p, z, s, sn), rhs)) => {
            let T::Succ(n) = &**sn else {
                return Err(shape("redex"));
            };
            let rec = T::NatElim(p.clone(), z.clone(), s.clone(), n.clone());
            ensure(rhs == &s.subst2(n, &rec), || "right side is not the contractum".into())?;
            conclusion_type(ty, &p.subst1(sn))?;
            same(
                d,
                &[
                    J::Typed(g.clone(), (**n).clone(), T::Nat),
                    J::Ty(g.extend(T::Nat), (**p).clone()),
                    J::Typed(g.clone(), (**z).clone(), p.subst1(&T::Zero)),
                    J::Typed(g.nat_step(p), (**s).clone(), p.motive_at_succ()),
                ],
            )
        }
        (R::BetaRefl, J::ConvTm(g, ty, T::IdElim(a, x, p, h, e), rhs)) => {
            let refl = T::Refl(a.clone(), x.clone());
            ensure(**e == refl, || shape("redex"))?;
            ensure(rhs == &**h, || "right side is not the contractum".into())?;
            conclusion_type(ty, &p.subst2(x, &refl))?;
            same(
                d,
                &[
                    J::Ty(g.clone(), (**a).clone()),
                    J::Typed(g.clone(), (**x).clone(), (**a).clone()),
                    J::Ty(g.id_motive(a, x), (**p).clone()),
                    J::Typed(g.clone(), (**h).clone(), p.subst2(x, &refl)),
                ],
            )
        }

        // Neutral comparison.
        (R::NConv, J::Neu(g, n, n2, s)) => {
            let J::Neu(_, _, _, t) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::Neu(g.clone(), n.clone(), n2.clone(), t.clone()),
                    J::ConvTy(g.clone(), t.clone(), s.clone()),
                ],
            )
        }
        (R::NVar, J::Neu(g, x, y, ty)) => {
            ensure(x == y, || "variables differ".into())?;
            conclusion_type(ty, &lookup(g, x)?)
        }
        (R::NApp, J::Neu(g, T::App(n, u), T::App(n2, u2), ty)) => {
            let J::Neu(_, _, _, fty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = pi_of(fty)?;
            conclusion_type(ty, &b.subst1(u))?;
            same(
                d,
                &[
                    J::Neu(g.clone(), (**n).clone(), (**n2).clone(), fty.clone()),
                    J::ConvTm(g.clone(), a.clone(), (**u).clone(), (**u2).clone()),
                ],
            )
        }
        (R::NSig1, J::Neu(g, T::Fst(n), T::Fst(n2), ty))
        | (R::NSig2, J::Neu(g, T::Snd(n), T::Snd(n2), ty)) => {
            let J::Neu(_, _, _, pty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = sig_of(pty)?;
            let want = if d.rule == R::NSig1 {
                a.clone()
            } else {
                b.subst1(&T::Fst(n.clone()))
            };
            conclusion_type(ty, &want)?;
            same(d, &[J::Neu(g.clone(), (**n).clone(), (**n2).clone(), pty.clone())])
        }
        (R::NNatElim, J::Neu(g, T::NatElim(p, z, s, n), T::NatElim(p2, z2, s2, n2), ty)) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::Neu(g.clone(), (**n).clone(), (**n2).clone(), T::Nat),
                    J::ConvTy(g.extend(T::Nat), (**p).clone(), (**p2).clone()),
                    J::ConvTm(g.clone(), p.subst1(&T::Zero), (**z).clone(), (**z2).clone()),
                    J::ConvTm(g.nat_step(p), p.motive_at_succ(), (**s).clone(), (**s2).clone()),
                ],
            )
        }
        (R::NEmptyElim, J::Neu(g, T::EmptyElim(p, n), T::EmptyElim(p2, n2), ty)) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::Neu(g.clone(), (**n).clone(), (**n2).clone(), T::Empty),
                    J::ConvTy(g.extend(T::Empty), (**p).clone(), (**p2).clone()),
                ],
            )
        }
        (R::NIdInd, J::Neu(g, T::IdElim(a, x, p, h, n), T::IdElim(_, _, p2, h2, n2), ty)) => {
            let J::Neu(_, _, _, nty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (_, _, y) = id_of(nty)?;
            conclusion_type(ty, &p.subst2(y, n))?;
            let refl = T::Refl(a.clone(), x.clone());
            same(
                d,
                &[
                    J::Neu(g.clone(), (**n).clone(), (**n2).clone(), nty.clone()),
                    J::ConvTy(g.id_motive(a, x), (**p).clone(), (**p2).clone()),
                    J::ConvTm(g.clone(), p.subst2(x, &refl), (**h).clone(), (**h2).clone()),
                ],
            )
        }

        // Deep normalisation of types.
        (R::DnfTyRed, J::DnfTy(g, a)) => {
            let J::Red(_, _, b) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::Red(g.clone(), a.clone(), b.clone()),
                    J::DnfTyStar(g.clone(), b.clone()),
                ],
            )
        }
        (R::DnfPiTy, J::DnfTyStar(g, T::Pi(a, b)))
        | (R::DnfSigTy, J::DnfTyStar(g, T::Sig(a, b))) => same(
            d,
            &[
                J::DnfTy(g.clone(), (**a).clone()),
                J::DnfTy(g.extend((**a).clone()), (**b).clone()),
            ],
        ),
        (R::DnfNatTy, J::DnfTyStar(_, T::Nat))
        | (R::DnfEmptyTy, J::DnfTyStar(_, T::Empty))
        | (R::DnfUnivTy, J::DnfTyStar(_, T::Univ)) => Ok(()),
        (R::DnfIdTy, J::DnfTyStar(g, T::Id(a, x, y))) => same(
            d,
            &[
                J::DnfTy(g.clone(), (**a).clone()),
                J::DnfTm(g.clone(), (**a).clone(), (**x).clone()),
                J::DnfTm(g.clone(), (**a).clone(), (**y).clone()),
            ],
        ),
        (R::DnfNeTy, J::DnfTyStar(g, n)) => {
            let J::Dne(_, _, t) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(d, &[J::Dne(g.clone(), n.clone(), t.clone())])
        }

        // Deep normalisation of terms.
        (R::DnfTmRed, J::DnfTm(g, a, t)) => {
            let J::Red(_, _, b) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let J::Red(_, _, u) = premise(d, 1) else {
                return Err(shape("premise 1"));
            };
            same(
                d,
                &[
                    J::Red(g.clone(), a.clone(), b.clone()),
                    J::Red(g.clone(), t.clone(), u.clone()),
                    J::DnfTmStar(g.clone(), b.clone(), u.clone()),
                ],
            )
        }
        (R::DnfPiCode, J::DnfTmStar(g, T::Univ, T::Pi(a, b)))
        | (R::DnfSigCode, J::DnfTmStar(g, T::Univ, T::Sig(a, b))) => same(
            d,
            &[
                J::DnfTm(g.clone(), T::Univ, (**a).clone()),
                J::DnfTm(g.extend((**a).clone()), T::Univ, (**b).clone()),
            ],
        ),
        (R::DnfFunEta, J::DnfTmStar(g, T::Pi(a, b), f)) => same(
            d,
            &[J::DnfTm(
                g.extend((**a).clone()),
                (**b).clone(),
                T::app(f.shift(), T::Var(0)),
            )],
        ),
        (R::DnfSigEta, J::DnfTmStar(g, T::Sig(a, b), p)) => {
            let p1 = T::fst(p.clone());
            same(
                d,
                &[
                    J::DnfTm(g.clone(), (**a).clone(), p1.clone()),
                    J::DnfTm(g.clone(), b.subst1(&p1), T::snd(p.clone())),
                ],
            )
        }
        (R::DnfNatCode, J::DnfTmStar(_, T::Univ, T::Nat))
        | (R::DnfEmptyCode, J::DnfTmStar(_, T::Univ, T::Empty))
        | (R::DnfZero, J::DnfTmStar(_, T::Nat, T::Zero))
        | (R::DnfRefl, J::DnfTmStar(_, T::Id(..), T::Refl(..))) => Ok(()),
        (R::DnfSucc, J::DnfTmStar(g, T::Nat, T::Succ(n))) => {
            same(d, &[J::DnfTm(g.clone(), T::Nat, (**n).clone())])
        }
        (R::DnfIdCode, J::DnfTmStar(g, T::Univ, T::Id(a, x, y))) => same(
            d,
            &[
                J::DnfTm(g.clone(), T::Univ, (**a).clone()),
                J::DnfTm(g.clone(), (**a).clone(), (**x).clone()),
                J::DnfTm(g.clone(), (**a).clone(), (**y).clone()),
            ],
        ),
        (R::DnfNePos, J::DnfTmStar(g, ty, n)) => {
            ensure(ty.is_pos(), || "type is not positive".into())?;
            let J::Dne(_, _, s) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(d, &[J::Dne(g.clone(), n.clone(), s.clone())])
        }

        // Deep normalisation of neutrals.
        (R::DneRed, J::DneStar(g, n, s)) => {
            let J::Dne(_, _, t) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            same(
                d,
                &[
                    J::Dne(g.clone(), n.clone(), t.clone()),
                    J::Red(g.clone(), t.clone(), s.clone()),
                ],
            )
        }
        (R::DneVar, J::Dne(g, x, ty)) => conclusion_type(ty, &lookup(g, x)?),
        (R::DneApp, J::Dne(g, T::App(n, u), ty)) => {
            let J::DneStar(_, _, fty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = pi_of(fty)?;
            conclusion_type(ty, &b.subst1(u))?;
            same(
                d,
                &[
                    J::DneStar(g.clone(), (**n).clone(), fty.clone()),
                    J::DnfTm(g.clone(), a.clone(), (**u).clone()),
                ],
            )
        }
        (R::DneFst, J::Dne(g, T::Fst(n), ty)) | (R::DneSnd, J::Dne(g, T::Snd(n), ty)) => {
            let J::DneStar(_, _, pty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (a, b) = sig_of(pty)?;
            let want = if d.rule == R::DneFst {
                a.clone()
            } else {
                b.subst1(&T::Fst(n.clone()))
            };
            conclusion_type(ty, &want)?;
            same(d, &[J::DneStar(g.clone(), (**n).clone(), pty.clone())])
        }
        (R::DneNatElim, J::Dne(g, T::NatElim(p, z, s, n), ty)) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::Dne(g.clone(), (**n).clone(), T::Nat),
                    J::DnfTy(g.extend(T::Nat), (**p).clone()),
                    J::DnfTm(g.clone(), p.subst1(&T::Zero), (**z).clone()),
                    J::DnfTm(g.nat_step(p), p.motive_at_succ(), (**s).clone()),
                ],
            )
        }
        (R::DneEmptyElim, J::Dne(g, T::EmptyElim(p, n), ty)) => {
            conclusion_type(ty, &p.subst1(n))?;
            same(
                d,
                &[
                    J::DneStar(g.clone(), (**n).clone(), T::Empty),
                    J::DnfTy(g.extend(T::Empty), (**p).clone()),
                ],
            )
        }
        (R::DneIdElim, J::Dne(g, T::IdElim(a, x, p, h, n), ty)) => {
            let J::DneStar(_, _, nty) = premise(d, 0) else {
                return Err(shape("premise 0"));
            };
            let (_, _, y) = id_of(nty)?;
            conclusion_type(ty, &p.subst2(y, n))?;
            let refl = T::Refl(a.clone(), x.clone());
            same(
                d,
                &[
                    J::DneStar(g.clone(), (**n).clone(), nty.clone()),
                    J::DnfTy(g.id_motive(a, x), (**p).clone()),
                    J::DnfTm(g.clone(), p.subst2(x, &refl), (**h).clone()),
                ],
            )
        }

        (R::RedSteps, J::Red(_, t, u)) => ensure(reaches(t, u, RED_FUEL), || {
            format!("no reduction sequence of at most {RED_FUEL} steps")
        }),

        _ => mismatch(),
    }
}
