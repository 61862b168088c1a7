//! The hand-picked fixture derivations, grouped by fixture file. Every rule
//! occurs in at least two distinct derivations.

use super::build::*;
use super::{Derivation, Judgment as J, Rule as R};
use crate::surface::parse_term;
use crate::syntax::{Context, Term};

struct Scope {
    ctx: Context,
    names: Vec<String>,
}

impl Scope {
    fn new(binders: &[(&str, &str)]) -> Scope {
        let mut s = Scope {
            ctx: Context::new(),
            names: Vec::new(),
        };
        for (x, ty) in binders {
            let ty = s.t(ty);
            s.ctx.push(ty);
            s.names.push(x.to_string());
        }
        s
    }

    fn t(&self, src: &str) -> Term {
        parse_term(src, &self.names).unwrap_or_else(|e| panic!("{src}: {e}"))
    }

    fn g(&self) -> &Context {
        &self.ctx
    }

    fn ext(&self, x: &str, ty: &str) -> Scope {
        let ty = self.t(ty);
        let mut names = self.names.clone();
        names.push(x.to_string());
        Scope {
            ctx: self.ctx.extend(ty),
            names,
        }
    }
}

fn node(rule: R, j: J, premises: Vec<Derivation>) -> Derivation {
    Derivation::new(rule, j, premises)
}

fn empty() -> Scope {
    Scope::new(&[])
}

fn nat() -> Scope {
    Scope::new(&[("n", "Nat")])
}

fn fun() -> Scope {
    Scope::new(&[("f", "Nat -> Nat"), ("n", "Nat")])
}

fn fam() -> Scope {
    Scope::new(&[("A", "U"), ("a", "A")])
}

fn pair() -> Scope {
    Scope::new(&[("p", "Nat * Nat")])
}

fn dpair() -> Scope {
    Scope::new(&[("p", "(x : Nat) * Id Nat x x")])
}

fn absurd() -> Scope {
    Scope::new(&[("z", "Empty")])
}

fn path() -> Scope {
    Scope::new(&[("m", "Nat"), ("e", "Id Nat zero m")])
}

fn pred() -> Scope {
    Scope::new(&[("B", "Nat -> U"), ("b", "B zero")])
}

/// `Γ ⊢ (λX:U. X) A ≅ A` for a code `A`.
fn beta_code(s: &Scope, code: &str) -> Built<Derivation> {
    let redex = Term::app(s.t("\\X:U. X"), s.t(code));
    el_conv(beta_fun(s.g(), &redex)?)
}

fn typed_at(s: &Scope, t: &str, a: &str) -> Built<Derivation> {
    typed(s.g(), &s.t(t), &s.t(a))
}

fn contexts() -> Built<Vec<Derivation>> {
    let mut out = vec![ctx(nat().g())?, ctx(fam().g())?, ctx(path().g())?];
    let (s, g) = (nat(), Context::new());
    out.push(node(R::SubstEmpty, J::Subst(g.clone(), vec![], g.clone()), vec![]));
    out.push(node(R::SubstEmpty, J::Subst(s.ctx.clone(), vec![], g.clone()), vec![]));
    // · ⊢ (zero) : (y : Nat)
    let one = Context::from_entries(vec![Term::Nat]);
    let zero = Term::Zero;
    let d1 = node(
        R::SubstExt,
        J::Subst(g.clone(), vec![zero.clone()], one.clone()),
        vec![
            node(R::SubstEmpty, J::Subst(g.clone(), vec![], g.clone()), vec![]),
            typed(&g, &zero, &Term::Nat)?,
        ],
    );
    out.push(d1);
    // n : Nat ⊢ (n, refl Nat n) : (y : Nat, q : Id Nat y y)
    let two = one.extend(Term::id(Term::Nat, Term::Var(0), Term::Var(0)));
    let (n, rn) = (s.t("n"), s.t("refl Nat n"));
    let inner = node(
        R::SubstExt,
        J::Subst(s.ctx.clone(), vec![n.clone()], one.clone()),
        vec![
            node(R::SubstEmpty, J::Subst(s.ctx.clone(), vec![], g.clone()), vec![]),
            typed(s.g(), &n, &Term::Nat)?,
        ],
    );
    out.push(node(
        R::SubstExt,
        J::Subst(s.ctx.clone(), vec![n.clone(), rn.clone()], two),
        vec![inner, typed(s.g(), &rn, &s.t("Id Nat n n"))?],
    ));
    Ok(out)
}

fn types() -> Built<Vec<Derivation>> {
    let (e, f, a) = (empty(), fam(), fun());
    let mut out = Vec::new();
    for (s, src) in [
        (&e, "Nat -> Nat"),
        (&e, "(X : U) -> X"),
        (&e, "Nat * Nat"),
        (&e, "(x : Nat) * Id Nat x x"),
        (&e, "Nat"),
        (&a, "Nat"),
        (&e, "Empty"),
        (&f, "Empty"),
        (&e, "U"),
        (&f, "U"),
        (&e, "Id Nat zero zero"),
        (&f, "Id A a a"),
        (&f, "A"),
        (&e, "(\\X:U. X) Nat"),
    ] {
        out.push(ty(s.g(), &s.t(src))?);
    }
    Ok(out)
}

fn typing() -> Built<Vec<Derivation>> {
    let mut out = Vec::new();
    let cases: Vec<(Scope, &str)> = vec![
        (nat(), "n"),
        (fam(), "a"),
        (empty(), "Nat -> Nat"),
        (fam(), "A -> A"),
        (empty(), "\\x:Nat. x"),
        (fam(), "\\x:A. x"),
        (empty(), "(\\x:Nat. x) zero"),
        (fun(), "f n"),
        (empty(), "Nat * Nat"),
        (empty(), "(x : Nat) * Id Nat x x"),
        (empty(), "pair {x:Nat. Nat} (zero, zero)"),
        (empty(), "pair {x:Nat. Id Nat x x} (zero, refl Nat zero)"),
        (pair(), "fst p"),
        (empty(), "fst (pair {x:Nat. Nat} (zero, succ zero))"),
        (pair(), "snd p"),
        (dpair(), "snd p"),
        (empty(), "Nat"),
        (fam(), "Empty"),
        (empty(), "Empty"),
        (nat(), "Nat"),
        (nat(), "zero"),
        (empty(), "succ zero"),
        (nat(), "succ n"),
        (nat(), "natrec (x. Nat) zero (x y. succ y) n"),
        (
            empty(),
            "natrec (x. Id Nat x x) (refl Nat zero) (x y. refl Nat (succ x)) (succ zero)",
        ),
        (absurd(), "emptyrec (x. Nat) z"),
        (absurd(), "emptyrec (x. Id Nat zero (succ zero)) z"),
        (empty(), "Id Nat zero zero"),
        (fam(), "Id A a a"),
        (empty(), "refl Nat zero"),
        (fam(), "refl A a"),
        (empty(), "idrec Nat zero (x y. Nat) zero (refl Nat zero)"),
        (path(), "idrec Nat zero (x y. Id Nat zero x) (refl Nat zero) e"),
    ];
    for (s, src) in cases {
        out.push(infer(s.g(), &s.t(src))?.0);
    }
    // Conversion into a β-redex type.
    let (e, f) = (empty(), fam());
    out.push(conv(typed_at(&e, "zero", "Nat")?, sym(beta_code(&e, "Nat")?)?)?);
    out.push(conv(typed_at(&f, "a", "A")?, sym(beta_code(&f, "A")?)?)?);
    Ok(out)
}

fn type_conversion() -> Built<Vec<Derivation>> {
    let (e, f, n) = (empty(), fam(), nat());
    let mut out = vec![
        refl_ty(e.g(), &e.t("Nat"))?,
        refl_ty(f.g(), &f.t("A -> A"))?,
        beta_code(&e, "Nat")?,
        beta_code(&f, "A")?,
        sym(beta_code(&n, "Nat")?)?,
    ];
    // (λX:U. X) Nat ≅ (λY:U. Nat) Empty
    let k = el_conv(beta_fun(e.g(), &e.t("(\\Y:U. Nat) Empty"))?)?;
    out.push(trans(beta_code(&e, "Nat")?, sym(k)?)?);
    out.push(trans(refl_ty(e.g(), &Term::Nat)?, beta_code(&e, "Nat").and_then(sym)?)?);
    // Congruences.
    for (rule, former) in [(R::FunTyC, "->"), (R::SigTyC, "*")] {
        let lhs = e.t(&format!("Nat {former} (\\X:U. X) Nat"));
        let rhs = e.t(&format!("Nat {former} Nat"));
        let cod = beta_code(&e.ext("x", "Nat"), "Nat")?;
        out.push(node(
            rule,
            J::ConvTy(e.ctx.clone(), lhs, rhs),
            vec![refl_ty(e.g(), &Term::Nat)?, cod],
        ));
        let lhs = e.t(&format!("(\\X:U. X) Nat {former} Nat"));
        let dom = e.t("(\\X:U. X) Nat");
        out.push(node(
            rule,
            J::ConvTy(e.ctx.clone(), lhs, e.t(&format!("Nat {former} Nat"))),
            vec![beta_code(&e, "Nat")?, refl_ty(&e.ctx.extend(dom), &Term::Nat)?],
        ));
    }
    out.push(node(
        R::IdTyC,
        J::ConvTy(e.ctx.clone(), e.t("Id Nat zero zero"), e.t("Id Nat zero zero")),
        vec![
            refl_ty(e.g(), &Term::Nat)?,
            refl_tm(e.g(), &Term::Nat, &Term::Zero)?,
            refl_tm(e.g(), &Term::Nat, &Term::Zero)?,
        ],
    ));
    let code = e.t("(\\X:U. X) Nat");
    let zero_at = |s: &Scope| -> Built<Derivation> {
        let d = conv(typed_at(s, "zero", "Nat")?, sym(beta_code(s, "Nat")?)?)?;
        let j = J::ConvTm(s.ctx.clone(), code.clone(), Term::Zero, Term::Zero);
        Ok(node(R::Refl, j, vec![d]))
    };
    out.push(node(
        R::IdTyC,
        J::ConvTy(
            e.ctx.clone(),
            e.t("Id ((\\X:U. X) Nat) zero zero"),
            e.t("Id Nat zero zero"),
        ),
        vec![beta_code(&e, "Nat")?, zero_at(&e)?, zero_at(&e)?],
    ));
    Ok(out)
}

fn term_conversion() -> Built<Vec<Derivation>> {
    let (e, f, n, fu) = (empty(), fam(), nat(), fun());
    let nat_t = Term::Nat;
    let id_beta = |s: &Scope, arg: &str| beta_fun(s.g(), &s.t(&format!("(\\x:Nat. x) {arg}")));
    let mut out = vec![
        refl_tm(e.g(), &nat_t, &Term::Zero)?,
        refl_tm(fu.g(), &nat_t, &fu.t("f n"))?,
        sym(id_beta(&e, "zero")?)?,
        beta_fun(e.g(), &e.t("(\\x:Nat. succ x) zero"))?,
        beta_fun(n.g(), &n.t("(\\x:Nat. succ x) n"))?,
        id_beta(&e, "zero")?,
        trans(
            beta_fun(e.g(), &e.t("(\\x:Nat. succ x) zero"))?,
            refl_tm(e.g(), &nat_t, &e.t("succ zero"))?,
        )?,
        trans(id_beta(&n, "n")?, sym(id_beta(&n, "n")?)?)?,
    ];
    // Type conversion of a term conversion.
    let to_code = |d: Derivation| -> Built<Derivation> {
        let J::ConvTm(g, _, t, u) = d.conclusion.clone() else { unreachable!() };
        let eq = sym(beta_code(&e, "Nat")?)?;
        let J::ConvTy(_, _, b) = eq.conclusion.clone() else { unreachable!() };
        Ok(node(R::ConvC, J::ConvTm(g, b, t, u), vec![d, eq]))
    };
    out.push(to_code(refl_tm(e.g(), &nat_t, &Term::Zero)?)?);
    out.push(to_code(id_beta(&e, "zero")?)?);

    // Congruences at U.
    for (rule, former) in [(R::FunCong, "->"), (R::SigCong, "*")] {
        let ext = e.ext("x", "Nat");
        out.push(node(
            rule,
            J::ConvTm(
                e.ctx.clone(),
                Term::Univ,
                e.t(&format!("Nat {former} Nat")),
                e.t(&format!("Nat {former} Nat")),
            ),
            vec![
                refl_tm(e.g(), &Term::Univ, &nat_t)?,
                refl_tm(ext.g(), &Term::Univ, &nat_t)?,
            ],
        ));
        let code = e.t("(\\X:U. X) Nat");
        out.push(node(
            rule,
            J::ConvTm(
                e.ctx.clone(),
                Term::Univ,
                e.t(&format!("(\\X:U. X) Nat {former} Nat")),
                e.t(&format!("Nat {former} Nat")),
            ),
            vec![
                beta_fun(e.g(), &code)?,
                refl_tm(&e.ctx.extend(code.clone()), &Term::Univ, &nat_t)?,
            ],
        ));
    }
    out.push(node(
        R::IdCong,
        J::ConvTm(
            e.ctx.clone(),
            Term::Univ,
            e.t("Id Nat zero zero"),
            e.t("Id Nat ((\\x:Nat. x) zero) zero"),
        ),
        vec![
            refl_tm(e.g(), &Term::Univ, &nat_t)?,
            sym(id_beta(&e, "zero")?)?,
            refl_tm(e.g(), &nat_t, &Term::Zero)?,
        ],
    ));
    out.push(node(
        R::IdCong,
        J::ConvTm(f.ctx.clone(), Term::Univ, f.t("Id A a a"), f.t("Id A a a")),
        vec![
            refl_tm(f.g(), &Term::Univ, &f.t("A"))?,
            refl_tm(f.g(), &f.t("A"), &f.t("a"))?,
            refl_tm(f.g(), &f.t("A"), &f.t("a"))?,
        ],
    ));

    // λ and application.
    let x = e.ext("x", "Nat");
    let lam1 = node(
        R::LamCong,
        J::ConvTm(
            e.ctx.clone(),
            e.t("Nat -> Nat"),
            e.t("\\x:Nat. (\\y:Nat. y) x"),
            e.t("\\x:Nat. x"),
        ),
        vec![refl_ty(e.g(), &nat_t)?, beta_fun(x.g(), &x.t("(\\y:Nat. y) x"))?],
    );
    out.push(lam1.clone());
    out.push(node(
        R::LamCong,
        J::ConvTm(
            e.ctx.clone(),
            e.t("Nat -> Nat"),
            e.t("\\x:Nat. x"),
            e.t("\\x:(\\X:U. X) Nat. x"),
        ),
        vec![
            sym(beta_code(&e, "Nat")?)?,
            refl_tm(x.g(), &nat_t, &x.t("x"))?,
        ],
    ));
    out.push(node(
        R::AppCong,
        J::ConvTm(fu.ctx.clone(), nat_t.clone(), fu.t("f ((\\x:Nat. x) n)"), fu.t("f n")),
        vec![refl_tm(fu.g(), &fu.t("Nat -> Nat"), &fu.t("f"))?, id_beta(&fu, "n")?],
    ));
    out.push(node(
        R::AppCong,
        J::ConvTm(
            e.ctx.clone(),
            nat_t.clone(),
            e.t("(\\x:Nat. (\\y:Nat. y) x) zero"),
            e.t("(\\x:Nat. x) zero"),
        ),
        vec![lam1, refl_tm(e.g(), &nat_t, &Term::Zero)?],
    ));

    // Pairs and projections.
    let ns = e.t("Nat * Nat");
    let pair_cong1 = node(
        R::PairCong,
        J::ConvTm(
            e.ctx.clone(),
            ns.clone(),
            e.t("pair {x:Nat. Nat} ((\\x:Nat. x) zero, zero)"),
            e.t("pair {x:Nat. Nat} (zero, zero)"),
        ),
        vec![
            refl_ty(e.g(), &nat_t)?,
            refl_ty(x.g(), &nat_t)?,
            id_beta(&e, "zero")?,
            refl_tm(e.g(), &nat_t, &Term::Zero)?,
        ],
    );
    out.push(pair_cong1.clone());
    out.push(node(
        R::PairCong,
        J::ConvTm(
            e.ctx.clone(),
            ns.clone(),
            e.t("pair {x:Nat. Nat} (zero, zero)"),
            e.t("pair {x:(\\X:U. X) Nat. Nat} (zero, zero)"),
        ),
        vec![
            sym(beta_code(&e, "Nat")?)?,
            refl_ty(x.g(), &nat_t)?,
            refl_tm(e.g(), &nat_t, &Term::Zero)?,
            refl_tm(e.g(), &nat_t, &Term::Zero)?,
        ],
    ));
    let p = pair();
    let refl_p = refl_tm(p.g(), &p.t("Nat * Nat"), &p.t("p"))?;
    for (rule, proj) in [(R::FstCong, "fst"), (R::SndCong, "snd")] {
        out.push(node(
            rule,
            J::ConvTm(
                p.ctx.clone(),
                nat_t.clone(),
                p.t(&format!("{proj} p")),
                p.t(&format!("{proj} p")),
            ),
            vec![refl_p.clone()],
        ));
        let J::ConvTm(_, _, l, r) = &pair_cong1.conclusion else { unreachable!() };
        out.push(node(
            rule,
            J::ConvTm(
                e.ctx.clone(),
                nat_t.clone(),
                if proj == "fst" { Term::fst(l.clone()) } else { Term::snd(l.clone()) },
                if proj == "fst" { Term::fst(r.clone()) } else { Term::snd(r.clone()) },
            ),
            vec![pair_cong1.clone()],
        ));
    }
    out.push(node(
        R::SuccCong,
        J::ConvTm(e.ctx.clone(), nat_t.clone(), e.t("succ ((\\x:Nat. x) zero)"), e.t("succ zero")),
        vec![id_beta(&e, "zero")?],
    ));
    out.push(node(
        R::SuccCong,
        J::ConvTm(n.ctx.clone(), nat_t.clone(), n.t("succ n"), n.t("succ n")),
        vec![refl_tm(n.g(), &nat_t, &n.t("n"))?],
    ));

    // Eliminators.
    let step = e.ext("x", "Nat").ext("y", "Nat");
    let succ_y = step.t("succ y");
    for (s, base, arg) in [(&n, "zero", "n"), (&e, "((\\x:Nat. x) zero)", "zero")] {
        let lhs = s.t(&format!("natrec (x. Nat) {base} (x y. succ y) {arg}"));
        let rhs = s.t(&format!("natrec (x. Nat) zero (x y. succ y) {arg}"));
        let base_d = if base == "zero" {
            refl_tm(s.g(), &nat_t, &Term::Zero)?
        } else {
            id_beta(s, "zero")?
        };
        let step_ctx = s.ctx.nat_step(&Term::Nat);
        out.push(node(
            R::NatRecCong,
            J::ConvTm(s.ctx.clone(), nat_t.clone(), lhs, rhs),
            vec![
                refl_ty(&s.ctx.extend(Term::Nat), &nat_t)?,
                base_d,
                refl_tm(&step_ctx, &nat_t, &succ_y)?,
                refl_tm(s.g(), &nat_t, &s.t(arg))?,
            ],
        ));
    }
    let z = absurd();
    let ze = z.ext("w", "Empty");
    out.push(node(
        R::EmptyIndCong,
        J::ConvTm(
            z.ctx.clone(),
            nat_t.clone(),
            z.t("emptyrec (x. Nat) z"),
            z.t("emptyrec (x. (\\X:U. X) Nat) z"),
        ),
        vec![sym(beta_code(&ze, "Nat")?)?, refl_tm(z.g(), &Term::Empty, &z.t("z"))?],
    ));
    out.push(node(
        R::EmptyIndCong,
        J::ConvTm(
            z.ctx.clone(),
            z.t("Nat -> Nat"),
            z.t("emptyrec (x. Nat -> Nat) z"),
            z.t("emptyrec (x. Nat -> Nat) z"),
        ),
        vec![refl_ty(ze.g(), &ze.t("Nat -> Nat"))?, refl_tm(z.g(), &Term::Empty, &z.t("z"))?],
    ));
    out.push(node(
        R::ReflCong,
        J::ConvTm(
            e.ctx.clone(),
            e.t("Id Nat ((\\x:Nat. x) zero) ((\\x:Nat. x) zero)"),
            e.t("refl Nat ((\\x:Nat. x) zero)"),
            e.t("refl Nat zero"),
        ),
        vec![refl_ty(e.g(), &nat_t)?, id_beta(&e, "zero")?],
    ));
    out.push(node(
        R::ReflCong,
        J::ConvTm(f.ctx.clone(), f.t("Id A a a"), f.t("refl A a"), f.t("refl A a")),
        vec![refl_ty(f.g(), &f.t("A"))?, refl_tm(f.g(), &f.t("A"), &f.t("a"))?],
    ));
    let motive_e = e.ctx.id_motive(&nat_t, &Term::Zero);
    out.push(node(
        R::IdIndCong,
        J::ConvTm(
            e.ctx.clone(),
            nat_t.clone(),
            e.t("idrec Nat zero (x y. Nat) zero (refl Nat zero)"),
            e.t("idrec Nat zero (x y. Nat) ((\\x:Nat. x) zero) (refl Nat zero)"),
        ),
        vec![
            refl_ty(e.g(), &nat_t)?,
            refl_tm(e.g(), &nat_t, &Term::Zero)?,
            refl_ty(&motive_e, &nat_t)?,
            sym(id_beta(&e, "zero")?)?,
            refl_tm(e.g(), &e.t("Id Nat zero zero"), &e.t("refl Nat zero"))?,
        ],
    ));
    let pa = path();
    let motive_p = pa.ctx.id_motive(&nat_t, &Term::Zero);
    let elim = pa.t("idrec Nat zero (x y. Id Nat zero x) (refl Nat zero) e");
    out.push(node(
        R::IdIndCong,
        J::ConvTm(pa.ctx.clone(), pa.t("Id Nat zero m"), elim.clone(), elim),
        vec![
            refl_ty(pa.g(), &nat_t)?,
            refl_tm(pa.g(), &nat_t, &Term::Zero)?,
            refl_ty(&motive_p, &Term::id(Term::Nat, Term::Zero, Term::Var(1)))?,
            refl_tm(pa.g(), &pa.t("Id Nat zero zero"), &pa.t("refl Nat zero"))?,
            refl_tm(pa.g(), &pa.t("Id Nat zero m"), &pa.t("e"))?,
        ],
    ));

    // Computation and extensionality.
    let eta_fun = |s: &Scope, f: &str, a: &str| -> Built<Derivation> {
        let (f, a) = (s.t(f), s.t(a));
        let Term::Pi(dom, _) = &a else { unreachable!() };
        let rhs = Term::lam((**dom).clone(), Term::app(f.shift(), Term::Var(0)));
        let j = J::ConvTm(s.ctx.clone(), a.clone(), f.clone(), rhs);
        Ok(node(R::EtaFun, j, vec![typed(s.g(), &f, &a)?]))
    };
    out.push(eta_fun(&fu, "f", "Nat -> Nat")?);
    out.push(eta_fun(&e, "\\x:Nat. x", "Nat -> Nat")?);
    for src in [
        "pair {x:Nat. Nat} (zero, succ zero)",
        "pair {x:Nat. Id Nat x x} (zero, refl Nat zero)",
    ] {
        let pr = e.t(src);
        let Term::Pair(a, b, t, u) = &pr else { unreachable!() };
        let ps = vec![
            ty(e.g(), a)?,
            ty(&e.ctx.extend((**a).clone()), b)?,
            typed(e.g(), t, a)?,
            typed(e.g(), u, &b.subst1(t))?,
        ];
        out.push(node(
            R::BetaSig1,
            J::ConvTm(e.ctx.clone(), (**a).clone(), Term::fst(pr.clone()), (**t).clone()),
            ps.clone(),
        ));
        out.push(node(
            R::BetaSig2,
            J::ConvTm(e.ctx.clone(), b.subst1(t), Term::snd(pr.clone()), (**u).clone()),
            ps,
        ));
    }
    for (s, sig) in [(pair(), "Nat * Nat"), (dpair(), "(x : Nat) * Id Nat x x")] {
        let sig = s.t(sig);
        let Term::Sig(a, b) = &sig else { unreachable!() };
        let p = s.t("p");
        let rhs = Term::pair((**a).clone(), (**b).clone(), Term::fst(p.clone()), Term::snd(p.clone()));
        out.push(node(
            R::EtaSig,
            J::ConvTm(s.ctx.clone(), sig.clone(), p.clone(), rhs),
            vec![
                ty(s.g(), a)?,
                ty(&s.ctx.extend((**a).clone()), b)?,
                typed(s.g(), &p, &sig)?,
            ],
        ));
    }
    for (s, motive, base, stp) in [
        (&e, "Nat", "zero", "succ y"),
        (&n, "Id Nat x x", "refl Nat zero", "refl Nat (succ x)"),
    ] {
        let pm = s.ext("x", "Nat").t(motive);
        let bs = s.t(base);
        let st = s.ext("x", "Nat").ext("y", motive).t(stp);
        let premises = |s: &Scope| -> Built<Vec<Derivation>> {
            Ok(vec![
                ty(&s.ctx.extend(Term::Nat), &pm)?,
                typed(s.g(), &bs, &pm.subst1(&Term::Zero))?,
                typed(&s.ctx.nat_step(&pm), &st, &pm.motive_at_succ())?,
            ])
        };
        let at = |k: Term| Term::nat_elim(pm.clone(), bs.clone(), st.clone(), k);
        out.push(node(
            R::BetaZero,
            J::ConvTm(s.ctx.clone(), pm.subst1(&Term::Zero), at(Term::Zero), bs.clone()),
            premises(s)?,
        ));
        let k = if s.names.is_empty() { Term::succ(Term::Zero) } else { s.t("n") };
        let mut ps = vec![typed(s.g(), &k, &Term::Nat)?];
        ps.extend(premises(s)?);
        out.push(node(
            R::BetaSucc,
            J::ConvTm(
                s.ctx.clone(),
                pm.subst1(&Term::succ(k.clone())),
                at(Term::succ(k.clone())),
                st.subst2(&k, &at(k.clone())),
            ),
            ps,
        ));
    }
    for (s, a, x, motive, h) in [
        (&e, "Nat", "zero", "Nat", "zero"),
        (&f, "A", "a", "Id A a x", "refl A a"),
    ] {
        let (at, xt, ht) = (s.t(a), s.t(x), s.t(h));
        let ms = s.ext("x", a).ext("y", &format!("Id {a} {x} x"));
        let pm = ms.t(motive);
        let refl = Term::refl(at.clone(), xt.clone());
        let lhs = Term::id_elim(at.clone(), xt.clone(), pm.clone(), ht.clone(), refl.clone());
        out.push(node(
            R::BetaRefl,
            J::ConvTm(s.ctx.clone(), pm.subst2(&xt, &refl), lhs, ht.clone()),
            vec![
                ty(s.g(), &at)?,
                typed(s.g(), &xt, &at)?,
                ty(&s.ctx.id_motive(&at, &xt), &pm)?,
                typed(s.g(), &ht, &pm.subst2(&xt, &refl))?,
            ],
        ));
    }
    Ok(out)
}

fn neutral() -> Built<Vec<Derivation>> {
    let mut out = Vec::new();
    for (s, src) in [
        (nat(), "n"),
        (fun(), "f"),
        (fun(), "f n"),
        (pred(), "b"),
        (pair(), "fst p"),
        (dpair(), "fst p"),
        (pair(), "snd p"),
        (dpair(), "snd p"),
        (nat(), "natrec (x. Nat) zero (x y. succ y) n"),
        (fun(), "natrec (x. Nat -> Nat) f (x y. y) n"),
        (absurd(), "emptyrec (x. Nat) z"),
        (absurd(), "emptyrec (x. Nat -> Nat) z"),
        (path(), "idrec Nat zero (x y. Nat) zero e"),
        (path(), "idrec Nat zero (x y. Id Nat zero x) (refl Nat zero) e"),
    ] {
        out.push(neu_refl(s.g(), &s.t(src))?.0);
    }
    let fu = fun();
    let (nv, _) = neu_refl(fu.g(), &fu.t("f"))?;
    out.push(node(
        R::NApp,
        J::Neu(fu.ctx.clone(), fu.t("f ((\\x:Nat. x) n)"), fu.t("f n"), Term::Nat),
        vec![nv, beta_fun(fu.g(), &fu.t("(\\x:Nat. x) n"))?],
    ));
    let n = nat();
    for (s, src) in [(&n, "n"), (&fu, "f n")] {
        let t = s.t(src);
        let (d, _) = neu_refl(s.g(), &t)?;
        let eq = sym(beta_code(s, "Nat")?)?;
        let J::ConvTy(_, _, b) = eq.conclusion.clone() else { unreachable!() };
        out.push(node(R::NConv, J::Neu(s.ctx.clone(), t.clone(), t, b), vec![d, eq]));
    }
    Ok(out)
}

fn normalisation() -> Built<Vec<Derivation>> {
    let (e, f, n, fu, pr) = (empty(), fam(), nat(), fun(), pred());
    let mut out = Vec::new();
    for (s, a) in [
        (&e, "Nat -> Nat"),
        (&e, "(\\X:U. X) (Nat -> Nat)"),
        (&e, "(x : Nat) * Id Nat x x"),
        (&e, "Nat * Empty"),
        (&n, "Nat"),
        (&e, "Empty"),
        (&e, "U"),
        (&f, "U"),
        (&e, "Id Nat zero ((\\x:Nat. x) zero)"),
        (&f, "A"),
        (&pr, "B zero"),
    ] {
        out.push(dnf_ty(s.g(), &s.t(a))?);
    }
    for (s, a, t) in [
        (&fu, "Nat -> Nat", "f"),
        (&e, "Nat -> Nat", "\\x:Nat. x"),
        (&e, "U", "Nat -> Nat"),
        (&f, "U", "A -> A"),
        (&e, "U", "Nat * Empty"),
        (&e, "U", "(x : Nat) * Id Nat x x"),
        (&e, "Nat * Nat", "pair {x:Nat. Nat} (zero, (\\x:Nat. succ x) zero)"),
        (&Scope::new(&[("p", "Nat * Nat")]), "Nat * Nat", "p"),
        (&e, "U", "Nat"),
        (&n, "U", "Empty"),
        (&e, "Nat", "zero"),
        (&n, "Nat", "succ (succ n)"),
        (&e, "U", "Id Nat zero zero"),
        (&f, "Id A a a", "refl A a"),
        (&e, "Id Nat zero zero", "refl Nat zero"),
        (&fu, "Nat", "f ((\\x:Nat. x) n)"),
        (&f, "A", "a"),
        (&pair(), "Nat", "fst p"),
        (&dpair(), "Id Nat (fst p) (fst p)", "snd p"),
        (&n, "Nat", "natrec (x. Nat) zero (x y. succ y) n"),
        (&fu, "Nat", "natrec (x. Nat) (f zero) (x y. f y) n"),
        (&absurd(), "Nat", "emptyrec (x. Nat) z"),
        (&absurd(), "Nat -> Nat", "emptyrec (x. Nat -> Nat) z"),
        (&path(), "Nat", "idrec Nat zero (x y. Nat) zero e"),
        (&path(), "Id Nat zero m", "idrec Nat zero (x y. Id Nat zero x) (refl Nat zero) e"),
    ] {
        out.push(dnf_tm(s.g(), &s.t(a), &s.t(t))?);
    }
    // Weak-head normal roots.
    out.push(dnf_ty_star(e.g(), &e.t("Nat -> Nat"))?);
    out.push(dnf_tm_star(e.g(), &Term::Nat, &e.t("succ zero"))?);
    out.push(dne(fu.g(), &fu.t("f n"))?.0);
    out.push(dne_star(fu.g(), &fu.t("f"))?.0);
    out.push(red(e.g(), &e.t("(\\x:Nat. succ x) zero"), &e.t("succ zero")));
    out.push(red(n.g(), &n.t("n"), &n.t("n")));
    Ok(out)
}

/// Fixture files by name, each a list of derivations.
pub fn corpus() -> Vec<(&'static str, Vec<Derivation>)> {
    let groups: [(&str, fn() -> Built<Vec<Derivation>>); 7] = [
        ("contexts.drv", contexts),
        ("types.drv", types),
        ("typing.drv", typing),
        ("type_conversion.drv", type_conversion),
        ("term_conversion.drv", term_conversion),
        ("neutral.drv", neutral),
        ("normalisation.drv", normalisation),
    ];
    groups
        .into_iter()
        .map(|(name, f)| (name, f().unwrap_or_else(|e| panic!("{name}: {e}"))))
        .collect()
}

/// Text of a fixture file holding `ds`.
pub fn render(ds: &[Derivation]) -> String {
    let mut out = String::new();
    for d in ds {
        out.push_str(&super::print_derivation(d));
        out.push_str("\n\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::declarative::validate;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn every_fixture_is_valid() {
        for (file, ds) in corpus() {
            for (i, d) in ds.iter().enumerate() {
                if let Err(e) = validate(d) {
                    panic!("{file} #{i}: {e}\n{d}");
                }
            }
        }
    }

    #[test]
    fn every_rule_occurs_in_two_distinct_fixtures() {
        let mut seen: BTreeMap<R, BTreeSet<String>> = BTreeMap::new();
        for (_, ds) in corpus() {
            for d in &ds {
                for n in d.nodes() {
                    seen.entry(n.rule).or_default().insert(d.to_string());
                }
            }
        }
        let missing: Vec<_> = R::ALL
            .iter()
            .filter(|r| seen.get(r).map_or(0, |s| s.len()) < 2)
            .collect();
        assert!(missing.is_empty(), "{missing:?}");
    }
}
