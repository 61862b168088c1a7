//! Generators for contexts, types and terms, well-typed by construction.
//!
//! Terms are built top-down against a target type, following the typing
//! rules backwards. Moves that cannot fit the target give up and another is
//! tried; after a few attempts the generator falls back to a canonical
//! inhabitant found by [`Gen::inhabit`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenConfig, Instance};
use crate::bidir::{self, Backend};
use crate::conv_typed;
use crate::normalize;
use crate::reduction::{machine_whnf, step};
use crate::syntax::{Context, Term};

/// Fuel for the reductions and conversions the generator itself performs.
pub const GEN_FUEL: u64 = 100_000;
const INHABIT_BUDGET: usize = 6;
const ATTEMPTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TyMove {
    Univ,
    Nat,
    Empty,
    Pi,
    Sig,
    Id,
    Code,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Var,
    Lam,
    Pair,
    Zero,
    Succ,
    Refl,
    Nat,
    Empty,
    Pi,
    Sig,
    Id,
    Beta,
    Proj,
    NatRec,
    LargeElim,
    IdRec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Leaf {
    Same,
    Step,
    Whnf,
    DeepNf,
    BetaExpand,
    EtaExpand,
    FstPair,
    NatRecZero,
}

fn whnf(t: &Term) -> Option<Term> {
    machine_whnf(t, GEN_FUEL).accepted()
}

fn is_code(g: &Context, t: &Term) -> bool {
    bidir::check(g, t, &Term::Univ, &Backend::Typed, GEN_FUEL).is_accept()
}

fn infer(g: &Context, t: &Term) -> Option<Term> {
    bidir::infer(g, t, &Backend::Typed, GEN_FUEL)
        .accepted()
        .and_then(|ty| whnf(&ty))
}

/// A seeded generator. Each query of a run owns one.
pub struct Gen<'c> {
    cfg: &'c GenConfig,
    rng: ChaCha8Rng,
}

impl<'c> Gen<'c> {
    /// The generator for stream `stream` of `cfg.seed`.
    pub fn new(cfg: &'c GenConfig, stream: u64) -> Gen<'c> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Gen { cfg, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn depth(&self) -> usize {
        self.cfg.max_depth
    }

    fn pick<T: Copy>(&mut self, opts: &[(u32, T)]) -> Option<T> {
        opts.choose_weighted(&mut self.rng, |o| o.0).ok().map(|o| o.1)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A well-formed context of at most `max_ctx_len` entries. Entries need
    /// not be inhabited.
    pub fn ctx(&mut self) -> Context {
        let n = self.rng.gen_range(0..=self.cfg.max_ctx_len);
        let d = self.cfg.max_depth.min(2);
        let mut g = Context::new();
        for _ in 0..n {
            let t = self.ty(&g, d);
            g.push(t);
        }
        g
    }

    /// A type well-formed in `g`.
    pub fn ty(&mut self, g: &Context, d: usize) -> Term {
        let w = &self.cfg.weights;
        let mut opts = vec![
            (w.univ, TyMove::Univ),
            (w.nat, TyMove::Nat),
            (w.empty, TyMove::Empty),
            (w.code, TyMove::Code),
        ];
        if d > 0 {
            opts.extend([(w.pi, TyMove::Pi), (w.sig, TyMove::Sig), (w.id, TyMove::Id)]);
        }
        for _ in 0..ATTEMPTS {
            let Some(m) = self.pick(&opts) else { break };
            let t = match m {
                TyMove::Univ => Some(Term::Univ),
                TyMove::Nat => Some(Term::Nat),
                TyMove::Empty => Some(Term::Empty),
                TyMove::Code => self.tm(g, &Term::Univ, d),
                TyMove::Pi | TyMove::Sig => {
                    let a = self.ty(g, d - 1);
                    let b = self.ty(&g.extend(a.clone()), d - 1);
                    Some(match m {
                        TyMove::Pi => Term::pi(a, b),
                        _ => Term::sig(a, b),
                    })
                }
                TyMove::Id => {
                    let a = self.target_ty(g, d - 1);
                    self.tm(g, &a, d - 1).map(|x| {
                        let y = self.variant(g, &a, &x);
                        Term::id(a, x, y)
                    })
                }
            };
            if let Some(t) = t {
                return t;
            }
        }
        Term::Nat
    }

    /// A type well-formed in `g` for which an inhabitant is known to exist.
    pub fn target_ty(&mut self, g: &Context, d: usize) -> Term {
        for _ in 0..ATTEMPTS {
            let t = self.ty(g, d);
            if self.inhabit(g, &t, INHABIT_BUDGET).is_some() {
                return t;
            }
        }
        Term::Nat
    }

    /// A term of type `a` in `g`, or `None` if no inhabitant was found.
    pub fn tm(&mut self, g: &Context, a: &Term, d: usize) -> Option<Term> {
        let aw = whnf(a)?;
        let opts = self.moves(&aw, d);
        for _ in 0..ATTEMPTS {
            let Some(m) = self.pick(&opts) else { break };
            if let Some(t) = self.build(g, a, &aw, m, d) {
                return Some(t);
            }
        }
        self.inhabit(g, &aw, INHABIT_BUDGET)
    }

    fn moves(&self, aw: &Term, d: usize) -> Vec<(u32, Move)> {
        let w = &self.cfg.weights;
        let mut v = vec![(w.var, Move::Var)];
        match aw {
            Term::Pi(..) if d > 0 => v.push((w.lam, Move::Lam)),
            Term::Sig(..) if d > 0 => v.push((w.pair, Move::Pair)),
            Term::Nat => {
                v.push((w.zero, Move::Zero));
                if d > 0 {
                    v.push((w.succ, Move::Succ));
                }
            }
            Term::Id(..) => v.push((w.refl, Move::Refl)),
            Term::Univ => {
                v.extend([(w.nat, Move::Nat), (w.empty, Move::Empty)]);
                if d > 0 {
                    v.extend([(w.pi, Move::Pi), (w.sig, Move::Sig), (w.id, Move::Id)]);
                }
            }
            _ => {}
        }
        if d > 0 {
            v.extend([
                (w.beta, Move::Beta),
                (w.proj, Move::Proj),
                (w.natrec, Move::NatRec),
                (w.large_elim, Move::LargeElim),
                (w.idrec, Move::IdRec),
            ]);
        }
        v
    }

    /// An annotation convertible with `t`, sometimes a different one.
    fn annotation(&mut self, g: &Context, t: &Term) -> Term {
        if self.coin(0.15) && is_code(g, t) {
            self.variant(g, &Term::Univ, t)
        } else {
            t.clone()
        }
    }

    fn build(&mut self, g: &Context, a: &Term, aw: &Term, m: Move, d: usize) -> Option<Term> {
        let d1 = d.saturating_sub(1);
        match (m, aw) {
            (Move::Var, _) => self.neutral(g, aw, d),
            (Move::Lam, Term::Pi(b, c)) => {
                let ann = self.annotation(g, b);
                let body = self.tm(&g.extend((**b).clone()), c, d1)?;
                Some(Term::lam(ann, body))
            }
            (Move::Pair, Term::Sig(b, c)) => {
                let x = self.tm(g, b, d1)?;
                let y = self.tm(g, &c.subst1(&x), d1)?;
                let b2 = self.annotation(g, b);
                let c2 = self.annotation(&g.extend((**b).clone()), c);
                Some(Term::pair(b2, c2, x, y))
            }
            (Move::Zero, _) => Some(Term::Zero),
            (Move::Succ, _) => Some(Term::succ(self.tm(g, &Term::Nat, d1)?)),
            (Move::Refl, Term::Id(b, x, y)) => {
                if !conv_typed::conv_tm(g, b, x, y, GEN_FUEL).is_accept() {
                    return None;
                }
                let end = if self.coin(0.5) { x } else { y };
                Some(Term::refl((**b).clone(), (**end).clone()))
            }
            (Move::Nat, _) => Some(Term::Nat),
            (Move::Empty, _) => Some(Term::Empty),
            (Move::Pi | Move::Sig, _) => {
                let b = self.tm(g, &Term::Univ, d1)?;
                let c = self.tm(&g.extend(b.clone()), &Term::Univ, d1)?;
                Some(match m {
                    Move::Pi => Term::pi(b, c),
                    _ => Term::sig(b, c),
                })
            }
            (Move::Id, _) => {
                let b = self.tm(g, &Term::Univ, d1)?;
                let x = self.tm(g, &b, d1)?;
                let y = self.variant(g, &b, &x);
                Some(Term::id(b, x, y))
            }
            (Move::Beta, _) => {
                let b = self.target_ty(g, d1);
                let body = self.tm(&g.extend(b.clone()), &a.shift(), d1)?;
                let arg = self.tm(g, &b, d1)?;
                Some(Term::app(Term::lam(b, body), arg))
            }
            (Move::Proj, _) => {
                if self.coin(0.5) {
                    let c = self.target_ty(&g.extend(a.clone()), d1);
                    let x = self.tm(g, a, d1)?;
                    let y = self.tm(g, &c.subst1(&x), d1)?;
                    Some(Term::fst(Term::pair(a.clone(), c, x, y)))
                } else {
                    let b = self.target_ty(g, d1);
                    let x = self.tm(g, &b, d1)?;
                    let y = self.tm(g, a, d1)?;
                    Some(Term::snd(Term::pair(b, a.shift(), x, y)))
                }
            }
            (Move::NatRec, _) => {
                let n = self.tm(g, &Term::Nat, d1)?;
                self.nat_elim(g, a, n, d1)
            }
            (Move::LargeElim, _) => {
                if !is_code(g, a) {
                    return None;
                }
                // P(x) = natrec (_. U) a (_ y. y) x, so P(n) computes to `a`
                // for every closed numeral-valued n.
                let motive = Term::nat_elim(Term::Univ, a.shift(), Term::Var(0), Term::Var(0));
                let n = self.tm(&Context::new(), &Term::Nat, d1)?;
                let z = self.tm(g, &motive.subst1(&Term::Zero), d1)?;
                let s = self.tm(&g.nat_step(&motive), &motive.motive_at_succ(), d1)?;
                Some(Term::nat_elim(motive, z, s, n))
            }
            (Move::IdRec, _) => {
                let b = self.target_ty(g, d1);
                let x = self.tm(g, &b, d1)?;
                let branch = self.tm(g, a, d1)?;
                let proof = Term::refl(b.clone(), self.variant(g, &b, &x));
                Some(Term::id_elim(b, x, a.shift_by(2), branch, proof))
            }
            _ => None,
        }
    }

    /// `natrec` with the constant motive `a` on scrutinee `n`.
    fn nat_elim(&mut self, g: &Context, a: &Term, n: Term, d: usize) -> Option<Term> {
        let motive = a.shift();
        let z = self.tm(g, a, d)?;
        let s = self.tm(&g.nat_step(&motive), &motive.motive_at_succ(), d)?;
        Some(Term::nat_elim(motive, z, s, n))
    }

    /// A neutral of type `aw`: a variable, possibly under a short spine of
    /// eliminations, whose type converts with the target.
    fn neutral(&mut self, g: &Context, aw: &Term, d: usize) -> Option<Term> {
        let d1 = d.saturating_sub(1);
        let mut spines: Vec<(Term, Term)> = Vec::new();
        for i in 0..g.len() {
            let ty = g.lookup(i).expect("index in range");
            let mut frontier = vec![(Term::Var(i), ty)];
            for level in 0..3 {
                let mut next = Vec::new();
                for (t, ty) in frontier {
                    let Some(tw) = whnf(&ty) else { continue };
                    if level < 2 {
                        match &tw {
                            Term::Pi(b, c) if d > 0 => {
                                if let Some(arg) = self.tm(g, b, d1) {
                                    let cod = c.subst1(&arg);
                                    next.push((Term::app(t.clone(), arg), cod));
                                }
                            }
                            Term::Sig(b, c) => {
                                let first = Term::fst(t.clone());
                                next.push((first.clone(), (**b).clone()));
                                next.push((Term::snd(t.clone()), c.subst1(&first)));
                            }
                            _ => {}
                        }
                    }
                    spines.push((t, tw));
                }
                frontier = next;
            }
        }
        let mut matches: Vec<Term> = Vec::new();
        let mut scrutinees: Vec<(Term, Term)> = Vec::new();
        for (t, tw) in spines {
            if conv_typed::conv_ty(g, &tw, aw, GEN_FUEL).is_accept() {
                matches.push(t.clone());
            }
            if d > 0 && matches!(tw, Term::Nat | Term::Empty | Term::Id(..)) {
                scrutinees.push((t, tw));
            }
        }
        let n = matches.len() + scrutinees.len();
        if n == 0 {
            return None;
        }
        let k = self.rng.gen_range(0..n);
        if k < matches.len() {
            return Some(matches.swap_remove(k));
        }
        let (t, tw) = scrutinees.swap_remove(k - matches.len());
        match tw {
            Term::Nat => self.nat_elim(g, aw, t, d1),
            Term::Empty => Some(Term::empty_elim(aw.shift(), t)),
            Term::Id(b, x, _) => {
                let branch = self.tm(g, aw, d1)?;
                Some(Term::id_elim(*b, *x, aw.shift_by(2), branch, t))
            }
            _ => unreachable!("only eliminable types are scrutinees"),
        }
    }

    /// A canonical inhabitant of `a`: zero, λ, pair, refl, `Nat` as a code,
    /// or a variable (possibly eliminated) of a convertible type.
    pub fn inhabit(&mut self, g: &Context, a: &Term, budget: usize) -> Option<Term> {
        if budget == 0 {
            return None;
        }
        let aw = whnf(a)?;
        match &aw {
            Term::Univ => Some(Term::Nat),
            Term::Nat => Some(Term::Zero),
            Term::Pi(b, c) => {
                let body = self.inhabit(&g.extend((**b).clone()), c, budget - 1)?;
                Some(Term::lam((**b).clone(), body))
            }
            Term::Sig(b, c) => {
                let x = self.inhabit(g, b, budget - 1)?;
                let y = self.inhabit(g, &c.subst1(&x), budget - 1)?;
                Some(Term::pair((**b).clone(), (**c).clone(), x, y))
            }
            Term::Id(b, x, y) if conv_typed::conv_tm(g, b, x, y, GEN_FUEL).is_accept() => {
                Some(Term::refl((**b).clone(), (**x).clone()))
            }
            _ => self.find_var(g, &aw, budget),
        }
    }

    fn find_var(&mut self, g: &Context, aw: &Term, budget: usize) -> Option<Term> {
        for i in 0..g.len() {
            let ty = g.lookup(i).expect("index in range");
            let tw = whnf(&ty)?;
            if conv_typed::conv_ty(g, &tw, aw, GEN_FUEL).is_accept() {
                return Some(Term::Var(i));
            }
            match &tw {
                Term::Empty => return Some(Term::empty_elim(aw.shift(), Term::Var(i))),
                Term::Sig(b, c) => {
                    let first = Term::fst(Term::Var(i));
                    if conv_typed::conv_ty(g, b, aw, GEN_FUEL).is_accept() {
                        return Some(first);
                    }
                    if conv_typed::conv_ty(g, &c.subst1(&first), aw, GEN_FUEL).is_accept() {
                        return Some(Term::snd(Term::Var(i)));
                    }
                }
                Term::Pi(b, c) if budget > 1 => {
                    if let Some(arg) = self.inhabit(g, b, budget - 1) {
                        let cod = c.subst1(&arg);
                        if conv_typed::conv_ty(g, &cod, aw, GEN_FUEL).is_accept() {
                            return Some(Term::app(Term::Var(i), arg));
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }

    /// A term convertible with `t : a`, obtained by reducing, expanding or
    /// rewriting some subterm.
    pub fn variant(&mut self, g: &Context, a: &Term, t: &Term) -> Term {
        self.rewrite(g, a, t, true, &mut |gen, g, a, t| gen.convertible_leaf(g, a, t))
    }

    /// A term of type `a` that agrees with `t` outside one regenerated subterm.
    pub fn perturb(&mut self, g: &Context, a: &Term, t: &Term) -> Term {
        let d = self.cfg.max_depth.saturating_sub(1).max(1);
        self.rewrite(g, a, t, false, &mut |gen, g, a, t| {
            gen.tm(g, a, d).unwrap_or_else(|| t.clone())
        })
    }

    /// Walks down congruence positions of `t : a` and applies `leaf` at a
    /// random one. Unless `convertible`, positions that a type depends on
    /// are left alone, since a new subterm there would change the type.
    fn rewrite(
        &mut self,
        g: &Context,
        a: &Term,
        t: &Term,
        convertible: bool,
        leaf: &mut dyn FnMut(&mut Self, &Context, &Term, &Term) -> Term,
    ) -> Term {
        let Some(aw) = whnf(a) else {
            return t.clone();
        };
        if self.coin(0.45) {
            match (t, &aw) {
                (Term::Lam(ann, body), Term::Pi(b, c)) => {
                    let body = self.rewrite(&g.extend((**b).clone()), c, body, convertible, leaf);
                    return Term::lam((**ann).clone(), body);
                }
                (Term::Pair(b1, c1, x, y), Term::Sig(b, c)) => {
                    let ty_y = c.subst1(x);
                    let free = convertible || c.strengthen().is_some();
                    let (x, y) = if free && self.coin(0.5) {
                        (self.rewrite(g, b, x, convertible, leaf), (**y).clone())
                    } else {
                        ((**x).clone(), self.rewrite(g, &ty_y, y, convertible, leaf))
                    };
                    return Term::pair((**b1).clone(), (**c1).clone(), x, y);
                }
                (Term::Succ(n), _) => {
                    return Term::succ(self.rewrite(g, &Term::Nat, n, convertible, leaf))
                }
                (Term::App(f, x), _) => match infer(g, f) {
                    Some(Term::Pi(b, c)) if convertible || c.strengthen().is_some() => {
                        let x = self.rewrite(g, &b, x, convertible, leaf);
                        return Term::app((**f).clone(), x);
                    }
                    _ => {}
                },
                (Term::Fst(p) | Term::Snd(p), _) => match infer(g, p) {
                    Some(pt @ Term::Sig(_, _))
                        if convertible
                            || matches!(t, Term::Fst(_))
                            || matches!(&pt, Term::Sig(_, c) if c.strengthen().is_some()) =>
                    {
                        let p = self.rewrite(g, &pt, p, convertible, leaf);
                        return match t {
                            Term::Fst(_) => Term::fst(p),
                            _ => Term::snd(p),
                        };
                    }
                    _ => {}
                },
                (Term::NatElim(m, z, s, n), _) if convertible || m.strengthen().is_some() => {
                    let n = self.rewrite(g, &Term::Nat, n, convertible, leaf);
                    return Term::nat_elim((**m).clone(), (**z).clone(), (**s).clone(), n);
                }
                _ => {}
            }
        }
        leaf(self, g, a, t)
    }

    fn convertible_leaf(&mut self, g: &Context, a: &Term, t: &Term) -> Term {
        let opts = [
            (2, Leaf::Same),
            (3, Leaf::Step),
            (2, Leaf::Whnf),
            (2, Leaf::DeepNf),
            (3, Leaf::BetaExpand),
            (3, Leaf::EtaExpand),
            (1, Leaf::FstPair),
            (1, Leaf::NatRecZero),
        ];
        let leaf = self.pick(&opts).expect("positive weights");
        let same = || t.clone();
        match leaf {
            Leaf::Same => same(),
            Leaf::Step => step(t).unwrap_or_else(same),
            Leaf::Whnf => whnf(t).unwrap_or_else(same),
            Leaf::DeepNf => normalize::deep_nf_tm(g, a, t, GEN_FUEL)
                .accepted()
                .unwrap_or_else(same),
            Leaf::BetaExpand => Term::app(Term::lam(a.clone(), Term::Var(0)), t.clone()),
            Leaf::EtaExpand => match whnf(a) {
                Some(Term::Pi(b, _)) => Term::lam(*b, Term::app(t.shift(), Term::Var(0))),
                Some(Term::Sig(b, c)) => {
                    Term::pair(*b, *c, Term::fst(t.clone()), Term::snd(t.clone()))
                }
                _ => same(),
            },
            Leaf::FstPair => Term::fst(Term::pair(a.clone(), Term::Nat, t.clone(), Term::Zero)),
            Leaf::NatRecZero => Term::nat_elim(a.shift(), t.clone(), Term::Var(0), Term::Zero),
        }
    }

    /// A context, an inhabited type and a term of it.
    pub fn typed_term(&mut self) -> (Context, Term, Term) {
        let d = self.cfg.max_depth;
        loop {
            let g = self.ctx();
            let a = self.target_ty(&g, d.min(3));
            if let Some(t) = self.tm(&g, &a, d) {
                return (g, a, t);
            }
        }
    }

    /// A conversion query: two terms of one type, convertible about half
    /// of the time.
    pub fn conv_query(&mut self) -> Instance {
        let (g, a, t) = self.typed_term();
        let d = self.cfg.max_depth;
        let u = match self.rng.gen_range(0..10) {
            0..=4 => self.variant(&g, &a, &t),
            5..=7 => self.perturb(&g, &a, &t),
            _ => self.tm(&g, &a, d).unwrap_or_else(|| t.clone()),
        };
        Instance {
            ctx: g,
            ty: a,
            terms: vec![t, u],
        }
    }
}

/// A type well-formed in `g`.
pub fn gen_type(g: &Context, cfg: &GenConfig) -> Term {
    Gen::new(cfg, 0).ty(g, cfg.max_depth)
}

/// A term of type `a` in `g`; `None` when `a` has no inhabitant the
/// generator can find.
pub fn gen_term(g: &Context, a: &Term, cfg: &GenConfig) -> Option<Term> {
    Gen::new(cfg, 0).tm(g, a, cfg.max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_nat_is_zero() {
        let cfg = GenConfig {
            max_depth: 1,
            ..GenConfig::default()
        };
        for s in 0..20 {
            let t = Gen::new(&cfg, s).tm(&Context::new(), &Term::Nat, 0);
            assert_eq!(t, Some(Term::Zero));
        }
    }

    #[test]
    fn empty_is_not_targeted_without_an_inhabitant() {
        let cfg = GenConfig::default();
        assert_eq!(Gen::new(&cfg, 1).tm(&Context::new(), &Term::Empty, 3), None);
        let g = Context::from_entries(vec![Term::Empty]);
        assert!(Gen::new(&cfg, 1).tm(&g, &Term::Empty, 3).is_some());
    }

    #[test]
    fn inhabits_id_only_with_convertible_endpoints() {
        let cfg = GenConfig::default();
        let mut gen = Gen::new(&cfg, 0);
        let g = Context::new();
        let yes = Term::id(Term::Nat, Term::Zero, Term::app(Term::lam(Term::Nat, Term::Var(0)), Term::Zero));
        let no = Term::id(Term::Nat, Term::Zero, Term::succ(Term::Zero));
        assert!(gen.inhabit(&g, &yes, 3).is_some());
        assert!(gen.inhabit(&g, &no, 3).is_none());
    }

    #[test]
    fn public_entry_points_are_deterministic() {
        let cfg = GenConfig::with_seed(7);
        let g = Context::from_entries(vec![Term::Nat]);
        assert_eq!(gen_type(&g, &cfg), gen_type(&g, &cfg));
        assert_eq!(gen_term(&g, &Term::Nat, &cfg), gen_term(&g, &Term::Nat, &cfg));
    }
}
