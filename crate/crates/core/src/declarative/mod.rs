//! Declarative derivations and their validator.
//!
//! A [`Derivation`] is a rule-tagged tree of [`Judgment`]s. [`validate`]
//! checks that every node is an instance of its rule: premises must match
//! the rule schema exactly, with no conversion applied behind the scenes.
//! Reduction side conditions are discharged by bounded weak-head reduction.

pub mod build;
pub mod corpus;
mod mutate;
mod rules;
mod text;

use std::fmt;

use crate::syntax::{Context, Term};

pub use mutate::mutate;
pub use rules::RED_FUEL;
pub use text::{print_derivation, print_judgment};

/// A judgment form. Contexts list entries outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Judgment {
    /// `⊢ Γ`
    Ctx(Context),
    /// `Γ ⊢ σ : Δ`, with `σ` listed outermost first like `Δ`.
    Subst(Context, Vec<Term>, Context),
    /// `Γ ⊢ T`
    Ty(Context, Term),
    /// `Γ ⊢ t : T`
    Typed(Context, Term, Term),
    /// `Γ ⊢ T ≅ T'`
    ConvTy(Context, Term, Term),
    /// `Γ ⊢ t ≅ t' : A`, stored as `(Γ, A, t, t')`.
    ConvTm(Context, Term, Term, Term),
    /// `Γ ⊢ n ~ n' : T`
    Neu(Context, Term, Term, Term),
    /// `Γ ⊢ T` deeply normalising.
    DnfTy(Context, Term),
    /// `Γ ⊢ T` deeply normalising, `T` in weak-head normal form.
    DnfTyStar(Context, Term),
    /// `Γ ⊢ t : A` deeply normalising, stored as `(Γ, A, t)`.
    DnfTm(Context, Term, Term),
    /// As [`Judgment::DnfTm`] with `A` and `t` in weak-head normal form.
    DnfTmStar(Context, Term, Term),
    /// `Γ ⊢ n : T` deeply normalising neutral.
    Dne(Context, Term, Term),
    /// As [`Judgment::Dne`] with `T` in weak-head normal form.
    DneStar(Context, Term, Term),
    /// `t ⇒* u`; the context only scopes the terms.
    Red(Context, Term, Term),
}

impl Judgment {
    pub fn keyword(&self) -> &'static str {
        match self {
            Judgment::Ctx(..) => "ctx",
            Judgment::Subst(..) => "subst",
            Judgment::Ty(..) => "ty",
            Judgment::Typed(..) => "typed",
            Judgment::ConvTy(..) => "convty",
            Judgment::ConvTm(..) => "convtm",
            Judgment::Neu(..) => "neu",
            Judgment::DnfTy(..) => "dnfty",
            Judgment::DnfTyStar(..) => "dnfty*",
            Judgment::DnfTm(..) => "dnftm",
            Judgment::DnfTmStar(..) => "dnftm*",
            Judgment::Dne(..) => "dne",
            Judgment::DneStar(..) => "dne*",
            Judgment::Red(..) => "red",
        }
    }

    pub fn context(&self) -> &Context {
        match self {
            Judgment::Ctx(g)
            | Judgment::Subst(g, ..)
            | Judgment::Ty(g, _)
            | Judgment::Typed(g, ..)
            | Judgment::ConvTy(g, ..)
            | Judgment::ConvTm(g, ..)
            | Judgment::Neu(g, ..)
            | Judgment::DnfTy(g, _)
            | Judgment::DnfTyStar(g, _)
            | Judgment::DnfTm(g, ..)
            | Judgment::DnfTmStar(g, ..)
            | Judgment::Dne(g, ..)
            | Judgment::DneStar(g, ..)
            | Judgment::Red(g, ..) => g,
        }
    }

    /// Terms of the judgment, excluding the context.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Judgment::Ctx(_) => vec![],
            Judgment::Subst(_, s, d) => s.iter().chain(d.entries()).collect(),
            Judgment::Ty(_, a) | Judgment::DnfTy(_, a) | Judgment::DnfTyStar(_, a) => vec![a],
            Judgment::Typed(_, a, b)
            | Judgment::ConvTy(_, a, b)
            | Judgment::DnfTm(_, a, b)
            | Judgment::DnfTmStar(_, a, b)
            | Judgment::Dne(_, a, b)
            | Judgment::DneStar(_, a, b)
            | Judgment::Red(_, a, b) => vec![a, b],
            Judgment::ConvTm(_, a, b, c) | Judgment::Neu(_, a, b, c) => vec![a, b, c],
        }
    }

    /// Every term is scoped in the judgment's context.
    pub fn is_scoped(&self) -> bool {
        let g = self.context();
        if !g.is_scoped() {
            return false;
        }
        match self {
            Judgment::Subst(_, s, d) => {
                s.len() == d.len() && d.is_scoped() && s.iter().all(|t| t.is_scoped(g.len()))
            }
            _ => self.terms().iter().all(|t| t.is_scoped(g.len())),
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_judgment(self))
    }
}

macro_rules! rules {
    ($($name:ident / $arity:literal),* $(,)?) => {
        /// Rule identifiers.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Rule {
            $($name),*
        }

        impl Rule {
            pub const ALL: &'static [Rule] = &[$(Rule::$name),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Rule::$name => stringify!($name)),*
                }
            }

            /// Number of premises.
            pub fn arity(self) -> usize {
                match self {
                    $(Rule::$name => $arity),*
                }
            }
        }
    };
}

rules! {
    CtxEmpty / 0, CtxExt / 2,
    SubstEmpty / 0, SubstExt / 2,
    FunTy / 2, SigTy / 2, NatTy / 1, EmptyTy / 1, IdTy / 3, El / 1, UnivTy / 1,
    Conv / 2, Var / 1, FunUni / 2, Abs / 3, App / 2, SigUni / 2, Pair / 4, Proj1 / 1,
    Proj2 / 1, NatUni / 1, Zero / 1, Succ / 1, NatRec / 4, EmptyUni / 1, EmptyInd / 2,
    IdUni / 3, ReflTm / 2, IdInd / 6,
    ReflTy / 1, SymTy / 1, TransTy / 2, ElC / 1, FunTyC / 2, SigTyC / 2, IdTyC / 3,
    Refl / 1, Sym / 1, Trans / 2, ConvC / 2, FunCong / 2, SigCong / 2, IdCong / 3,
    LamCong / 2, AppCong / 2, PairCong / 4, FstCong / 1, SndCong / 1, SuccCong / 1,
    NatRecCong / 4, EmptyIndCong / 2, ReflCong / 2, IdIndCong / 5,
    BetaFun / 4, EtaFun / 1, BetaSig1 / 4, BetaSig2 / 4, EtaSig / 3, BetaZero / 3,
    BetaSucc / 4, BetaRefl / 4,
    NConv / 2, NVar / 0, NApp / 2, NSig1 / 1, NSig2 / 1, NNatElim / 4, NEmptyElim / 2,
    NIdInd / 3,
    DnfTyRed / 2, DnfPiTy / 2, DnfSigTy / 2, DnfNatTy / 0, DnfEmptyTy / 0, DnfIdTy / 3,
    DnfUnivTy / 0, DnfNeTy / 1,
    DnfTmRed / 3, DnfPiCode / 2, DnfFunEta / 1, DnfSigCode / 2, DnfSigEta / 2,
    DnfNatCode / 0, DnfZero / 0, DnfSucc / 1, DnfEmptyCode / 0, DnfIdCode / 3, DnfRefl / 0,
    DnfNePos / 1,
    DneRed / 2, DneVar / 0, DneApp / 2, DneFst / 1, DneSnd / 1, DneNatElim / 4,
    DneEmptyElim / 2, DneIdElim / 3,
    RedSteps / 0,
}

impl Rule {
    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == name)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Judgment, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            conclusion,
            premises,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// All nodes, pre-order.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_derivation(self))
    }
}

/// Why a derivation is invalid: the path of `(premise index, rule)` pairs
/// from the root to the offending node, and what is wrong there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invalid {
    pub path: Vec<(usize, Rule)>,
    pub reason: String,
}

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self
            .path
            .iter()
            .map(|(i, r)| format!("{i}:{r}"))
            .collect();
        write!(f, "invalid {}: {}", path.join(" > "), self.reason)
    }
}

impl std::error::Error for Invalid {}

/// Checks every node of `d`, pre-order; reports the first invalid one.
pub fn validate(d: &Derivation) -> Result<(), Invalid> {
    fn go(d: &Derivation, path: &mut Vec<(usize, Rule)>, index: usize) -> Result<(), Invalid> {
        path.push((index, d.rule));
        if let Err(reason) = rules::check_node(d) {
            return Err(Invalid {
                path: path.clone(),
                reason,
            });
        }
        for (i, p) in d.premises.iter().enumerate() {
            go(p, path, i)?;
        }
        path.pop();
        Ok(())
    }
    go(d, &mut Vec::new(), 0)
}
