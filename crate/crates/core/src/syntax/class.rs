//! Weak-head normal form predicates.

use super::term::Term;

/// Weak-head classification of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    /// Constructor-headed.
    Canonical,
    /// An eliminator spine over a variable.
    NeutralForm,
    NotWhnf,
}

impl Term {
    pub fn classify(&self) -> Class {
        if self.is_canonical() {
            Class::Canonical
        } else if self.is_neutral() {
            Class::NeutralForm
        } else {
            Class::NotWhnf
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(
            self,
            Term::Univ
                | Term::Pi(..)
                | Term::Lam(..)
                | Term::Nat
                | Term::Zero
                | Term::Succ(_)
                | Term::Sig(..)
                | Term::Pair(..)
                | Term::Empty
                | Term::Id(..)
                | Term::Refl(..)
        )
    }

    pub fn is_neutral(&self) -> bool {
        let mut t = self;
        loop {
            t = match t {
                Term::Var(_) => return true,
                Term::App(n, _) | Term::Fst(n) | Term::Snd(n) => n,
                Term::NatElim(_, _, _, n) | Term::EmptyElim(_, n) | Term::IdElim(_, _, _, _, n) => n,
                _ => return false,
            }
        }
    }

    pub fn is_whnf(&self) -> bool {
        self.classify() != Class::NotWhnf
    }

    /// A type in weak-head normal form.
    pub fn is_ty(&self) -> bool {
        matches!(
            self,
            Term::Univ | Term::Pi(..) | Term::Sig(..) | Term::Nat | Term::Empty | Term::Id(..)
        ) || self.is_neutral()
    }

    /// A positive type in weak-head normal form: compared by its canonical
    /// structure rather than by η-expansion.
    pub fn is_pos(&self) -> bool {
        matches!(self, Term::Univ | Term::Nat | Term::Empty | Term::Id(..)) || self.is_neutral()
    }

    pub fn is_nat_form(&self) -> bool {
        matches!(self, Term::Zero | Term::Succ(_)) || self.is_neutral()
    }

    pub fn is_fun_form(&self) -> bool {
        matches!(self, Term::Lam(..)) || self.is_neutral()
    }

    pub fn is_pair_form(&self) -> bool {
        matches!(self, Term::Pair(..)) || self.is_neutral()
    }

    pub fn is_id_form(&self) -> bool {
        matches!(self, Term::Refl(..)) || self.is_neutral()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert_eq!(
            Term::app(Term::Var(0), Term::Zero).classify(),
            Class::NeutralForm
        );
        assert_eq!(
            Term::app(Term::lam(Term::Nat, Term::Var(0)), Term::Zero).classify(),
            Class::NotWhnf
        );
        assert_eq!(Term::lam(Term::Nat, Term::Var(0)).classify(), Class::Canonical);
        assert!(!Term::arrow(Term::Nat, Term::Nat).is_pos());
        assert!(Term::Nat.is_pos());
        assert!(Term::Var(2).is_pos());
        assert!(!Term::sig(Term::Nat, Term::Nat).is_pos());
    }

    #[test]
    fn neutral_spines() {
        let n = Term::nat_elim(Term::Nat, Term::Zero, Term::Var(0), Term::fst(Term::Var(3)));
        assert!(n.is_neutral());
        assert!(n.is_nat_form());
        let stuck = Term::fst(Term::Zero);
        assert_eq!(stuck.classify(), Class::NotWhnf);
    }
}
