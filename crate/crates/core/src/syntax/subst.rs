use super::term::Term;

/// A parallel substitution.
///
/// Index `i < explicit.len()` maps to `explicit[i]`; every other index maps
/// to `Var(i - explicit.len() + tail_shift)`. Values built through the
/// public constructors are kept canonical (no trailing explicit entry that
/// the tail would already produce), so two substitutions denote the same
/// mapping iff they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subst {
    explicit: Vec<Term>,
    tail_shift: usize,
}

impl Default for Subst {
    fn default() -> Self {
        Subst::id()
    }
}

impl Subst {
    pub fn new(explicit: Vec<Term>, tail_shift: usize) -> Subst {
        let mut s = Subst {
            explicit,
            tail_shift,
        };
        s.canonicalize();
        s
    }

    pub fn id() -> Subst {
        Subst {
            explicit: Vec::new(),
            tail_shift: 0,
        }
    }

    /// The weakening `↑ⁿ`.
    pub fn shift(n: usize) -> Subst {
        Subst {
            explicit: Vec::new(),
            tail_shift: n,
        }
    }

    /// Replaces index 0 by `u` and lowers every other index by one.
    pub fn single(u: Term) -> Subst {
        Subst::id().cons(u)
    }

    /// Replaces indices `0, 1, ...` by `images[0], images[1], ...` in parallel
    /// and lowers the rest by `images.len()`.
    pub fn parallel(images: Vec<Term>) -> Subst {
        Subst::new(images, 0)
    }

    /// `(u, σ)`: index 0 goes to `u`, index `i + 1` goes to `σ(i)`.
    pub fn cons(&self, u: Term) -> Subst {
        let mut explicit = Vec::with_capacity(self.explicit.len() + 1);
        explicit.push(u);
        explicit.extend(self.explicit.iter().cloned());
        Subst::new(explicit, self.tail_shift)
    }

    pub fn explicit(&self) -> &[Term] {
        &self.explicit
    }

    pub fn tail_shift(&self) -> usize {
        self.tail_shift
    }

    pub fn is_id(&self) -> bool {
        self.explicit.is_empty() && self.tail_shift == 0
    }

    fn canonicalize(&mut self) {
        while self.tail_shift > 0 {
            match self.explicit.last() {
                Some(Term::Var(j)) if *j + 1 == self.tail_shift => {
                    self.explicit.pop();
                    self.tail_shift -= 1;
                }
                _ => break,
            }
        }
    }

    /// Image of a free index.
    pub fn image(&self, i: usize) -> Term {
        match self.explicit.get(i) {
            Some(t) => t.clone(),
            None => Term::Var(i - self.explicit.len() + self.tail_shift),
        }
    }

    /// The substitution to use under one binder: index 0 is kept and every
    /// image is weakened.
    pub fn lift(&self) -> Subst {
        let mut explicit = Vec::with_capacity(self.explicit.len() + 1);
        explicit.push(Term::Var(0));
        explicit.extend(self.explicit.iter().map(Term::shift));
        Subst::new(explicit, self.tail_shift + 1)
    }

    /// `compose(σ, τ)` applies σ first and then τ:
    /// `t[compose(σ, τ)] = t[σ][τ]`.
    pub fn compose(&self, then: &Subst) -> Subst {
        let mut explicit: Vec<Term> = self.explicit.iter().map(|t| then.apply(t)).collect();
        let skipped = self.tail_shift.min(then.explicit.len());
        explicit.extend(then.explicit[skipped..].iter().cloned());
        let tail_shift = then.tail_shift + (self.tail_shift - skipped);
        Subst::new(explicit, tail_shift)
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.is_id() {
            return t.clone();
        }
        self.apply_under(t, 0)
    }

    fn apply_under(&self, t: &Term, depth: usize) -> Term {
        match t {
            Term::Var(i) if *i < depth => Term::Var(*i),
            Term::Var(i) => {
                let img = self.image(i - depth);
                if depth == 0 {
                    img
                } else {
                    img.shift_by(depth)
                }
            }
            _ => t.map_children(|c, k| self.apply_under(c, depth + k)),
        }
    }
}

impl Term {
    pub fn subst(&self, sigma: &Subst) -> Term {
        sigma.apply(self)
    }

    /// `t[u]` for a body binding one variable.
    pub fn subst1(&self, u: &Term) -> Term {
        Subst::single(u.clone()).apply(self)
    }

    /// `t[u, v]` for a body binding two variables: `u` replaces index 1 and
    /// `v` replaces index 0.
    pub fn subst2(&self, u: &Term, v: &Term) -> Term {
        Subst::parallel(vec![v.clone(), u.clone()]).apply(self)
    }

    /// For a `natElim` motive `P` (binding `x : ℕ`), the type `P[succ x]`
    /// of the successor branch, scoped under `x : ℕ, y : P[x]`.
    pub fn motive_at_succ(&self) -> Term {
        Subst::new(vec![Term::succ(Term::Var(1))], 2).apply(self)
    }

    /// Weakening by one variable.
    pub fn shift(&self) -> Term {
        self.shift_by(1)
    }

    pub fn shift_by(&self, n: usize) -> Term {
        if n == 0 {
            return self.clone();
        }
        self.shift_above(0, n)
    }

    /// Adds `n` to every index `>= cutoff`.
    pub fn shift_above(&self, cutoff: usize, n: usize) -> Term {
        match self {
            Term::Var(i) if *i >= cutoff => Term::Var(i + n),
            Term::Var(_) => self.clone(),
            _ => self.map_children(|c, k| c.shift_above(cutoff + k, n)),
        }
    }

    /// The inverse of [`Term::shift`]: defined iff index 0 is not free.
    pub fn strengthen(&self) -> Option<Term> {
        self.strengthen_at(0)
    }

    /// Removes free index `cutoff`, lowering every index above it.
    pub fn strengthen_at(&self, cutoff: usize) -> Option<Term> {
        fn go(t: &Term, cutoff: usize) -> Result<Term, ()> {
            match t {
                Term::Var(i) if *i == cutoff => Err(()),
                Term::Var(i) if *i > cutoff => Ok(Term::Var(i - 1)),
                Term::Var(_) => Ok(t.clone()),
                _ => {
                    let mut failed = false;
                    let out = t.map_children(|c, k| match go(c, cutoff + k) {
                        Ok(c) => c,
                        Err(()) => {
                            failed = true;
                            Term::Univ
                        }
                    });
                    if failed {
                        Err(())
                    } else {
                        Ok(out)
                    }
                }
            }
        }
        go(self, cutoff).ok()
    }

    /// Applies a variable renaming to the free indices.
    pub fn rename(&self, f: &impl Fn(usize) -> usize) -> Term {
        fn go(t: &Term, depth: usize, f: &impl Fn(usize) -> usize) -> Term {
            match t {
                Term::Var(i) if *i < depth => t.clone(),
                Term::Var(i) => Term::Var(f(i - depth) + depth),
                _ => t.map_children(|c, k| go(c, depth + k, f)),
            }
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term as T;

    #[test]
    fn identity_leaves_variables() {
        assert_eq!(T::Var(0).subst(&Subst::id()), T::Var(0));
    }

    #[test]
    fn single_substitution_examples() {
        let sigma = Subst::single(T::Zero);
        assert_eq!(
            T::app(T::Var(0), T::Var(1)).subst(&sigma),
            T::app(T::Zero, T::Var(0))
        );
        assert_eq!(T::lam(T::Nat, T::Var(1)).subst(&sigma), T::lam(T::Nat, T::Zero));
    }

    #[test]
    fn subst1_examples() {
        assert_eq!(T::Var(0).subst1(&T::Zero), T::Zero);
        assert_eq!(T::Var(1).subst1(&T::Zero), T::Var(0));
        assert_eq!(
            T::succ(T::Var(0)).subst1(&T::succ(T::Zero)),
            T::numeral(2)
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(T::Var(0).shift(), T::Var(1));
        assert_eq!(T::lam(T::Nat, T::Var(0)).shift(), T::lam(T::Nat, T::Var(0)));
        assert_eq!(T::lam(T::Nat, T::Var(1)).shift(), T::lam(T::Nat, T::Var(2)));
        let t = T::pi(T::Var(3), T::app(T::Var(0), T::Var(4)));
        assert_eq!(t.shift(), t.subst(&Subst::shift(1)));
    }

    #[test]
    fn strengthen_examples() {
        assert_eq!(T::Var(1).strengthen(), Some(T::Var(0)));
        assert_eq!(T::Var(0).strengthen(), None);
        assert_eq!(
            T::app(T::Var(2), T::lam(T::Nat, T::Var(0))).strengthen(),
            Some(T::app(T::Var(1), T::lam(T::Nat, T::Var(0))))
        );
    }

    #[test]
    fn canonical_forms() {
        // (Var 0 . ↑¹) is the identity once canonicalized.
        assert_eq!(Subst::new(vec![T::Var(0)], 1), Subst::id());
        assert_eq!(Subst::id().lift(), Subst::id());
        assert_eq!(Subst::shift(1).lift(), Subst::new(vec![T::Var(0)], 2));
        assert_eq!(Subst::shift(2).compose(&Subst::single(T::Zero)), Subst::shift(1));
    }

    #[test]
    fn subst2_order() {
        // Index 1 gets the first argument, index 0 the second.
        let t = T::app(T::Var(1), T::Var(0));
        assert_eq!(t.subst2(&T::Zero, &T::Nat), T::app(T::Zero, T::Nat));
    }
}
