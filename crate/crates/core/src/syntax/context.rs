use super::term::Term;

/// A typing context. Entries are types, innermost binder last; each entry is
/// scoped in the context of the entries before it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<Term>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_entries(entries: Vec<Term>) -> Context {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries, outermost first.
    pub fn entries(&self) -> &[Term] {
        &self.entries
    }

    /// `Γ, x : ty`.
    pub fn extend(&self, ty: Term) -> Context {
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.extend(self.entries.iter().cloned());
        entries.push(ty);
        Context { entries }
    }

    /// `Γ, x : ℕ, y : P[x]`, the context of a `natElim` successor branch.
    pub fn nat_step(&self, motive: &Term) -> Context {
        self.extend(Term::Nat).extend(motive.clone())
    }

    /// `Γ, x : A, y : Id(A, a, x)`, the context of an `idElim` motive.
    pub fn id_motive(&self, ty: &Term, lhs: &Term) -> Context {
        self.extend(ty.clone())
            .extend(Term::id(ty.shift(), lhs.shift(), Term::Var(0)))
    }

    pub fn push(&mut self, ty: Term) {
        self.entries.push(ty);
    }

    /// The context without its innermost entry.
    pub fn pop(&self) -> Option<(Context, Term)> {
        let mut entries = self.entries.clone();
        let last = entries.pop()?;
        Some((Context { entries }, last))
    }

    /// Prefix of the first `n` entries.
    pub fn prefix(&self, n: usize) -> Context {
        Context {
            entries: self.entries[..n.min(self.entries.len())].to_vec(),
        }
    }

    /// Type of variable `i`, weakened so that it is scoped in the whole context.
    pub fn lookup(&self, i: usize) -> Option<Term> {
        let n = self.entries.len();
        if i >= n {
            return None;
        }
        Some(self.entries[n - 1 - i].shift_by(i + 1))
    }

    /// Whether each entry is scoped in the entries before it.
    pub fn is_scoped(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(k, ty)| ty.is_scoped(k))
    }

    /// Weakens the context by inserting `ty` (scoped in the first `at`
    /// entries) at position `at`, shifting the later entries.
    pub fn insert(&self, at: usize, ty: Term) -> Context {
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.extend(self.entries[..at].iter().cloned());
        entries.push(ty);
        for (k, e) in self.entries[at..].iter().enumerate() {
            entries.push(e.shift_above(k, 1));
        }
        Context { entries }
    }
}

impl FromIterator<Term> for Context {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        Context {
            entries: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_shifts_entries() {
        let ctx = Context::from_entries(vec![Term::Nat]);
        assert_eq!(ctx.lookup(0), Some(Term::Nat));
        let ctx = Context::from_entries(vec![Term::Nat, Term::arrow(Term::Nat, Term::Nat)]);
        assert_eq!(ctx.lookup(1), Some(Term::Nat));
        assert_eq!(ctx.lookup(2), None);
        let ctx = Context::from_entries(vec![Term::pi(Term::Var(5), Term::Nat)]);
        assert_eq!(ctx.lookup(0), Some(Term::pi(Term::Var(6), Term::Nat)));
    }

    #[test]
    fn insert_weakens_later_entries() {
        let ctx = Context::from_entries(vec![Term::Univ, Term::Var(0)]);
        let w = ctx.insert(1, Term::Nat);
        assert_eq!(w.entries(), &[Term::Univ, Term::Nat, Term::Var(1)]);
        assert!(w.is_scoped());
    }
}
