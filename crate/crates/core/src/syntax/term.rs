use std::fmt;

/// Core terms, using de Bruijn indices.
///
/// Types and terms share one syntax. Fields marked "binds n" are scoped
/// under `n` extra variables: index `0` is the innermost binder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Univ,
    /// `Π (x : dom). cod`, cod binds 1.
    Pi(Box<Term>, Box<Term>),
    /// `λ (x : ann). body`, body binds 1.
    Lam(Box<Term>, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `Σ (x : dom). cod`, cod binds 1.
    Sig(Box<Term>, Box<Term>),
    /// `pair⟨dom. cod⟩(first, second)`, cod binds 1.
    Pair(Box<Term>, Box<Term>, Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Nat,
    Zero,
    Succ(Box<Term>),
    /// `natElim(motive, base, step, scrut)`: motive binds 1, step binds 2
    /// (the predecessor at index 1, the recursive result at index 0).
    NatElim(Box<Term>, Box<Term>, Box<Term>, Box<Term>),
    Empty,
    /// `emptyElim(motive, scrut)`, motive binds 1.
    EmptyElim(Box<Term>, Box<Term>),
    Id(Box<Term>, Box<Term>, Box<Term>),
    Refl(Box<Term>, Box<Term>),
    /// `idElim(ty, lhs, motive, branch, scrut)`: motive binds 2, the endpoint
    /// at index 1 and the equality proof at index 0.
    IdElim(Box<Term>, Box<Term>, Box<Term>, Box<Term>, Box<Term>),
}

/// Head constructor of a term, used in mismatch reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Var,
    Univ,
    Pi,
    Lam,
    App,
    Sig,
    Pair,
    Fst,
    Snd,
    Nat,
    Zero,
    Succ,
    NatElim,
    Empty,
    EmptyElim,
    Id,
    Refl,
    IdElim,
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Head::Var => "variable",
            Head::Univ => "U",
            Head::Pi => "Pi",
            Head::Lam => "lambda",
            Head::App => "application",
            Head::Sig => "Sigma",
            Head::Pair => "pair",
            Head::Fst => "fst",
            Head::Snd => "snd",
            Head::Nat => "Nat",
            Head::Zero => "zero",
            Head::Succ => "succ",
            Head::NatElim => "natrec",
            Head::Empty => "Empty",
            Head::EmptyElim => "emptyrec",
            Head::Id => "Id",
            Head::Refl => "refl",
            Head::IdElim => "idrec",
        };
        f.write_str(s)
    }
}

fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn pi(dom: Term, cod: Term) -> Term {
        Term::Pi(bx(dom), bx(cod))
    }

    /// Non-dependent function type; `cod` is given in the outer scope.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi(dom, cod.shift())
    }

    pub fn lam(ann: Term, body: Term) -> Term {
        Term::Lam(bx(ann), bx(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(bx(f), bx(a))
    }

    pub fn sig(dom: Term, cod: Term) -> Term {
        Term::Sig(bx(dom), bx(cod))
    }

    pub fn pair(dom: Term, cod: Term, first: Term, second: Term) -> Term {
        Term::Pair(bx(dom), bx(cod), bx(first), bx(second))
    }

    pub fn fst(p: Term) -> Term {
        Term::Fst(bx(p))
    }

    pub fn snd(p: Term) -> Term {
        Term::Snd(bx(p))
    }

    pub fn succ(n: Term) -> Term {
        Term::Succ(bx(n))
    }

    pub fn nat_elim(motive: Term, base: Term, step: Term, scrut: Term) -> Term {
        Term::NatElim(bx(motive), bx(base), bx(step), bx(scrut))
    }

    pub fn empty_elim(motive: Term, scrut: Term) -> Term {
        Term::EmptyElim(bx(motive), bx(scrut))
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(bx(ty), bx(lhs), bx(rhs))
    }

    pub fn refl(ty: Term, tm: Term) -> Term {
        Term::Refl(bx(ty), bx(tm))
    }

    pub fn id_elim(ty: Term, lhs: Term, motive: Term, branch: Term, scrut: Term) -> Term {
        Term::IdElim(bx(ty), bx(lhs), bx(motive), bx(branch), bx(scrut))
    }

    /// `succ^k zero`.
    pub fn numeral(k: usize) -> Term {
        (0..k).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// If this is `succ^k zero`, returns `k`.
    pub fn as_numeral(&self) -> Option<usize> {
        let mut k = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(k),
                Term::Succ(n) => {
                    k += 1;
                    t = n;
                }
                _ => return None,
            }
        }
    }

    pub fn head(&self) -> Head {
        match self {
            Term::Var(_) => Head::Var,
            Term::Univ => Head::Univ,
            Term::Pi(..) => Head::Pi,
            Term::Lam(..) => Head::Lam,
            Term::App(..) => Head::App,
            Term::Sig(..) => Head::Sig,
            Term::Pair(..) => Head::Pair,
            Term::Fst(_) => Head::Fst,
            Term::Snd(_) => Head::Snd,
            Term::Nat => Head::Nat,
            Term::Zero => Head::Zero,
            Term::Succ(_) => Head::Succ,
            Term::NatElim(..) => Head::NatElim,
            Term::Empty => Head::Empty,
            Term::EmptyElim(..) => Head::EmptyElim,
            Term::Id(..) => Head::Id,
            Term::Refl(..) => Head::Refl,
            Term::IdElim(..) => Head::IdElim,
        }
    }

    /// Immediate subterms paired with the number of variables each binds.
    pub fn children(&self) -> Vec<(&Term, usize)> {
        match self {
            Term::Var(_) | Term::Univ | Term::Nat | Term::Zero | Term::Empty => vec![],
            Term::Pi(a, b) | Term::Lam(a, b) | Term::Sig(a, b) => vec![(a, 0), (b, 1)],
            Term::App(f, a) => vec![(f, 0), (a, 0)],
            Term::Pair(a, b, t, u) => vec![(a, 0), (b, 1), (t, 0), (u, 0)],
            Term::Fst(p) | Term::Snd(p) | Term::Succ(p) => vec![(p, 0)],
            Term::NatElim(p, z, s, n) => vec![(p, 1), (z, 0), (s, 2), (n, 0)],
            Term::EmptyElim(p, e) => vec![(p, 1), (e, 0)],
            Term::Id(a, t, u) => vec![(a, 0), (t, 0), (u, 0)],
            Term::Refl(a, t) => vec![(a, 0), (t, 0)],
            Term::IdElim(a, x, p, b, e) => vec![(a, 0), (x, 0), (p, 2), (b, 0), (e, 0)],
        }
    }

    /// Rebuilds the term with every immediate subterm replaced by `f(child, binders)`.
    pub fn map_children(&self, mut f: impl FnMut(&Term, usize) -> Term) -> Term {
        let mut g = |t: &Term, k| bx(f(t, k));
        match self {
            Term::Var(_) | Term::Univ | Term::Nat | Term::Zero | Term::Empty => self.clone(),
            Term::Pi(a, b) => Term::Pi(g(a, 0), g(b, 1)),
            Term::Lam(a, b) => Term::Lam(g(a, 0), g(b, 1)),
            Term::Sig(a, b) => Term::Sig(g(a, 0), g(b, 1)),
            Term::App(t, u) => Term::App(g(t, 0), g(u, 0)),
            Term::Pair(a, b, t, u) => Term::Pair(g(a, 0), g(b, 1), g(t, 0), g(u, 0)),
            Term::Fst(p) => Term::Fst(g(p, 0)),
            Term::Snd(p) => Term::Snd(g(p, 0)),
            Term::Succ(n) => Term::Succ(g(n, 0)),
            Term::NatElim(p, z, s, n) => Term::NatElim(g(p, 1), g(z, 0), g(s, 2), g(n, 0)),
            Term::EmptyElim(p, e) => Term::EmptyElim(g(p, 1), g(e, 0)),
            Term::Id(a, t, u) => Term::Id(g(a, 0), g(t, 0), g(u, 0)),
            Term::Refl(a, t) => Term::Refl(g(a, 0), g(t, 0)),
            Term::IdElim(a, x, p, b, e) => {
                Term::IdElim(g(a, 0), g(x, 0), g(p, 2), g(b, 0), g(e, 0))
            }
        }
    }

    /// Rebuilds the term with the `index`-th immediate subterm (in
    /// [`Term::children`] order) replaced.
    pub fn with_child(&self, index: usize, replacement: Term) -> Term {
        let mut i = 0;
        let mut replacement = Some(replacement);
        self.map_children(|c, _| {
            let out = if i == index {
                replacement.take().expect("child replaced twice")
            } else {
                c.clone()
            };
            i += 1;
            out
        })
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|(c, _)| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|(c, _)| c.depth())
            .max()
            .unwrap_or(0)
    }

    /// One more than the largest free index, i.e. the smallest context length
    /// under which the term is scoped.
    pub fn scope_bound(&self) -> usize {
        fn go(t: &Term, depth: usize) -> usize {
            match t {
                Term::Var(i) if *i >= depth => i - depth + 1,
                _ => t
                    .children()
                    .into_iter()
                    .map(|(c, k)| go(c, depth + k))
                    .max()
                    .unwrap_or(0),
            }
        }
        go(self, 0)
    }

    pub fn is_scoped(&self, len: usize) -> bool {
        self.scope_bound() <= len
    }

    pub fn is_closed(&self) -> bool {
        self.scope_bound() == 0
    }

    /// Whether free variable `index` occurs in the term.
    pub fn mentions(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            _ => self
                .children()
                .into_iter()
                .any(|(c, k)| c.mentions(index + k)),
        }
    }

    /// Erases the annotations that the conversion algorithms never compare:
    /// λ domains, pair type annotations, `refl` arguments and the type and
    /// left endpoint carried by `idElim`.
    pub fn erase_annotations(&self) -> Term {
        match self {
            Term::Lam(_, b) => Term::lam(Term::Univ, b.erase_annotations()),
            Term::Pair(_, _, t, u) => Term::pair(
                Term::Univ,
                Term::Univ,
                t.erase_annotations(),
                u.erase_annotations(),
            ),
            Term::Refl(..) => Term::refl(Term::Univ, Term::Univ),
            Term::IdElim(_, _, p, b, e) => Term::id_elim(
                Term::Univ,
                Term::Univ,
                p.erase_annotations(),
                b.erase_annotations(),
                e.erase_annotations(),
            ),
            _ => self.map_children(|c, _| c.erase_annotations()),
        }
    }
}
