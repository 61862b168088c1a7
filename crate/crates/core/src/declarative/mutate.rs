use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Derivation, Judgment, Rule};
use crate::syntax::{Context, Term};

impl Judgment {
    /// Rebuilds the judgment with every term, context entries included,
    /// passed through `f` in a fixed order.
    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Judgment {
        let cx = |g: &Context, f: &mut dyn FnMut(&Term) -> Term| {
            g.entries().iter().map(|t| f(t)).collect::<Context>()
        };
        match self {
            Judgment::Ctx(g) => Judgment::Ctx(cx(g, &mut f)),
            Judgment::Subst(g, s, d) => {
                let g = cx(g, &mut f);
                let s = s.iter().map(&mut f).collect();
                Judgment::Subst(g, s, cx(d, &mut f))
            }
            Judgment::Ty(g, a) => Judgment::Ty(cx(g, &mut f), f(a)),
            Judgment::DnfTy(g, a) => Judgment::DnfTy(cx(g, &mut f), f(a)),
            Judgment::DnfTyStar(g, a) => Judgment::DnfTyStar(cx(g, &mut f), f(a)),
            Judgment::Typed(g, a, b) => Judgment::Typed(cx(g, &mut f), f(a), f(b)),
            Judgment::ConvTy(g, a, b) => Judgment::ConvTy(cx(g, &mut f), f(a), f(b)),
            Judgment::DnfTm(g, a, b) => Judgment::DnfTm(cx(g, &mut f), f(a), f(b)),
            Judgment::DnfTmStar(g, a, b) => Judgment::DnfTmStar(cx(g, &mut f), f(a), f(b)),
            Judgment::Dne(g, a, b) => Judgment::Dne(cx(g, &mut f), f(a), f(b)),
            Judgment::DneStar(g, a, b) => Judgment::DneStar(cx(g, &mut f), f(a), f(b)),
            Judgment::Red(g, a, b) => Judgment::Red(cx(g, &mut f), f(a), f(b)),
            Judgment::ConvTm(g, a, b, c) => Judgment::ConvTm(cx(g, &mut f), f(a), f(b), f(c)),
            Judgment::Neu(g, a, b, c) => Judgment::Neu(cx(g, &mut f), f(a), f(b), f(c)),
        }
    }

    fn term_nodes(&self) -> usize {
        let mut n = 0;
        self.map_terms(|t| {
            n += t.size();
            t.clone()
        });
        n
    }
}

/// Replaces the `k`-th subterm of `t` in pre-order.
fn replace_nth(t: &Term, k: &mut usize, f: &mut dyn FnMut(&Term) -> Term) -> Term {
    if *k == 0 {
        *k = usize::MAX;
        return f(t);
    }
    if *k == usize::MAX || *k >= t.size() {
        if *k != usize::MAX {
            *k -= t.size();
        }
        return t.clone();
    }
    *k -= 1;
    t.map_children(|c, _| replace_nth(c, k, f))
}

fn perturb(t: &Term, rng: &mut ChaCha8Rng) -> Term {
    let pool = [
        Term::Nat,
        Term::Empty,
        Term::Univ,
        Term::Zero,
        Term::succ(t.clone()),
        Term::Var(0),
        Term::Var(1),
        match t {
            Term::Var(i) => Term::Var(i + 1),
            _ => Term::app(t.clone(), Term::Zero),
        },
    ];
    let choices: Vec<&Term> = pool.iter().filter(|c| *c != t).collect();
    (*choices.choose(rng).expect("pool has several distinct terms")).clone()
}

fn node_at<'a>(d: &'a mut Derivation, path: &[usize]) -> &'a mut Derivation {
    match path.split_first() {
        None => d,
        Some((&i, rest)) => node_at(&mut d.premises[i], rest),
    }
}

fn paths(d: &Derivation, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, p) in d.premises.iter().enumerate() {
        prefix.push(i);
        paths(p, prefix, out);
        prefix.pop();
    }
}

/// A single random corruption of `d`: a node's rule tag is changed, a
/// premise is dropped or two are swapped, or a subterm of a conclusion is
/// replaced. The result always differs from `d`.
pub fn mutate(d: &Derivation, seed: u64) -> Derivation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = Vec::new();
    paths(d, &mut Vec::new(), &mut all);
    loop {
        let mut out = d.clone();
        let path = all.choose(&mut rng).expect("a derivation has a root");
        let n = node_at(&mut out, path);
        match rng.gen_range(0..4) {
            0 => {
                let others: Vec<Rule> = Rule::ALL.iter().copied().filter(|r| *r != n.rule).collect();
                n.rule = *others.choose(&mut rng).expect("more than one rule");
            }
            1 if !n.premises.is_empty() => {
                let i = rng.gen_range(0..n.premises.len());
                n.premises.remove(i);
            }
            2 if n.premises.len() >= 2 => {
                let i = rng.gen_range(0..n.premises.len());
                let j = rng.gen_range(0..n.premises.len());
                n.premises.swap(i, j);
            }
            _ => {
                let total = n.conclusion.term_nodes();
                if total == 0 {
                    continue;
                }
                let mut k = rng.gen_range(0..total);
                let mut f = |t: &Term| perturb(t, &mut rng);
                n.conclusion = n.conclusion.map_terms(|t| replace_nth(t, &mut k, &mut f));
            }
        }
        if &out != d {
            return out;
        }
    }
}
