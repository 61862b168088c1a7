use super::Instance;
use crate::bidir::{self, Backend};
use crate::syntax::Term;

const CHECK_FUEL: u64 = 1_000_000;
const MAX_ROUNDS: usize = 200;

/// The `k`-th subterm of `t` in pre-order, with the number of binders
/// crossed to reach it.
fn subterm(t: &Term, k: usize) -> Option<(&Term, usize)> {
    fn go<'t>(t: &'t Term, k: &mut usize, binders: usize) -> Option<(&'t Term, usize)> {
        if *k == 0 {
            return Some((t, binders));
        }
        *k -= 1;
        for (c, b) in t.children() {
            if *k < c.size() {
                return go(c, k, binders + b);
            }
            *k -= c.size();
        }
        None
    }
    let mut k = k;
    go(t, &mut k, 0)
}

fn replace(t: &Term, k: usize, new: &Term) -> Term {
    fn go(t: &Term, k: &mut Option<usize>, new: &Term) -> Term {
        match k {
            Some(0) => {
                *k = None;
                new.clone()
            }
            Some(n) if *n < t.size() => {
                *n -= 1;
                t.map_children(|c, _| go(c, k, new))
            }
            Some(n) => {
                *n -= t.size();
                t.clone()
            }
            None => t.clone(),
        }
    }
    go(t, &mut Some(k), new)
}

/// Smaller terms that might stand in for `s`: its children moved out of
/// their binders, and a few constants.
fn candidates(s: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for (c, b) in s.children() {
        let mut c = Some(c.clone());
        for _ in 0..b {
            c = c.and_then(|c| c.strengthen());
        }
        out.extend(c);
    }
    out.extend([Term::Zero, Term::Nat]);
    out.retain(|c| c.size() < s.size());
    out
}

/// Greedy minimisation. A subterm of one of the terms is replaced by a
/// smaller one whenever the result still checks at the instance type and
/// `fails` still holds; stops at a local minimum.
pub fn shrink(inst: &Instance, fails: &mut dyn FnMut(&Instance) -> bool) -> Instance {
    let mut best = inst.clone();
    for _ in 0..MAX_ROUNDS {
        match improve(&best, fails) {
            Some(next) => best = next,
            None => break,
        }
    }
    best
}

fn improve(inst: &Instance, fails: &mut dyn FnMut(&Instance) -> bool) -> Option<Instance> {
    for (j, t) in inst.terms.iter().enumerate() {
        for k in 0..t.size() {
            let (s, _) = subterm(t, k)?;
            for c in candidates(s) {
                let smaller = replace(t, k, &c);
                let typed = bidir::check(&inst.ctx, &smaller, &inst.ty, &Backend::Typed, CHECK_FUEL);
                if !typed.is_accept() {
                    continue;
                }
                let mut next = inst.clone();
                next.terms[j] = smaller;
                if fails(&next) {
                    return Some(next);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Context;

    #[test]
    fn subterm_and_replace_agree_on_positions() {
        let t = Term::app(Term::lam(Term::Nat, Term::Var(0)), Term::succ(Term::Zero));
        for k in 0..t.size() {
            let (s, _) = subterm(&t, k).unwrap();
            assert_eq!(replace(&t, k, s), t);
        }
        assert_eq!(subterm(&t, 4), Some((&Term::succ(Term::Zero), 0)));
        assert_eq!(subterm(&t, 3), Some((&Term::Var(0), 1)));
    }

    #[test]
    fn shrinks_to_a_minimal_failing_term() {
        let big = Term::succ(Term::app(
            Term::lam(Term::Nat, Term::succ(Term::Var(0))),
            Term::succ(Term::Zero),
        ));
        let inst = Instance {
            ctx: Context::new(),
            ty: Term::Nat,
            terms: vec![big],
        };
        // "fails" while the term still contains a successor.
        let small = shrink(&inst, &mut |i| matches!(i.terms[0], Term::Succ(_)));
        assert_eq!(small.terms[0], Term::succ(Term::Zero));
    }
}
