//! Text form of derivations:
//!
//! ```text
//! (Rule (judgment) premise*)
//! judgment ::= ctx BINDERS |-
//!            | subst BINDERS |- [t, ...] : BINDERS
//!            | ty BINDERS |- T          | dnfty BINDERS |- T | dnfty* BINDERS |- T
//!            | typed BINDERS |- t : T   | dnftm ... | dnftm* ... | dne ... | dne* ...
//!            | convty BINDERS |- T == T | convtm BINDERS |- t == t : T
//!            | neu BINDERS |- n == n : T
//!            | red BINDERS |- t ~> t
//! ```

use super::{Derivation, Judgment};
use crate::surface::print;
use crate::syntax::Context;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

fn binders(g: &Context, prefix: &str) -> (String, Vec<String>) {
    let all = names(prefix, g.len());
    let mut out = String::new();
    for (k, ty) in g.entries().iter().enumerate() {
        out.push_str(&format!("({} : {}) ", all[k], print(ty, &all[..k])));
    }
    (out, all)
}

/// One judgment, parenthesised.
pub fn print_judgment(j: &Judgment) -> String {
    let (ctx, n) = binders(j.context(), "x");
    let p = |t| print(t, &n);
    let payload = match j {
        Judgment::Ctx(_) => String::new(),
        Judgment::Subst(_, s, delta) => {
            let (dctx, _) = binders(delta, "y");
            let s: Vec<String> = s.iter().map(p).collect();
            format!(" [{}] : {}", s.join(", "), dctx.trim_end())
        }
        Judgment::Ty(_, a) | Judgment::DnfTy(_, a) | Judgment::DnfTyStar(_, a) => {
            format!(" {}", p(a))
        }
        Judgment::Typed(_, t, a) | Judgment::Dne(_, t, a) | Judgment::DneStar(_, t, a) => {
            format!(" {} : {}", p(t), p(a))
        }
        Judgment::DnfTm(_, a, t) | Judgment::DnfTmStar(_, a, t) => {
            format!(" {} : {}", p(t), p(a))
        }
        Judgment::ConvTy(_, a, b) => format!(" {} == {}", p(a), p(b)),
        Judgment::ConvTm(_, a, t, u) => format!(" {} == {} : {}", p(t), p(u), p(a)),
        Judgment::Neu(_, n, m, a) => format!(" {} == {} : {}", p(n), p(m), p(a)),
        Judgment::Red(_, t, u) => format!(" {} ~> {}", p(t), p(u)),
    };
    format!("({} {ctx}|-{payload})", j.keyword())
}

/// A derivation, one node per line, premises indented.
pub fn print_derivation(d: &Derivation) -> String {
    fn go(d: &Derivation, indent: usize, out: &mut String) {
        out.push_str(&" ".repeat(indent));
        out.push_str(&format!("({} {}", d.rule, print_judgment(&d.conclusion)));
        for p in &d.premises {
            out.push('\n');
            go(p, indent + 2, out);
        }
        out.push(')');
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}
