use super::parser::is_keyword;
use crate::syntax::Term;

// Precedence levels, loosest first.
const LAM: u8 = 0;
const ARROW: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

/// Prints `t` with its free variables named by `names` (outermost first).
/// Bound variables get fresh names `x0, x1, ...` that avoid every name in scope.
pub fn print(t: &Term, names: &[String]) -> String {
    let mut p = Printer {
        scope: names.to_vec(),
    };
    p.go(t, LAM)
}

struct Printer {
    scope: Vec<String>,
}

impl Printer {
    fn fresh(&self) -> String {
        let mut k = self.scope.len();
        loop {
            let name = format!("x{k}");
            if !self.scope.contains(&name) {
                return name;
            }
            k += 1;
        }
    }

    fn under<T>(&mut self, n: usize, f: impl FnOnce(&mut Self, &[String]) -> T) -> T {
        let mut fresh = Vec::new();
        for _ in 0..n {
            let x = self.fresh();
            self.scope.push(x.clone());
            fresh.push(x);
        }
        let out = f(self, &fresh);
        self.scope.truncate(self.scope.len() - n);
        out
    }

    fn var(&self, i: usize) -> String {
        let n = self.scope.len();
        if i >= n {
            return format!("#{i}");
        }
        let name = &self.scope[n - 1 - i];
        // A free name that is shadowed or clashes with a keyword cannot be
        // printed faithfully; fall back to the raw index.
        let shadowed = self.scope[n - i..].contains(name);
        if shadowed || is_keyword(name) {
            format!("#{i}")
        } else {
            name.clone()
        }
    }

    /// Annotation position terminated by `.` or `)`: a λ there would swallow the dot.
    fn ann(&mut self, t: &Term) -> String {
        match t {
            Term::Lam(..) => self.go(t, ATOM),
            _ => self.go(t, LAM),
        }
    }

    fn go(&mut self, t: &Term, prec: u8) -> String {
        let (s, level) = self.render(t);
        if level < prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn render(&mut self, t: &Term) -> (String, u8) {
        match t {
            Term::Var(i) => (self.var(*i), ATOM),
            Term::Univ => ("U".into(), ATOM),
            Term::Nat => ("Nat".into(), ATOM),
            Term::Empty => ("Empty".into(), ATOM),
            Term::Zero => ("zero".into(), ATOM),
            Term::Lam(a, b) => {
                let a = self.ann(a);
                let s = self.under(1, |p, x| format!("\\{}:{}. {}", x[0], a, p.go(b, LAM)));
                (s, LAM)
            }
            Term::Pi(a, b) | Term::Sig(a, b) => {
                let op = if matches!(t, Term::Pi(..)) { "->" } else { "*" };
                let s = match b.strengthen() {
                    Some(b) => format!("{} {op} {}", self.go(a, APP), self.go(&b, ARROW)),
                    None => {
                        let a = self.ann(a);
                        self.under(1, |p, x| format!("({} : {}) {op} {}", x[0], a, p.go(b, ARROW)))
                    }
                };
                (s, ARROW)
            }
            Term::App(f, u) => (format!("{} {}", self.go(f, APP), self.go(u, ATOM)), APP),
            Term::Fst(p) => (format!("fst {}", self.go(p, ATOM)), APP),
            Term::Snd(p) => (format!("snd {}", self.go(p, ATOM)), APP),
            Term::Succ(n) => (format!("succ {}", self.go(n, ATOM)), APP),
            Term::Id(a, x, y) => (
                format!(
                    "Id {} {} {}",
                    self.go(a, ATOM),
                    self.go(x, ATOM),
                    self.go(y, ATOM)
                ),
                APP,
            ),
            Term::Refl(a, x) => (format!("refl {} {}", self.go(a, ATOM), self.go(x, ATOM)), APP),
            Term::Pair(a, b, x, y) => {
                let a = self.ann(a);
                let b = self.under(1, |p, v| format!("{}:{}. {}", v[0], a, p.go(b, LAM)));
                let s = format!("pair {{{}}} ({}, {})", b, self.go(x, LAM), self.go(y, LAM));
                (s, APP)
            }
            Term::NatElim(p, z, s, n) => {
                let p = self.under(1, |pr, v| format!("({}. {})", v[0], pr.go(p, LAM)));
                let z = self.go(z, ATOM);
                let s = self.under(2, |pr, v| format!("({} {}. {})", v[0], v[1], pr.go(s, LAM)));
                let n = self.go(n, ATOM);
                (format!("natrec {p} {z} {s} {n}"), APP)
            }
            Term::EmptyElim(p, e) => {
                let p = self.under(1, |pr, v| format!("({}. {})", v[0], pr.go(p, LAM)));
                (format!("emptyrec {p} {}", self.go(e, ATOM)), APP)
            }
            Term::IdElim(a, x, p, h, e) => {
                let a = self.go(a, ATOM);
                let x = self.go(x, ATOM);
                let p = self.under(2, |pr, v| format!("({} {}. {})", v[0], v[1], pr.go(p, LAM)));
                let h = self.go(h, ATOM);
                let e = self.go(e, ATOM);
                (format!("idrec {a} {x} {p} {h} {e}"), APP)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_term;
    use crate::syntax::Term as T;

    #[test]
    fn examples() {
        assert_eq!(print(&T::lam(T::Nat, T::Var(0)), &[]), "\\x0:Nat. x0");
        assert_eq!(print(&T::arrow(T::Nat, T::Nat), &[]), "Nat -> Nat");
        assert_eq!(print(&T::numeral(4), &[]), "succ (succ (succ (succ zero)))");
    }

    #[test]
    fn dependent_and_nested() {
        let t = T::pi(T::Univ, T::arrow(T::Var(0), T::Var(0)));
        assert_eq!(print(&t, &[]), "(x0 : U) -> x0 -> x0");
        let t = T::arrow(T::arrow(T::Nat, T::Nat), T::Nat);
        assert_eq!(print(&t, &[]), "(Nat -> Nat) -> Nat");
    }

    #[test]
    fn fresh_names_avoid_free_names() {
        let names = vec!["x1".to_string()];
        let t = T::lam(T::Nat, T::app(T::Var(1), T::Var(0)));
        assert_eq!(print(&t, &names), "\\x2:Nat. x1 x2");
    }

    #[test]
    fn roundtrip_eliminators() {
        let names = vec!["p".to_string(), "e".to_string()];
        let terms = [
            T::nat_elim(T::Nat, T::numeral(2), T::succ(T::Var(0)), T::Zero),
            T::id_elim(
                T::Nat,
                T::Zero,
                T::id(T::Nat, T::Var(1), T::Var(1)),
                T::refl(T::Nat, T::Zero),
                T::Var(0),
            ),
            T::pair(T::Nat, T::Nat, T::Zero, T::fst(T::Var(1))),
            T::empty_elim(T::arrow(T::Nat, T::Nat), T::Var(0)),
            T::lam(T::lam(T::Nat, T::Var(0)), T::Var(0)),
        ];
        for t in terms {
            let s = print(&t, &names);
            assert_eq!(parse_term(&s, &names).unwrap(), t, "{s}");
        }
    }
}
