use std::collections::BTreeSet;

use super::lexer::{lex, Spanned, Tok};
use super::{Directive, Payload, Query, SurfaceError};
use crate::declarative::{Derivation, Judgment, Rule};
use crate::syntax::{Context, Term};

const KEYWORDS: &[&str] = &[
    "U", "Nat", "Empty", "Id", "zero", "succ", "fst", "snd", "pair", "refl", "natrec", "emptyrec",
    "idrec", "check", "infer", "conv", "whnf", "nf", "validate",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, SurfaceError>;

impl Parser {
    fn new(src: &str, first_line: usize, scope: Vec<String>) -> PResult<Parser> {
        let mut toks = lex(src).map_err(|e| SurfaceError::Syntax {
            line: e.line + first_line - 1,
            column: e.column,
            expected: vec!["token".into()],
            found: format!("`{}`", e.found),
        })?;
        for t in &mut toks {
            t.line += first_line - 1;
        }
        Ok(Parser {
            toks,
            pos: 0,
            scope,
            expected: BTreeSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn error<T>(&mut self) -> PResult<T> {
        let here = &self.toks[self.pos];
        Err(SurfaceError::Syntax {
            line: here.line,
            column: here.column,
            expected: self.expected.iter().cloned().collect(),
            found: here.tok.to_string(),
        })
    }

    /// Consumes `tok` if it is next; otherwise records it as expected.
    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            self.expected.insert(tok.to_string());
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.error()
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            self.expected.insert(format!("`{kw}`"));
            false
        }
    }

    fn binder(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => {
                self.expected.insert("identifier".into());
                self.error()
            }
        }
    }

    fn under<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let out = f(self);
        self.scope.truncate(n);
        out
    }

    fn expr(&mut self) -> PResult<Term> {
        if self.eat(&Tok::Backslash) {
            let x = self.binder()?;
            self.expect(&Tok::Colon)?;
            let ty = self.expr()?;
            self.expect(&Tok::Dot)?;
            let body = self.under(&[x], Self::expr)?;
            return Ok(Term::lam(ty, body));
        }
        self.arrow()
    }

    fn arrow(&mut self) -> PResult<Term> {
        let dependent = matches!(self.peek(), Tok::LParen)
            && matches!(self.peek_at(1), Tok::Ident(s) if !is_keyword(s))
            && matches!(self.peek_at(2), Tok::Colon);
        if dependent {
            self.bump();
            let x = self.binder()?;
            self.expect(&Tok::Colon)?;
            let dom = self.expr()?;
            self.expect(&Tok::RParen)?;
            let sigma = if self.eat(&Tok::Arrow) {
                false
            } else if self.eat(&Tok::Star) {
                true
            } else {
                return self.error();
            };
            let cod = self.under(&[x], Self::arrow)?;
            return Ok(if sigma {
                Term::sig(dom, cod)
            } else {
                Term::pi(dom, cod)
            });
        }
        let lhs = self.app()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.arrow()?;
            Ok(Term::arrow(lhs, rhs))
        } else if self.eat(&Tok::Star) {
            let rhs = self.arrow()?;
            Ok(Term::sig(lhs, rhs.shift()))
        } else {
            Ok(lhs)
        }
    }

    fn atom_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || matches!(s.as_str(), "U" | "Nat" | "Empty" | "zero"),
            Tok::Num(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut t = self.head()?;
        while self.atom_start() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        self.expected.insert("argument".into());
        Ok(t)
    }

    /// `(x. T)`
    fn bind1(&mut self) -> PResult<Term> {
        self.expect(&Tok::LParen)?;
        let x = self.binder()?;
        self.expect(&Tok::Dot)?;
        let t = self.under(&[x], Self::expr)?;
        self.expect(&Tok::RParen)?;
        Ok(t)
    }

    /// `(x y. T)`
    fn bind2(&mut self) -> PResult<Term> {
        self.expect(&Tok::LParen)?;
        let x = self.binder()?;
        let y = self.binder()?;
        self.expect(&Tok::Dot)?;
        let t = self.under(&[x, y], Self::expr)?;
        self.expect(&Tok::RParen)?;
        Ok(t)
    }

    fn head(&mut self) -> PResult<Term> {
        if self.eat_kw("fst") {
            return Ok(Term::fst(self.atom()?));
        }
        if self.eat_kw("snd") {
            return Ok(Term::snd(self.atom()?));
        }
        if self.eat_kw("succ") {
            return Ok(Term::succ(self.atom()?));
        }
        if self.eat_kw("Id") {
            let a = self.atom()?;
            let x = self.atom()?;
            let y = self.atom()?;
            return Ok(Term::id(a, x, y));
        }
        if self.eat_kw("refl") {
            let a = self.atom()?;
            let x = self.atom()?;
            return Ok(Term::refl(a, x));
        }
        if self.eat_kw("natrec") {
            let p = self.bind1()?;
            let z = self.atom()?;
            let s = self.bind2()?;
            let n = self.atom()?;
            return Ok(Term::nat_elim(p, z, s, n));
        }
        if self.eat_kw("emptyrec") {
            let p = self.bind1()?;
            let e = self.atom()?;
            return Ok(Term::empty_elim(p, e));
        }
        if self.eat_kw("idrec") {
            let a = self.atom()?;
            let x = self.atom()?;
            let p = self.bind2()?;
            let h = self.atom()?;
            let e = self.atom()?;
            return Ok(Term::id_elim(a, x, p, h, e));
        }
        if self.eat_kw("pair") {
            self.expect(&Tok::LBrace)?;
            let x = self.binder()?;
            self.expect(&Tok::Colon)?;
            let a = self.expr()?;
            self.expect(&Tok::Dot)?;
            let b = self.under(&[x], Self::expr)?;
            self.expect(&Tok::RBrace)?;
            self.expect(&Tok::LParen)?;
            let t = self.expr()?;
            self.expect(&Tok::Comma)?;
            let u = self.expr()?;
            self.expect(&Tok::RParen)?;
            return Ok(Term::pair(a, b, t, u));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Term> {
        let here = self.toks[self.pos].clone();
        match &here.tok {
            Tok::Ident(s) => {
                let t = match s.as_str() {
                    "U" => Term::Univ,
                    "Nat" => Term::Nat,
                    "Empty" => Term::Empty,
                    "zero" => Term::Zero,
                    s if is_keyword(s) => {
                        self.expected.insert("term".into());
                        return self.error();
                    }
                    s => match self.scope.iter().rposition(|n| n == s) {
                        Some(k) => Term::Var(self.scope.len() - 1 - k),
                        None => {
                            return Err(SurfaceError::Scope {
                                line: here.line,
                                column: here.column,
                                name: s.to_string(),
                            })
                        }
                    },
                };
                self.bump();
                Ok(t)
            }
            Tok::Num(n) => {
                let n = *n;
                self.bump();
                Ok(Term::numeral(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => {
                self.expected.insert("term".into());
                self.error()
            }
        }
    }

    fn end(&mut self) -> PResult<()> {
        self.expect(&Tok::Eof)
    }
}

/// Parses a term whose free names are `scope` (outermost first).
pub fn parse_term(src: &str, scope: &[String]) -> PResult<Term> {
    let mut p = Parser::new(src, 1, scope.to_vec())?;
    let t = p.expr()?;
    p.end()?;
    Ok(t)
}

impl Parser {
    /// `(x : T)*`, each binder scoped over the following ones. Leaves the
    /// names in scope.
    fn binders(&mut self) -> PResult<Context> {
        let mut ctx = Context::new();
        while self.eat(&Tok::LParen) {
            let x = self.binder()?;
            self.expect(&Tok::Colon)?;
            ctx.push(self.expr()?);
            self.expect(&Tok::RParen)?;
            self.scope.push(x);
        }
        Ok(ctx)
    }

    fn judgment(&mut self) -> PResult<Judgment> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => {
                self.expected.insert("judgment".into());
                return self.error();
            }
        };
        let starred_ok = matches!(kw.as_str(), "dnfty" | "dnftm" | "dne");
        let known = starred_ok
            || matches!(
                kw.as_str(),
                "ctx" | "subst" | "ty" | "typed" | "convty" | "convtm" | "neu" | "red"
            );
        if !known {
            self.expected.insert("judgment".into());
            return self.error();
        }
        self.bump();
        let star = starred_ok && self.eat(&Tok::Star);
        let saved = std::mem::take(&mut self.scope);
        let g = self.binders()?;
        self.expect(&Tok::Turnstile)?;
        let j = match kw.as_str() {
            "ctx" => Judgment::Ctx(g),
            "subst" => {
                self.expect(&Tok::LBracket)?;
                let mut s = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    loop {
                        s.push(self.expr()?);
                        if self.eat(&Tok::RBracket) {
                            break;
                        }
                        self.expect(&Tok::Comma)?;
                    }
                }
                self.expect(&Tok::Colon)?;
                let outer = std::mem::take(&mut self.scope);
                let delta = self.binders()?;
                self.scope = outer;
                Judgment::Subst(g, s, delta)
            }
            "ty" | "dnfty" => {
                let a = self.expr()?;
                match (kw.as_str(), star) {
                    ("ty", _) => Judgment::Ty(g, a),
                    (_, false) => Judgment::DnfTy(g, a),
                    (_, true) => Judgment::DnfTyStar(g, a),
                }
            }
            "typed" | "dnftm" | "dne" => {
                let t = self.expr()?;
                self.expect(&Tok::Colon)?;
                let a = self.expr()?;
                match (kw.as_str(), star) {
                    ("typed", _) => Judgment::Typed(g, t, a),
                    ("dnftm", false) => Judgment::DnfTm(g, a, t),
                    ("dnftm", true) => Judgment::DnfTmStar(g, a, t),
                    (_, false) => Judgment::Dne(g, t, a),
                    (_, true) => Judgment::DneStar(g, t, a),
                }
            }
            "convty" => {
                let a = self.expr()?;
                self.expect(&Tok::EqEq)?;
                Judgment::ConvTy(g, a, self.expr()?)
            }
            "convtm" | "neu" => {
                let t = self.expr()?;
                self.expect(&Tok::EqEq)?;
                let u = self.expr()?;
                self.expect(&Tok::Colon)?;
                let a = self.expr()?;
                if kw == "convtm" {
                    Judgment::ConvTm(g, a, t, u)
                } else {
                    Judgment::Neu(g, t, u, a)
                }
            }
            _ => {
                let t = self.expr()?;
                self.expect(&Tok::Squiggle)?;
                Judgment::Red(g, t, self.expr()?)
            }
        };
        self.scope = saved;
        Ok(j)
    }

    fn derivation(&mut self) -> PResult<Derivation> {
        self.expect(&Tok::LParen)?;
        let rule = match self.peek() {
            Tok::Ident(s) => Rule::from_name(s),
            _ => None,
        };
        let Some(rule) = rule else {
            self.expected.insert("rule name".into());
            return self.error();
        };
        self.bump();
        self.expect(&Tok::LParen)?;
        let conclusion = self.judgment()?;
        self.expect(&Tok::RParen)?;
        let mut premises = Vec::new();
        while matches!(self.peek(), Tok::LParen) {
            premises.push(self.derivation()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(Derivation::new(rule, conclusion, premises))
    }
}

/// Parses a sequence of derivations in the text form of
/// [`crate::declarative::print_derivation`].
pub fn parse_derivations(src: &str) -> PResult<Vec<Derivation>> {
    let mut p = Parser::new(src, 1, Vec::new())?;
    let mut out = Vec::new();
    while !matches!(p.peek(), Tok::Eof) {
        out.push(p.derivation()?);
    }
    Ok(out)
}

fn directive_of(word: &str) -> Option<Directive> {
    Some(match word {
        "check" => Directive::Check,
        "infer" => Directive::Infer,
        "conv" => Directive::Conv,
        "whnf" => Directive::Whnf,
        "nf" => Directive::Nf,
        "validate" => Directive::Validate,
        _ => return None,
    })
}

fn first_word(line: &str) -> &str {
    let t = line.trim_start();
    let end = t
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(t.len());
    &t[..end]
}

fn is_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with("--")
}

/// Parses a source holding any number of queries. Each query starts on a
/// line whose first word is a directive and runs until the next such line.
pub fn parse_queries(src: &str) -> PResult<Vec<Query>> {
    let lines: Vec<&str> = src.lines().collect();
    let mut starts = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if directive_of(first_word(line)).is_some() {
            starts.push(i);
        } else if starts.is_empty() && !is_blank(line) {
            return Err(SurfaceError::Syntax {
                line: i + 1,
                column: line.len() - line.trim_start().len() + 1,
                expected: vec!["directive".into()],
                found: format!("`{}`", line.trim()),
            });
        }
    }
    let mut out = Vec::new();
    for (k, &start) in starts.iter().enumerate() {
        let end = starts.get(k + 1).copied().unwrap_or(lines.len());
        let chunk = lines[start..end].join("\n");
        out.push(parse_chunk(&chunk, start + 1)?);
    }
    Ok(out)
}

/// Parses a source holding exactly one query.
pub fn parse_query(src: &str) -> PResult<Query> {
    let mut qs = parse_queries(src)?;
    match qs.len() {
        1 => Ok(qs.remove(0)),
        0 => Err(SurfaceError::Syntax {
            line: src.lines().count().max(1),
            column: 1,
            expected: vec!["directive".into()],
            found: Tok::Eof.to_string(),
        }),
        _ => Err(SurfaceError::Syntax {
            line: qs[1].line,
            column: 1,
            expected: vec![Tok::Eof.to_string()],
            found: "a second directive".into(),
        }),
    }
}

fn parse_validate(chunk: &str, line: usize) -> PResult<Query> {
    let first = chunk.lines().next().unwrap_or("");
    let indent = first.len() - first.trim_start().len();
    let after = &first[indent + "validate".len()..];
    let Some(rest) = after.trim_start().strip_prefix("|-") else {
        let col = first.len() - after.trim_start().len() + 1;
        return Err(SurfaceError::Syntax {
            line,
            column: col,
            expected: vec![Tok::Turnstile.to_string()],
            found: format!("`{}`", after.trim()),
        });
    };
    let path = rest.trim();
    if path.is_empty() {
        return Err(SurfaceError::Syntax {
            line,
            column: first.len() + 1,
            expected: vec!["fixture path".into()],
            found: Tok::Eof.to_string(),
        });
    }
    for (k, l) in chunk.lines().enumerate().skip(1) {
        if !is_blank(l) {
            return Err(SurfaceError::Syntax {
                line: line + k,
                column: l.len() - l.trim_start().len() + 1,
                expected: vec!["directive".into()],
                found: format!("`{}`", l.trim()),
            });
        }
    }
    Ok(Query {
        directive: Directive::Validate,
        ctx: Vec::new(),
        payload: Payload::Validate(path.to_string()),
        line,
    })
}

fn parse_chunk(chunk: &str, line: usize) -> PResult<Query> {
    let directive = directive_of(first_word(chunk)).expect("chunk starts with a directive");
    if directive == Directive::Validate {
        return parse_validate(chunk, line);
    }
    let mut p = Parser::new(chunk, line, Vec::new())?;
    p.bump();
    let mut ctx = Vec::new();
    while p.eat(&Tok::LParen) {
        let x = p.binder()?;
        p.expect(&Tok::Colon)?;
        let ty = p.expr()?;
        p.expect(&Tok::RParen)?;
        p.scope.push(x.clone());
        ctx.push((x, ty));
    }
    p.expect(&Tok::Turnstile)?;
    let payload = match directive {
        Directive::Check => {
            let t = p.expr()?;
            p.expect(&Tok::Colon)?;
            let ty = p.expr()?;
            Payload::Check { term: t, ty }
        }
        Directive::Conv => {
            let lhs = p.expr()?;
            p.expect(&Tok::EqEq)?;
            let rhs = p.expr()?;
            p.expect(&Tok::Colon)?;
            let ty = p.expr()?;
            Payload::Conv { lhs, rhs, ty }
        }
        Directive::Infer => Payload::Infer(p.expr()?),
        Directive::Whnf => Payload::Whnf(p.expr()?),
        Directive::Nf => Payload::Nf(p.expr()?),
        Directive::Validate => unreachable!(),
    };
    p.end()?;
    Ok(Query {
        directive,
        ctx,
        payload,
        line,
    })
}
