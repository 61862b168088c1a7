use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(usize),
    Backslash,
    Colon,
    Dot,
    Comma,
    Arrow,
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    EqEq,
    Squiggle,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::Squiggle => f.write_str("`~>`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// A token with its 1-based position and byte offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

/// A character that starts no token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    pub line: usize,
    pub column: usize,
    pub found: char,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&(offset, c)) = chars.peek() {
        let (l, col) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, c) = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let rest = &src[offset..];
        let two = |s: &str| rest.starts_with(s);
        let tok = if two("--") {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                advance(&mut chars);
            }
            continue;
        } else if two("->") || two("==") || two("|-") || two("~>") {
            advance(&mut chars);
            advance(&mut chars);
            match &rest[..2] {
                "->" => Tok::Arrow,
                "==" => Tok::EqEq,
                "~>" => Tok::Squiggle,
                _ => Tok::Turnstile,
            }
        } else if ident_start(c) {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !ident_continue(c) {
                    break;
                }
                s.push(c);
                advance(&mut chars);
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                s.push(c);
                advance(&mut chars);
            }
            match s.parse() {
                Ok(n) => Tok::Num(n),
                Err(_) => {
                    return Err(LexError {
                        line: l,
                        column: col,
                        found: c,
                    })
                }
            }
        } else {
            let tok = match c {
                '\\' | 'λ' => Tok::Backslash,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '*' => Tok::Star,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                _ => {
                    return Err(LexError {
                        line: l,
                        column: col,
                        found: c,
                    })
                }
            };
            advance(&mut chars);
            tok
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
            offset,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
        offset: src.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_comments() {
        assert_eq!(
            toks("A -> B -- trailing\n|- x == y"),
            vec![
                Tok::Ident("A".into()),
                Tok::Arrow,
                Tok::Ident("B".into()),
                Tok::Turnstile,
                Tok::Ident("x".into()),
                Tok::EqEq,
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = lex("\n  \\x").unwrap();
        assert_eq!((t[0].line, t[0].column), (2, 3));
        assert_eq!((t[1].line, t[1].column), (2, 4));
    }

    #[test]
    fn bad_character() {
        assert_eq!(
            lex("x @"),
            Err(LexError {
                line: 1,
                column: 3,
                found: '@'
            })
        );
    }
}
