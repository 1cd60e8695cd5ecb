//! Tokenizer for the expression / system / generator DSL.

use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Identifier, possibly with a `_suffix` derivative part still attached
    /// (split later, at parse time) and trailing primes counted.
    Ident { name: String, primes: u32 },
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident { name, primes } => {
                write!(f, "{name}{}", "'".repeat(*primes as usize))
            }
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::Eq => write!(f, "="),
            Tok::Eof => write!(f, "<end of input>"),
        }
    }
}

/// Token with its source position (1-based line and column).
#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

/// Tokenize the whole input. `#` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();

    macro_rules! push {
        ($tok:expr, $l:expr, $c:expr) => {
            out.push(Spanned {
                tok: $tok,
                line: $l,
                col: $c,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as u64))
                            .ok_or_else(|| ParseError::new(l0, c0, "integer literal overflow"))?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Int(n), l0, c0);
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let mut primes = 0u32;
                while let Some(&'\'') = chars.peek() {
                    primes += 1;
                    chars.next();
                    col += 1;
                }
                push!(Tok::Ident { name, primes }, l0, c0);
            }
            '+' => {
                chars.next();
                col += 1;
                push!(Tok::Plus, l0, c0);
            }
            '-' => {
                chars.next();
                col += 1;
                push!(Tok::Minus, l0, c0);
            }
            '*' => {
                chars.next();
                col += 1;
                push!(Tok::Star, l0, c0);
            }
            '/' => {
                chars.next();
                col += 1;
                push!(Tok::Slash, l0, c0);
            }
            '^' => {
                chars.next();
                col += 1;
                push!(Tok::Caret, l0, c0);
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, l0, c0);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, l0, c0);
            }
            ',' => {
                chars.next();
                col += 1;
                push!(Tok::Comma, l0, c0);
            }
            ';' => {
                chars.next();
                col += 1;
                push!(Tok::Semi, l0, c0);
            }
            '=' => {
                chars.next();
                col += 1;
                push!(Tok::Eq, l0, c0);
            }
            other => {
                return Err(ParseError::new(
                    l0,
                    c0,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_primes_and_tracks_positions() {
        let toks = tokenize("u_t - f''*x\n+ 2").unwrap();
        assert_eq!(
            toks[0].tok,
            Tok::Ident {
                name: "u_t".into(),
                primes: 0
            }
        );
        assert_eq!(
            toks[2].tok,
            Tok::Ident {
                name: "f".into(),
                primes: 2
            }
        );
        let plus = &toks[5];
        assert_eq!(plus.tok, Tok::Plus);
        assert_eq!((plus.line, plus.col), (2, 1));
    }

    #[test]
    fn comments_are_skipped() {
        let toks = tokenize("u # trailing words ^^^\n+ w").unwrap();
        let kinds: Vec<_> = toks.iter().map(|s| s.tok.clone()).collect();
        assert_eq!(kinds.len(), 4); // u, +, w, eof
    }

    #[test]
    fn bad_character_is_an_error_with_position() {
        let err = tokenize("u ? w").unwrap_err();
        assert_eq!((err.line, err.col), (1, 3));
    }
}
