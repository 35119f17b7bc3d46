//! Tokeniser for proof scripts. Tracks line and column for diagnostics.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Nat(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Define,    // :=
    Turnstile, // |-
    Reduces,   // |>
    Arrow,     // =>
    Or,        // |
    And,       // &
    Tilde,     // ~
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Define => write!(f, "`:=`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Reduces => write!(f, "`|>`"),
            Tok::Arrow => write!(f, "`=>`"),
            Tok::Or => write!(f, "`|`"),
            Tok::And => write!(f, "`&`"),
            Tok::Tilde => write!(f, "`~`"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

/// Tokenises a script. `--` starts a comment running to end of line; LF
/// and CRLF are both accepted.
pub fn lex(input: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            out.push(Token {
                tok: $tok,
                pos: Pos { line, col },
            });
            col += $len;
        }};
    }

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            '\r' => {
                chars.next();
            }
            ' ' | '\t' => {
                chars.next();
                col += 1;
            }
            '(' => {
                chars.next();
                push!(Tok::LParen, 1);
            }
            ')' => {
                chars.next();
                push!(Tok::RParen, 1);
            }
            '{' => {
                chars.next();
                push!(Tok::LBrace, 1);
            }
            '}' => {
                chars.next();
                push!(Tok::RBrace, 1);
            }
            '[' => {
                chars.next();
                push!(Tok::LBracket, 1);
            }
            ']' => {
                chars.next();
                push!(Tok::RBracket, 1);
            }
            ',' => {
                chars.next();
                push!(Tok::Comma, 1);
            }
            '&' => {
                chars.next();
                push!(Tok::And, 1);
            }
            '~' => {
                chars.next();
                push!(Tok::Tilde, 1);
            }
            ':' => {
                chars.next();
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Define, 2);
                } else {
                    push!(Tok::Colon, 1);
                }
            }
            '|' => {
                chars.next();
                match chars.peek() {
                    Some('-') => {
                        chars.next();
                        push!(Tok::Turnstile, 2);
                    }
                    Some('>') => {
                        chars.next();
                        push!(Tok::Reduces, 2);
                    }
                    _ => push!(Tok::Or, 1),
                }
            }
            '=' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::Arrow, 2);
                } else {
                    return Err(LexError {
                        pos: Pos { line, col },
                        message: "expected `=>`".to_string(),
                    });
                }
            }
            '-' => {
                chars.next();
                if chars.peek() == Some(&'-') {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        chars.next();
                    }
                    col += 2;
                } else {
                    return Err(LexError {
                        pos: Pos { line, col },
                        message: "expected `--` comment".to_string(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = n.len();
                let value = n.parse().map_err(|_| LexError {
                    pos: Pos { line, col },
                    message: format!("number out of range: {n}"),
                })?;
                push!(Tok::Nat(value), len);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = s.len();
                push!(Tok::Ident(s), len);
            }
            other => {
                return Err(LexError {
                    pos: Pos { line, col },
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}
