//! Tokenizer for the textual format. Never panics; malformed input is
//! reported as diagnostics with line and column.

use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Nat(usize),
    Slash,
    Semi,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Eq,
    Neq,
    Amp,
    Pipe,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Nat(n) => format!("`{n}`"),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Neq => "`!=`".into(),
            TokenKind::Amp => "`&`".into(),
            TokenKind::Pipe => "`|`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();

    macro_rules! push {
        ($kind:expr, $at:expr) => {
            tokens.push(Token { kind: $kind, line: $at.0, col: $at.1 })
        };
    }

    while let Some(&c) = chars.peek() {
        let at = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
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
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(TokenKind::Ident(s), at);
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                match s.parse() {
                    Ok(n) => push!(TokenKind::Nat(n), at),
                    Err(_) => diags.push(Diagnostic {
                        line: at.0,
                        col: at.1,
                        message: format!("number `{s}` is out of range"),
                    }),
                }
            }
            '!' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(TokenKind::Neq, at);
                } else {
                    diags.push(Diagnostic {
                        line: at.0,
                        col: at.1,
                        message: "expected `!=`".into(),
                    });
                }
            }
            _ => {
                let kind = match c {
                    '/' => Some(TokenKind::Slash),
                    ';' => Some(TokenKind::Semi),
                    ':' => Some(TokenKind::Colon),
                    '(' => Some(TokenKind::LParen),
                    ')' => Some(TokenKind::RParen),
                    '{' => Some(TokenKind::LBrace),
                    '}' => Some(TokenKind::RBrace),
                    ',' => Some(TokenKind::Comma),
                    '.' => Some(TokenKind::Dot),
                    '=' => Some(TokenKind::Eq),
                    '&' => Some(TokenKind::Amp),
                    '|' => Some(TokenKind::Pipe),
                    _ => None,
                };
                chars.next();
                col += 1;
                match kind {
                    Some(k) => push!(k, at),
                    None => diags.push(Diagnostic {
                        line: at.0,
                        col: at.1,
                        message: format!("unexpected character `{c}`"),
                    }),
                }
            }
        }
    }
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_tracked() {
        let (tokens, diags) = lex("type B/2;\nedge e1: B(n1, n2);");
        assert!(diags.is_empty());
        assert_eq!(tokens[0], Token { kind: TokenKind::Ident("type".into()), line: 1, col: 1 });
        let edge = tokens.iter().find(|t| t.kind == TokenKind::Ident("edge".into())).unwrap();
        assert_eq!((edge.line, edge.col), (2, 1));
    }

    #[test]
    fn comments_are_skipped() {
        let (tokens, diags) = lex("# a comment\ntype A/1;");
        assert!(diags.is_empty());
        assert_eq!(tokens.len(), 5);
    }

    #[test]
    fn stray_bytes_become_diagnostics() {
        let (_, diags) = lex("type @ B/2;");
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("unexpected character"));
    }
}
