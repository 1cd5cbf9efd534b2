use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::Span;
use super::{Diagnostic, DiagnosticKind};
use crate::number::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Digits with an optional fraction `.ddd` or glued denominator `/ddd`.
    Number(Rational),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(r) => format!("number `{r}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Assign => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let digits = |i: &mut usize| {
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
            };
            digits(&mut i);
            let next_is_digit = |j: usize| j < chars.len() && chars[j].is_ascii_digit();
            if i < chars.len() && chars[i] == '.' {
                if !next_is_digit(i + 1) {
                    return Err(Diagnostic::new(
                        DiagnosticKind::Lexical,
                        span,
                        "a decimal point must be followed by digits",
                    ));
                }
                i += 1;
                digits(&mut i);
            } else if i < chars.len() && chars[i] == '/' && next_is_digit(i + 1) {
                i += 1;
                digits(&mut i);
            }
            let literal: String = chars[start..i].iter().collect();
            if let Some((_, den)) = literal.split_once('/') {
                if den.parse::<BigInt>().map(|d| d.is_zero()).unwrap_or(true) {
                    return Err(Diagnostic::new(
                        DiagnosticKind::Lexical,
                        span,
                        format!("literal `{literal}` has a zero denominator"),
                    ));
                }
            }
            Tok::Number(parse_rational(&literal).expect("digits form a rational"))
        } else {
            let two = |a: char, b: char| c == a && chars.get(i + 1) == Some(&b);
            let (tok, width) = if two('<', '=') {
                (Tok::Le, 2)
            } else if two('>', '=') {
                (Tok::Ge, 2)
            } else if two('=', '=') {
                (Tok::EqEq, 2)
            } else {
                let t = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '=' => Tok::Assign,
                    '+' => Tok::Plus,
                    '-' | '\u{2212}' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    other => {
                        return Err(Diagnostic::new(
                            DiagnosticKind::Lexical,
                            span,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                };
                (t, 1)
            };
            i += width;
            tok
        };
        col += (i - start) as u32;
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    Ok(out)
}
