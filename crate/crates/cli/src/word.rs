//! Parser for element words: identifiers P, Q, I, complex scalar
//! literals (`2`, `0.5i`, `1+2i` via addition), operators + − *, and
//! parentheses. Standard precedence, whitespace insignificant.

use std::sync::Arc;

use halmos_kit::algebra::{AlgebraElement, Letter};
use halmos_kit::canonical::HalmosDecomposition;
use num_complex::Complex64 as C64;

/// Syntax error with a 1-based column position.
#[derive(Debug)]
pub struct WordError {
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for WordError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Letter(Letter),
    Scalar(C64),
    Plus,
    Minus,
    Star,
    Open,
    Close,
}

struct Lexer<'a> {
    src: &'a [u8],
    at: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Token)>, WordError> {
        let mut lex = Lexer {
            src: src.as_bytes(),
            at: 0,
        };
        let mut out = Vec::new();
        loop {
            lex.skip_ws();
            if lex.at >= lex.src.len() {
                return Ok(out);
            }
            let col = lex.at + 1;
            let tok = lex.next_token()?;
            out.push((col, tok));
        }
    }

    fn skip_ws(&mut self) {
        while self.at < self.src.len() && self.src[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn next_token(&mut self) -> Result<Token, WordError> {
        let c = self.src[self.at];
        let col = self.at + 1;
        self.at += 1;
        match c {
            b'P' => Ok(Token::Letter(Letter::P)),
            b'Q' => Ok(Token::Letter(Letter::Q)),
            b'I' => Ok(Token::Letter(Letter::I)),
            b'+' => Ok(Token::Plus),
            b'-' => Ok(Token::Minus),
            b'*' => Ok(Token::Star),
            b'(' => Ok(Token::Open),
            b')' => Ok(Token::Close),
            b'i' => Ok(Token::Scalar(C64::new(0.0, 1.0))),
            b'0'..=b'9' | b'.' => {
                self.at -= 1;
                self.number(col)
            }
            other => Err(WordError {
                column: col,
                message: format!("unexpected character '{}'", other as char),
            }),
        }
    }

    fn number(&mut self, col: usize) -> Result<Token, WordError> {
        let start = self.at;
        while self.at < self.src.len()
            && (self.src[self.at].is_ascii_digit() || self.src[self.at] == b'.')
        {
            self.at += 1;
        }
        // Exponent part.
        if self.at < self.src.len() && (self.src[self.at] | 0x20) == b'e' {
            let mark = self.at;
            self.at += 1;
            if self.at < self.src.len() && (self.src[self.at] == b'+' || self.src[self.at] == b'-')
            {
                self.at += 1;
            }
            if self.at < self.src.len() && self.src[self.at].is_ascii_digit() {
                while self.at < self.src.len() && self.src[self.at].is_ascii_digit() {
                    self.at += 1;
                }
            } else {
                self.at = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.at]).unwrap();
        let value: f64 = text.parse().map_err(|_| WordError {
            column: col,
            message: format!("malformed number '{text}'"),
        })?;
        // An immediately following 'i' makes the literal imaginary.
        if self.at < self.src.len() && self.src[self.at] == b'i' {
            self.at += 1;
            Ok(Token::Scalar(C64::new(0.0, value)))
        } else {
            Ok(Token::Scalar(C64::new(value, 0.0)))
        }
    }
}

struct Parser<'d> {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end_column: usize,
    dec: &'d Arc<HalmosDecomposition>,
}

/// Parses and evaluates a word over the algebra of the decomposition.
pub fn evaluate_word(
    src: &str,
    dec: &Arc<HalmosDecomposition>,
) -> Result<AlgebraElement, WordError> {
    let tokens = Lexer::tokens(src)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        end_column: src.len() + 1,
        dec,
    };
    let value = parser.expr()?;
    if parser.at < parser.tokens.len() {
        let (col, _) = parser.tokens[parser.at];
        return Err(WordError {
            column: col,
            message: "unexpected trailing input".into(),
        });
    }
    Ok(value)
}

impl<'d> Parser<'d> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.at)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_column)
    }

    fn expr(&mut self) -> Result<AlgebraElement, WordError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.at += 1;
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).expect("same decomposition");
                }
                Some(Token::Minus) => {
                    self.at += 1;
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).expect("same decomposition");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement, WordError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.at += 1;
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).expect("same decomposition");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgebraElement, WordError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.at += 1;
                let inner = self.factor()?;
                Ok(inner.scale(C64::new(-1.0, 0.0)))
            }
            Some(Token::Plus) => {
                self.at += 1;
                self.factor()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<AlgebraElement, WordError> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Token::Letter(letter)) => {
                self.at += 1;
                Ok(AlgebraElement::generator(self.dec.clone(), letter))
            }
            Some(Token::Scalar(z)) => {
                self.at += 1;
                Ok(AlgebraElement::scalar(self.dec.clone(), z))
            }
            Some(Token::Open) => {
                self.at += 1;
                let inner = self.expr()?;
                if matches!(self.peek(), Some(Token::Close)) {
                    self.at += 1;
                    Ok(inner)
                } else {
                    Err(WordError {
                        column: self.column(),
                        message: "expected ')'".into(),
                    })
                }
            }
            Some(other) => Err(WordError {
                column: col,
                message: format!("unexpected token {other:?}"),
            }),
            None => Err(WordError {
                column: col,
                message: "unexpected end of word".into(),
            }),
        }
    }
}
