use std::sync::Arc;

use num::{BigInt, BigRational};

use super::poly::Polynomial;
use super::table::VariableTable;
use crate::error::{Error, Result};

/// Parses a polynomial expression over the named variables of `table`.
///
/// Grammar: sums and differences of products of powers, with parentheses,
/// integer and rational literals (`3`, `3/4`), and `^` for exponents.
/// Variable tokens are table names verbatim, e.g. `h1`, `x{1,2}`, `y{1,3}`.
pub fn parse_expression(table: &Arc<VariableTable>, input: &str) -> Result<Polynomial> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        table,
        tokens,
        pos: 0,
    };
    let poly = parser.expression()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::argument(format!(
            "unexpected trailing input near token {}",
            parser.describe_current()
        )));
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<BigInt>()
                    .map_err(|_| Error::argument(format!("bad integer literal {text}")))?;
                tokens.push(Token::Number(value));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                // A brace block (set label) belongs to the identifier.
                if i < chars.len() && chars[i] == '{' {
                    while i < chars.len() && chars[i] != '}' {
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(Error::argument("unterminated { in variable name"));
                    }
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::argument(format!(
                    "unexpected character {other:?} in expression"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    table: &'a Arc<VariableTable>,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn describe_current(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(t) => format!("{t:?}"),
        }
    }

    fn expression(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            negate = true;
        } else if let Some(Token::Plus) = self.peek() {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(Token::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Token::Number(n)) => {
                    let e = u32::try_from(&n)
                        .map_err(|_| Error::argument("exponent out of range"))?;
                    base.pow(e)
                }
                _ => Err(Error::argument("expected integer exponent after ^")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.bump() {
            Some(Token::Number(n)) => {
                // A rational literal p/q, if a slash follows immediately.
                if let Some(Token::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Token::Number(d)) => {
                            if d == BigInt::from(0) {
                                return Err(Error::argument("zero denominator"));
                            }
                            Ok(Polynomial::constant(
                                self.table,
                                BigRational::new(n, d),
                            ))
                        }
                        _ => Err(Error::argument("expected denominator after /")),
                    }
                } else {
                    Ok(Polynomial::constant(
                        self.table,
                        BigRational::from_integer(n),
                    ))
                }
            }
            Some(Token::Ident(name)) => match self.table.index_of(&name) {
                Some(i) => Polynomial::variable(self.table, i),
                None => Err(Error::argument(format!(
                    "unknown variable {name}; table has {}",
                    self.table
                        .iter()
                        .map(|(n, _)| n.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))),
            },
            Some(Token::LParen) => {
                let inner = self.expression()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::argument("expected closing parenthesis")),
                }
            }
            Some(Token::Minus) => {
                let inner = self.atom()?;
                Ok(inner.neg())
            }
            other => Err(Error::argument(format!(
                "expected a value, found {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VariableTable> {
        VariableTable::try_new(vec![
            ("h1".into(), 1),
            ("h2".into(), 1),
            ("x{1,2}".into(), 1),
        ])
        .unwrap()
    }

    #[test]
    fn parses_products_and_powers() {
        let t = table();
        let p = parse_expression(&t, "x{1,2}^2 - (h1 + h2)*x{1,2} + h1*h2").unwrap();
        assert_eq!(p.num_terms(), 4);
        // Canonical rendering is degrevlex-descending.
        assert_eq!(p.to_string(), "h1*h2 - h1*x{1,2} - h2*x{1,2} + x{1,2}^2");
        // Round trip through the renderer parses back to the same polynomial.
        let again = parse_expression(&t, &p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn parses_rationals_and_unary_minus() {
        let t = table();
        let p = parse_expression(&t, "-3/4*h1 + 1/4*h1").unwrap();
        assert_eq!(p.to_string(), "-1/2*h1");
        let q = parse_expression(&t, "2 - 2").unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn rejects_unknowns_and_garbage() {
        let t = table();
        assert!(parse_expression(&t, "z*h1").is_err());
        assert!(parse_expression(&t, "h1 +").is_err());
        assert!(parse_expression(&t, "h1 h2").is_err());
        assert!(parse_expression(&t, "(h1").is_err());
        assert!(parse_expression(&t, "x{1,2").is_err());
        assert!(parse_expression(&t, "1/0").is_err());
    }
}
