//! Surface syntax:
//!
//! ```text
//! formula := unary ( '&' unary )* ...   with  ->  <  |  <  &  <  !
//! unary   := '!' unary | ('exists' | 'forall') var '.' formula | atom | '(' formula ')'
//! atom    := D(x,y) | S(x,y) | E(x,y) | x=y | true | false
//! ```
//!
//! `->` associates to the right, `&` and `|` to the left. A quantifier body
//! extends as far right as possible.

use std::str::FromStr;

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Not,
    And,
    Or,
    Arrow,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b',' => Token::Comma,
            b'.' => Token::Dot,
            b'=' => Token::Eq,
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'-' if b.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_' || b[i + 1] == b'\'') {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(Error::Parse { line: 1, msg: format!("unexpected character {:?} at column {}", c as char, i + 1) })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];

struct Parser {
    toks: Vec<(Token, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        let col = self.toks.get(self.pos).map_or(self.len, |t| t.1) + 1;
        Error::Parse { line: 1, msg: format!("{msg} at column {col}") }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Token, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token::Ident(s)) if !KEYWORDS.contains(&s.as_str()) && !is_symbol(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Arrow) {
            Ok(Formula::implies(lhs, self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Token::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Token::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Token::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Token::LParen) {
            let f = self.implication()?;
            self.expect(&Token::RParen, "`)`")?;
            return Ok(f);
        }
        let Some(Token::Ident(word)) = self.peek().cloned() else {
            return Err(self.error("expected a formula"));
        };
        match word.as_str() {
            "exists" | "forall" => {
                self.pos += 1;
                let v = self.var()?;
                self.expect(&Token::Dot, "`.` after the bound variable")?;
                let body = self.implication()?;
                Ok(if word == "exists" { Formula::exists(v, body) } else { Formula::forall(v, body) })
            }
            "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            w if is_symbol(w) && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Token::LParen) => {
                let sym = Symbol::from_str(w)?;
                self.pos += 2;
                let x = self.var()?;
                self.expect(&Token::Comma, "`,`")?;
                let y = self.var()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(Formula::Rel(sym, x, y))
            }
            _ => {
                let x = self.var()?;
                self.expect(&Token::Eq, "`=`")?;
                let y = self.var()?;
                Ok(Formula::Eq(x, y))
            }
        }
    }
}

fn is_symbol(s: &str) -> bool {
    matches!(s, "D" | "S" | "E")
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Formula> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks, pos: 0, len: text.len() };
        let f = p.implication()?;
        if p.pos != p.toks.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }
}
