//! Text syntax for terms and formulas.
//!
//! An identifier is a variable iff it is bound by an enclosing quantifier or
//! listed in the caller's variable set; everything else is a function or
//! predicate symbol. Both ASCII (`~ & | -> forall exists true false`) and
//! Unicode (`¬ ∧ ∨ ⊃ ∀ ∃ ⊤ ⊥`) connectives are accepted.

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::term::Term;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Top,
    Bot,
    Forall,
    Exists,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>> {
    let err = |pos: usize, msg: &str| Error::Parse { input: input.to_string(), pos, msg: msg.to_string() };
    let mut out = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if is_ident_char(c) {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if !is_ident_char(c) {
                    break;
                }
                s.push(c);
                it.next();
            }
            let tok = match s.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "true" => Tok::Top,
                "false" => Tok::Bot,
                _ => Tok::Ident(s),
            };
            out.push((i, tok));
            continue;
        }
        it.next();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '¬' | '~' | '!' => Tok::Not,
            '∧' | '&' => Tok::And,
            '∨' | '|' => Tok::Or,
            '⊃' | '→' => Tok::Imp,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '-' | '=' if it.peek().map(|p| p.1) == Some('>') => {
                it.next();
                Tok::Imp
            }
            '/' if it.peek().map(|p| p.1) == Some('\\') => {
                it.next();
                Tok::And
            }
            '\\' if it.peek().map(|p| p.1) == Some('/') => {
                it.next();
                Tok::Or
            }
            _ => return Err(err(i, &format!("unexpected character {c:?}"))),
        };
        out.push((i, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, vars: &BTreeSet<String>) -> Result<Self> {
        Ok(Parser { input, toks: lex(input)?, pos: 0, vars: vars.iter().cloned().collect() })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let pos = self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.input.len());
        Err(Error::Parse { input: self.input.to_string(), pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if self.eat(&Tok::LParen) {
            if self.vars.contains(&name) {
                return self.err(format!("variable {name} applied to arguments"));
            }
            let args = self.term_list()?;
            return Ok(Term::App(name, args));
        }
        if self.vars.contains(&name) {
            Ok(Term::Var(name))
        } else {
            Ok(Term::App(name, Vec::new()))
        }
    }

    /// Arguments after an opening parenthesis, through the closing one.
    fn term_list(&mut self) -> Result<Vec<Term>> {
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Or) {
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.eat(&Tok::And) {
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let forall = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let mut bound = vec![self.ident()?];
                while let Some(Tok::Ident(_)) = self.peek() {
                    bound.push(self.ident()?);
                }
                self.eat(&Tok::Dot);
                let depth = self.vars.len();
                self.vars.extend(bound.iter().cloned());
                let body = self.formula();
                self.vars.truncate(depth);
                let mut body = body?;
                for v in bound.into_iter().rev() {
                    body = if forall { Formula::forall(v, body) } else { Formula::exists(v, body) };
                }
                Ok(body)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Tok::Ident(_)) => {
                let pred = self.ident()?;
                let args = if self.eat(&Tok::LParen) { self.term_list()? } else { Vec::new() };
                Ok(Formula::atom(pred, args))
            }
            _ => self.err("expected formula"),
        }
    }
}

pub fn parse_term(input: &str, vars: &BTreeSet<String>) -> Result<Term> {
    let mut p = Parser::new(input, vars)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(input: &str, vars: &BTreeSet<String>) -> Result<Formula> {
    let mut p = Parser::new(input, vars)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Convenience for call sites with a short fixed variable list.
pub fn var_set<I: IntoIterator<Item = S>, S: Into<String>>(vs: I) -> BTreeSet<String> {
    vs.into_iter().map(Into::into).collect()
}
