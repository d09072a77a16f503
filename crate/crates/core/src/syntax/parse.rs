//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! phi  := ident | term "=" term | "~" phi
//!       | "(" phi "->" phi ")" | "(" phi "&" phi ")"
//!       | "(" phi "|" phi ")" | "(" phi "<->" phi ")"
//!       | "K_" nat "^{" rat "}" phi | "Kv_" nat "^{" rat "}(" term ")"
//!       | "T" | "F"
//! rat  := nat "/" nat | decimal | nat
//! ```
//!
//! Whitespace insensitive. `~` binds tightest, then modalities; binary
//! connectives are always fully parenthesized. Identifiers are alphabetic
//! followed by alphanumerics or underscores, except that `T` and `F` are the
//! constants and the prefixes `K_<digit>` and `Kv_<digit>` start modalities.

use super::{Agent, Formula, Term};
use crate::rat::{in_high_interval, in_unit_interval, parse_rat, rat_to_formula_string, Rat, RatParseError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("threshold out of range at byte {pos}: {operator} threshold {threshold} not in {range}")]
    ThresholdOutOfRange {
        pos: usize,
        operator: &'static str,
        threshold: String,
        range: &'static str,
    },
    #[error("bad rational at byte {pos}: {source}")]
    BadRational {
        pos: usize,
        #[source]
        source: RatParseError,
    },
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let formula = p.formula()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.syntax_error("unexpected trailing input"));
    }
    Ok(formula)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax_error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }


    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.input[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.syntax_error(format!("expected `{token}`")))
        }
    }

    fn starts_with(&self, token: &str) -> bool {
        self.input[self.pos..].starts_with(token.as_bytes())
    }

    /// True when the input at the cursor starts a modal operator: the given
    /// prefix followed by a digit.
    fn at_modality(&self, prefix: &str) -> bool {
        self.starts_with(prefix)
            && matches!(
                self.input.get(self.pos + prefix.len()),
                Some(b) if b.is_ascii_digit()
            )
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax_error("expected a formula, found end of input")),
            Some(b'~') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => self.binary(),
            Some(_) if self.at_modality("Kv_") => self.kv(),
            Some(_) if self.at_modality("K_") => self.k(),
            Some(b) if b.is_ascii_alphabetic() => self.ident_formula(),
            Some(b) => Err(self.syntax_error(format!(
                "expected a formula, found `{}`",
                b as char
            ))),
        }
    }

    fn binary(&mut self) -> Result<Formula, ParseError> {
        self.expect("(")?;
        let lhs = self.formula()?;
        self.skip_ws();
        let rhs;
        let combined = if self.starts_with("->") {
            self.pos += 2;
            rhs = self.formula()?;
            Formula::imp(lhs, rhs)
        } else if self.starts_with("<->") {
            self.pos += 3;
            rhs = self.formula()?;
            Formula::iff(lhs, rhs)
        } else if self.starts_with("&") {
            self.pos += 1;
            rhs = self.formula()?;
            Formula::and(lhs, rhs)
        } else if self.starts_with("|") {
            self.pos += 1;
            rhs = self.formula()?;
            Formula::or(lhs, rhs)
        } else if self.starts_with(")") {
            // Redundant parentheses around a single formula; the printer
            // never emits them.
            lhs
        } else {
            return Err(self.syntax_error("expected a binary connective (`->`, `&`, `|`, `<->`)"));
        };
        self.expect(")")?;
        Ok(combined)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() => {
                self.pos += 1;
            }
            _ => return Err(self.syntax_error("expected an identifier")),
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.input[start..self.pos]).into_owned())
    }

    fn ident_formula(&mut self) -> Result<Formula, ParseError> {
        let name = self.ident()?;
        if name == "T" {
            return Ok(Formula::top());
        }
        if name == "F" {
            return Ok(Formula::bottom());
        }
        self.skip_ws();
        if self.peek() == Some(b'=') {
            self.pos += 1;
            let rhs = self.ident()?;
            if rhs == "T" || rhs == "F" {
                return Err(self.syntax_error("`T`/`F` cannot be used as terms"));
            }
            return Ok(Formula::eq(Term::new(name), Term::new(rhs)));
        }
        Ok(Formula::atom(name))
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax_error("expected a number"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError::Syntax {
                pos: start,
                message: "number too large".to_string(),
            })
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        let pos = self.pos;
        let index = self.nat()?;
        if index == 0 {
            return Err(ParseError::Syntax {
                pos,
                message: "agent index must be at least 1".to_string(),
            });
        }
        Ok(Agent::new(index))
    }

    /// Parses the `^{ rat }` threshold annotation.
    fn threshold(&mut self) -> Result<(Rat, usize), ParseError> {
        self.expect("^")?;
        self.expect("{")?;
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'/' || b == b'.' || b == b'-') {
            self.pos += 1;
        }
        let literal = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let value = parse_rat(literal).map_err(|source| ParseError::BadRational {
            pos: start,
            source,
        })?;
        self.expect("}")?;
        Ok((value, start))
    }

    fn k(&mut self) -> Result<Formula, ParseError> {
        self.expect("K_")?;
        let agent = self.agent()?;
        let (theta, pos) = self.threshold()?;
        if !in_unit_interval(&theta) {
            return Err(ParseError::ThresholdOutOfRange {
                pos,
                operator: "K",
                threshold: rat_to_formula_string(&theta),
                range: "[0,1]",
            });
        }
        let body = self.formula()?;
        Ok(Formula::k(agent, theta, body))
    }

    fn kv(&mut self) -> Result<Formula, ParseError> {
        self.expect("Kv_")?;
        let agent = self.agent()?;
        let (eta, pos) = self.threshold()?;
        if !in_high_interval(&eta) {
            return Err(ParseError::ThresholdOutOfRange {
                pos,
                operator: "Kv",
                threshold: rat_to_formula_string(&eta),
                range: "(1/2,1]",
            });
        }
        self.expect("(")?;
        let term = self.ident()?;
        if term == "T" || term == "F" {
            return Err(self.syntax_error("`T`/`F` cannot be used as terms"));
        }
        self.expect(")")?;
        Ok(Formula::kv(agent, eta, Term::new(term)))
    }
}
