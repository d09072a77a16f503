//! Exact rational numbers: construction helpers, text parsing, and the
//! canonical `a/b` string form used by every JSON surface.
//!
//! `Rat` is always stored in lowest terms with a positive denominator
//! (guaranteed by `num_rational`), so equality and ordering are exact and
//! strict-inequality semantics are safe.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_half() -> Rat {
    rat(1, 2)
}

/// Canonical text form: always `numer/denom`, reduced, denominator positive.
pub fn rat_to_frac_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Text form used inside formulas: `numer/denom`, or just `numer` when the
/// denominator is one.
pub fn rat_to_formula_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b`, integer, or decimal literals. Decimals convert exactly
/// (`0.62` becomes `31/50`).
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n
            .trim()
            .parse()
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        let denom: BigInt = d
            .trim()
            .parse()
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        if denom.is_zero() {
            return Err(RatParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rat::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let int_part = if int_part.is_empty() || int_part == "-" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatParseError::Malformed(text.to_string()));
        }
        let negative = int_part.starts_with('-');
        let int: BigInt = int_part
            .parse()
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac_signed = if negative { -frac } else { frac };
        return Ok(Rat::new(int * &scale + frac_signed, scale));
    }
    let numer: BigInt = s
        .parse()
        .map_err(|_| RatParseError::Malformed(text.to_string()))?;
    Ok(Rat::from_integer(numer))
}

/// True when `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= rat_one()
}

/// True when `r` lies in the high-threshold interval (1/2, 1].
pub fn in_high_interval(r: &Rat) -> bool {
    *r > rat_half() && *r <= rat_one()
}
