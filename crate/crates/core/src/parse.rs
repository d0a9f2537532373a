//! Exact decimal input and enclosure output.

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::ball::RealBall;
use crate::complex::ComplexBall;
use crate::error::{Error, Result};

fn parse_err(input: &str, why: &str) -> Error {
    Error::Parse(format!("cannot parse '{input}': {why}"))
}

/// Parses `[+-]digits[.digits][e[+-]digits]` exactly.
pub fn parse_decimal(input: &str) -> Result<Rational> {
    let s = input.trim();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(parse_err(input, "expected digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return Err(parse_err(input, "invalid digit"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut q = Rational::from(digits.parse::<Integer>().map_err(|_| parse_err(input, "invalid number"))?);
    let mut e10: i64 = -(frac_part.len() as i64);
    if let Some(e) = exp {
        let v: i64 = e.parse().map_err(|_| parse_err(input, "invalid exponent"))?;
        if v.abs() > 100_000 {
            return Err(parse_err(input, "exponent out of range"));
        }
        e10 += v;
    }
    let p = Integer::from(Integer::u_pow_u(10, e10.unsigned_abs() as u32));
    if e10 >= 0 {
        q *= p;
    } else {
        q /= p;
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Exact complex input `<re>[+|-]<im>i`, `<re>` or `<im>i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInput {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexInput {
    pub fn to_ball(&self, prec: u32) -> ComplexBall {
        ComplexBall::new(
            RealBall::from_rational(prec, &self.re),
            RealBall::from_rational(prec, &self.im),
        )
    }
}

pub fn parse_complex(input: &str) -> Result<ComplexInput> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(input, "empty input"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(ComplexInput {
            re: parse_decimal(&s)?,
            im: Rational::new(),
        });
    };
    // split at the last sign that is not the leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_decimal(&body[..i])?, &body[i..]),
        None => (Rational::new(), body),
    };
    let im = match im {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        v => parse_decimal(v)?,
    };
    Ok(ComplexInput { re, im })
}

/// Decimal digits shown for a working precision.
pub fn display_digits(prec_bits: u32) -> usize {
    ((prec_bits as f64) * 0.3).ceil().max(1.0) as usize
}

/// Printed enclosure: midpoints as decimal strings and a radius that also
/// covers the rounding of the printed midpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub mid_re: String,
    pub mid_im: String,
    pub rad: String,
}

fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix(10, Some(digits));
    tidy(&s)
}

/// `1.2300e5` -> `1.23e5`, `2.000` -> `2`.
fn tidy(s: &str) -> String {
    let (m, e) = match s.find('e') {
        Some(i) => (&s[..i], Some(&s[i..])),
        None => (s, None),
    };
    let m = if m.contains('.') {
        m.trim_end_matches('0').trim_end_matches('.')
    } else {
        m
    };
    match e {
        Some(e) => format!("{m}{e}"),
        None => m.to_string(),
    }
}

fn printed_error(x: &Float, printed: &str) -> Float {
    let back = parse_decimal(printed).expect("printed decimals re-parse");
    let exact = x.to_rational().expect("finite midpoint");
    let diff = Rational::from(&exact - &back).abs();
    Float::with_val_round(64, &diff, Round::Up).0
}

impl Enclosure {
    pub fn of_real(b: &RealBall, digits: usize) -> Self {
        Self::of(&ComplexBall::from_real(b.clone()), digits)
    }

    pub fn of(z: &ComplexBall, digits: usize) -> Self {
        if !z.is_finite() {
            return Enclosure {
                mid_re: "0".into(),
                mid_im: "0".into(),
                rad: "inf".into(),
            };
        }
        let mid_re = decimal(z.re.mid(), digits);
        let mid_im = decimal(z.im.mid(), digits);
        let er = Float::with_val_round(64, z.re.rad() + printed_error(z.re.mid(), &mid_re), Round::Up).0;
        let ei = Float::with_val_round(64, z.im.rad() + printed_error(z.im.mid(), &mid_im), Round::Up).0;
        let r = if er > ei { er } else { ei };
        let rad = if r.is_zero() {
            "0".into()
        } else {
            tidy(&r.to_string_radix_round(10, Some(3), Round::Up))
        };
        Enclosure { mid_re, mid_im, rad }
    }

    /// Parses a printed enclosure back into a ball.
    pub fn to_ball(&self, prec: u32) -> Result<ComplexBall> {
        let re = parse_decimal(&self.mid_re)?;
        let im = parse_decimal(&self.mid_im)?;
        let rad = if self.rad == "inf" {
            return Ok(ComplexBall::full(prec));
        } else {
            parse_decimal(&self.rad)?
        };
        let r = Float::with_val_round(64, &rad, Round::Up).0;
        Ok(ComplexBall::new(
            RealBall::from_rational(prec, &re).add_error(&r),
            RealBall::from_rational(prec, &im).add_error(&r),
        ))
    }

    pub fn to_text(&self) -> String {
        let im = self.mid_im.strip_prefix('-');
        match im {
            Some(v) => format!("{} - {}i +/- {}", self.mid_re, v, self.rad),
            None => format!("{} + {}i +/- {}", self.mid_re, self.mid_im, self.rad),
        }
    }
}
