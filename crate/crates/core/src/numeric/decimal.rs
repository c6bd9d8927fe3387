//! Decimal rendering and parsing for certificate fields.
//!
//! Rendering is directed: a value written with `Round::Down` never exceeds
//! the exact value, so a printed lower bound stays a lower bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::dyadic::{Dyadic, Round};

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn pow10_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow10(e as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-e) as u32))
    }
}

/// Exponent `e` with `10^e <= |v| < 10^(e+1)`; `v` must be nonzero.
fn decimal_exponent(v: &BigRational) -> i64 {
    let a = v.abs();
    let num_digits = a.numer().to_string().len() as i64;
    let den_digits = a.denom().to_string().len() as i64;
    let mut e = num_digits - den_digits;
    while pow10_rational(e) > a {
        e -= 1;
    }
    while pow10_rational(e + 1) <= a {
        e += 1;
    }
    e
}

fn directed_integer(v: &BigRational, dir: Round) -> BigInt {
    match dir {
        Round::Down => v.floor().to_integer(),
        Round::Up => v.ceil().to_integer(),
    }
}

/// Render `v` with `sig` significant digits, rounding in direction `dir`.
pub fn format_rational(v: &BigRational, sig: u32, dir: Round) -> String {
    assert!(sig >= 1);
    if v.is_zero() {
        return "0".to_string();
    }
    let mut e = decimal_exponent(v);
    let scaled = v * pow10_rational(sig as i64 - 1 - e);
    let mut n = directed_integer(&scaled, dir);
    if n.abs() == pow10(sig) {
        n /= 10;
        e += 1;
    }
    if n.is_zero() {
        return "0".to_string();
    }
    let negative = n.is_negative();
    let digits = n.abs().to_string();
    let body = layout(&digits, e);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn layout(digits: &str, e: i64) -> String {
    let sig = digits.len() as i64;
    if (-7..21).contains(&e) {
        if e >= 0 {
            if e + 1 >= sig {
                let zeros = "0".repeat((e + 1 - sig) as usize);
                format!("{digits}{zeros}")
            } else {
                let (int, frac) = digits.split_at((e + 1) as usize);
                let frac = frac.trim_end_matches('0');
                if frac.is_empty() {
                    int.to_string()
                } else {
                    format!("{int}.{frac}")
                }
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{}", digits.trim_end_matches('0'))
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{lead}e{e}")
        } else {
            format!("{lead}.{rest}e{e}")
        }
    }
}

pub fn format_dyadic(x: &Dyadic, sig: u32, dir: Round) -> String {
    format_rational(&x.to_rational(), sig, dir)
}

/// Parse `[-]digits[.digits][e[-]digits]` exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int}{frac}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().ok()?
    };
    let n = if negative { -n } else { n };
    Some(BigRational::from_integer(n) * pow10_rational(exp - frac.len() as i64))
}

/// Parse a non-negative decimal integer such as `"100000"` or `"1e29"`.
pub fn parse_integer(s: &str) -> Option<BigInt> {
    let r = parse_decimal(s)?;
    r.is_integer().then(|| r.to_integer())
}
