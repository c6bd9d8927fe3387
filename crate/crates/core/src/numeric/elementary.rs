//! Certified logarithm and square root.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::interval::RealInterval;
use super::NumericError;

/// Enclosure of `atanh(p/q)` for `|p/q| <= 1/2`.
///
/// Fixed-point series with `frac` fractional bits. Every truncation rounds
/// down, so with `N` terms the computed sum `S` satisfies
/// `S <= 2^frac * atanh(s) <= S + 4N + 4`, including a tail below one ulp
/// and terms skipped once the running power underflows.
fn atanh_ratio(p: &BigInt, q: &BigInt, prec: u32) -> RealInterval {
    if p.is_zero() {
        return RealInterval::zero();
    }
    if p.is_negative() {
        return atanh_ratio(&-p, q, prec).neg();
    }
    debug_assert!(p * 2 <= *q, "atanh argument must be at most 1/2");
    // |s| < 2^-gap
    let gap = (q.bits() as i64 - p.bits() as i64 - 1).max(1) as u64;
    let base = prec as u64 + 24;
    // Enough terms that the tail stays below one ulp even after `frac`
    // grows by the bit length of `terms`.
    let terms = (base + 68) / (2 * gap) + 2;
    let frac = base + 64 - terms.leading_zeros() as u64;

    let x = (p << frac) / q;
    let s2 = ((p * p) << frac) / (q * q);
    let mut power = x;
    let mut sum = BigInt::zero();
    for k in 0..terms {
        sum += &power / (2 * k + 1);
        power = (&power * &s2) >> frac;
        if power.is_zero() {
            break;
        }
    }
    let slack = BigInt::from(4 * terms + 4);
    let lo = Dyadic::new(sum.clone(), -(frac as i64));
    let hi = Dyadic::new(sum + slack, -(frac as i64));
    RealInterval::new(lo, hi).round_outward(prec + 8)
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> RealInterval {
    atanh_ratio(&BigInt::one(), &BigInt::from(3), prec + 4)
        .shl(1)
        .round_outward(prec)
}

/// Enclosure of `ln x` for a positive dyadic `x`.
pub fn ln_dyadic(x: &Dyadic, prec: u32) -> Result<RealInterval, NumericError> {
    if !x.is_positive() {
        return Err(NumericError::Domain(format!(
            "logarithm of non-positive value {x:?}"
        )));
    }
    if *x == Dyadic::one() {
        return Ok(RealInterval::zero());
    }
    // x = (m / 2^b) * 2^k with m / 2^b in [1/2, 1); shift into [3/4, 3/2).
    let m = x.mantissa();
    let b = m.bits() as i64;
    let mut k = b + x.exponent();
    let mut num = m.clone();
    let den = BigInt::one() << b as u64;
    if &num * 4 < &den * 3 {
        num <<= 1u32;
        k -= 1;
    }
    let guard = prec + 16;
    let s_num = &num - &den;
    let s_den = &num + &den;
    let series = atanh_ratio(&s_num, &s_den, guard).shl(1);
    let result = if k == 0 {
        series
    } else {
        ln2(guard + 64 - k.unsigned_abs().leading_zeros())
            .mul_int(&BigInt::from(k))
            .add(&series, guard)
    };
    Ok(result.round_outward(prec))
}

/// Enclosure of `ln` over an interval (monotone, so endpoint-wise).
pub fn ln_interval(x: &RealInterval, prec: u32) -> Result<RealInterval, NumericError> {
    if !x.hi().is_positive() {
        return Err(NumericError::Domain(format!(
            "logarithm of non-positive interval {x:?}"
        )));
    }
    if !x.lo().is_positive() {
        return Err(NumericError::InsufficientPrecision(
            "logarithm argument enclosure reaches zero".into(),
        ));
    }
    if x.is_point() {
        return ln_dyadic(x.lo(), prec);
    }
    let lo = ln_dyadic(x.lo(), prec)?;
    let hi = ln_dyadic(x.hi(), prec)?;
    Ok(RealInterval::new(lo.lo().clone(), hi.hi().clone()))
}

fn sqrt_dyadic(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    // Scale the mantissa so the integer root carries `prec + 2` bits and the
    // remaining exponent is even.
    let m = x.mantissa();
    let mut shift = (2 * (prec as i64 + 2) - m.bits() as i64).max(0);
    if (x.exponent() - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled = m << shift as u64;
    let r = scaled.sqrt();
    let r = match dir {
        Round::Down => r,
        Round::Up => {
            if &r * &r == scaled {
                r
            } else {
                r + 1
            }
        }
    };
    Dyadic::new(r, (x.exponent() - shift) / 2).round(prec, dir)
}

/// Enclosure of `sqrt` over a non-negative interval.
pub fn sqrt_interval(x: &RealInterval, prec: u32) -> Result<RealInterval, NumericError> {
    if x.hi().is_negative() {
        return Err(NumericError::Domain(format!(
            "square root of negative interval {x:?}"
        )));
    }
    if x.lo().is_negative() {
        return Err(NumericError::InsufficientPrecision(
            "square root argument enclosure dips below zero".into(),
        ));
    }
    Ok(RealInterval::new(
        sqrt_dyadic(x.lo(), prec, Round::Down),
        sqrt_dyadic(x.hi(), prec, Round::Up),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::decimal::parse_decimal;

    // Independent high-precision reference values (60 significant digits).
    const LN10: &str = "2.30258509299404568401799145468436420760110148862877297603333";
    const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680";

    fn assert_encloses(x: &RealInterval, reference: &str, digits: i64) {
        let r = parse_decimal(reference).unwrap();
        let tol = parse_decimal(&format!("1e-{digits}")).unwrap();
        let lo = x.lo_rational();
        let hi = x.hi_rational();
        assert!(
            lo <= &r + &tol && &r - &tol <= hi,
            "{x:?} misses {reference}"
        );
        assert!(hi - lo < tol, "{x:?} too wide");
    }

    #[test]
    fn ln_of_one_is_exact_zero() {
        assert_eq!(
            ln_dyadic(&Dyadic::one(), 256).unwrap(),
            RealInterval::zero()
        );
    }

    #[test]
    fn ln2_and_ln10_match_reference() {
        assert_encloses(&ln2(256), LN2, 55);
        assert_encloses(&ln_dyadic(&Dyadic::from_int(10), 256).unwrap(), LN10, 55);
    }

    #[test]
    fn ln_rejects_non_positive() {
        assert!(matches!(
            ln_dyadic(&Dyadic::zero(), 64),
            Err(NumericError::Domain(_))
        ));
        let x = RealInterval::new(Dyadic::from_int(-1), Dyadic::from_int(2));
        assert!(matches!(
            ln_interval(&x, 64),
            Err(NumericError::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn ln_of_tiny_and_huge_values() {
        // ln(2^-1000) = -1000 ln 2
        let x = ln_dyadic(&Dyadic::pow2(-1000), 128).unwrap();
        let y = ln2(160).mul_int(&BigInt::from(-1000));
        assert!(x.intersect(&y).is_some());
    }

    #[test]
    fn sqrt_brackets_root() {
        let two = RealInterval::from_int(2);
        let r = sqrt_interval(&two, 200).unwrap();
        assert!(r.lo().mul(r.lo()) <= Dyadic::from_int(2));
        assert!(r.hi().mul(r.hi()) >= Dyadic::from_int(2));
        assert!(r.width_at_most_pow2(195));
        let four = RealInterval::from_int(4);
        assert_eq!(sqrt_interval(&four, 64).unwrap(), RealInterval::from_int(2));
    }
}
