//! Closed intervals with dyadic endpoints and outward rounding.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::NumericError;

/// A certified enclosure `[lo, hi]` of a real number.
///
/// Every operation rounds its lower endpoint down and its upper endpoint up,
/// so the result contains the exact image of every point of the inputs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl RealInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        RealInterval { lo, hi }
    }

    pub fn try_new(lo: Dyadic, hi: Dyadic) -> Option<Self> {
        (lo <= hi).then_some(RealInterval { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        RealInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::point(Dyadic::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32) -> Self {
        assert!(!q.is_zero(), "zero denominator");
        let lo = Dyadic::from_ratio(p, q, prec, Round::Down);
        let hi = Dyadic::from_ratio(p, q, prec, Round::Up);
        RealInterval { lo, hi }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        Self::from_ratio(x.numer(), x.denom(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certified `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified `self < other`.
    pub fn certainly_lt(&self, other: &RealInterval) -> bool {
        self.hi < other.lo
    }

    /// Certified `self <= other`.
    pub fn certainly_le(&self, other: &RealInterval) -> bool {
        self.hi <= other.lo
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        RealInterval::try_new(lo, hi)
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    pub fn round_outward(&self, prec: u32) -> RealInterval {
        RealInterval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn abs(&self) -> RealInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = std::cmp::max(self.lo.abs(), self.hi.abs());
            RealInterval {
                lo: Dyadic::zero(),
                hi: m,
            }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &RealInterval, prec: u32) -> RealInterval {
        RealInterval {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &RealInterval, prec: u32) -> RealInterval {
        RealInterval {
            lo: self.lo.sub(&other.hi).round(prec, Round::Down),
            hi: self.hi.sub(&other.lo).round(prec, Round::Up),
        }
    }

    pub fn mul(&self, other: &RealInterval, prec: u32) -> RealInterval {
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return RealInterval {
                lo: self.lo.mul(&other.lo).round(prec, Round::Down),
                hi: self.hi.mul(&other.hi).round(prec, Round::Up),
            };
        }
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products");
        let hi = products.iter().max().expect("four products");
        RealInterval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    /// Exact scaling by an integer.
    pub fn mul_int(&self, k: &BigInt) -> RealInterval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            RealInterval { lo: b, hi: a }
        } else {
            RealInterval { lo: a, hi: b }
        }
    }

    /// Exact scaling by `2^k`.
    pub fn shl(&self, k: i64) -> RealInterval {
        RealInterval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
        }
    }

    pub fn div(&self, other: &RealInterval, prec: u32) -> Result<RealInterval, NumericError> {
        if other.contains_zero() {
            return Err(if other.lo.is_zero() && other.hi.is_zero() {
                NumericError::Domain("division by zero".into())
            } else {
                NumericError::InsufficientPrecision("divisor enclosure contains zero".into())
            });
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Down))
            .min()
            .expect("four quotients");
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Up))
            .max()
            .expect("four quotients");
        Ok(RealInterval { lo, hi })
    }

    pub fn recip(&self, prec: u32) -> Result<RealInterval, NumericError> {
        RealInterval::one().div(self, prec)
    }

    pub fn square(&self, prec: u32) -> RealInterval {
        let a = self.abs();
        a.mul(&a, prec)
    }

    /// `self^n`, exact in the monotone pieces so `[-2, 1]^3 = [-8, 1]`.
    pub fn pow(&self, n: u64, prec: u32) -> RealInterval {
        if n == 0 {
            return RealInterval::one();
        }
        if self.lo.is_negative() && !self.hi.is_negative() {
            let neg = RealInterval::new(Dyadic::zero(), self.lo.neg()).pow_nonneg(n, prec);
            let pos = RealInterval::new(Dyadic::zero(), self.hi.clone()).pow_nonneg(n, prec);
            return if n.is_multiple_of(2) {
                RealInterval::new(Dyadic::zero(), std::cmp::max(neg.hi, pos.hi))
            } else {
                RealInterval::new(neg.hi.neg(), pos.hi)
            };
        }
        if self.hi.is_negative() {
            let p = self.neg().pow_nonneg(n, prec);
            return if n.is_multiple_of(2) { p } else { p.neg() };
        }
        self.pow_nonneg(n, prec)
    }

    fn pow_nonneg(&self, n: u64, prec: u32) -> RealInterval {
        let guard = prec + 2 * (64 - n.leading_zeros());
        let mut result = RealInterval::one();
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b, guard);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, guard);
            }
        }
        result.round_outward(prec)
    }

    /// `self^n` for signed `n`.
    pub fn powi(&self, n: i64, prec: u32) -> Result<RealInterval, NumericError> {
        let p = self.pow(n.unsigned_abs(), prec + 8);
        if n < 0 {
            p.recip(prec)
        } else {
            Ok(p.round_outward(prec))
        }
    }

    /// The integer `floor(x)` if it is the same for every point of the interval.
    pub fn certified_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    /// Enclosure of `||x||`, the distance from `x` to the nearest integer.
    pub fn dist_to_nearest_int(&self) -> Result<RealInterval, NumericError> {
        let quarter = Dyadic::pow2(-2);
        if self.width() >= quarter {
            return Err(NumericError::Ambiguous(format!(
                "interval of width {} too wide for nearest-integer distance",
                self.width()
            )));
        }
        let half = Dyadic::pow2(-1);
        let n = self.midpoint().add(&half).floor();
        let n = Dyadic::from_int(n);
        let d_lo = self.lo.sub(&n);
        let d_hi = self.hi.sub(&n);
        let lower_edge = n.sub(&half);
        let upper_edge = n.add(&half);
        if self.lo >= lower_edge && self.hi <= upper_edge {
            // Entire interval lies within half a unit of n.
            let (a, b) = (d_lo.abs(), d_hi.abs());
            if d_lo.is_positive() || d_hi.is_negative() {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Ok(RealInterval::new(lo, hi))
            } else {
                Ok(RealInterval::new(Dyadic::zero(), std::cmp::max(a, b)))
            }
        } else {
            // Straddles a half-integer: distance climbs to 1/2 there.
            let dist = |x: &Dyadic| {
                let f = x.sub(&Dyadic::from_int(x.floor()));
                std::cmp::min(f.clone(), Dyadic::one().sub(&f))
            };
            let lo = std::cmp::min(dist(&self.lo), dist(&self.hi));
            Ok(RealInterval::new(lo, half))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn lo_rational(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn hi_rational(&self) -> BigRational {
        self.hi.to_rational()
    }

    /// `true` when `width <= 2^-bits`.
    pub fn width_at_most_pow2(&self, bits: i64) -> bool {
        self.width() <= Dyadic::pow2(-bits)
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::decimal::format_dyadic;
        write!(
            f,
            "[{}, {}]",
            format_dyadic(&self.lo, 20, Round::Down),
            format_dyadic(&self.hi, 20, Round::Up)
        )
    }
}

impl From<Dyadic> for RealInterval {
    fn from(x: Dyadic) -> Self {
        RealInterval::point(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m.into(), e)
    }

    fn iv(lo: Dyadic, hi: Dyadic) -> RealInterval {
        RealInterval::new(lo, hi)
    }

    #[test]
    fn nearest_integer_distance_examples() {
        let half = RealInterval::point(dy(1, -1));
        assert_eq!(half.dist_to_nearest_int().unwrap(), half);
        let x = RealInterval::point(dy(13, -2)); // 3.25
        assert_eq!(
            x.dist_to_nearest_int().unwrap(),
            RealInterval::point(dy(1, -2))
        );
        let y = RealInterval::point(dy(-13, -2)); // -3.25
        assert_eq!(
            y.dist_to_nearest_int().unwrap(),
            RealInterval::point(dy(1, -2))
        );
    }

    #[test]
    fn nearest_integer_distance_straddling_cases() {
        // Straddles the integer 3.
        let x = iv(dy(47, -4), dy(49, -4));
        assert_eq!(
            x.dist_to_nearest_int().unwrap(),
            iv(Dyadic::zero(), dy(1, -4))
        );
        // Straddles 3.5: hull up to 1/2.
        let y = iv(dy(55, -4), dy(57, -4));
        assert_eq!(y.dist_to_nearest_int().unwrap(), iv(dy(7, -4), dy(1, -1)));
    }

    #[test]
    fn nearest_integer_distance_rejects_wide_input() {
        let x = iv(Dyadic::zero(), dy(1, -2));
        assert!(matches!(
            x.dist_to_nearest_int(),
            Err(NumericError::Ambiguous(_))
        ));
    }

    #[test]
    fn division_by_interval_containing_zero_fails() {
        let x = RealInterval::one();
        let z = iv(dy(-1, 0), dy(1, 0));
        assert!(x.div(&z, 64).is_err());
        assert!(matches!(
            x.div(&RealInterval::zero(), 64),
            Err(NumericError::Domain(_))
        ));
    }

    #[test]
    fn pow_of_negative_interval() {
        let x = iv(dy(-2, 0), dy(1, 0));
        assert_eq!(x.pow(2, 64), iv(Dyadic::zero(), dy(4, 0)));
        assert_eq!(x.pow(3, 64), iv(dy(-8, 0), dy(1, 0)));
        assert_eq!(x.pow(0, 64), RealInterval::one());
    }

    #[test]
    fn certified_floor_requires_agreement() {
        assert_eq!(iv(dy(5, -1), dy(7, -1)).certified_floor(), None);
        assert_eq!(
            iv(dy(5, -1), dy(11, -2)).certified_floor(),
            Some(BigInt::from(2))
        );
    }
}
