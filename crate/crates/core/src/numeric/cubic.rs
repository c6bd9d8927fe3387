//! Real-root isolation for integer cubics with one real root.
//!
//! The real root is bracketed by exact sign changes. Newton steps propose
//! narrow candidate brackets; a candidate is only accepted after the cubic is
//! evaluated exactly at both ends and the signs differ. A cubic with negative
//! discriminant has exactly one real root, so a sign change pins it.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::elementary::sqrt_interval;
use super::interval::RealInterval;
use super::{NumericError, PrecisionBudget};

/// Enclosure of a complex-conjugate root pair `x ± iy` of a real cubic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPairEnclosure {
    pub real_part: RealInterval,
    /// Non-negative imaginary part (the root in the upper half-plane).
    pub imag_part: RealInterval,
    modulus_sq: RealInterval,
}

impl ComplexPairEnclosure {
    /// `|x + iy|^2`, taken from Vieta's product rather than re-squaring.
    pub fn modulus_squared(&self) -> &RealInterval {
        &self.modulus_sq
    }

    pub fn modulus(&self, prec: u32) -> Result<RealInterval, NumericError> {
        sqrt_interval(&self.modulus_sq, prec)
    }
}

/// Integer cubic `c3 x^3 + c2 x^2 + c1 x + c0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cubic {
    coeffs: [BigInt; 4],
}

impl Cubic {
    pub fn new(
        c3: impl Into<BigInt>,
        c2: impl Into<BigInt>,
        c1: impl Into<BigInt>,
        c0: impl Into<BigInt>,
    ) -> Self {
        Cubic {
            coeffs: [c3.into(), c2.into(), c1.into(), c0.into()],
        }
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.coeffs
    }

    pub fn discriminant(&self) -> BigInt {
        let [a, b, c, d] = &self.coeffs;
        BigInt::from(18) * a * b * c * d - BigInt::from(4) * b * b * b * d + b * b * c * c
            - BigInt::from(4) * a * c * c * c
            - BigInt::from(27) * a * a * d * d
    }

    /// Exact value at a dyadic point.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let [a, b, c, d] = &self.coeffs;
        let mut acc = Dyadic::from_int(a.clone());
        for k in [b, c, d] {
            acc = acc.mul(x).add(&Dyadic::from_int(k.clone()));
        }
        acc
    }

    fn eval_derivative(&self, x: &Dyadic) -> Dyadic {
        let [a, b, c, _] = &self.coeffs;
        let a3 = Dyadic::from_int(a * 3);
        let b2 = Dyadic::from_int(b * 2);
        a3.mul(x).add(&b2).mul(x).add(&Dyadic::from_int(c.clone()))
    }

    /// Interval evaluation (Horner).
    pub fn eval_interval(&self, x: &RealInterval, prec: u32) -> RealInterval {
        let mut acc = RealInterval::from_int(self.coeffs[0].clone());
        for k in &self.coeffs[1..] {
            acc = acc
                .mul(x, prec)
                .add(&RealInterval::from_int(k.clone()), prec);
        }
        acc
    }

    fn sign_at(&self, x: &Dyadic) -> i32 {
        self.eval(x).signum()
    }
}

/// Isolate the real root of a cubic with negative discriminant to width
/// `2^-budget.working_bits`, and enclose the complex pair via Vieta.
pub fn isolate_cubic_roots(
    cubic: &Cubic,
    budget: &PrecisionBudget,
) -> Result<(RealInterval, ComplexPairEnclosure), NumericError> {
    let root = isolate_real_root(cubic, budget.working_bits)?;
    let pair = complex_pair(cubic, &root, budget.working_bits)?;
    Ok((root, pair))
}

pub(crate) fn isolate_real_root(
    cubic: &Cubic,
    target_bits: u32,
) -> Result<RealInterval, NumericError> {
    let [a, ..] = cubic.coeffs();
    if a.is_zero() {
        return Err(NumericError::DegenerateCubic);
    }
    let disc = cubic.discriminant();
    if disc.is_positive() {
        return Err(NumericError::ThreeRealRoots);
    }
    if disc.is_zero() {
        return Err(NumericError::RepeatedRoot);
    }

    // Cauchy bound: every root satisfies |x| < 1 + max|ci/c3| <= 2^r.
    let max_c = cubic.coeffs()[1..]
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("three coefficients");
    let r = (max_c.bits() as i64 - a.abs().bits() as i64 + 2).max(1);
    let mut lo = Dyadic::pow2(r).neg();
    let mut hi = Dyadic::pow2(r);
    let sign_lo = cubic.sign_at(&lo);
    debug_assert!(sign_lo != 0 && sign_lo != cubic.sign_at(&hi));

    let target = Dyadic::pow2(-(target_bits as i64));
    let bracket_width = |lo: &Dyadic, hi: &Dyadic| hi.sub(lo);

    // Bisection until the bracket is narrow enough for Newton to converge.
    let newton_start = Dyadic::pow2(-12);
    while bracket_width(&lo, &hi) > newton_start {
        let mid = lo.add(&hi).shl(-1);
        match cubic.sign_at(&mid) {
            0 => return Ok(RealInterval::point(mid)),
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }

    let mut x = lo.add(&hi).shl(-1);
    let mut bits: u32 = 24;
    let mut failures = 0;
    while bracket_width(&lo, &hi) > target {
        let fx = cubic.eval(&x);
        if fx.is_zero() {
            return Ok(RealInterval::point(x));
        }
        let dfx = cubic.eval_derivative(&x);
        let step_prec = bits + 8;
        let candidate_ok = if dfx.is_zero() {
            false
        } else {
            let next = x
                .sub(&fx.div(&dfx, step_prec, Round::Down))
                .round(step_prec, Round::Down);
            let delta = Dyadic::pow2(-(bits as i64) + 2);
            let c_lo = std::cmp::max(next.sub(&delta), lo.clone());
            let c_hi = std::cmp::min(next.add(&delta), hi.clone());
            // Sign check: only an exact sign change certifies the new bracket.
            if c_lo < c_hi {
                let (s_lo, s_hi) = (cubic.sign_at(&c_lo), cubic.sign_at(&c_hi));
                if s_lo == 0 {
                    return Ok(RealInterval::point(c_lo));
                }
                if s_hi == 0 {
                    return Ok(RealInterval::point(c_hi));
                }
                if s_lo == sign_lo && s_hi != sign_lo {
                    lo = c_lo;
                    hi = c_hi;
                    x = next;
                    true
                } else {
                    false
                }
            } else {
                false
            }
        };
        if candidate_ok {
            bits = (bits * 2).min(target_bits + 16);
        } else {
            failures += 1;
            for _ in 0..4 {
                let mid = lo.add(&hi).shl(-1);
                match cubic.sign_at(&mid) {
                    0 => return Ok(RealInterval::point(mid)),
                    s if s == sign_lo => lo = mid,
                    _ => hi = mid,
                }
            }
            x = lo.add(&hi).shl(-1);
            if failures > 64 {
                bits = target_bits + 16;
            }
        }
    }
    Ok(RealInterval::new(lo, hi))
}

fn complex_pair(
    cubic: &Cubic,
    root: &RealInterval,
    prec: u32,
) -> Result<ComplexPairEnclosure, NumericError> {
    let [a, b, c, _] = cubic.coeffs();
    let guard = prec + 16;
    let a_iv = RealInterval::from_int(a.clone());
    // Sum of the pair: -b/a - r. Product: c/a - r * sum.
    let sum = RealInterval::from_int(-b)
        .div(&a_iv, guard)?
        .sub(root, guard);
    let product = RealInterval::from_int(c.clone())
        .div(&a_iv, guard)?
        .sub(&root.mul(&sum, guard), guard);
    let real_part = sum.shl(-1);
    let imag_sq = product.sub(&real_part.square(guard), guard);
    // The pair is genuinely complex (negative discriminant), so Im^2 > 0.
    let imag_sq = if imag_sq.lo().is_negative() {
        RealInterval::new(
            Dyadic::zero(),
            std::cmp::max(imag_sq.hi().clone(), Dyadic::zero()),
        )
    } else {
        imag_sq
    };
    let imag_part = sqrt_interval(&imag_sq, guard)?;
    Ok(ComplexPairEnclosure {
        real_part: real_part.round_outward(prec),
        imag_part: imag_part.round_outward(prec),
        modulus_sq: product.round_outward(prec),
    })
}
