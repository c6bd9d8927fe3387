//! Recomputable real quantities.
//!
//! A [`Real`] is an expression tree over exact rationals, cubic roots and a
//! few elementary functions. It can be enclosed at any working precision, and
//! [`Real::refine`] walks a [`PrecisionBudget`] until the enclosure is narrow
//! enough. Shared subexpressions wrapped in [`Real::memo`] are evaluated once
//! per precision.

use std::fmt;
use std::ops;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cubic::{isolate_real_root, Cubic};
use super::dyadic::Dyadic;
use super::elementary::{ln_interval, sqrt_interval};
use super::interval::RealInterval;
use super::{NumericError, PrecisionBudget};

#[derive(Clone)]
pub struct Real(Arc<Node>);

enum Node {
    Rational(BigRational),
    CubicRoot(Cubic),
    Add(Real, Real),
    Sub(Real, Real),
    Mul(Real, Real),
    Div(Real, Real),
    Neg(Real),
    Ln(Real),
    Sqrt(Real),
    Powi(Real, i64),
    Memo(Real, Mutex<Vec<(u32, RealInterval)>>),
}

impl Real {
    fn node(n: Node) -> Self {
        Real(Arc::new(n))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Real::node(Node::Rational(BigRational::from_integer(n.into())))
    }

    pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Real::node(Node::Rational(BigRational::new(p.into(), q.into())))
    }

    pub fn rational(x: BigRational) -> Self {
        Real::node(Node::Rational(x))
    }

    /// The unique real root of a cubic with negative discriminant.
    pub fn cubic_root(cubic: Cubic) -> Self {
        Real::node(Node::CubicRoot(cubic))
    }

    pub fn ln(&self) -> Self {
        Real::node(Node::Ln(self.clone()))
    }

    pub fn sqrt(&self) -> Self {
        Real::node(Node::Sqrt(self.clone()))
    }

    pub fn powi(&self, n: i64) -> Self {
        Real::node(Node::Powi(self.clone(), n))
    }

    /// Cache enclosures of this subexpression by precision.
    pub fn memo(&self) -> Self {
        if matches!(*self.0, Node::Memo(..)) {
            return self.clone();
        }
        Real::node(Node::Memo(self.clone(), Mutex::new(Vec::new())))
    }

    /// `Some(x)` if this is an exact rational constant.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &*self.0 {
            Node::Rational(x) => Some(x),
            Node::Memo(inner, _) => inner.as_rational(),
            _ => None,
        }
    }

    /// Enclosure at working precision `bits`. Width is not guaranteed; use
    /// [`Real::refine`] for a width target.
    pub fn enclose(&self, bits: u32) -> Result<RealInterval, NumericError> {
        match &*self.0 {
            Node::Rational(x) => Ok(RealInterval::from_rational(x, bits)),
            Node::CubicRoot(c) => isolate_real_root(c, bits),
            Node::Add(a, b) => Ok(a.enclose(bits)?.add(&b.enclose(bits)?, bits)),
            Node::Sub(a, b) => Ok(a.enclose(bits)?.sub(&b.enclose(bits)?, bits)),
            Node::Mul(a, b) => Ok(a.enclose(bits)?.mul(&b.enclose(bits)?, bits)),
            Node::Div(a, b) => a.enclose(bits)?.div(&b.enclose(bits)?, bits),
            Node::Neg(a) => Ok(a.enclose(bits)?.neg()),
            Node::Ln(a) => ln_interval(&a.enclose(bits)?, bits),
            Node::Sqrt(a) => sqrt_interval(&a.enclose(bits)?, bits),
            Node::Powi(a, n) => a.enclose(bits)?.powi(*n, bits),
            Node::Memo(inner, cache) => {
                let mut cache = cache.lock().expect("memo cache poisoned");
                if let Some((_, v)) = cache.iter().find(|(b, _)| *b == bits) {
                    return Ok(v.clone());
                }
                let v = inner.enclose(bits)?;
                cache.push((bits, v.clone()));
                Ok(v)
            }
        }
    }

    /// Enclosure of width at most `target_width`, escalating the working
    /// precision along `budget`. Successive enclosures are intersected, so the
    /// result is nested inside every earlier one.
    pub fn refine(
        &self,
        target_width: &Dyadic,
        budget: &PrecisionBudget,
    ) -> Result<RealInterval, NumericError> {
        let mut best: Option<RealInterval> = None;
        let mut last_bits = budget.working_bits;
        for bits in budget.levels() {
            last_bits = bits;
            let x = match self.enclose(bits) {
                Ok(x) => x,
                Err(e) if e.is_retryable() => continue,
                Err(e) => return Err(e),
            };
            let x = match &best {
                Some(prev) => prev.intersect(&x).ok_or_else(|| {
                    NumericError::Domain(format!("disjoint enclosures {prev:?} and {x:?}"))
                })?,
                None => x,
            };
            if x.width() <= *target_width {
                return Ok(x);
            }
            best = Some(x);
        }
        Err(NumericError::Escalation {
            what: format!("could not reach width {target_width}"),
            bits: last_bits,
            best,
        })
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Rational(x) => write!(f, "{x}"),
            Node::CubicRoot(c) => write!(f, "root{:?}", c.coeffs()),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Sub(a, b) => write!(f, "({a:?} - {b:?})"),
            Node::Mul(a, b) => write!(f, "({a:?} * {b:?})"),
            Node::Div(a, b) => write!(f, "({a:?} / {b:?})"),
            Node::Neg(a) => write!(f, "-{a:?}"),
            Node::Ln(a) => write!(f, "ln({a:?})"),
            Node::Sqrt(a) => write!(f, "sqrt({a:?})"),
            Node::Powi(a, n) => write!(f, "{a:?}^{n}"),
            Node::Memo(a, _) => write!(f, "{a:?}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real::node(Node::$variant(self.clone(), rhs.clone()))
            }
        }
        impl ops::$trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real::node(Node::$variant(self, rhs))
            }
        }
        impl ops::$trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real::node(Node::$variant(self, rhs.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::node(Node::Neg(self.clone()))
    }
}

impl ops::Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::node(Node::Neg(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::decimal::parse_decimal;

    // tau = ln 10 / ln alpha, 95 digits from an independent evaluation.
    const TAU: &str = "6.0238448531883707791856709243937309241096494665622131733538400071261756766050981941339931560446";

    fn alpha() -> Real {
        Real::cubic_root(Cubic::new(1, -1, 0, -1))
    }

    #[test]
    fn log_one_refines_immediately() {
        let x = Real::int(1)
            .ln()
            .refine(&Dyadic::pow2(-10_000), &PrecisionBudget::default())
            .unwrap();
        assert_eq!(x, RealInterval::zero());
    }

    #[test]
    fn alpha_to_2_pow_minus_200_within_512_bits() {
        let budget = PrecisionBudget::new(64, 512, 2).unwrap();
        let x = alpha().refine(&Dyadic::pow2(-200), &budget).unwrap();
        assert!(x.width_at_most_pow2(200));
    }

    #[test]
    fn tau_to_eighty_digits() {
        let tau = Real::int(10).ln() / alpha().ln();
        let target = RealInterval::from_rational(&parse_decimal("1e-80").unwrap(), 64);
        let x = tau
            .refine(target.lo(), &PrecisionBudget::default())
            .unwrap();
        let reference = parse_decimal(TAU).unwrap();
        let tol = parse_decimal("1e-80").unwrap();
        assert!(x.lo_rational() <= &reference + &tol && &reference - &tol <= x.hi_rational());
    }

    #[test]
    fn refine_reports_best_enclosure_on_escalation_failure() {
        let budget = PrecisionBudget::new(32, 64, 2).unwrap();
        match alpha().ln().refine(&Dyadic::pow2(-500), &budget) {
            Err(NumericError::Escalation {
                best: Some(b),
                bits,
                ..
            }) => {
                assert_eq!(bits, 64);
                assert!(b.width() > Dyadic::zero());
            }
            other => panic!("expected escalation failure, got {other:?}"),
        }
    }

    #[test]
    fn memo_returns_identical_enclosures() {
        let x = (Real::int(10).ln() / alpha().ln()).memo();
        assert_eq!(x.enclose(300).unwrap(), x.enclose(300).unwrap());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = BigRational> {
        (-1_000_000i64..1_000_000, 1i64..100_000)
            .prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
    }

    fn contains(x: &RealInterval, v: &BigRational) -> bool {
        x.lo_rational() <= *v && *v <= x.hi_rational()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn arithmetic_encloses_exact_value(a in rational(), b in rational(), bits in 8u32..200) {
            let (ra, rb) = (Real::rational(a.clone()), Real::rational(b.clone()));
            prop_assert!(contains(&(&ra + &rb).enclose(bits).unwrap(), &(&a + &b)));
            prop_assert!(contains(&(&ra - &rb).enclose(bits).unwrap(), &(&a - &b)));
            prop_assert!(contains(&(&ra * &rb).enclose(bits).unwrap(), &(&a * &b)));
            if !b.is_zero() {
                prop_assert!(contains(&(&ra / &rb).enclose(bits).unwrap(), &(&a / &b)));
            }
        }

        #[test]
        fn refinement_is_nested(a in rational(), b in 1i64..1000) {
            let x = (Real::rational(a) + Real::int(b).ln()).memo();
            let coarse = x.enclose(32).unwrap();
            let fine = x.refine(&Dyadic::pow2(-150), &PrecisionBudget::new(32, 512, 2).unwrap()).unwrap();
            prop_assert!(coarse.contains_interval(&fine));
            prop_assert!(fine.width() <= Dyadic::pow2(-150));
        }
    }
}
