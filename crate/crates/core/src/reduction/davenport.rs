//! The Baker-Davenport reduction.
//!
//! If `p/q` is a convergent of `tau` with `q > 6M` and
//! `eps = ||mu q|| - M ||tau q|| > 0`, then `0 < |m tau - n + mu| < A B^(-k)`
//! has no solution with `m <= M` and `k >= log(A q / eps) / log B`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::cf::{ContinuedFraction, Convergent};
use crate::baker::enclose;
use crate::numeric::decimal::{format_dyadic, parse_decimal};
use crate::numeric::{Dyadic, NumericError, PrecisionBudget, Real, RealInterval, Round};

/// Significant digits kept when recording `eps`.
pub const EPS_DIGITS: u32 = 12;

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub tau: Real,
    pub mu: Real,
    pub a: Real,
    pub b: Real,
    pub big_m: BigInt,
}

impl ReductionInstance {
    pub fn new(
        tau: Real,
        mu: Real,
        a: Real,
        b: Real,
        big_m: BigInt,
        budget: &PrecisionBudget,
    ) -> Result<Self, NumericError> {
        if !big_m.is_positive() {
            return Err(NumericError::Domain(format!(
                "M must be positive, got {big_m}"
            )));
        }
        if !enclose(&a, budget)?.is_positive() {
            return Err(NumericError::Domain("A must be positive".into()));
        }
        if !RealInterval::one().certainly_lt(&enclose(&b, budget)?) {
            return Err(NumericError::Domain("B must exceed 1".into()));
        }
        Ok(ReductionInstance {
            tau,
            mu,
            a,
            b,
            big_m,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epsilon {
    Positive(RealInterval),
    /// Certified `eps <= 0`; the caller moves to the next convergent.
    NonPositive(RealInterval),
}

/// Certified enclosure of `||mu q|| - M ||tau q||`.
pub fn epsilon(
    inst: &ReductionInstance,
    q: &BigInt,
    budget: &PrecisionBudget,
) -> Result<Epsilon, NumericError> {
    // tau q and mu q need about log2(q M) absolute bits beyond the target.
    let need = (q.bits() + inst.big_m.bits()) as u32 + 64;
    let start = budget.working_bits.max(need).min(budget.max_bits);
    let ladder = PrecisionBudget {
        working_bits: start,
        ..*budget
    };
    let q_iv = RealInterval::from_int(q.clone());
    let m_iv = RealInterval::from_int(inst.big_m.clone());
    ladder.escalate("epsilon", |bits| {
        let tq = inst.tau.enclose(bits)?.mul(&q_iv, bits);
        let mq = inst.mu.enclose(bits)?.mul(&q_iv, bits);
        let eps = mq
            .dist_to_nearest_int()?
            .sub(&tq.dist_to_nearest_int()?.mul(&m_iv, bits), bits);
        if eps.is_positive() {
            Ok(Epsilon::Positive(eps))
        } else if !eps.hi().is_positive() {
            Ok(Epsilon::NonPositive(eps))
        } else {
            Err(NumericError::Ambiguous(format!(
                "sign of eps undecided at {bits} bits"
            )))
        }
    })
}

/// `x` rounded down to [`EPS_DIGITS`] significant decimal digits.
pub fn eps_decimal(eps: &RealInterval) -> (String, BigRational) {
    let s = format_dyadic(eps.lo(), EPS_DIGITS, Round::Down);
    let v = parse_decimal(&s).expect("formatted decimal parses");
    (s, v)
}

/// Smallest `K` with no solution for `k >= K`: the ceiling of an upper bound
/// on `log(A q / eps) / log B`.
pub fn reduced_bound(
    inst: &ReductionInstance,
    q: &BigInt,
    eps: &BigRational,
    budget: &PrecisionBudget,
) -> Result<BigInt, NumericError> {
    if !eps.is_positive() {
        return Err(NumericError::Domain("eps must be positive".into()));
    }
    let x = (&inst.a * &Real::int(q.clone()) / Real::rational(eps.clone())).ln() / inst.b.ln();
    Ok(enclose(&x, budget)?.hi().ceil())
}

/// Lemma: `|e^x - 1| < 1/2` implies `|x| < 2 |e^x - 1|`.
pub fn small_linear_form_bound(gamma_abs: &RealInterval) -> Result<RealInterval, NumericError> {
    if !(gamma_abs.hi() < &Dyadic::pow2(-1)) {
        return Err(NumericError::Domain(format!(
            "|e^x - 1| <= {} is not below 1/2",
            gamma_abs.hi()
        )));
    }
    Ok(gamma_abs.shl(1))
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub convergent_index: usize,
    pub q_used: BigInt,
    pub epsilon: RealInterval,
    /// Recorded lower bound on `eps`, the value `k_bound` was computed from.
    pub eps_recorded: String,
    /// No solution has `k >= k_bound`.
    pub k_bound: BigInt,
}

/// Try convergents from the first with `q > 6M` until `eps > 0`.
/// `Ok(None)` means every available convergent gave `eps <= 0`.
pub fn reduce(
    inst: &ReductionInstance,
    cf: &ContinuedFraction,
    budget: &PrecisionBudget,
) -> Result<Option<ReductionOutcome>, NumericError> {
    let six_m = &inst.big_m * 6;
    let Some(start) = cf.first_index_above(&six_m) else {
        return Ok(None);
    };
    for (i, Convergent { q, .. }) in cf.convergents.iter().enumerate().skip(start) {
        if let Epsilon::Positive(eps) = epsilon(inst, q, budget)? {
            let (eps_recorded, eps_value) = eps_decimal(&eps);
            let k_bound = reduced_bound(inst, q, &eps_value, budget)?;
            return Ok(Some(ReductionOutcome {
                convergent_index: i,
                q_used: q.clone(),
                epsilon: eps,
                eps_recorded,
                k_bound,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Constants;
    use crate::reduction::cf::expand_cf;
    use proptest::prelude::*;

    fn budget() -> PrecisionBudget {
        PrecisionBudget::default()
    }

    fn big_m_29() -> BigInt {
        BigInt::from(10).pow(29)
    }

    fn stage1_instance(c: &Constants, d1: i64, big_m: BigInt) -> ReductionInstance {
        let mu = ((Real::int(d1) / (Real::int(9) * &c.a)).ln() / &c.ln_alpha).memo();
        ReductionInstance::new(
            c.tau.clone(),
            mu,
            Real::int(56) / &c.ln_alpha,
            Real::int(10),
            big_m,
            &budget(),
        )
        .unwrap()
    }

    #[test]
    fn exact_half_against_exact_tau() {
        // tau = p/q exactly, so ||tau q|| = 0 and eps = ||q/2|| = 1/2 for odd q.
        let inst = ReductionInstance::new(
            Real::ratio(22, 7),
            Real::ratio(1, 2),
            Real::int(1),
            Real::int(10),
            1.into(),
            &budget(),
        )
        .unwrap();
        match epsilon(&inst, &7.into(), &budget()).unwrap() {
            Epsilon::Positive(e) => {
                assert!(e.contains(&Dyadic::pow2(-1)));
                assert!(e.width_at_most_pow2(200));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn instance_validation() {
        let ok = |a: i64, b: i64, m: i64| {
            ReductionInstance::new(
                Real::int(1),
                Real::int(0),
                Real::int(a),
                Real::int(b),
                m.into(),
                &budget(),
            )
            .is_ok()
        };
        assert!(ok(1, 2, 1));
        assert!(!ok(0, 2, 1));
        assert!(!ok(1, 1, 1));
        assert!(!ok(1, 2, 0));
    }

    #[test]
    fn bound_on_exact_power() {
        let inst = ReductionInstance::new(
            Real::int(1),
            Real::int(0),
            Real::int(1),
            Real::int(10),
            1.into(),
            &budget(),
        )
        .unwrap();
        let k = reduced_bound(
            &inst,
            &10.into(),
            &BigRational::from_integer(1.into()),
            &budget(),
        )
        .unwrap();
        assert_eq!(k, 2.into());
    }

    #[test]
    fn lemma_three_examples() {
        let quarter = RealInterval::point(Dyadic::pow2(-2));
        assert_eq!(
            small_linear_form_bound(&quarter).unwrap(),
            RealInterval::point(Dyadic::pow2(-1))
        );
        let r28 = RealInterval::from_ratio(&28.into(), &100.into(), 64);
        let out = small_linear_form_bound(&r28).unwrap();
        assert!(out.contains_rational(&BigRational::new(56.into(), 100.into())));
        assert!(small_linear_form_bound(&RealInterval::point(Dyadic::pow2(-1))).is_err());

        let c = Constants::new();
        let g = (Real::int(2) / c.alpha.powi(251)).enclose(256).unwrap();
        let out = small_linear_form_bound(&g).unwrap();
        let tiny = RealInterval::from_rational(&parse_decimal("1e-41").unwrap(), 64);
        assert!(out.certainly_lt(&tiny));
    }

    #[test]
    fn stage_one_reference_epsilon() {
        let c = Constants::new();
        let cf = expand_cf(&c.tau, &(big_m_29() * 6), 4, &budget()).unwrap();
        let inst = stage1_instance(&c, 1, big_m_29());
        let out = reduce(&inst, &cf, &budget()).unwrap().unwrap();
        assert_eq!(out.q_used.to_string(), "2313941725927419874526777293873");
        assert_eq!(out.eps_recorded, "0.0168611519871");
        assert_eq!(out.k_bound, 35.into());
    }

    #[test]
    fn stage_one_reference_table() {
        let c = Constants::new();
        let cf = expand_cf(&c.tau, &(big_m_29() * 6), 4, &budget()).unwrap();
        let expected = [
            "0.0168611519871891",
            "0.374050206975194",
            "0.232571924442482",
            "0.226004983166709",
            "0.297572148130724",
            "0.367483265699421",
            "0.377143466790531",
            "0.0884283169512042",
            "0.448282696897774",
        ];
        for (d1, e) in (1..=9).zip(expected) {
            let out = reduce(&stage1_instance(&c, d1, big_m_29()), &cf, &budget())
                .unwrap()
                .unwrap();
            let diff = (out.epsilon.to_f64() - e.parse::<f64>().unwrap()).abs();
            assert!(diff < 1e-12, "d1 = {d1}: {} vs {e}", out.epsilon);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(4))]

        /// Sampled `m <= M` never beat the excluded inequality at `k = K`.
        #[test]
        fn excluded_range_is_sound(d1 in 1i64..=9, ms in proptest::collection::vec(any::<u128>(), 100)) {
            let c = Constants::new();
            let big_m = BigInt::from(10).pow(29);
            let cf = expand_cf(&c.tau, &(&big_m * 6), 4, &budget()).unwrap();
            let inst = stage1_instance(&c, d1, big_m.clone());
            let out = reduce(&inst, &cf, &budget()).unwrap().unwrap();
            let threshold = (&inst.a * &Real::int(10).powi(-(i64::try_from(&out.k_bound).unwrap()))).enclose(256).unwrap();
            let tau = c.tau.enclose(512).unwrap();
            let mu = inst.mu.enclose(512).unwrap();
            for m in ms {
                let m = BigInt::from(m) % &big_m;
                let v = tau.mul(&RealInterval::from_int(m), 512).add(&mu, 512);
                let n = RealInterval::from_int(v.midpoint().add(&Dyadic::pow2(-1)).floor());
                let form = v.sub(&n, 512).abs();
                prop_assert!(threshold.certainly_le(&form));
            }
        }
    }
}
