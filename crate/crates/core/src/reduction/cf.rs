//! Certified continued-fraction expansion.
//!
//! Euclid's algorithm runs on both rational endpoints of an enclosure of
//! `tau`. A partial quotient is accepted only when both endpoints give the
//! same floor and neither remainder is zero, so every accepted quotient is
//! the true one regardless of the precision that produced the enclosure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numeric::{NumericError, PrecisionBudget, Real};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<Convergent>,
    /// Working precision of the enclosure that certified the quotients.
    pub bits: u32,
    /// The expansion terminated: the source is this exact rational.
    pub terminated: bool,
}

impl ContinuedFraction {
    fn from_quotients(partial_quotients: Vec<BigInt>, bits: u32, terminated: bool) -> Self {
        let convergents = convergents_of(&partial_quotients);
        ContinuedFraction {
            partial_quotients,
            convergents,
            bits,
            terminated,
        }
    }

    /// Index of the first convergent with `q > bound`.
    pub fn first_index_above(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|c| &c.q > bound)
    }

    /// `p_k q_(k-1) - p_(k-1) q_k = (-1)^(k-1)` for every `k >= 1`.
    pub fn determinants_ok(&self) -> bool {
        determinants_ok(&self.convergents)
    }
}

pub fn convergents_of(quotients: &[BigInt]) -> Vec<Convergent> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            (p0, q0) = (
                std::mem::replace(&mut p1, p.clone()),
                std::mem::replace(&mut q1, q.clone()),
            );
            Convergent { p, q }
        })
        .collect()
}

pub fn determinants_ok(convergents: &[Convergent]) -> bool {
    convergents.windows(2).enumerate().all(|(i, w)| {
        let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
        // k = i + 1
        let expected = if i % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        det == expected
    }) && convergents.windows(2).skip(1).all(|w| w[0].q < w[1].q)
}

/// Certified quotients of every number in `x`, as far as they agree.
fn certified_quotients(
    mut lo: BigRational,
    mut hi: BigRational,
    limit: usize,
) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    while out.len() < limit {
        let a = lo.floor().to_integer();
        if a != hi.floor().to_integer() {
            break;
        }
        let a_r = BigRational::from_integer(a.clone());
        let (f_lo, f_hi) = (&lo - &a_r, &hi - &a_r);
        match (f_lo.is_zero(), f_hi.is_zero()) {
            (true, true) => {
                out.push(a);
                return (out, true);
            }
            (false, false) => {}
            _ => break,
        }
        out.push(a);
        // x -> 1/(x - a) is decreasing on (a, a + 1).
        (lo, hi) = (f_hi.recip(), f_lo.recip());
    }
    (out, false)
}

/// Expand `tau` until `done` accepts the convergents, escalating precision as
/// needed.
pub fn expand_cf_until(
    tau: &Real,
    budget: &PrecisionBudget,
    limit: usize,
    done: impl Fn(&[Convergent]) -> bool,
) -> Result<ContinuedFraction, NumericError> {
    if let Some(r) = tau.as_rational() {
        let (quotients, terminated) = certified_quotients(r.clone(), r.clone(), limit);
        return Ok(ContinuedFraction::from_quotients(quotients, 0, terminated));
    }
    let mut best: Option<ContinuedFraction> = None;
    for bits in budget.levels() {
        let x = match tau.enclose(bits) {
            Ok(x) => x,
            Err(e) if e.is_retryable() => continue,
            Err(e) => return Err(e),
        };
        let (quotients, terminated) = certified_quotients(x.lo_rational(), x.hi_rational(), limit);
        if let Some(prev) = &best {
            let n = prev.partial_quotients.len().min(quotients.len());
            if prev.partial_quotients[..n] != quotients[..n] {
                return Err(NumericError::Domain(format!(
                    "certified quotients disagree at {bits} bits"
                )));
            }
        }
        let cf = ContinuedFraction::from_quotients(quotients, bits, terminated);
        if terminated || cf.partial_quotients.len() >= limit || done(&cf.convergents) {
            return Ok(cf);
        }
        best = Some(cf);
    }
    let got = best.as_ref().map_or(0, |b| b.partial_quotients.len());
    Err(NumericError::Escalation {
        what: format!("partial quotient a_{got} not certified"),
        bits: budget.max_bits,
        best: None,
    })
}

/// Expand until some `q_k > min_q`, plus `extra` further convergents for
/// retries.
pub fn expand_cf(
    tau: &Real,
    min_q: &BigInt,
    extra: usize,
    budget: &PrecisionBudget,
) -> Result<ContinuedFraction, NumericError> {
    let keep = |cs: &[Convergent]| cs.iter().position(|c| &c.q > min_q).map(|i| i + extra + 1);
    let mut cf = expand_cf_until(tau, budget, usize::MAX, |cs| {
        keep(cs).is_some_and(|n| cs.len() >= n)
    })?;
    if let Some(n) = keep(&cf.convergents) {
        cf.partial_quotients.truncate(n);
        cf.convergents.truncate(n);
    }
    Ok(cf)
}

/// The first `n` partial quotients.
pub fn expand_cf_terms(
    tau: &Real,
    n: usize,
    budget: &PrecisionBudget,
) -> Result<ContinuedFraction, NumericError> {
    expand_cf_until(tau, budget, n, |cs| cs.len() >= n)
}

/// `q` is a convergent denominator of `cf` and `p/q` the matching fraction.
pub fn is_convergent(cf: &ContinuedFraction, p: &BigInt, q: &BigInt) -> bool {
    cf.convergents.iter().any(|c| &c.p == p && &c.q == q) && p.gcd(q).is_one()
}
