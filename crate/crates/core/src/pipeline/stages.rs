//! The two reduction stages.
//!
//! Stage 1 bounds `m1` from `|(m1 + m2) tau - n + mu(d1)| < (56 / ln alpha) 10^(-m1)`.
//! Stage 2 bounds `n` from `|m2 tau - n + mu(d1, d2, m1)| < (4 / ln alpha) alpha^(-n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

use crate::constants::Constants;
use crate::numeric::decimal::parse_decimal;
use crate::numeric::{NumericError, PrecisionBudget, Real};
use crate::par::Execution;
use crate::reduction::{expand_cf, reduce, ContinuedFraction, ReductionInstance, ReductionOutcome};

/// Convergents kept past the first `q > 6M` for per-member retries.
pub const EXTRA_CONVERGENTS: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("no convergent among the first {available} gives eps > 0 for {member}")]
    NoPositiveEpsilon { member: String, available: usize },
}

impl StageError {
    pub fn is_precision(&self) -> bool {
        matches!(self, StageError::Numeric(NumericError::Escalation { .. }))
    }
}

/// `mu(d1) = ln(d1 / (9a)) / ln alpha`.
pub fn stage1_mu(c: &Constants, d1: u8) -> Real {
    (Real::int(d1) / (Real::int(9) * &c.a)).ln() / &c.ln_alpha
}

/// `mu(d1, d2, m1) = ln((d1 10^m1 - (d1 - d2)) / (9a)) / ln alpha`.
pub fn stage2_mu(c: &Constants, ln_9a: &Real, d1: u8, d2: u8, m1: u64) -> Real {
    let x = BigInt::from(d1) * Pow::pow(BigInt::from(10), m1) - (i64::from(d1) - i64::from(d2));
    (Real::int(x).ln() - ln_9a) / &c.ln_alpha
}

pub fn stage1_instance(
    c: &Constants,
    d1: u8,
    big_m: &BigInt,
    budget: &PrecisionBudget,
) -> Result<ReductionInstance, NumericError> {
    ReductionInstance::new(
        c.tau.clone(),
        stage1_mu(c, d1),
        Real::int(56) / &c.ln_alpha,
        Real::int(10),
        big_m.clone(),
        budget,
    )
}

pub fn stage2_instance(
    c: &Constants,
    ln_9a: &Real,
    key: (u8, u8, u64),
    big_m: &BigInt,
    budget: &PrecisionBudget,
) -> Result<ReductionInstance, NumericError> {
    let (d1, d2, m1) = key;
    ReductionInstance::new(
        c.tau.clone(),
        stage2_mu(c, ln_9a, d1, d2, m1),
        Real::int(4) / &c.ln_alpha,
        c.alpha.clone(),
        big_m.clone(),
        budget,
    )
}

pub fn ln_9a(c: &Constants) -> Real {
    (Real::int(9) * &c.a).ln().memo()
}

/// Convergents of `tau` through the first `q > 6M` plus retries.
pub fn tau_expansion(
    c: &Constants,
    big_m: &BigInt,
    budget: &PrecisionBudget,
) -> Result<ContinuedFraction, NumericError> {
    expand_cf(&c.tau, &(big_m * 6), EXTRA_CONVERGENTS, budget)
}

#[derive(Clone, Debug)]
pub struct MemberOutcome<K> {
    pub key: K,
    pub outcome: ReductionOutcome,
    /// Inclusive bound `k_bound - 1`.
    pub bound: BigInt,
}

#[derive(Clone, Debug)]
pub struct StageResult<K> {
    pub big_m: BigInt,
    pub q_first: BigInt,
    pub members: Vec<MemberOutcome<K>>,
    pub eps_min: String,
    /// Maximum inclusive bound over members (at least `floor`).
    pub bound: BigInt,
}

fn run_family<K: Copy + Send + Sync + std::fmt::Debug>(
    keys: &[K],
    big_m: &BigInt,
    cf: &ContinuedFraction,
    floor: u64,
    budget: &PrecisionBudget,
    exec: &Execution,
    instance: impl Fn(K) -> Result<ReductionInstance, NumericError> + Sync + Send,
) -> Result<StageResult<K>, StageError> {
    let q_first = cf
        .first_index_above(&(big_m * 6))
        .map(|i| cf.convergents[i].q.clone())
        .ok_or(StageError::NoPositiveEpsilon {
            member: "any".into(),
            available: cf.convergents.len(),
        })?;
    let results = exec.map(keys, |&key| -> Result<MemberOutcome<K>, StageError> {
        let inst = instance(key)?;
        let outcome = reduce(&inst, cf, budget)?.ok_or_else(|| StageError::NoPositiveEpsilon {
            member: format!("{key:?}"),
            available: cf.convergents.len(),
        })?;
        let bound = &outcome.k_bound - 1;
        Ok(MemberOutcome {
            key,
            outcome,
            bound,
        })
    });
    let members = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let bound = members
        .iter()
        .map(|m| m.bound.clone())
        .fold(BigInt::from(floor), std::cmp::max);
    let eps_min = members
        .iter()
        .map(|m| &m.outcome.eps_recorded)
        .min_by_key(|s| parse_decimal(s).unwrap_or_else(|| BigRational::from_integer(0.into())))
        .cloned()
        .unwrap_or_default();
    Ok(StageResult {
        big_m: big_m.clone(),
        q_first,
        members,
        eps_min,
        bound,
    })
}

/// Stage 1 over `d1 = 1..=9`. `m1 = 1` is always allowed, so the bound is at
/// least 1.
pub fn run_stage1(
    c: &Constants,
    big_m: &BigInt,
    cf: &ContinuedFraction,
    budget: &PrecisionBudget,
    exec: &Execution,
) -> Result<StageResult<u8>, StageError> {
    let keys: Vec<u8> = (1..=9).collect();
    run_family(&keys, big_m, cf, 1, budget, exec, |d1| {
        stage1_instance(c, d1, big_m, budget)
    })
}

/// All `(d1, d2, m1)` with `1 <= m1 <= m1_bound`, ordered by `m1`, `d1`, `d2`.
pub fn stage2_keys(m1_bound: u64) -> Vec<(u8, u8, u64)> {
    (1..=m1_bound)
        .flat_map(|m1| (1..=9u8).flat_map(move |d1| (0..=9u8).map(move |d2| (d1, d2, m1))))
        .collect()
}

pub fn run_stage2(
    c: &Constants,
    big_m: &BigInt,
    m1_bound: &BigInt,
    cf: &ContinuedFraction,
    budget: &PrecisionBudget,
    exec: &Execution,
) -> Result<StageResult<(u8, u8, u64)>, StageError> {
    let m1_bound = m1_bound.to_u64().ok_or_else(|| {
        NumericError::Domain(format!("m1 bound {m1_bound} too large to enumerate"))
    })?;
    let keys = stage2_keys(m1_bound);
    let ln_9a = ln_9a(c);
    run_family(&keys, big_m, cf, 0, budget, exec, |key| {
        stage2_instance(c, &ln_9a, key, big_m, budget)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage1_paper_constants() {
        let c = Constants::new();
        let budget = PrecisionBudget::default();
        let big_m = BigInt::from(10).pow(29u32);
        let cf = tau_expansion(&c, &big_m, &budget).unwrap();
        let s1 = run_stage1(&c, &big_m, &cf, &budget, &Execution::Sequential).unwrap();
        assert_eq!(s1.bound, 34.into());
        assert_eq!(s1.eps_min, "0.0168611519871");
        assert_eq!(s1.members.len(), 9);
    }

    #[test]
    fn family_keys() {
        let keys = stage2_keys(3);
        assert_eq!(keys.len(), 270);
        assert_eq!(keys[0], (1, 0, 1));
        assert!(keys.contains(&(8, 8, 2)));
    }
}
