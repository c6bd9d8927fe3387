//! Exhaustive low-range search and the independent enumerate-and-intersect
//! oracle.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Pow;

use crate::par::Execution;
use crate::repdigit::{decompose, enumerate_values, ConcatPattern};
use crate::sequence::narayana_terms;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub n: u64,
    pub value: BigUint,
    pub pattern: ConcatPattern,
}

/// Every `n <= cutoff` whose `N_n` is a concatenation of two repdigits.
pub fn low_range_search(cutoff: u64) -> Vec<Solution> {
    narayana_terms()
        .take(cutoff as usize + 1)
        .enumerate()
        .filter_map(|(n, value)| {
            decompose(&value).map(|pattern| Solution {
                n: n as u64,
                value,
                pattern,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub max_digits: u64,
    pub patterns: usize,
    /// Values found by both paths, ascending.
    pub values: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("oracle mismatch below 10^{max_digits}: only by enumeration {only_enumeration:?}, only by decomposition {only_decomposition:?}")]
pub struct OracleMismatch {
    pub max_digits: u64,
    pub only_enumeration: Vec<BigUint>,
    pub only_decomposition: Vec<BigUint>,
}

/// Compare the values of all patterns with at most `max_digits` digits that
/// are Narayana numbers against the decomposition-based search over the same
/// range.
pub fn oracle_cross_check(
    max_digits: u64,
    exec: &Execution,
) -> Result<OracleReport, OracleMismatch> {
    let limit: BigUint = Pow::pow(BigUint::from(10u32), max_digits);
    let terms: Vec<BigUint> = narayana_terms().take_while(|t| t < &limit).collect();
    let term_set: BTreeSet<&BigUint> = terms.iter().collect();

    let patterns: Vec<ConcatPattern> = enumerate_values(max_digits).map(|(p, _)| p).collect();
    let values = exec.map(&patterns, |p| p.value());
    let by_enumeration: BTreeSet<BigUint> = values
        .into_iter()
        .filter(|v| term_set.contains(v))
        .collect();

    let by_decomposition: BTreeSet<BigUint> = terms
        .iter()
        .filter(|t| decompose(t).is_some())
        .cloned()
        .collect();

    if by_enumeration != by_decomposition {
        return Err(OracleMismatch {
            max_digits,
            only_enumeration: by_enumeration
                .difference(&by_decomposition)
                .cloned()
                .collect(),
            only_decomposition: by_decomposition
                .difference(&by_enumeration)
                .cloned()
                .collect(),
        });
    }
    Ok(OracleReport {
        max_digits,
        patterns: patterns.len(),
        values: by_enumeration.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOLUTIONS: [(u64, u32); 7] = [
        (9, 13),
        (10, 19),
        (11, 28),
        (12, 41),
        (13, 60),
        (14, 88),
        (17, 277),
    ];

    fn summary(s: &[Solution]) -> Vec<(u64, u32)> {
        s.iter()
            .map(|s| (s.n, u32::try_from(&s.value).unwrap()))
            .collect()
    }

    #[test]
    fn search_examples() {
        assert_eq!(summary(&low_range_search(250)), SOLUTIONS);
        assert_eq!(summary(&low_range_search(20)), SOLUTIONS);
        assert!(low_range_search(8).is_empty());
    }

    #[test]
    fn oracle_examples() {
        let exec = Execution::Sequential;
        let two = oracle_cross_check(2, &exec).unwrap();
        assert_eq!(two.values, [13u32, 19, 28, 41, 60, 88].map(BigUint::from));
        let three = oracle_cross_check(3, &exec).unwrap();
        assert_eq!(three.values.len(), 7);
    }
}
