//! Concatenations of two repdigits: `m1` copies of `d1` followed by `m2`
//! copies of `d2`.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConcatPattern {
    pub d1: u8,
    pub m1: u64,
    pub d2: u8,
    pub m2: u64,
}

impl ConcatPattern {
    pub fn new(d1: u8, m1: u64, d2: u8, m2: u64) -> Option<Self> {
        ((1..=9).contains(&d1) && d2 <= 9 && m1 >= 1 && m2 >= 1).then_some(ConcatPattern {
            d1,
            m1,
            d2,
            m2,
        })
    }

    pub fn total_digits(&self) -> u64 {
        self.m1 + self.m2
    }

    /// `(d1 10^(m1+m2) - (d1 - d2) 10^m2 - d2) / 9`.
    pub fn value(&self) -> BigUint {
        let ten = BigUint::from(10u32);
        let p_all: BigUint = Pow::pow(&ten, self.m1 + self.m2);
        let p2: BigUint = Pow::pow(&ten, self.m2);
        let (d1, d2) = (BigUint::from(self.d1), BigUint::from(self.d2));
        // Signed middle term kept non-negative by moving it across.
        let num = if self.d1 >= self.d2 {
            &d1 * &p_all - BigUint::from(self.d1 - self.d2) * &p2 - &d2
        } else {
            &d1 * &p_all + BigUint::from(self.d2 - self.d1) * &p2 - &d2
        };
        debug_assert!((&num % 9u32).is_zero());
        num / 9u32
    }

    pub fn is_pure_repdigit(&self) -> bool {
        self.d1 == self.d2
    }
}

/// The canonical pattern for `n`, if its decimal string has length at least
/// two and at most two runs. A single run of length `L` maps to `(L-1, 1)`.
pub fn decompose(n: &BigUint) -> Option<ConcatPattern> {
    let s = n.to_str_radix(10);
    let b = s.as_bytes();
    if b.len() < 2 {
        return None;
    }
    let d1 = b[0] - b'0';
    let m1 = b.iter().take_while(|&&c| c == b[0]).count();
    if m1 == b.len() {
        return ConcatPattern::new(d1, m1 as u64 - 1, d1, 1);
    }
    let rest = &b[m1..];
    rest.iter()
        .all(|&c| c == rest[0])
        .then(|| ConcatPattern::new(d1, m1 as u64, rest[0] - b'0', rest.len() as u64))?
}

/// Every pattern with `m1 + m2 <= max_total_digits`, by total length, then
/// `m1`, `d1`, `d2`. Pure repdigits appear once per split.
pub fn enumerate_values(max_total_digits: u64) -> impl Iterator<Item = (ConcatPattern, BigUint)> {
    (2..=max_total_digits).flat_map(|total| {
        (1..total).flat_map(move |m1| {
            (1..=9u8).flat_map(move |d1| {
                (0..=9u8).map(move |d2| {
                    let p = ConcatPattern {
                        d1,
                        m1,
                        d2,
                        m2: total - m1,
                    };
                    (p, p.value())
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn pat(d1: u8, m1: u64, d2: u8, m2: u64) -> ConcatPattern {
        ConcatPattern::new(d1, m1, d2, m2).unwrap()
    }

    #[test]
    fn values() {
        assert_eq!(pat(2, 1, 7, 2).value(), 277u32.into());
        assert_eq!(pat(1, 1, 3, 1).value(), 13u32.into());
        assert_eq!(pat(8, 1, 8, 1).value(), 88u32.into());
        assert_eq!(pat(6, 1, 0, 1).value(), 60u32.into());
    }

    #[test]
    fn invalid_patterns_rejected() {
        assert!(ConcatPattern::new(0, 1, 1, 1).is_none());
        assert!(ConcatPattern::new(1, 0, 1, 1).is_none());
        assert!(ConcatPattern::new(1, 1, 10, 1).is_none());
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose(&277u32.into()), Some(pat(2, 1, 7, 2)));
        assert_eq!(decompose(&88u32.into()), Some(pat(8, 1, 8, 1)));
        assert_eq!(decompose(&129u32.into()), None);
        assert_eq!(decompose(&5u32.into()), None);
        assert_eq!(decompose(&7777u32.into()), Some(pat(7, 3, 7, 1)));
        assert_eq!(decompose(&100u32.into()), Some(pat(1, 1, 0, 2)));
    }

    #[test]
    fn enumeration_counts_and_members() {
        let two: Vec<_> = enumerate_values(2).collect();
        assert_eq!(two.len(), 90);
        assert!(two.contains(&(pat(1, 1, 3, 1), 13u32.into())));
        let three: HashSet<_> = enumerate_values(3).map(|(p, _)| p).collect();
        assert!(three.contains(&pat(2, 1, 7, 2)) && three.contains(&pat(7, 2, 2, 1)));
        for (p, v) in enumerate_values(6) {
            assert!(v >= 10u32.into() && v < BigUint::from(10u32).pow(6u32));
            assert_eq!(decompose(&v).unwrap().value(), p.value());
        }
    }

    #[test]
    fn value_matches_string_concatenation() {
        for (p, v) in enumerate_values(8) {
            let s = format!(
                "{}{}",
                p.d1.to_string().repeat(p.m1 as usize),
                p.d2.to_string().repeat(p.m2 as usize)
            );
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn decompose_matches_run_length_oracle() {
        for n in 0u32..1_000_000 {
            let s = n.to_string();
            let mut runs = 1;
            for w in s.as_bytes().windows(2) {
                if w[0] != w[1] {
                    runs += 1;
                }
            }
            let expected = s.len() >= 2 && runs <= 2;
            let got = decompose(&n.into());
            assert_eq!(got.is_some(), expected, "n = {n}");
            if let Some(p) = got {
                assert_eq!(p.value(), n.into());
            }
        }
    }
}
