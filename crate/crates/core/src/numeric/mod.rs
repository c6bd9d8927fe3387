//! Certified real arithmetic.
//!
//! - [`Dyadic`]: exact binary fractions with directed rounding
//! - [`RealInterval`]: enclosures `[lo, hi]` with dyadic endpoints
//! - [`Real`]: a recomputable quantity that can be enclosed at any precision
//!   and refined to a requested width
//! - [`isolate_cubic_roots`]: real root and complex pair of an integer cubic
//!
//! Nothing here uses hardware floating point on a certified path.

mod cubic;
pub mod decimal;
mod dyadic;
mod elementary;
mod interval;
mod real;

pub use cubic::{isolate_cubic_roots, ComplexPairEnclosure, Cubic};
pub use dyadic::{Dyadic, Round};
pub use elementary::{ln2, ln_dyadic, ln_interval, sqrt_interval};
pub use interval::RealInterval;
pub use real::Real;

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cubic has three real roots")]
    ThreeRealRoots,
    #[error("cubic has a repeated root")]
    RepeatedRoot,
    #[error("leading coefficient is zero")]
    DegenerateCubic,
    /// The enclosure is too wide for the requested decision; more bits may help.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("ambiguous: {0}")]
    Ambiguous(String),
    #[error("precision escalation failed at {bits} bits: {what}")]
    Escalation {
        what: String,
        bits: u32,
        best: Option<RealInterval>,
    },
}

impl NumericError {
    /// Errors that a retry at higher precision may resolve.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            NumericError::InsufficientPrecision(_) | NumericError::Ambiguous(_)
        )
    }
}

/// Working precision schedule: start at `working_bits`, multiply by
/// `escalation_factor` on failure, give up past `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrecisionBudget {
    pub working_bits: u32,
    pub max_bits: u32,
    pub escalation_factor: u32,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget {
            working_bits: 256,
            max_bits: 16384,
            escalation_factor: 2,
        }
    }
}

impl PrecisionBudget {
    pub fn new(
        working_bits: u32,
        max_bits: u32,
        escalation_factor: u32,
    ) -> Result<Self, NumericError> {
        if working_bits == 0 || working_bits > max_bits || escalation_factor < 2 {
            return Err(NumericError::Domain(format!(
                "invalid precision budget: working {working_bits}, max {max_bits}, factor {escalation_factor}"
            )));
        }
        Ok(PrecisionBudget {
            working_bits,
            max_bits,
            escalation_factor,
        })
    }

    /// The precision ladder `working, working*f, ..., max`.
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        let (max, factor) = (self.max_bits, self.escalation_factor);
        std::iter::successors(Some(self.working_bits), move |&b| {
            (b < max).then(|| b.saturating_mul(factor).min(max))
        })
    }

    /// Run `f` at successive precisions until it succeeds or the ladder ends.
    /// Only retryable errors trigger escalation.
    pub fn escalate<T>(
        &self,
        what: &str,
        mut f: impl FnMut(u32) -> Result<T, NumericError>,
    ) -> Result<T, NumericError> {
        let mut last = None;
        for bits in self.levels() {
            match f(bits) {
                Ok(v) => return Ok(v),
                Err(e) if e.is_retryable() => last = Some((bits, e)),
                Err(e) => return Err(e),
            }
        }
        let (bits, err) = last.expect("ladder has at least one level");
        Err(NumericError::Escalation {
            what: format!("{what}: {err}"),
            bits,
            best: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_levels_double_up_to_max() {
        let b = PrecisionBudget::new(256, 2000, 2).unwrap();
        assert_eq!(b.levels().collect::<Vec<_>>(), vec![256, 512, 1024, 2000]);
        assert_eq!(PrecisionBudget::new(64, 64, 2).unwrap().levels().count(), 1);
        assert!(PrecisionBudget::new(512, 256, 2).is_err());
        assert!(PrecisionBudget::new(64, 128, 1).is_err());
    }

    #[test]
    fn escalate_stops_on_hard_errors() {
        let b = PrecisionBudget::default();
        let mut calls = 0;
        let r: Result<(), _> = b.escalate("x", |_| {
            calls += 1;
            Err(NumericError::Domain("no".into()))
        });
        assert!(matches!(r, Err(NumericError::Domain(_))));
        assert_eq!(calls, 1);
        let r = b.escalate("x", |bits| {
            if bits >= 1024 {
                Ok(bits)
            } else {
                Err(NumericError::InsufficientPrecision("more".into()))
            }
        });
        assert_eq!(r.unwrap(), 1024);
    }
}
