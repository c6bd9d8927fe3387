//! Exact Narayana terms, Binet data and the growth bounds that tie the index
//! `n` to the number of decimal digits of `N_n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::constants::{characteristic_cubic, Constants};
use crate::numeric::{
    isolate_cubic_roots, ComplexPairEnclosure, NumericError, PrecisionBudget, Real, RealInterval,
};

/// A linear recurrence `u(k+d) = c_1 u(k+d-1) + ... + c_d u(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceDef {
    /// `c_1, ..., c_d`, nearest term first.
    pub coefficients: Vec<BigInt>,
    pub initial_terms: Vec<BigInt>,
}

impl RecurrenceDef {
    /// `N(k+3) = N(k+2) + N(k)`, `N_0 = 0`, `N_1 = N_2 = 1`.
    pub fn narayana() -> Self {
        RecurrenceDef {
            coefficients: vec![1.into(), 0.into(), 1.into()],
            initial_terms: vec![0.into(), 1.into(), 1.into()],
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn terms(&self) -> Terms<'_> {
        assert_eq!(self.order(), self.initial_terms.len());
        Terms {
            def: self,
            window: self.initial_terms.clone(),
            index: 0,
        }
    }
}

/// Iterator over `u_0, u_1, ...`.
pub struct Terms<'a> {
    def: &'a RecurrenceDef,
    window: Vec<BigInt>,
    index: usize,
}

impl Iterator for Terms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let d = self.def.order();
        if self.index < d {
            self.index += 1;
            return Some(self.window[self.index - 1].clone());
        }
        let next: BigInt = self
            .def
            .coefficients
            .iter()
            .zip(self.window.iter().rev())
            .map(|(c, u)| c * u)
            .sum();
        self.window.remove(0);
        self.window.push(next.clone());
        self.index += 1;
        Some(next)
    }
}

/// Iterator over the Narayana numbers `N_0, N_1, ...`.
pub struct NarayanaTerms {
    a: BigUint,
    b: BigUint,
    c: BigUint,
}

impl Iterator for NarayanaTerms {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let next = &self.c + &self.a;
        let out = std::mem::replace(
            &mut self.a,
            std::mem::replace(&mut self.b, std::mem::replace(&mut self.c, next)),
        );
        Some(out)
    }
}

pub fn narayana_terms() -> NarayanaTerms {
    NarayanaTerms {
        a: BigUint::zero(),
        b: BigUint::one(),
        c: BigUint::one(),
    }
}

/// `N_n`, exactly.
pub fn term(n: u64) -> BigUint {
    narayana_terms().nth(n as usize).expect("infinite iterator")
}

/// Enclosures of the Binet data `N_n = a alpha^n + b beta^n + c gamma^n`.
#[derive(Clone, Debug)]
pub struct BinetParams {
    pub alpha: RealInterval,
    pub beta_gamma: ComplexPairEnclosure,
    pub a: RealInterval,
    /// `|b| = |c| = 1 / |3 beta - 2|`.
    pub bc_modulus: RealInterval,
}

impl BinetParams {
    pub fn compute(budget: &PrecisionBudget) -> Result<Self, NumericError> {
        let prec = budget.working_bits;
        let (alpha, beta_gamma) = isolate_cubic_roots(&characteristic_cubic(), budget)?;
        let guard = prec + 32;
        // a = 1 / (3 alpha - 2) = alpha^2 / (alpha^3 + 2) on the cubic.
        let a = alpha
            .mul_int(&3.into())
            .sub(&RealInterval::from_int(2), guard)
            .recip(prec)?;
        let x = beta_gamma
            .real_part
            .mul_int(&3.into())
            .sub(&RealInterval::from_int(2), guard);
        let y = beta_gamma.imag_part.mul_int(&3.into());
        let m2 = x.square(guard).add(&y.square(guard), guard);
        let bc_modulus = crate::numeric::sqrt_interval(&m2, guard)?.recip(prec)?;
        if !(bc_modulus.hi() < &crate::numeric::Dyadic::one()) {
            return Err(NumericError::InsufficientPrecision(
                "|b| not certified below 1".into(),
            ));
        }
        Ok(BinetParams {
            alpha,
            beta_gamma,
            a,
            bc_modulus,
        })
    }
}

/// Decide a comparison by escalating precision until it is certified.
fn decide(
    budget: &PrecisionBudget,
    what: &str,
    mut f: impl FnMut(u32) -> Result<Option<bool>, NumericError>,
) -> Result<bool, NumericError> {
    budget.escalate(what, |bits| {
        f(bits)?.ok_or_else(|| {
            NumericError::InsufficientPrecision(format!("{what} undecided at {bits} bits"))
        })
    })
}

/// Certified `|N_n - a alpha^n| < alpha^(-n/2)`.
pub fn residual_bound_check(
    c: &Constants,
    n: u64,
    budget: &PrecisionBudget,
) -> Result<bool, NumericError> {
    let n_i = n as i64;
    let nn = Real::int(BigInt::from(term(n)));
    let t = (nn - &c.a * &c.alpha.powi(n_i)).memo();
    let rhs = c.alpha.sqrt().powi(-n_i);
    decide(budget, "residual bound", |bits| {
        let lhs = t.enclose(bits + 2 * n as u32)?.abs();
        let rhs = rhs.enclose(bits + n as u32)?;
        Ok(if lhs.certainly_lt(&rhs) {
            Some(true)
        } else if rhs.certainly_le(&lhs) {
            Some(false)
        } else {
            None
        })
    })
}

/// Certified `alpha^(n - 1 - shift) <= N_n <= alpha^(n - 1)`.
fn sandwich_check(
    c: &Constants,
    n: u64,
    shift: i64,
    budget: &PrecisionBudget,
) -> Result<bool, NumericError> {
    let nn = RealInterval::from_int(BigInt::from(term(n)));
    let lo_exp = n as i64 - 1 - shift;
    let hi_exp = n as i64 - 1;
    let lower = c.alpha.powi(lo_exp);
    let upper = c.alpha.powi(hi_exp);
    let cmp = |bits: u32, x: &Real, le: bool| -> Result<Option<bool>, NumericError> {
        let v = x.enclose(bits + n as u32)?;
        let (a, b) = if le { (&v, &nn) } else { (&nn, &v) };
        Ok(if a.certainly_le(b) {
            Some(true)
        } else if b.certainly_lt(a) {
            Some(false)
        } else {
            None
        })
    };
    Ok(
        decide(budget, "lower growth bound", |bits| cmp(bits, &lower, true))?
            && decide(budget, "upper growth bound", |bits| {
                cmp(bits, &upper, false)
            })?,
    )
}

/// `alpha^(n-2) <= N_n <= alpha^(n-1)`, evaluated exactly as written.
///
/// The left inequality is false for every `n >= 3`, since
/// `N_n / alpha^(n-2)` tends to `a alpha^2 < 1`.
pub fn dominant_bounds_check(
    c: &Constants,
    n: u64,
    budget: &PrecisionBudget,
) -> Result<bool, NumericError> {
    sandwich_check(c, n, 1, budget)
}

/// `alpha^(n-3) <= N_n <= alpha^(n-1)`, the form that holds for all `n >= 1`.
pub fn growth_bounds_check(
    c: &Constants,
    n: u64,
    budget: &PrecisionBudget,
) -> Result<bool, NumericError> {
    sandwich_check(c, n, 2, budget)
}

/// Integers `n` with `s ln 10 - 2 < n ln alpha < s ln 10 + 1`, where `s` is
/// the number of digits. Interval ambiguity only widens the window.
pub fn index_window(
    c: &Constants,
    total_digits: u64,
    budget: &PrecisionBudget,
) -> Result<(u64, u64), NumericError> {
    if total_digits < 2 {
        return Err(NumericError::Domain(format!(
            "need at least two digits, got {total_digits}"
        )));
    }
    let s = Real::int(total_digits);
    let lo = (&s * &c.ln10 - Real::int(2)) / &c.ln_alpha;
    let hi = (&s * &c.ln10 + Real::int(1)) / &c.ln_alpha;
    let target = crate::numeric::Dyadic::pow2(-20);
    let lo = lo.refine(&target, budget)?;
    let hi = hi.refine(&target, budget)?;
    let n_min = lo.lo().floor() + 1;
    let n_max = hi.hi().ceil() - 1;
    let to_u64 = |x: BigInt| u64::try_from(x).map_err(|e| NumericError::Domain(e.to_string()));
    Ok((to_u64(n_min)?, to_u64(n_max)?))
}

pub fn digit_count(x: &BigUint) -> u64 {
    if x.is_zero() {
        1
    } else {
        x.to_str_radix(10).len() as u64
    }
}
