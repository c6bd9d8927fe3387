//! Logarithmic heights, the lower bound for linear forms in three logarithms,
//! and the resolution of `n < H (ln n)^r` into an absolute bound on `n`.
//!
//! Heights are taken with natural logarithms throughout. Bounds that grow
//! with `n` are carried symbolically as `C (1 + ln n)^k` and resolved once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use crate::constants::Constants;
use crate::numeric::{NumericError, PrecisionBudget, Real, RealInterval};

/// Enclose a recipe at the first precision that works.
pub fn enclose(x: &Real, budget: &PrecisionBudget) -> Result<RealInterval, NumericError> {
    budget.escalate("enclosure", |bits| x.enclose(bits))
}

/// Upper bound on a logarithmic height `h(eta)`.
#[derive(Clone, Debug)]
pub struct HeightBound {
    pub name: String,
    pub value: Real,
    pub derivation: String,
    /// Printed value in the source, kept only for comparison.
    pub paper_value: Option<String>,
}

/// `h(p/q) = ln max(|p|, q)` for `p/q` in lowest terms.
pub fn height_rational(p: &BigInt, q: &BigInt) -> Result<HeightBound, NumericError> {
    if !q.is_positive() {
        return Err(NumericError::Domain(format!(
            "denominator must be positive, got {q}"
        )));
    }
    if !p.gcd(q).is_one() {
        return Err(NumericError::Domain(format!(
            "{p}/{q} is not in lowest terms"
        )));
    }
    let m = std::cmp::max(p.abs(), q.clone());
    Ok(HeightBound {
        name: format!("h({p}/{q})"),
        value: Real::int(m.clone()).ln(),
        derivation: format!("ln max(|{p}|, {q}) = ln {m}"),
        paper_value: None,
    })
}

/// `h(a) = (1/3) ln 31`: `a` is a root of `31x^3 - 3x - 1` whose conjugates
/// lie inside the unit disc.
pub fn height_a() -> Real {
    Real::int(31).ln() / Real::int(3)
}

/// `h(9a/d1) <= h(9) + h(a) + h(d1) <= 2 ln 9 + (1/3) ln 31`, uniform in `d1`.
pub fn height_eta1_step1() -> HeightBound {
    let ln9 = Real::int(9).ln();
    HeightBound {
        name: "h(eta1) step 1".into(),
        value: (&ln9 + &ln9 + height_a()).memo(),
        derivation: "h(9) + h(a) + h(d1) <= 2 ln 9 + (1/3) ln 31".into(),
        paper_value: Some("2.41".into()),
    }
}

/// The additive constant `4 ln 9 + (1/3) ln 31 + 2 ln 2` of the step-2 chain.
pub fn step2_additive_constant() -> Real {
    let ln9 = Real::int(9).ln();
    ln9.clone() * Real::int(4) + height_a() + Real::int(2).ln() * Real::int(2)
}

/// `h((d1 10^m1 - (d1 - d2)) / (9a)) <= c2 (1 + ln n)`, where
/// `m1 ln 10 < c1 (1 + ln n)` and `c2 = c1 + 4 ln 9 + (1/3) ln 31 + 2 ln 2`.
pub fn height_eta1_step2(c1: &Real) -> HeightBound {
    HeightBound {
        name: "h(eta1) step 2 / (1 + ln n)".into(),
        value: (c1 + &step2_additive_constant()).memo(),
        derivation: "m1 ln 10 + 4 ln 9 + (1/3) ln 31 + 2 ln 2 <= (c1 + 4 ln 9 + (1/3) ln 31 + 2 ln 2)(1 + ln n)".into(),
        paper_value: Some("7.1e12".into()),
    }
}

/// Data for `log |eta_1^b_1 ... eta_t^b_t - 1| > -C (1 + ln B) A_1 ... A_t`.
///
/// `A_j` is `a[j] * (1 + ln n)^log_n_powers[j]`; `B` is taken to be `n`.
#[derive(Clone, Debug)]
pub struct LinearFormSpec {
    pub t: u32,
    pub degree: u32,
    pub a: Vec<Real>,
    pub log_n_powers: Vec<u32>,
    pub exponents: Vec<String>,
}

impl LinearFormSpec {
    pub fn validate(&self, budget: &PrecisionBudget) -> Result<(), NumericError> {
        if self.t < 2
            || self.degree < 1
            || self.a.len() != self.t as usize
            || self.log_n_powers.len() != self.t as usize
        {
            return Err(NumericError::Domain(format!(
                "malformed linear form: t = {}, D = {}",
                self.t, self.degree
            )));
        }
        let floor = RealInterval::from_ratio(&16.into(), &100.into(), 64);
        for (j, a) in self.a.iter().enumerate() {
            if !floor.certainly_le(&enclose(a, budget)?) {
                return Err(NumericError::Domain(format!("A_{} below 0.16", j + 1)));
            }
        }
        Ok(())
    }
}

/// `C (1 + ln n)^log_n_power` with `log |Gamma| > -C (1 + ln n)^log_n_power`.
#[derive(Clone, Debug)]
pub struct MatveevBound {
    pub coefficient: Real,
    pub log_n_power: u32,
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + ln D)`, the part independent of `A_j`.
pub fn matveev_base(t: u32, degree: u32) -> Real {
    let thirty_pow: BigInt = Pow::pow(BigInt::from(30), t + 3);
    let t4: BigInt = Pow::pow(BigInt::from(t), 4u32);
    let d = Real::int(degree);
    Real::ratio(14, 10)
        * Real::int(thirty_pow)
        * Real::int(t4)
        * Real::int(t).sqrt()
        * Real::int(degree * degree)
        * (Real::int(1) + d.ln())
}

pub fn matveev_coefficient(spec: &LinearFormSpec) -> MatveevBound {
    let coefficient = spec
        .a
        .iter()
        .fold(matveev_base(spec.t, spec.degree), |acc, a| acc * a)
        .memo();
    MatveevBound {
        coefficient,
        log_n_power: 1 + spec.log_n_powers.iter().sum::<u32>(),
    }
}

/// From `L < H (ln L)^r` with `H > (4r^2)^r`, an integer `N` with `L < N`:
/// the ceiling of `2^r H (ln H)^r`.
pub fn resolve_n_bound(r: u32, h: &Real, budget: &PrecisionBudget) -> Result<BigInt, NumericError> {
    if r == 0 {
        return Err(NumericError::Domain("r must be at least 1".into()));
    }
    let threshold: BigInt = Pow::pow(BigInt::from(4 * r * r), r);
    let h_iv = enclose(h, budget)?;
    if !RealInterval::from_int(threshold.clone()).certainly_lt(&h_iv) {
        return Err(NumericError::Domain(format!(
            "hypothesis H > (4r^2)^r = {threshold} not certified"
        )));
    }
    let l = Real::int(BigInt::from(1) << r as usize) * h * h.ln().powi(r as i64);
    Ok(enclose(&l, budget)?.hi().ceil())
}

/// Values printed in the source for the initial bounds, used only for the
/// discrepancy report and the `--paper-constants` mode.
pub mod paper {
    pub const H_ETA1_STEP1: &str = "2.41";
    pub const A1_STEP1: &str = "7.23";
    pub const MATVEEV_STEP1: &str = "6.9e12";
    pub const M1_LOG10_STEP1: &str = "7.0e12";
    pub const H_ETA1_STEP2: &str = "7.1e12";
    pub const MATVEEV_STEP2: &str = "2.0e25";
    pub const N_BOUND: &str = "2.15e29";
    pub const M_SUM_BOUND: &str = "3.56e28";
    pub const BIG_M: &str = "1e29";
}

#[derive(Clone, Debug)]
pub struct InitialBounds {
    pub heights: Vec<HeightBound>,
    pub stage1: MatveevBound,
    pub stage2: MatveevBound,
    /// `c1` with `m1 ln 10 < c1 (1 + ln n)`.
    pub m1_bound_coeff: Real,
    /// `r` and `H` in `n < H (ln n)^r`.
    pub r: u32,
    pub h: Real,
    pub n_bound: BigInt,
    pub m_sum_bound: BigInt,
    /// True if the bounds were taken verbatim from the source.
    pub from_paper: bool,
}

/// Step 1 and step 2 bounds for solutions with `n > cutoff`.
pub fn initial_bounds(
    c: &Constants,
    cutoff: u64,
    budget: &PrecisionBudget,
) -> Result<InitialBounds, NumericError> {
    initial_bounds_with(c, height_eta1_step1(), cutoff, budget)
}

pub(crate) fn initial_bounds_with(
    c: &Constants,
    h1: HeightBound,
    cutoff: u64,
    budget: &PrecisionBudget,
) -> Result<InitialBounds, NumericError> {
    let three = Real::int(3);
    let ln10x3 = (&three * &c.ln10).memo();
    let alpha_h = HeightBound {
        name: "h(alpha)".into(),
        value: (&c.ln_alpha / &three).memo(),
        derivation: "(1/3) ln alpha".into(),
        paper_value: None,
    };
    let ten_h = height_rational(&10.into(), &1.into())?;

    // Step 1: |Lambda_1| < 28 / 10^m1.
    let s1 = LinearFormSpec {
        t: 3,
        degree: 3,
        a: vec![
            (&three * &h1.value).memo(),
            c.ln_alpha.clone(),
            ln10x3.clone(),
        ],
        log_n_powers: vec![0, 0, 0],
        exponents: vec!["1".into(), "-n".into(), "m1 + m2".into()],
    };
    s1.validate(budget)?;
    let stage1 = matveev_coefficient(&s1);
    let c1 = (&stage1.coefficient + &Real::int(28).ln()).memo();

    // Step 2: |Lambda_2| < 2 / alpha^n.
    let h2 = height_eta1_step2(&c1);
    let s2 = LinearFormSpec {
        t: 3,
        degree: 3,
        a: vec![(&three * &h2.value).memo(), c.ln_alpha.clone(), ln10x3],
        log_n_powers: vec![1, 0, 0],
        exponents: vec!["1".into(), "-n".into(), "m2".into()],
    };
    s2.validate(budget)?;
    let stage2 = matveev_coefficient(&s2);

    // n ln alpha < (C2 + ln 2)(1 + ln n)^2 and, for n > cutoff,
    // (1 + ln n)^2 <= (1 + 1/ln(cutoff + 1))^2 (ln n)^2.
    let widen = Real::int(1) + Real::int(1) / Real::int(cutoff + 1).ln();
    let h = ((&stage2.coefficient + &c.ln2) / &c.ln_alpha * widen.powi(2)).memo();
    let n_bound = resolve_n_bound(2, &h, budget)?;
    let m_sum_bound = m_sum_from_n(c, &n_bound, budget)?;
    if n_bound <= BigInt::from(cutoff) {
        return Err(NumericError::Domain(format!(
            "n bound {n_bound} does not exceed the cutoff {cutoff}"
        )));
    }

    Ok(InitialBounds {
        heights: vec![h1, alpha_h, ten_h, h2],
        stage1,
        stage2,
        m1_bound_coeff: c1,
        r: 2,
        h,
        n_bound,
        m_sum_bound,
        from_paper: false,
    })
}

/// `m1 + m2 < (n ln alpha + 2) / ln 10`, rounded up.
pub fn m_sum_from_n(
    c: &Constants,
    n_bound: &BigInt,
    budget: &PrecisionBudget,
) -> Result<BigInt, NumericError> {
    let x = (Real::int(n_bound.clone()) * &c.ln_alpha + Real::int(2)) / &c.ln10;
    Ok(enclose(&x, budget)?.hi().ceil())
}

/// The source's bounds `n < 2.15e29`, `m1 + m2 < 3.56e28`, with the same
/// symbolic records as the native chain for reporting.
pub fn paper_initial_bounds(
    c: &Constants,
    cutoff: u64,
    budget: &PrecisionBudget,
) -> Result<InitialBounds, NumericError> {
    let mut b = initial_bounds(c, cutoff, budget)?;
    b.n_bound = BigInt::from(215) * Pow::pow(BigInt::from(10), 27u32);
    b.m_sum_bound = BigInt::from(356) * Pow::pow(BigInt::from(10), 26u32);
    b.from_paper = true;
    Ok(b)
}

/// Smallest power of ten that is at least `x`.
pub fn power_of_ten_at_least(x: &BigInt) -> BigInt {
    let mut p = BigInt::from(1);
    while &p < x {
        p *= 10;
    }
    p
}
