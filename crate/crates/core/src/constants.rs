//! Shared transcendental constants of the Narayana problem.
//!
//! Every quantity is a memoized [`Real`] recipe, so a single `Constants`
//! value can be passed around and refined to whatever width a stage needs.

use crate::numeric::{Cubic, Real};

/// `x^3 - x^2 - 1`, the characteristic polynomial of the recurrence.
pub fn characteristic_cubic() -> Cubic {
    Cubic::new(1, -1, 0, -1)
}

/// `31 x^3 - 3x - 1`, the minimal polynomial of `a = alpha^2 / (alpha^3 + 2)`.
pub fn binet_coefficient_cubic() -> Cubic {
    Cubic::new(31, 0, -3, -1)
}

#[derive(Clone, Debug)]
pub struct Constants {
    pub alpha: Real,
    /// Leading Binet coefficient `alpha^2 / (alpha^3 + 2)`.
    pub a: Real,
    pub ln_alpha: Real,
    pub ln2: Real,
    pub ln10: Real,
    /// `ln 10 / ln alpha`.
    pub tau: Real,
}

impl Constants {
    pub fn new() -> Self {
        let alpha = Real::cubic_root(characteristic_cubic()).memo();
        let a = (alpha.powi(2) / (alpha.powi(3) + Real::int(2))).memo();
        let ln_alpha = alpha.ln().memo();
        let ln2 = Real::int(2).ln().memo();
        let ln10 = Real::int(10).ln().memo();
        let tau = (&ln10 / &ln_alpha).memo();
        Constants {
            alpha,
            a,
            ln_alpha,
            ln2,
            ln10,
            tau,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::decimal::parse_decimal;
    use crate::numeric::Dyadic;

    const A: &str = "0.417237987926218777621475516410292547102392343481151658390086";
    const LN_ALPHA: &str = "0.382245085840035641329358499184857393759416422420195430029284";

    fn check(x: &Real, reference: &str) {
        let iv = x.refine(&Dyadic::pow2(-190), &Default::default()).unwrap();
        let r = parse_decimal(reference).unwrap();
        let tol = parse_decimal("1e-55").unwrap();
        assert!(
            iv.lo_rational() <= &r + &tol && &r - &tol <= iv.hi_rational(),
            "{iv:?} vs {reference}"
        );
    }

    #[test]
    fn binet_coefficient_and_log_alpha() {
        let c = Constants::new();
        check(&c.a, A);
        check(&c.ln_alpha, LN_ALPHA);
    }

    #[test]
    fn a_is_the_real_root_of_its_minimal_polynomial() {
        let c = Constants::new();
        let from_alpha = c.a.enclose(300).unwrap();
        let root = Real::cubic_root(binet_coefficient_cubic())
            .enclose(300)
            .unwrap();
        assert!(from_alpha.intersect(&root).is_some());
    }
}
