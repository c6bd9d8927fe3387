//! Continued fractions of `tau = ln 10 / ln alpha` and the Baker-Davenport
//! reduction of the large initial bounds.

mod cf;
mod davenport;

pub use cf::{
    convergents_of, determinants_ok, expand_cf, expand_cf_terms, expand_cf_until, is_convergent,
    ContinuedFraction, Convergent,
};
pub use davenport::{
    eps_decimal, epsilon, reduce, reduced_bound, small_linear_form_bound, Epsilon,
    ReductionInstance, ReductionOutcome, EPS_DIGITS,
};
