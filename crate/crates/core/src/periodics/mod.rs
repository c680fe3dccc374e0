//! Keyed families with hidden periods, coset truncation, and the exhaustive
//! period oracle that every attack result is checked against.
//!
//! A family is `f(i, x)` on words. Decoupled families carry the split
//! `f(i, x) = g1(x) ⊕ p(i, x)` where only `g1` needs the secret oracle;
//! for sum constructions `p(i, x) = h(x) ⊕ q1(x) ⊕ q2(x ⊕ i)`.
//! Truncation aggregates over the low `t` input bits:
//! `F(i, x) = ⊕_u f(i', (x << t) | u)`.

mod family;
mod oracle;
mod predict;
mod truncate;

pub use family::{
    build_p_xor_type, build_xor_type, even_mansour_family, family_for, polymac_family, Coset, Func1, Func2, Lift,
    KeyedFunction, Structure, SumTerms,
};
pub use oracle::{brute_force_periods, KeyPeriods, PeriodReport, PredictionDiff, ENUMERATION_LIMIT};
pub use predict::{predict, Prediction};
pub use truncate::{build_truncated_fl, TruncationParams};
