//! Weight distributions and exact masking-failure bounds.
//!
//! Everything here is computed in arbitrary-precision integers and
//! rationals; floating point only appears when a value is rendered.

mod bounds;
mod rational;
mod weights;

pub use bounds::{
    binomial, binomial_mixture, binomial_mixture_bound, comparison_curves, deficiency_sum,
    erasure_decoding_failure, lemma2_failure_from_rank, masking_failure_estimate,
    masking_failure_piecewise, masking_failure_upper_bound, normal_decoding_failure,
    rank_deficiency_bound, BoundKind, BoundReport, ComparisonPoint, CurvePoint, RankDistribution,
};
pub use rational::{format_probability, parse_probability, ratio_to_f64};
pub use weights::{
    checked_code_distribution, macwilliams_transform, weight_distribution_approx,
    weight_distribution_exhaustive, WdProvenance, WeightDistribution,
};
