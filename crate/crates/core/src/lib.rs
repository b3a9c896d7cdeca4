//! Comparison and consensus aggregation of non-strict, incomplete rankings.
//!
//! Rankings may contain ties and unranked objects. Two rankings are compared
//! only on the objects both of them rank, either with the scaled
//! tau-extended correlation (`tau_x_hat`), which always spans `[-1, 1]`, or
//! with the unscaled `tau_x` and the Kemeny-Snell family of distances.
//! [`bnb::solve`] finds every complete weak order maximizing the summed
//! correlation with a set of judges.

pub mod aggregation;
pub mod bnb;
pub mod error;
pub mod experiments;
pub mod io;
pub mod ip;
pub mod measures;
pub mod ranking;
pub mod sampling;

pub use aggregation::{
    combined_matrix, cumulative_correlation, cumulative_objective, scaled_combined_matrix, upper_bound, Coefficient,
    CombinedMatrix, PairwiseMatrix, ScaledCombinedMatrix, WeightMatrix,
};
pub use bnb::{default_start, solve, BnbOptions, OptimalitySet};
pub use error::{Error, Result};
pub use measures::{d_ks, d_npks, d_pks, kendall_tau, tau_x, tau_x_hat, Measure, MeasureConfig, PairStats};
pub use ranking::{
    enumerate_weak_orders, is_between, project, psi, psi_inverse, ranking_matrix, reverse, validate, Instance,
    ObjectOrdering, Ranking, RankingKind, RankingMatrix,
};
