//! Deterministic random streams and the small numeric kernels shared by all
//! model variants.

mod dense;
mod poisson;
mod stream;

pub use dense::{dot, dot_prefix, DenseFactor};
pub use poisson::{poisson_cdf_cutoff, poisson_sample, PoissonError};
pub use stream::SeededStream;

use crate::Scalar;

/// Number of active latent coordinates for one (user, item) pair.
///
/// Invariant: `1 <= k <= rank` of the model that produced it.
pub type ActiveRankCount = usize;

/// Default tail bound for the Poisson CDF cutoff used at prediction time.
pub const DEFAULT_CDF_EPSILON: f64 = 1e-6;

/// Unrounded sigmoid rank value `r / (1 + e^(-k(f_min - z)))`.
///
/// This is the Poisson rate used by the dropout variant; it can be well
/// below 1 for very infrequent entities.
pub fn sigmoid_rank_raw<S: Scalar>(f_min: S, rank: usize, steepness: S, midpoint: S) -> S {
    let r = S::from_usize(rank).expect("rank fits scalar");
    r / (S::one() + (-(steepness * (f_min - midpoint))).exp())
}

/// Active-rank count: the sigmoid value rounded to the nearest integer and
/// clamped into `[1, rank]`.
///
/// The floor of 1 guarantees every rating updates at least one coordinate.
pub fn sigmoid_rank_count<S: Scalar>(
    f_min: S,
    rank: usize,
    steepness: S,
    midpoint: S,
) -> ActiveRankCount {
    debug_assert!(rank >= 1);
    let raw = sigmoid_rank_raw(f_min, rank, steepness, midpoint);
    let rounded = raw.round().to_usize().unwrap_or(0);
    rounded.clamp(1, rank)
}

/// Error weight `1 / (1 + rho * f_min)` for inverse-frequency weighting.
///
/// Equals 1 for unseen entities and decays toward `1/(1+rho)` as the
/// normalized frequency approaches 1.
pub fn inverse_frequency_weight<S: Scalar>(f_min: S, rho: S) -> S {
    S::one() / (S::one() + rho * f_min)
}
