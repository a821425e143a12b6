//! Low-rank matrix completion for rating data with a skewed (long-tail)
//! frequency distribution.
//!
//! The crate trains plain matrix factorization alongside four
//! frequency-adaptive variants — a per-quartile model ensemble (FARP),
//! truncated factorization with a sigmoid-controlled active-rank count (TMF),
//! its Poisson-dropout flavor (TMF+Dropout), and inverse-frequency-weighted
//! factorization (IFWMF) — and evaluates them with skew-aware statistics:
//! per-quartile RMSE, item-frequency bucket curves, and MAE accuracy counts.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); concrete
//! `f64` aliases for the main types live at the crate root. All randomized
//! operations take explicit seeds and are reproducible run-to-run.

pub mod data;
pub mod eval;
pub mod harness;
pub mod models;
pub mod numeric;
mod scalar;
pub mod synthgen;

pub use scalar::Scalar;

/// Rating dataset over `f64` values.
pub type Dataset = data::RatingDataset<f64>;
/// Frequency table over `f64` normalized frequencies.
pub type Frequencies = data::FrequencyTable<f64>;
/// Dense factor matrix over `f64`.
pub type Factor = numeric::DenseFactor<f64>;
/// Single trained factorization model over `f64`.
pub type Model = models::LatentModel<f64>;
/// Training hyperparameters over `f64`.
pub type Config = models::TrainConfig<f64>;
/// FARP ensemble over `f64`.
pub type Ensemble = models::FarpEnsemble<f64>;
