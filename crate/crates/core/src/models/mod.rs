//! Training and prediction for MF, TMF, TMF+Dropout, IFWMF, and the FARP
//! ensemble.

mod farp;
mod serialize;
mod train;

pub use farp::{farp_fit, farp_predict, FarpEnsemble};
pub use serialize::{load_ensemble, load_model, save_ensemble, save_model, ModelIoError};
pub use train::{train_ifwmf, train_mf, train_tmf, train_tmf_dropout, TrainError};

use serde::{Deserialize, Serialize};

use crate::data::FrequencyTable;
use crate::numeric::{
    dot_prefix, poisson_cdf_cutoff, sigmoid_rank_count, sigmoid_rank_raw, DenseFactor,
    DEFAULT_CDF_EPSILON,
};
use crate::Scalar;

/// Which objective a latent model was trained with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Mf,
    Tmf,
    TmfDropout,
    Ifwmf,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Mf => "mf",
            ModelKind::Tmf => "tmf",
            ModelKind::TmfDropout => "tmf-dropout",
            ModelKind::Ifwmf => "ifwmf",
        }
    }
}

/// SGD hyperparameters.
///
/// `reg` is the L2 weight on the latent factors, `learning_rate` the SGD
/// step size. With an empty validation split training always runs
/// `max_epochs`; otherwise it stops after `patience` epochs without a
/// validation improvement and keeps the best-epoch parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<S> {
    pub rank: usize,
    pub reg: S,
    pub learning_rate: S,
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
}

impl<S: Scalar> TrainConfig<S> {
    pub fn new(rank: usize, reg: S) -> Self {
        Self {
            rank,
            reg,
            learning_rate: S::from_f64_lossy(0.005),
            max_epochs: 200,
            patience: 5,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Sigmoid parameters governing the active-rank count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig<S> {
    pub steepness: S,
    pub midpoint: S,
}

/// A trained factorization model: user and item factors of a single rank
/// plus the configuration and the training metadata needed to reproduce and
/// apply it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentModel<S> {
    pub kind: ModelKind,
    pub user_factors: DenseFactor<S>,
    pub item_factors: DenseFactor<S>,
    pub config: TrainConfig<S>,
    pub trunc: Option<TruncationConfig<S>>,
    pub rho: Option<S>,
    /// Mean training rating, the fallback prediction for unseen entities.
    pub global_mean: S,
    /// Epochs actually executed.
    pub epochs_run: usize,
    /// Epoch whose parameters were kept (None without a validation split).
    pub best_epoch: Option<usize>,
    /// Validation RMSE after each epoch (empty without a validation split).
    pub val_trace: Vec<f64>,
}

impl<S: Scalar> LatentModel<S> {
    pub fn rank(&self) -> usize {
        self.config.rank
    }

    pub fn n_users(&self) -> usize {
        self.user_factors.rows()
    }

    pub fn n_items(&self) -> usize {
        self.item_factors.rows()
    }

    /// Prediction interface with the unseen-entity fallback, dispatching on
    /// the model kind. `freq` must be the training-split frequency table.
    pub fn predictor<'a>(&'a self, freq: &'a FrequencyTable<S>) -> Predictor<'a, S> {
        Predictor { model: self, freq }
    }
}

/// Plain inner product of the user and item factor rows (Eq. of MF).
pub fn predict_mf<S: Scalar>(model: &LatentModel<S>, user: usize, item: usize) -> S {
    let r = model.rank();
    dot_prefix(model.user_factors.row(user), model.item_factors.row(item), r)
}

/// Inner product restricted to the sigmoid active-rank prefix, recomputed
/// from the stored truncation parameters and the supplied frequencies.
pub fn predict_tmf<S: Scalar>(
    model: &LatentModel<S>,
    user: usize,
    item: usize,
    freq: &FrequencyTable<S>,
) -> S {
    let trunc = model.trunc.expect("TMF model carries truncation parameters");
    let k = sigmoid_rank_count(
        freq.min_norm(user, item),
        model.rank(),
        trunc.steepness,
        trunc.midpoint,
    );
    dot_prefix(model.user_factors.row(user), model.item_factors.row(item), k)
}

/// Deterministic dropout prediction: inner product over the first
/// `min(s, r)` coordinates where `s` is the Poisson CDF cutoff at the
/// rating's sigmoid rate.
pub fn predict_tmf_dropout<S: Scalar>(
    model: &LatentModel<S>,
    user: usize,
    item: usize,
    freq: &FrequencyTable<S>,
) -> S {
    let trunc = model.trunc.expect("dropout model carries truncation parameters");
    let rate = dropout_rate(
        freq.min_norm(user, item),
        model.rank(),
        trunc.steepness,
        trunc.midpoint,
    );
    let s = prediction_active_count(rate, model.rank());
    dot_prefix(model.user_factors.row(user), model.item_factors.row(item), s)
}

/// Poisson rate for a rating: the unrounded sigmoid value, floored away
/// from zero so the rate stays valid when the sigmoid underflows.
pub(crate) fn dropout_rate<S: Scalar>(f_min: S, rank: usize, steepness: S, midpoint: S) -> f64 {
    sigmoid_rank_raw(f_min, rank, steepness, midpoint)
        .to_f64()
        .expect("rate fits f64")
        .max(1e-12)
}

/// `min(poisson_cdf_cutoff(rate, eps), rank)`; can be 0 for a vanishing
/// rate, in which case the prediction is an empty sum.
pub(crate) fn prediction_active_count(rate: f64, rank: usize) -> usize {
    (poisson_cdf_cutoff(rate, DEFAULT_CDF_EPSILON) as usize).min(rank)
}

/// Anything that predicts a rating for a dense (user, item) pair.
pub trait RatingPredictor<S> {
    fn predict(&self, user: usize, item: usize) -> S;
}

/// Kind-dispatching predictor over one trained model.
///
/// Pairs touching a user or item with zero training ratings fall back to the
/// training mean: such an entity's factor row was never updated and carries
/// no information.
pub struct Predictor<'a, S> {
    model: &'a LatentModel<S>,
    freq: &'a FrequencyTable<S>,
}

impl<S: Scalar> RatingPredictor<S> for Predictor<'_, S> {
    fn predict(&self, user: usize, item: usize) -> S {
        if self.freq.user_count(user) == 0 || self.freq.item_count(item) == 0 {
            return self.model.global_mean;
        }
        match self.model.kind {
            ModelKind::Mf | ModelKind::Ifwmf => predict_mf(self.model, user, item),
            ModelKind::Tmf => predict_tmf(self.model, user, item, self.freq),
            ModelKind::TmfDropout => predict_tmf_dropout(self.model, user, item, self.freq),
        }
    }
}
