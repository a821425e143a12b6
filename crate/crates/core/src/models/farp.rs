use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{predict_mf, train_mf, LatentModel, RatingPredictor, TrainConfig, TrainError};
use crate::data::{FrequencyTable, Quartile, QuartileMap, RatingDataset};
use crate::Scalar;

/// Per-quartile model ensemble: one MF model per candidate configuration,
/// with the best candidate recorded for each user quartile and each item
/// quartile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FarpEnsemble<S> {
    pub models: Vec<LatentModel<S>>,
    /// Candidate index chosen for each user quartile Q1..Q4.
    pub user_choice: [usize; 4],
    /// Candidate index chosen for each item quartile Q1..Q4.
    pub item_choice: [usize; 4],
    /// Overall-best candidate, the fallback for empty quartiles.
    pub global_choice: usize,
    pub quartiles: QuartileMap,
    pub frequencies: FrequencyTable<S>,
    pub global_mean: S,
}

/// Train one MF model per candidate configuration and pick, for every user
/// quartile and every item quartile, the candidate with the lowest
/// validation RMSE restricted to that quartile's validation ratings.
///
/// A quartile with no validation ratings falls back to the overall-best
/// candidate. Ties go to the earlier candidate, which makes the selection
/// independent of candidate order whenever the RMSEs are distinct.
pub fn farp_fit<S: Scalar>(
    train: &RatingDataset<S>,
    val: &RatingDataset<S>,
    candidate_cfgs: &[TrainConfig<S>],
    freq: &FrequencyTable<S>,
    quartiles: &QuartileMap,
) -> Result<FarpEnsemble<S>, TrainError> {
    if candidate_cfgs.is_empty() {
        return Err(TrainError::BadConfig("farp needs at least one candidate".into()));
    }
    let models: Vec<LatentModel<S>> = candidate_cfgs
        .par_iter()
        .map(|cfg| train_mf(train, val, cfg))
        .collect::<Result<_, _>>()?;
    let global_mean = models[0].global_mean;

    if val.is_empty() {
        warn!("empty validation split: farp falls back to the first candidate everywhere");
        return Ok(FarpEnsemble {
            models,
            user_choice: [0; 4],
            item_choice: [0; 4],
            global_choice: 0,
            quartiles: quartiles.clone(),
            frequencies: freq.clone(),
            global_mean,
        });
    }

    // per-candidate squared-error sums: overall, by user quartile, by item
    // quartile, with the unseen-entity fallback applied
    let mut overall = vec![(0.0f64, 0usize); models.len()];
    let mut by_user_q = vec![[(0.0f64, 0usize); 4]; models.len()];
    let mut by_item_q = vec![[(0.0f64, 0usize); 4]; models.len()];
    for (c, model) in models.iter().enumerate() {
        for r in val.ratings() {
            let pred = if freq.user_count(r.user) == 0 || freq.item_count(r.item) == 0 {
                model.global_mean
            } else {
                predict_mf(model, r.user, r.item)
            };
            let d = (pred - r.value).to_f64().expect("finite prediction");
            let sq = d * d;
            overall[c].0 += sq;
            overall[c].1 += 1;
            let uq = quartiles.user_quartile[r.user].index();
            by_user_q[c][uq].0 += sq;
            by_user_q[c][uq].1 += 1;
            let iq = quartiles.item_quartile[r.item].index();
            by_item_q[c][iq].0 += sq;
            by_item_q[c][iq].1 += 1;
        }
    }

    let argmin = |cells: &dyn Fn(usize) -> (f64, usize)| -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..models.len() {
            let (sq, n) = cells(c);
            if n == 0 {
                return None;
            }
            let rmse = (sq / n as f64).sqrt();
            if best.map_or(true, |(_, b)| rmse < b) {
                best = Some((c, rmse));
            }
        }
        best.map(|(c, _)| c)
    };

    let global_choice = argmin(&|c| overall[c]).expect("validation split is nonempty");
    let mut user_choice = [global_choice; 4];
    let mut item_choice = [global_choice; 4];
    for q in Quartile::ALL {
        let slot = q.index();
        match argmin(&|c| by_user_q[c][slot]) {
            Some(c) => user_choice[slot] = c,
            None => warn!("no validation ratings for user {}; using the overall best model", q.label()),
        }
        match argmin(&|c| by_item_q[c][slot]) {
            Some(c) => item_choice[slot] = c,
            None => warn!("no validation ratings for item {}; using the overall best model", q.label()),
        }
    }

    Ok(FarpEnsemble {
        models,
        user_choice,
        item_choice,
        global_choice,
        quartiles: quartiles.clone(),
        frequencies: freq.clone(),
        global_mean,
    })
}

/// Route the pair to the quartile model of its less frequent side (raw
/// counts; ties go to the user's quartile) and predict with plain MF.
pub fn farp_predict<S: Scalar>(ens: &FarpEnsemble<S>, user: usize, item: usize) -> S {
    let f_u = ens.frequencies.user_count(user);
    let f_i = ens.frequencies.item_count(item);
    if f_u == 0 || f_i == 0 {
        return ens.global_mean;
    }
    let choice = if f_u <= f_i {
        ens.user_choice[ens.quartiles.user_quartile[user].index()]
    } else {
        ens.item_choice[ens.quartiles.item_quartile[item].index()]
    };
    predict_mf(&ens.models[choice], user, item)
}

impl<S: Scalar> RatingPredictor<S> for FarpEnsemble<S> {
    fn predict(&self, user: usize, item: usize) -> S {
        farp_predict(self, user, item)
    }
}
