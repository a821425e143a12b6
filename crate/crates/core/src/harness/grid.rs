use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use super::HarnessError;
use crate::data::{assign_quartiles, compute_frequencies, FrequencyTable, RatingDataset};
use crate::models::{
    farp_fit, train_ifwmf, train_mf, train_tmf, train_tmf_dropout, FarpEnsemble, LatentModel,
    Predictor, RatingPredictor, TrainConfig, TrainError, TruncationConfig,
};
use crate::numeric::SeededStream;

// substream tag base separating per-cell dropout draws from everything else
const DROPOUT_TAG: u64 = 0x1000;

/// One grid cell: the hyperparameter combination of a single trained model.
/// Fields irrelevant to the method stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub lambda: f64,
    pub rank: usize,
    pub rho: Option<f64>,
    pub steepness: Option<f64>,
    pub midpoint: Option<f64>,
}

/// Validation outcome of one cell. `val_rmse` is `None` when training
/// failed (recorded, excluded from the argmin).
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub cell: GridCell,
    pub val_rmse: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridResult {
    pub cells: Vec<CellResult>,
    /// Index of the winning cell (minimum validation RMSE, ties to the
    /// earlier cell in grid order).
    pub winner: usize,
}

impl GridResult {
    pub fn winner_cell(&self) -> &CellResult {
        &self.cells[self.winner]
    }
}

/// A fitted method: either a single latent model or a FARP ensemble.
pub enum TrainedMethod {
    Single(LatentModel<f64>),
    Ensemble(FarpEnsemble<f64>),
}

/// Predictor over a [`TrainedMethod`].
pub enum MethodPredictor<'a> {
    Single(Predictor<'a, f64>),
    Ensemble(&'a FarpEnsemble<f64>),
}

impl TrainedMethod {
    pub fn predictor<'a>(&'a self, freq: &'a FrequencyTable<f64>) -> MethodPredictor<'a> {
        match self {
            TrainedMethod::Single(model) => MethodPredictor::Single(model.predictor(freq)),
            TrainedMethod::Ensemble(ens) => MethodPredictor::Ensemble(ens),
        }
    }
}

impl RatingPredictor<f64> for MethodPredictor<'_> {
    fn predict(&self, user: usize, item: usize) -> f64 {
        match self {
            MethodPredictor::Single(p) => p.predict(user, item),
            MethodPredictor::Ensemble(e) => e.predict(user, item),
        }
    }
}

/// Enumerate the grid cells for a method in lexicographic order over
/// (lambda, rank, rho, steepness, midpoint) as listed in the config.
pub(crate) fn enumerate_cells(cfg: &ExperimentConfig, method: Method) -> Vec<GridCell> {
    let g = &cfg.grid;
    let mut cells = Vec::new();
    for &lambda in &g.lambda {
        for &rank in &g.rank {
            match method {
                Method::Mf | Method::Farp => cells.push(GridCell {
                    lambda,
                    rank,
                    rho: None,
                    steepness: None,
                    midpoint: None,
                }),
                Method::Ifwmf => {
                    for &rho in &g.rho {
                        cells.push(GridCell {
                            lambda,
                            rank,
                            rho: Some(rho),
                            steepness: None,
                            midpoint: None,
                        });
                    }
                }
                Method::Tmf | Method::TmfDropout => {
                    for &steepness in &g.steepness {
                        for &midpoint in &g.midpoint {
                            cells.push(GridCell {
                                lambda,
                                rank,
                                rho: None,
                                steepness: Some(steepness),
                                midpoint: Some(midpoint),
                            });
                        }
                    }
                }
            }
        }
    }
    cells
}

fn train_cell(
    cell: &GridCell,
    cell_index: usize,
    method: Method,
    train: &RatingDataset<f64>,
    val: &RatingDataset<f64>,
    cfg: &ExperimentConfig,
    freq: &FrequencyTable<f64>,
    seed: u64,
) -> Result<LatentModel<f64>, TrainError> {
    let tc = TrainConfig {
        rank: cell.rank,
        reg: cell.lambda,
        learning_rate: cfg.train.learning_rate,
        max_epochs: cfg.train.max_epochs,
        patience: cfg.train.patience,
        seed,
    };
    match method {
        Method::Mf | Method::Farp => train_mf(train, val, &tc),
        Method::Ifwmf => train_ifwmf(train, val, &tc, cell.rho.expect("rho cell"), freq),
        Method::Tmf => train_tmf(
            train,
            val,
            &tc,
            TruncationConfig {
                steepness: cell.steepness.expect("steepness cell"),
                midpoint: cell.midpoint.expect("midpoint cell"),
            },
            freq,
        ),
        Method::TmfDropout => train_tmf_dropout(
            train,
            val,
            &tc,
            TruncationConfig {
                steepness: cell.steepness.expect("steepness cell"),
                midpoint: cell.midpoint.expect("midpoint cell"),
            },
            freq,
            SeededStream::new(seed).substream(DROPOUT_TAG + cell_index as u64),
        ),
    }
}

fn val_rmse_of(
    model: &LatentModel<f64>,
    freq: &FrequencyTable<f64>,
    val: &RatingDataset<f64>,
) -> f64 {
    let predictor = model.predictor(freq);
    let mut sq = 0.0;
    for r in val.ratings() {
        let d = predictor.predict(r.user, r.item) - r.value;
        sq += d * d;
    }
    (sq / val.len() as f64).sqrt()
}

/// Train one model per grid cell (cells are independent and run on the
/// configured worker pool), score each on the validation split with the
/// method's own predictor, and pick the minimum.
///
/// Diverged cells are recorded as failed and excluded; every cell failing
/// is a hard error.
pub fn grid_search(
    cfg: &ExperimentConfig,
    train: &RatingDataset<f64>,
    val: &RatingDataset<f64>,
    seed: u64,
) -> Result<(GridResult, Vec<Option<LatentModel<f64>>>), HarnessError> {
    let method = cfg.method;
    if val.is_empty() {
        return Err(HarnessError::Config(
            "grid search requires a nonempty validation split".into(),
        ));
    }
    let freq = compute_frequencies(train)?;
    let cells = enumerate_cells(cfg, method);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let outcomes: Vec<(CellResult, Option<LatentModel<f64>>)> = pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(idx, cell)| {
                match train_cell(cell, idx, method, train, val, cfg, &freq, seed) {
                    Ok(model) => {
                        let rmse = val_rmse_of(&model, &freq, val);
                        (
                            CellResult {
                                cell: *cell,
                                val_rmse: Some(rmse),
                                error: None,
                            },
                            Some(model),
                        )
                    }
                    Err(err @ TrainError::Diverged { .. }) => {
                        warn!("grid cell {cell:?} diverged: {err}");
                        (
                            CellResult {
                                cell: *cell,
                                val_rmse: None,
                                error: Some(err.to_string()),
                            },
                            None,
                        )
                    }
                    Err(err) => (
                        CellResult {
                            cell: *cell,
                            val_rmse: None,
                            error: Some(format!("hard: {err}")),
                        },
                        None,
                    ),
                }
            })
            .collect()
    });

    // configuration errors are caller bugs, unlike runtime divergence
    if let Some((bad, _)) = outcomes
        .iter()
        .find(|(c, _)| matches!(&c.error, Some(e) if e.starts_with("hard: ")))
    {
        return Err(HarnessError::Config(bad.error.clone().unwrap()));
    }

    let mut results = Vec::with_capacity(outcomes.len());
    let mut models = Vec::with_capacity(outcomes.len());
    for (res, model) in outcomes {
        results.push(res);
        models.push(model);
    }
    let winner = results
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.val_rmse.map(|r| (i, r)))
        .fold(None::<(usize, f64)>, |best, (i, r)| match best {
            Some((_, br)) if br <= r => best,
            _ => Some((i, r)),
        })
        .map(|(i, _)| i)
        .ok_or(HarnessError::AllCellsFailed(results.len()))?;

    Ok((GridResult { cells: results, winner }, models))
}

/// Fit the configured method on one split: grid search for the single-model
/// methods; for FARP, an MF grid picks the best lambda and the rank grid at
/// that lambda forms the candidate pool.
pub fn fit_method(
    cfg: &ExperimentConfig,
    train: &RatingDataset<f64>,
    val: &RatingDataset<f64>,
    seed: u64,
) -> Result<(TrainedMethod, GridResult), HarnessError> {
    let (grid, mut models) = grid_search(cfg, train, val, seed)?;
    match cfg.method {
        Method::Farp => {
            let best_lambda = grid.winner_cell().cell.lambda;
            let candidates: Vec<TrainConfig<f64>> = cfg
                .grid
                .rank
                .iter()
                .map(|&rank| TrainConfig {
                    rank,
                    reg: best_lambda,
                    learning_rate: cfg.train.learning_rate,
                    max_epochs: cfg.train.max_epochs,
                    patience: cfg.train.patience,
                    seed,
                })
                .collect();
            let freq = compute_frequencies(train)?;
            let quartiles = assign_quartiles(&freq, train);
            let ens = farp_fit(train, val, &candidates, &freq, &quartiles)?;
            Ok((TrainedMethod::Ensemble(ens), grid))
        }
        _ => {
            let model = models[grid.winner]
                .take()
                .expect("winning cell has a model");
            Ok((TrainedMethod::Single(model), grid))
        }
    }
}
