use serde::Serialize;

use super::config::{ExperimentConfig, MaskKind, SyntheticConfig};
use super::grid::{fit_method, GridResult};
use super::HarnessError;
use crate::data::{assign_quartiles, compute_frequencies, skewed_subsample, split, RatingDataset};
use crate::eval::{evaluate, EvalReport};
use crate::synthgen::{apply_mask_pattern, apply_mask_uniform, generate_lowrank, product_matrix};

/// Outcome of one repeat: the grid search and the winner's test report.
#[derive(Debug, Serialize)]
pub struct RepeatResult {
    pub repeat: usize,
    pub seed: u64,
    pub grid: GridResult,
    pub report: EvalReport,
}

#[derive(Debug, Serialize)]
pub struct ExperimentResult {
    pub repeats: Vec<RepeatResult>,
    pub mean: MeanReport,
}

/// Arithmetic mean of a report cell across the repeats where it is present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCell {
    pub runs: usize,
    pub mean_count: f64,
    pub mean_rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanBucket {
    pub bucket: usize,
    pub runs: usize,
    pub mean_freq: f64,
    pub mean_rmse: Option<f64>,
}

/// Per-cell arithmetic means over repeats.
#[derive(Debug, Clone, Serialize)]
pub struct MeanReport {
    pub runs: usize,
    pub overall_rmse: f64,
    pub user_quartiles: [Option<MeanCell>; 4],
    pub item_quartiles: [Option<MeanCell>; 4],
    pub bucket_curve: Vec<MeanBucket>,
}

pub fn mean_report(reports: &[&EvalReport]) -> MeanReport {
    assert!(!reports.is_empty());
    let runs = reports.len();
    let overall_rmse = reports.iter().map(|r| r.overall_rmse).sum::<f64>() / runs as f64;

    let mean_cells = |pick: &dyn Fn(&EvalReport) -> &[Option<crate::eval::CellStat>; 4]| {
        let mut out: [Option<MeanCell>; 4] = [None; 4];
        for (slot, cell_out) in out.iter_mut().enumerate() {
            let present: Vec<&crate::eval::CellStat> =
                reports.iter().filter_map(|r| pick(r)[slot].as_ref()).collect();
            if !present.is_empty() {
                *cell_out = Some(MeanCell {
                    runs: present.len(),
                    mean_count: present.iter().map(|c| c.count as f64).sum::<f64>()
                        / present.len() as f64,
                    mean_rmse: present.iter().map(|c| c.rmse).sum::<f64>() / present.len() as f64,
                });
            }
        }
        out
    };
    let user_quartiles = mean_cells(&|r| &r.user_quartiles);
    let item_quartiles = mean_cells(&|r| &r.item_quartiles);

    let max_bucket = reports
        .iter()
        .flat_map(|r| r.bucket_curve.iter().map(|b| b.bucket))
        .max()
        .map_or(0, |b| b + 1);
    let mut bucket_curve = Vec::new();
    for b in 0..max_bucket {
        let stats: Vec<&crate::eval::BucketStat> = reports
            .iter()
            .filter_map(|r| r.bucket_curve.iter().find(|s| s.bucket == b))
            .collect();
        if stats.is_empty() {
            continue;
        }
        let with_rmse: Vec<f64> = stats.iter().filter_map(|s| s.rmse).collect();
        bucket_curve.push(MeanBucket {
            bucket: b,
            runs: stats.len(),
            mean_freq: stats.iter().map(|s| s.mean_freq).sum::<f64>() / stats.len() as f64,
            mean_rmse: (!with_rmse.is_empty())
                .then(|| with_rmse.iter().sum::<f64>() / with_rmse.len() as f64),
        });
    }

    MeanReport {
        runs,
        overall_rmse,
        user_quartiles,
        item_quartiles,
        bucket_curve,
    }
}

fn synthesize(synth: &SyntheticConfig, seed: u64) -> Result<RatingDataset<f64>, HarnessError> {
    let factors = generate_lowrank::<f64>(synth.n, synth.m, synth.rank, seed)?;
    let full = product_matrix(&factors.p, &factors.q);
    let masked = match synth.mask {
        MaskKind::Uniform => apply_mask_uniform(&full, synth.density, seed)?,
        MaskKind::Skewed => {
            let dense = apply_mask_uniform(&full, synth.density, seed)?;
            skewed_subsample(&dense, seed)
        }
        MaskKind::Pattern => {
            let path = synth
                .pattern_path
                .as_ref()
                .ok_or_else(|| HarnessError::Config("pattern mask needs pattern_path".into()))?;
            let pattern = RatingDataset::load(path)?;
            apply_mask_pattern(&full, &pattern)?
        }
    };
    Ok(masked)
}

/// Load or generate the experiment's base dataset.
pub fn materialize_dataset(cfg: &ExperimentConfig) -> Result<RatingDataset<f64>, HarnessError> {
    match (&cfg.dataset.path, &cfg.dataset.synthetic) {
        (Some(path), None) => Ok(RatingDataset::load(path)?),
        (None, Some(synth)) => synthesize(synth, cfg.run.base_seed),
        (None, None) => Err(HarnessError::Config(
            "dataset.path or dataset.synthetic must be set".into(),
        )),
        (Some(_), Some(_)) => Err(HarnessError::Config(
            "dataset.path and dataset.synthetic are mutually exclusive".into(),
        )),
    }
}

/// One repeat at a fixed seed: split, grid-search on train/validation,
/// evaluate the winner on the test split.
pub fn run_repeat(
    cfg: &ExperimentConfig,
    ds: &RatingDataset<f64>,
    repeat: usize,
    seed: u64,
) -> Result<RepeatResult, HarnessError> {
    let (train, val, test) = split(ds, cfg.split.val_frac, cfg.split.test_frac, seed)?;
    let (fitted, grid) = fit_method(cfg, &train, &val, seed)?;
    let freq = compute_frequencies(&train)?;
    let quartiles = assign_quartiles(&freq, &train);
    let predictor = fitted.predictor(&freq);
    let report = evaluate(
        &predictor,
        &test,
        &quartiles,
        &freq,
        cfg.run.buckets,
        cfg.run.mae_threshold,
    )?;
    Ok(RepeatResult {
        repeat,
        seed,
        grid,
        report,
    })
}

/// Full experiment: `repeats` independent repeats with split seeds
/// `base_seed + repeat index`, plus the arithmetic-mean report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    let ds = materialize_dataset(cfg)?;
    let mut repeats = Vec::with_capacity(cfg.run.repeats);
    for r in 0..cfg.run.repeats {
        repeats.push(run_repeat(cfg, &ds, r, cfg.run.base_seed + r as u64)?);
    }
    let reports: Vec<&EvalReport> = repeats.iter().map(|r| &r.report).collect();
    let mean = mean_report(&reports);
    Ok(ExperimentResult { repeats, mean })
}

/// One synthetic-study run: a fresh matrix at `matrix_rank`, masked, split,
/// MF trained at the same rank.
#[derive(Debug, Serialize)]
pub struct StudyRun {
    pub matrix_rank: usize,
    pub seed_index: usize,
    pub seed: u64,
    pub report: EvalReport,
}

#[derive(Debug, Serialize)]
pub struct StudyResult {
    pub runs: Vec<StudyRun>,
    /// Mean report per matrix rank, in `study.ranks` order.
    pub means: Vec<(usize, MeanReport)>,
}

/// The synthetic study: for every `(rank, seed)` pair, generate the full
/// matrix, mask it, train MF at that rank with the study's fixed
/// regularization, and report quartile RMSEs and bucket curves; means are
/// aggregated across seeds per rank.
pub fn run_synthetic_study(cfg: &ExperimentConfig) -> Result<StudyResult, HarnessError> {
    cfg.validate()?;
    let synth_base = cfg
        .dataset
        .synthetic
        .clone()
        .ok_or_else(|| HarnessError::Config("study-synthetic needs dataset.synthetic".into()))?;

    let mut runs = Vec::new();
    for &rank in &cfg.study.ranks {
        for seed_index in 0..cfg.study.seeds {
            let seed = cfg.run.base_seed + seed_index as u64;
            let synth = SyntheticConfig { rank, ..synth_base.clone() };
            let ds = synthesize(&synth, seed)?;

            let mut one = cfg.clone();
            one.method = super::config::Method::Mf;
            one.grid.lambda = vec![cfg.study.reg];
            one.grid.rank = vec![rank];
            let result = run_repeat(&one, &ds, seed_index, seed)?;
            runs.push(StudyRun {
                matrix_rank: rank,
                seed_index,
                seed,
                report: result.report,
            });
        }
    }

    let mut means = Vec::new();
    for &rank in &cfg.study.ranks {
        let of_rank: Vec<&EvalReport> = runs
            .iter()
            .filter(|r| r.matrix_rank == rank)
            .map(|r| &r.report)
            .collect();
        means.push((rank, mean_report(&of_rank)));
    }
    Ok(StudyResult { runs, means })
}
