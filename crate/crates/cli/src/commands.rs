use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use log::info;

use tailmf::data::{self, RatingDataset};
use tailmf::harness::{
    self, fit_method, run_experiment, run_synthetic_study, write_experiment, write_grid_csv,
    write_manifest, write_study, ExperimentConfig, ManifestEntry, Method, Overrides,
    TrainedMethod,
};
use tailmf::models::{
    farp_fit, save_ensemble, save_model, train_ifwmf, train_mf, train_tmf, train_tmf_dropout,
    TrainConfig, TruncationConfig,
};
use tailmf::numeric::SeededStream;
use tailmf::synthgen;

#[derive(Args)]
pub struct GenerateArgs {
    /// Number of users (matrix rows)
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    /// Number of items (matrix columns)
    #[arg(long, default_value_t = 200)]
    pub m: usize,
    /// Rank of the generated matrix
    #[arg(long, default_value_t = 5)]
    pub rank: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Observation mask: uniform, skewed, or pattern
    #[arg(long, default_value = "uniform")]
    pub mask: String,
    /// Mask density for uniform masks (and the pre-skew base)
    #[arg(long, default_value_t = 0.4)]
    pub density: f64,
    /// Ratings file supplying positions when --mask pattern
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let factors = synthgen::generate_lowrank::<f64>(args.n, args.m, args.rank, args.seed)?;
    let full = synthgen::product_matrix(&factors.p, &factors.q);
    let masked = match args.mask.as_str() {
        "uniform" => synthgen::apply_mask_uniform(&full, args.density, args.seed)?,
        "skewed" => {
            let dense = synthgen::apply_mask_uniform(&full, args.density, args.seed)?;
            data::skewed_subsample(&dense, args.seed)
        }
        "pattern" => {
            let path = args
                .pattern
                .as_ref()
                .context("--mask pattern requires --pattern <file>")?;
            let pattern = RatingDataset::<f64>::load(path)?;
            synthgen::apply_mask_pattern(&full, &pattern)?
        }
        other => bail!("unknown mask kind {other:?} (expected uniform, skewed, or pattern)"),
    };

    let csv = args.out.join("synthetic.csv");
    masked.write(&csv)?;
    let meta = args.out.join("synthetic.meta");
    fs::write(
        &meta,
        format!(
            "n={}\nm={}\nrank={}\nseed={}\nalpha={}\nmask={}\ndensity={}\nratings={}\n",
            args.n,
            args.m,
            args.rank,
            args.seed,
            factors.alpha,
            args.mask,
            args.density,
            masked.len()
        ),
    )?;
    write_manifest(
        args.out.join("manifest.csv"),
        &[
            entry("synthetic.csv", args.seed),
            entry("synthetic.meta", args.seed),
        ],
    )?;
    info!("wrote {} ratings to {}", masked.len(), csv.display());
    Ok(())
}

#[derive(Args)]
pub struct SubsampleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn subsample(args: SubsampleArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let ds = RatingDataset::<f64>::load(&args.input)?;
    let sampled = data::skewed_subsample(&ds, args.seed);
    sampled.write(args.out.join("subsample.csv"))?;
    write_manifest(
        args.out.join("manifest.csv"),
        &[entry("subsample.csv", args.seed)],
    )?;
    info!("kept {} of {} ratings", sampled.len(), ds.len());
    Ok(())
}

#[derive(Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    pub val_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    pub test_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn split(args: SplitArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let ds = RatingDataset::<f64>::load(&args.input)?;
    let (train, val, test) = data::split(&ds, args.val_frac, args.test_frac, args.seed)?;
    let stem = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "ratings".into());
    let mut entries = Vec::new();
    for (suffix, part) in [("train", &train), ("val", &val), ("test", &test)] {
        let name = format!("{stem}.{suffix}");
        part.write(args.out.join(&name))?;
        entries.push(entry(&name, args.seed));
    }
    write_manifest(args.out.join("manifest.csv"), &entries)?;
    info!(
        "split {} ratings into {}/{}/{}",
        ds.len(),
        train.len(),
        val.len(),
        test.len()
    );
    Ok(())
}

#[derive(Args)]
pub struct TrainArgs {
    /// Training ratings file
    #[arg(long)]
    pub train: PathBuf,
    /// Validation ratings file (enables early stopping)
    #[arg(long)]
    pub val: Option<PathBuf>,
    #[arg(long, default_value = "mf")]
    pub method: Method,
    #[arg(long, default_value_t = 10)]
    pub rank: usize,
    /// Regularization weight
    #[arg(long, default_value_t = 0.01)]
    pub reg: f64,
    #[arg(long, default_value_t = 0.005)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 5)]
    pub patience: usize,
    /// Weighting constant for ifwmf
    #[arg(long, default_value_t = 10.0)]
    pub rho: f64,
    /// Sigmoid steepness for tmf / tmf-dropout
    #[arg(long, default_value_t = 10.0)]
    pub steepness: f64,
    /// Sigmoid midpoint for tmf / tmf-dropout
    #[arg(long, default_value_t = 0.0)]
    pub midpoint: f64,
    /// Candidate ranks for farp (defaults to --rank alone)
    #[arg(long, value_delimiter = ',')]
    pub farp_ranks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn train(args: TrainArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let train_ds = RatingDataset::<f64>::load(&args.train)?;
    let val_ds = match &args.val {
        Some(path) => RatingDataset::<f64>::load(path)?,
        None => train_ds.subset(&[]),
    };
    let cfg = TrainConfig {
        rank: args.rank,
        reg: args.reg,
        learning_rate: args.learning_rate,
        max_epochs: args.epochs,
        patience: args.patience,
        seed: args.seed,
    };
    let freq = data::compute_frequencies(&train_ds)?;
    let trunc = TruncationConfig {
        steepness: args.steepness,
        midpoint: args.midpoint,
    };
    let artifact = match args.method {
        Method::Mf => {
            save_model(&train_mf(&train_ds, &val_ds, &cfg)?, args.out.join("model.json"))?;
            "model.json"
        }
        Method::Tmf => {
            save_model(
                &train_tmf(&train_ds, &val_ds, &cfg, trunc, &freq)?,
                args.out.join("model.json"),
            )?;
            "model.json"
        }
        Method::TmfDropout => {
            let stream = SeededStream::new(args.seed).substream(0x1000);
            save_model(
                &train_tmf_dropout(&train_ds, &val_ds, &cfg, trunc, &freq, stream)?,
                args.out.join("model.json"),
            )?;
            "model.json"
        }
        Method::Ifwmf => {
            save_model(
                &train_ifwmf(&train_ds, &val_ds, &cfg, args.rho, &freq)?,
                args.out.join("model.json"),
            )?;
            "model.json"
        }
        Method::Farp => {
            let ranks = if args.farp_ranks.is_empty() {
                vec![args.rank]
            } else {
                args.farp_ranks.clone()
            };
            let candidates: Vec<TrainConfig<f64>> =
                ranks.iter().map(|&rank| TrainConfig { rank, ..cfg }).collect();
            let quartiles = data::assign_quartiles(&freq, &train_ds);
            let ens = farp_fit(&train_ds, &val_ds, &candidates, &freq, &quartiles)?;
            save_ensemble(&ens, args.out.join("ensemble.json"))?;
            "ensemble.json"
        }
    };
    write_manifest(args.out.join("manifest.csv"), &[entry(artifact, args.seed)])?;
    info!("saved {}", args.out.join(artifact).display());
    Ok(())
}

#[derive(Args)]
pub struct GridArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub val: PathBuf,
    /// Config file supplying the grids (defaults otherwise)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn grid(args: GridArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let cfg = load_config(args.config.as_deref())?.apply_overrides(&Overrides {
        seed: args.seed,
        method: args.method,
        out: Some(args.out.clone()),
        workers: args.workers,
    });
    let train_ds = RatingDataset::<f64>::load(&args.train)?;
    let val_ds = RatingDataset::<f64>::load(&args.val)?;
    let seed = cfg.run.base_seed;
    let (fitted, grid) = fit_method(&cfg, &train_ds, &val_ds, seed)?;
    write_grid_csv(args.out.join("grid.csv"), &grid)?;
    let artifact = match &fitted {
        TrainedMethod::Single(model) => {
            save_model(model, args.out.join("model.json"))?;
            "model.json"
        }
        TrainedMethod::Ensemble(ens) => {
            save_ensemble(ens, args.out.join("ensemble.json"))?;
            "ensemble.json"
        }
    };
    write_manifest(
        args.out.join("manifest.csv"),
        &[entry("grid.csv", seed), entry(artifact, seed)],
    )?;
    let best = grid.winner_cell();
    println!(
        "winner: lambda={} rank={} val_rmse={}",
        best.cell.lambda,
        best.cell.rank,
        best.val_rmse.expect("winner has a score")
    );
    Ok(())
}

#[derive(Args)]
pub struct PipelineArgs {
    /// Experiment config file; defaults apply when omitted
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Ratings file, shorthand for dataset.path in the config
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

fn resolve_pipeline_config(args: &PipelineArgs) -> Result<ExperimentConfig> {
    let mut cfg = load_config(args.config.as_deref())?.apply_overrides(&Overrides {
        seed: args.seed,
        method: args.method,
        out: args.out.clone(),
        workers: args.workers,
    });
    if let Some(input) = &args.input {
        cfg.dataset.path = Some(input.clone());
        cfg.dataset.synthetic = None;
    }
    if cfg.dataset.path.is_none() && cfg.dataset.synthetic.is_none() {
        // no dataset configured anywhere: fall back to the default synthetic
        cfg.dataset.synthetic = Some(harness::SyntheticConfig::default());
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn experiment(args: PipelineArgs) -> Result<()> {
    let cfg = resolve_pipeline_config(&args)?;
    let result = run_experiment(&cfg)?;
    write_experiment(&cfg.run.out_dir, &cfg, &result)?;
    println!(
        "mean test rmse over {} repeats: {}",
        result.mean.runs, result.mean.overall_rmse
    );
    println!("outputs in {}", cfg.run.out_dir.display());
    Ok(())
}

pub fn study_synthetic(args: PipelineArgs) -> Result<()> {
    let mut cfg = resolve_pipeline_config(&args)?;
    if cfg.dataset.synthetic.is_none() {
        bail!("study-synthetic requires dataset.synthetic in the config");
    }
    cfg.method = Method::Mf;
    let study = run_synthetic_study(&cfg)?;
    write_study(&cfg.run.out_dir, &cfg, &study)?;
    for (rank, mean) in &study.means {
        println!("rank {}: mean test rmse {}", rank, mean.overall_rmse);
    }
    println!("outputs in {}", cfg.run.out_dir.display());
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => {
            ExperimentConfig::load(p).with_context(|| format!("loading config {}", p.display()))
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn entry(artifact: &str, seed: u64) -> ManifestEntry {
    ManifestEntry {
        artifact: artifact.to_owned(),
        seed,
    }
}
