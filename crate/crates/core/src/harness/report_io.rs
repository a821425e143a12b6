use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::run::{ExperimentResult, MeanReport, StudyResult};
use super::GridResult;
use super::HarnessError;
use crate::eval::{BucketStat, CellStat, EvalReport};

/// One produced artifact and the seed that generated it.
#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub artifact: String,
    pub seed: u64,
}

pub fn write_manifest(path: impl AsRef<Path>, entries: &[ManifestEntry]) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "artifact,seed")?;
    for e in entries {
        writeln!(out, "{},{}", e.artifact, e.seed)?;
    }
    Ok(())
}

/// `cell,count,rmse` rows: the overall line plus the present quartile cells.
pub fn write_quartile_csv(path: impl AsRef<Path>, report: &EvalReport) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "cell,count,rmse")?;
    writeln!(out, "all,{},{}", report.n_test, report.overall_rmse)?;
    write_cells(&mut out, "item", &report.item_quartiles)?;
    write_cells(&mut out, "user", &report.user_quartiles)?;
    Ok(())
}

fn write_cells<W: Write>(
    out: &mut W,
    class: &str,
    cells: &[Option<CellStat>; 4],
) -> Result<(), HarnessError> {
    for (slot, cell) in cells.iter().enumerate() {
        if let Some(c) = cell {
            writeln!(out, "{}_Q{},{},{}", class, slot + 1, c.count, c.rmse)?;
        }
    }
    Ok(())
}

/// `bucket,mean_freq,rmse` rows; the rmse field is empty for buckets where
/// no user had test ratings.
pub fn write_bucket_csv(path: impl AsRef<Path>, curve: &[BucketStat]) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "bucket,mean_freq,rmse")?;
    for b in curve {
        match b.rmse {
            Some(r) => writeln!(out, "{},{},{}", b.bucket, b.mean_freq, r)?,
            None => writeln!(out, "{},{},", b.bucket, b.mean_freq)?,
        }
    }
    Ok(())
}

/// `item,freq,accurate_count` scatter rows.
pub fn write_mae_csv(path: impl AsRef<Path>, report: &EvalReport) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "item,freq,accurate_count")?;
    for a in &report.mae_accuracy {
        writeln!(out, "{},{},{}", a.item, a.freq, a.accurate_count)?;
    }
    Ok(())
}

/// Grid cell scores: `lambda,rank,rho,steepness,midpoint,val_rmse,status`.
pub fn write_grid_csv(path: impl AsRef<Path>, grid: &GridResult) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "lambda,rank,rho,steepness,midpoint,val_rmse,status")?;
    for (idx, c) in grid.cells.iter().enumerate() {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let status = if c.val_rmse.is_none() {
            "failed"
        } else if idx == grid.winner {
            "winner"
        } else {
            "ok"
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.cell.lambda,
            c.cell.rank,
            opt(c.cell.rho),
            opt(c.cell.steepness),
            opt(c.cell.midpoint),
            opt(c.val_rmse),
            status
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct QuartileSummary {
    n_test: usize,
    overall_rmse: f64,
    item_quartiles: [Option<CellStat>; 4],
    user_quartiles: [Option<CellStat>; 4],
    mae_accurate_count: usize,
}

/// JSON summary mirroring the quartile table layout: the overall row plus
/// Q1..Q4 per class (`null` for absent cells).
pub fn write_summary_json(path: impl AsRef<Path>, report: &EvalReport) -> Result<(), HarnessError> {
    let summary = QuartileSummary {
        n_test: report.n_test,
        overall_rmse: report.overall_rmse,
        item_quartiles: report.item_quartiles,
        user_quartiles: report.user_quartiles,
        mae_accurate_count: report.mae_accurate_count,
    };
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, &summary)
        .map_err(|e| HarnessError::Config(format!("summary encoding: {e}")))?;
    Ok(())
}

/// Mean report as `cell,runs,mean_count,mean_rmse` plus
/// `bucket,runs,mean_freq,mean_rmse` files.
pub fn write_mean_report(
    dir: impl AsRef<Path>,
    mean: &MeanReport,
) -> Result<Vec<String>, HarnessError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let q_path = dir.join("quartiles.csv");
    let mut out = BufWriter::new(File::create(&q_path)?);
    writeln!(out, "cell,runs,mean_count,mean_rmse")?;
    writeln!(out, "all,{},,{}", mean.runs, mean.overall_rmse)?;
    for (class, cells) in [("item", &mean.item_quartiles), ("user", &mean.user_quartiles)] {
        for (slot, cell) in cells.iter().enumerate() {
            if let Some(c) = cell {
                writeln!(out, "{}_Q{},{},{},{}", class, slot + 1, c.runs, c.mean_count, c.mean_rmse)?;
            }
        }
    }
    drop(out);

    let b_path = dir.join("buckets.csv");
    let mut out = BufWriter::new(File::create(&b_path)?);
    writeln!(out, "bucket,runs,mean_freq,mean_rmse")?;
    for b in &mean.bucket_curve {
        match b.mean_rmse {
            Some(r) => writeln!(out, "{},{},{},{}", b.bucket, b.runs, b.mean_freq, r)?,
            None => writeln!(out, "{},{},{},", b.bucket, b.runs, b.mean_freq)?,
        }
    }
    Ok(vec![
        q_path.to_string_lossy().into_owned(),
        b_path.to_string_lossy().into_owned(),
    ])
}

/// Write the full experiment layout under `out_dir`:
/// the resolved config, one directory per repeat (grid scores, quartile and
/// bucket CSVs, MAE scatter, JSON summary), the mean report, and the
/// manifest listing every artifact with its seed.
pub fn write_experiment(
    out_dir: impl AsRef<Path>,
    cfg: &ExperimentConfig,
    result: &ExperimentResult,
) -> Result<(), HarnessError> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir)?;
    let mut manifest = Vec::new();

    fs::write(out_dir.join("config.toml"), cfg.to_toml_string())?;
    manifest.push(ManifestEntry {
        artifact: "config.toml".into(),
        seed: cfg.run.base_seed,
    });

    for repeat in &result.repeats {
        let sub = format!("repeat_{}", repeat.repeat);
        let dir = out_dir.join(&sub);
        fs::create_dir_all(&dir)?;
        write_grid_csv(dir.join("grid.csv"), &repeat.grid)?;
        write_quartile_csv(dir.join("quartiles.csv"), &repeat.report)?;
        write_bucket_csv(dir.join("buckets.csv"), &repeat.report.bucket_curve)?;
        write_mae_csv(dir.join("mae.csv"), &repeat.report)?;
        write_summary_json(dir.join("summary.json"), &repeat.report)?;
        for name in ["grid.csv", "quartiles.csv", "buckets.csv", "mae.csv", "summary.json"] {
            manifest.push(ManifestEntry {
                artifact: format!("{sub}/{name}"),
                seed: repeat.seed,
            });
        }
    }

    write_mean_report(out_dir.join("mean"), &result.mean)?;
    for name in ["mean/quartiles.csv", "mean/buckets.csv"] {
        manifest.push(ManifestEntry {
            artifact: name.into(),
            seed: cfg.run.base_seed,
        });
    }

    write_manifest(out_dir.join("manifest.csv"), &manifest)?;
    Ok(())
}

/// Write the synthetic-study layout: per-run and mean curves
/// (`rank,seed,bucket,mean_freq,rmse`, seed `mean` for the averages),
/// per-run and mean quartile tables, the resolved config, and the manifest.
pub fn write_study(
    out_dir: impl AsRef<Path>,
    cfg: &ExperimentConfig,
    study: &StudyResult,
) -> Result<(), HarnessError> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir)?;
    let mut manifest = vec![ManifestEntry {
        artifact: "config.toml".into(),
        seed: cfg.run.base_seed,
    }];
    fs::write(out_dir.join("config.toml"), cfg.to_toml_string())?;

    let curve_path = out_dir.join("curve.csv");
    let mut out = BufWriter::new(File::create(&curve_path)?);
    writeln!(out, "rank,seed,bucket,mean_freq,rmse")?;
    for run in &study.runs {
        for b in &run.report.bucket_curve {
            match b.rmse {
                Some(r) => writeln!(out, "{},{},{},{},{}", run.matrix_rank, run.seed_index, b.bucket, b.mean_freq, r)?,
                None => writeln!(out, "{},{},{},{},", run.matrix_rank, run.seed_index, b.bucket, b.mean_freq)?,
            }
        }
    }
    for (rank, mean) in &study.means {
        for b in &mean.bucket_curve {
            match b.mean_rmse {
                Some(r) => writeln!(out, "{},mean,{},{},{}", rank, b.bucket, b.mean_freq, r)?,
                None => writeln!(out, "{},mean,{},{},", rank, b.bucket, b.mean_freq)?,
            }
        }
    }
    drop(out);
    manifest.push(ManifestEntry {
        artifact: "curve.csv".into(),
        seed: cfg.run.base_seed,
    });

    let q_path = out_dir.join("quartiles.csv");
    let mut out = BufWriter::new(File::create(&q_path)?);
    writeln!(out, "rank,seed,cell,count,rmse")?;
    for run in &study.runs {
        writeln!(
            out,
            "{},{},all,{},{}",
            run.matrix_rank, run.seed_index, run.report.n_test, run.report.overall_rmse
        )?;
        for (class, cells) in [("item", &run.report.item_quartiles), ("user", &run.report.user_quartiles)] {
            for (slot, cell) in cells.iter().enumerate() {
                if let Some(c) = cell {
                    writeln!(
                        out,
                        "{},{},{}_Q{},{},{}",
                        run.matrix_rank,
                        run.seed_index,
                        class,
                        slot + 1,
                        c.count,
                        c.rmse
                    )?;
                }
            }
        }
    }
    for (rank, mean) in &study.means {
        writeln!(out, "{},mean,all,,{}", rank, mean.overall_rmse)?;
        for (class, cells) in [("item", &mean.item_quartiles), ("user", &mean.user_quartiles)] {
            for (slot, cell) in cells.iter().enumerate() {
                if let Some(c) = cell {
                    writeln!(
                        out,
                        "{},mean,{}_Q{},{},{}",
                        rank,
                        class,
                        slot + 1,
                        c.mean_count,
                        c.mean_rmse
                    )?;
                }
            }
        }
    }
    drop(out);
    manifest.push(ManifestEntry {
        artifact: "quartiles.csv".into(),
        seed: cfg.run.base_seed,
    });

    write_manifest(out_dir.join("manifest.csv"), &manifest)?;
    Ok(())
}
