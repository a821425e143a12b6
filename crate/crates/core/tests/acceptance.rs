//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The trend criteria run on synthetic exact-rank matrices with skewed
//! observation masks; the numeric criteria pin tolerances in code.

use std::sync::OnceLock;
use std::time::Instant;

use tailmf::data::{
    assign_quartiles, compute_frequencies, skewed_subsample, split, FrequencyTable, QuartileMap,
    RatingDataset,
};
use tailmf::eval::{bucket_curve, quartile_report, spearman, BucketStat};
use tailmf::harness::{
    run_experiment, write_experiment, ExperimentConfig, GridConfig, MaskKind, Method,
    SyntheticConfig,
};
use tailmf::models::{
    farp_fit, predict_mf, train_ifwmf, train_mf, train_tmf, train_tmf_dropout, LatentModel,
    RatingPredictor, TrainConfig, TruncationConfig,
};
use tailmf::numeric::{dot_prefix, poisson_cdf_cutoff, poisson_sample, SeededStream};
use tailmf::synthgen::{
    apply_mask_uniform, generate_lowrank, orthonormal_factor, product_matrix,
};

fn pass(criterion: &str, detail: String) {
    println!("acceptance {criterion}: PASS ({detail})");
}

struct Split {
    train: RatingDataset<f64>,
    val: RatingDataset<f64>,
    test: RatingDataset<f64>,
    freq: FrequencyTable<f64>,
    quartiles: QuartileMap,
}

fn skewed_split(true_rank: usize, seed: u64) -> Split {
    let factors = generate_lowrank::<f64>(300, 200, true_rank, seed).unwrap();
    let full = product_matrix(&factors.p, &factors.q);
    let dense = apply_mask_uniform(&full, 1.0, seed).unwrap();
    let skewed = skewed_subsample(&dense, seed);
    let (train, val, test) = split(&skewed, 0.2, 0.2, seed).unwrap();
    let freq = compute_frequencies(&train).unwrap();
    let quartiles = assign_quartiles(&freq, &train);
    Split {
        train,
        val,
        test,
        freq,
        quartiles,
    }
}

fn trend_config(rank: usize, seed: u64) -> TrainConfig<f64> {
    TrainConfig {
        rank,
        reg: 0.01,
        learning_rate: 0.01,
        max_epochs: 150,
        patience: 10,
        seed,
    }
}

fn item_q_rmse(model: &LatentModel<f64>, s: &Split) -> [Option<f64>; 4] {
    let predictor = model.predictor(&s.freq);
    let (_, item_cells) = quartile_report(&predictor, &s.test, &s.quartiles);
    item_cells.map(|c| c.map(|c| c.rmse))
}

/// Criterion 1: 300x200 rank-5 matrix, uniform 40% mask, MF rank 5,
/// reg <= 0.01 recovers held-out entries to RMSE < 0.2 (1% of the
/// [-10, 10] range) in under 60 s single-threaded.
#[test]
fn criterion_01_exact_rank_recovery() {
    let start = Instant::now();
    let factors = generate_lowrank::<f64>(300, 200, 5, 1).unwrap();
    let full = product_matrix(&factors.p, &factors.q);
    let ds = apply_mask_uniform(&full, 0.4, 1).unwrap();
    let (train, val, test) = split(&ds, 0.2, 0.2, 1).unwrap();
    let cfg = TrainConfig {
        rank: 5,
        reg: 0.001,
        learning_rate: 0.01,
        max_epochs: 300,
        patience: 20,
        seed: 1,
    };
    let model = train_mf(&train, &val, &cfg).unwrap();
    let mut sq = 0.0;
    for r in test.ratings() {
        let d = predict_mf(&model, r.user, r.item) - r.value;
        sq += d * d;
    }
    let rmse = (sq / test.len() as f64).sqrt();
    let secs = start.elapsed().as_secs_f64();
    assert!(rmse < 0.2, "held-out rmse {rmse} >= 0.2");
    assert!(secs < 60.0, "runtime {secs:.1}s >= 60s");
    pass("01 exact-rank recovery", format!("rmse={rmse:.4}, {secs:.1}s"));
}

/// Criterion 2: under a skewed mask of the same matrix, MF rank 20 shows
/// the bucket-frequency degradation: Spearman(freq, rmse) < -0.5 and the
/// least-frequent bucket's RMSE exceeds 1.5x the most frequent's,
/// averaged over 5 seeds.
#[test]
fn criterion_02_skew_degradation_trend() {
    let buckets = 10;
    let mut freq_sum = vec![0.0; buckets];
    let mut rmse_sum = vec![0.0; buckets];
    let mut seen = vec![0usize; buckets];
    for seed in 0..5 {
        let s = skewed_split(5, seed);
        let model = train_mf(&s.train, &s.val, &trend_config(20, seed)).unwrap();
        let predictor = model.predictor(&s.freq);
        let curve: Vec<BucketStat> = bucket_curve(&predictor, &s.test, &s.freq, buckets);
        for b in curve {
            if let Some(r) = b.rmse {
                freq_sum[b.bucket] += b.mean_freq;
                rmse_sum[b.bucket] += r;
                seen[b.bucket] += 1;
            }
        }
    }
    let (mut freqs, mut rmses) = (Vec::new(), Vec::new());
    for b in 0..buckets {
        assert!(seen[b] > 0, "bucket {b} empty across all seeds");
        freqs.push(freq_sum[b] / seen[b] as f64);
        rmses.push(rmse_sum[b] / seen[b] as f64);
    }
    let rho = spearman(&freqs, &rmses);
    let ratio = rmses[buckets - 1] / rmses[0];
    assert!(rho < -0.5, "Spearman {rho} >= -0.5 (curve: {rmses:?})");
    assert!(ratio > 1.5, "tail/head RMSE ratio {ratio} <= 1.5 (curve: {rmses:?})");
    pass(
        "02 skew-degradation trend",
        format!("spearman={rho:.3}, tail/head={ratio:.2}"),
    );
}

struct RankPair {
    q1_r5: f64,
    q1_r20: f64,
    q4_r5: f64,
    q4_r20: f64,
    mf20_q1: f64,
    scenario: Split,
    seed: u64,
}

/// Rank-20 ground truth scenarios shared by criteria 3 and 4.
fn rank20_scenarios() -> &'static Vec<RankPair> {
    static SCENARIOS: OnceLock<Vec<RankPair>> = OnceLock::new();
    SCENARIOS.get_or_init(|| {
        (0..5u64)
            .map(|seed| {
                let s = skewed_split(20, seed);
                let mf5 = train_mf(&s.train, &s.val, &trend_config(5, seed)).unwrap();
                let mf20 = train_mf(&s.train, &s.val, &trend_config(20, seed)).unwrap();
                let q5 = item_q_rmse(&mf5, &s);
                let q20 = item_q_rmse(&mf20, &s);
                RankPair {
                    q1_r5: q5[0].expect("Q1 populated"),
                    q1_r20: q20[0].expect("Q1 populated"),
                    q4_r5: q5[3].expect("Q4 populated"),
                    q4_r20: q20[3].expect("Q4 populated"),
                    mf20_q1: q20[0].unwrap(),
                    scenario: s,
                    seed,
                }
            })
            .collect()
    })
}

/// Criterion 3: on the skewed rank-20 setup, raising the model rank from 5
/// to 20 hurts Q1 items while not hurting Q4 items, in >= 4 of 5 seeds.
#[test]
fn criterion_03_rank_overfit_trend() {
    let mut hits = 0;
    let mut detail = Vec::new();
    for p in rank20_scenarios() {
        let ok = p.q1_r20 > p.q1_r5 && p.q4_r20 <= p.q4_r5;
        detail.push(format!(
            "seed {}: Q1 {:.3}->{:.3} Q4 {:.3}->{:.3} {}",
            p.seed,
            p.q1_r5,
            p.q1_r20,
            p.q4_r5,
            p.q4_r20,
            if ok { "ok" } else { "MISS" }
        ));
        if ok {
            hits += 1;
        }
    }
    assert!(hits >= 4, "rank-overfit trend in {hits}/5 seeds\n{}", detail.join("\n"));
    pass("03 rank-overfit trend", format!("{hits}/5 seeds"));
}

fn best_by_val<I, F>(candidates: I, score: F) -> f64
where
    I: IntoIterator<Item = f64>,
    F: Fn() -> f64,
{
    let _ = score;
    candidates.into_iter().fold(f64::INFINITY, f64::min)
}

/// Criterion 4: at rank 20 on the skewed setup, each frequency-adaptive
/// method matches or beats MF's Q1-item RMSE in >= 4 of 5 seeds.
#[test]
fn criterion_04_tail_improvement_direction() {
    let mut hits = [0usize; 4]; // tmf, dropout, ifwmf, farp
    let names = ["tmf", "tmf-dropout", "ifwmf", "farp"];
    for p in rank20_scenarios() {
        let s = &p.scenario;
        let seed = p.seed;
        let cfg = trend_config(20, seed);

        // (k, z) tuned on overall validation RMSE over a focused subgrid
        let mut best_tmf: Option<(f64, LatentModel<f64>)> = None;
        let mut best_drop: Option<(f64, LatentModel<f64>)> = None;
        for steepness in [10.0, 40.0] {
            for midpoint in [0.0, 0.25] {
                let trunc = TruncationConfig { steepness, midpoint };
                let tmf = train_tmf(&s.train, &s.val, &cfg, trunc, &s.freq).unwrap();
                let drop = train_tmf_dropout(
                    &s.train,
                    &s.val,
                    &cfg,
                    trunc,
                    &s.freq,
                    SeededStream::new(seed).substream(0x1000),
                )
                .unwrap();
                for (best, model) in [(&mut best_tmf, tmf), (&mut best_drop, drop)] {
                    let v = val_rmse(&model, s);
                    if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                        *best = Some((v, model));
                    }
                }
            }
        }
        let tmf = best_tmf.unwrap().1;
        let dropout = best_drop.unwrap().1;

        let mut best_ifwmf: Option<(f64, LatentModel<f64>)> = None;
        for rho in [1.0, 10.0, 50.0] {
            let m = train_ifwmf(&s.train, &s.val, &cfg, rho, &s.freq).unwrap();
            let v = val_rmse(&m, s);
            if best_ifwmf.as_ref().map_or(true, |(bv, _)| v < *bv) {
                best_ifwmf = Some((v, m));
            }
        }
        let ifwmf = best_ifwmf.unwrap().1;

        let candidates: Vec<TrainConfig<f64>> = [1usize, 5, 20]
            .iter()
            .map(|&rank| TrainConfig { rank, ..cfg })
            .collect();
        let farp = farp_fit(&s.train, &s.val, &candidates, &s.freq, &s.quartiles).unwrap();

        let q1 = |rmses: [Option<f64>; 4]| rmses[0].expect("Q1 populated");
        let scores = [
            q1(item_q_rmse(&tmf, s)),
            q1(item_q_rmse(&dropout, s)),
            q1(item_q_rmse(&ifwmf, s)),
            {
                let (_, cells) = quartile_report(&farp, &s.test, &s.quartiles);
                cells[0].expect("Q1 populated").rmse
            },
        ];
        for (i, &score) in scores.iter().enumerate() {
            if score <= p.mf20_q1 {
                hits[i] += 1;
            }
        }
    }
    for (name, &h) in names.iter().zip(&hits) {
        assert!(h >= 4, "{name} beat MF Q1 in only {h}/5 seeds");
    }
    pass(
        "04 tail improvement direction",
        format!(
            "tmf {}/5, dropout {}/5, ifwmf {}/5, farp {}/5",
            hits[0], hits[1], hits[2], hits[3]
        ),
    );
}

fn val_rmse(model: &LatentModel<f64>, s: &Split) -> f64 {
    let p = model.predictor(&s.freq);
    let mut sq = 0.0;
    for r in s.val.ratings() {
        let d = p.predict(r.user, r.item) - r.value;
        sq += d * d;
    }
    (sq / s.val.len() as f64).sqrt()
}

/// Criterion 5: TMF with an all-ones mask, IFWMF with rho = 0, and
/// single-candidate FARP reproduce MF's training trajectory exactly on a
/// 50x50 instance under a shared seed.
#[test]
fn criterion_05_reduction_equivalences() {
    let factors = generate_lowrank::<f64>(50, 50, 3, 9).unwrap();
    let full = product_matrix(&factors.p, &factors.q);
    let ds = apply_mask_uniform(&full, 0.5, 9).unwrap();
    let (train, val, _) = split(&ds, 0.2, 0.0, 9).unwrap();
    let freq = compute_frequencies(&train).unwrap();
    let quartiles = assign_quartiles(&freq, &train);
    let cfg = TrainConfig {
        rank: 4,
        reg: 0.01,
        learning_rate: 0.01,
        max_epochs: 40,
        patience: 40,
        seed: 17,
    };
    let mf = train_mf(&train, &val, &cfg).unwrap();

    // f - z >= 1 for every pair, so the sigmoid saturates at the full rank
    let all_on = TruncationConfig {
        steepness: 40.0,
        midpoint: -1.0,
    };
    let tmf = train_tmf(&train, &val, &cfg, all_on, &freq).unwrap();
    assert_eq!(mf.user_factors, tmf.user_factors, "TMF all-ones: user factors differ");
    assert_eq!(mf.item_factors, tmf.item_factors, "TMF all-ones: item factors differ");
    assert_eq!(mf.val_trace, tmf.val_trace, "TMF all-ones: validation traces differ");

    let ifwmf = train_ifwmf(&train, &val, &cfg, 0.0, &freq).unwrap();
    assert_eq!(mf.user_factors, ifwmf.user_factors, "IFWMF rho=0: user factors differ");
    assert_eq!(mf.item_factors, ifwmf.item_factors, "IFWMF rho=0: item factors differ");
    assert_eq!(mf.val_trace, ifwmf.val_trace, "IFWMF rho=0: validation traces differ");

    let farp = farp_fit(&train, &val, &[cfg], &freq, &quartiles).unwrap();
    assert_eq!(mf.user_factors, farp.models[0].user_factors, "FARP single candidate differs");
    assert_eq!(mf.item_factors, farp.models[0].item_factors, "FARP single candidate differs");
    assert_eq!(mf.val_trace, farp.models[0].val_trace, "FARP trace differs");

    pass("05 reduction equivalences", "bitwise identical factors and traces".into());
}

/// Criterion 6: analytic per-rating gradients match central finite
/// differences (step 1e-5) within relative error 1e-5 at 100 random
/// points for MF, TMF (active prefix), and IFWMF.
#[test]
fn criterion_06_gradient_correctness() {
    const STEP: f64 = 1e-5;
    const TOL: f64 = 1e-5;
    let rank = 6;
    let mut stream = SeededStream::new(123);
    let mut worst: f64 = 0.0;

    // per-rating loss with `active` leading coordinates and error weight w
    let loss = |p: &[f64], q: &[f64], value: f64, active: usize, w: f64, reg: f64| {
        let err = dot_prefix(p, q, active) - value;
        let mut reg_term = 0.0;
        for j in 0..active {
            reg_term += p[j] * p[j] + q[j] * q[j];
        }
        0.5 * w * err * err + 0.5 * reg * reg_term
    };

    for case in 0..3 {
        for _ in 0..100 {
            let p: Vec<f64> = (0..rank).map(|_| stream.next_in_range::<f64>(-1.0, 1.0)).collect();
            let q: Vec<f64> = (0..rank).map(|_| stream.next_in_range::<f64>(-1.0, 1.0)).collect();
            let value: f64 = stream.next_in_range(-5.0, 5.0);
            let reg: f64 = stream.next_in_range(0.0, 0.2);
            let (active, weight) = match case {
                0 => (rank, 1.0),                                          // MF
                1 => (1 + stream.next_index(rank), 1.0),                   // TMF prefix
                _ => (rank, 1.0 / (1.0 + 10.0 * stream.next_f64())),       // IFWMF
            };
            let err = dot_prefix(&p, &q, active) - value;
            for j in 0..rank {
                let analytic_p = if j < active { weight * err * q[j] + reg * p[j] } else { 0.0 };
                let analytic_q = if j < active { weight * err * p[j] + reg * q[j] } else { 0.0 };
                for (vec_is_p, analytic) in [(true, analytic_p), (false, analytic_q)] {
                    let mut plus_p = p.clone();
                    let mut plus_q = q.clone();
                    let mut minus_p = p.clone();
                    let mut minus_q = q.clone();
                    if vec_is_p {
                        plus_p[j] += STEP;
                        minus_p[j] -= STEP;
                    } else {
                        plus_q[j] += STEP;
                        minus_q[j] -= STEP;
                    }
                    let numeric = (loss(&plus_p, &plus_q, value, active, weight, reg)
                        - loss(&minus_p, &minus_q, value, active, weight, reg))
                        / (2.0 * STEP);
                    let denom = analytic.abs().max(numeric.abs()).max(1e-6);
                    let rel = (analytic - numeric).abs() / denom;
                    worst = worst.max(rel);
                    assert!(
                        rel <= TOL,
                        "case {case} coord {j}: analytic {analytic} vs numeric {numeric} (rel {rel})"
                    );
                }
            }
        }
    }
    pass("06 gradient correctness", format!("max relative error {worst:.2e}"));
}

/// Criterion 7: Poisson sampler moments within 3 standard errors at
/// lambda in {0.5, 5, 20}; the CDF cutoff equals term-by-term pmf
/// summation exactly at lambda in {1e-4, 1, 10, 100}, eps = 1e-6.
#[test]
fn criterion_07_poisson_kernel() {
    let n = 100_000usize;
    for (i, lambda) in [0.5f64, 5.0, 20.0].into_iter().enumerate() {
        let mut stream = SeededStream::new(700 + i as u64);
        let draws: Vec<f64> = (0..n)
            .map(|_| poisson_sample(lambda, &mut stream).unwrap() as f64)
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se_mean = (lambda / n as f64).sqrt();
        // Var of the sample variance for Poisson: (2 lambda^2 + lambda) / n
        let se_var = ((2.0 * lambda * lambda + lambda) / n as f64).sqrt();
        assert!(
            (mean - lambda).abs() < 3.0 * se_mean,
            "lambda {lambda}: mean {mean} off by > 3 SE"
        );
        assert!(
            (var - lambda).abs() < 3.0 * se_var,
            "lambda {lambda}: variance {var} off by > 3 SE"
        );
    }

    // independent oracle: pmf terms computed from scratch in log space
    let ln_factorial = |k: u64| -> f64 { (1..=k).map(|i| (i as f64).ln()).sum() };
    let cutoff_oracle = |lambda: f64, epsilon: f64| -> u64 {
        let target = 1.0 - epsilon;
        let mut s = 0u64;
        loop {
            let cdf: f64 = (0..=s)
                .map(|k| (k as f64 * lambda.ln() - lambda - ln_factorial(k)).exp())
                .sum();
            if cdf >= target {
                return s;
            }
            s += 1;
            assert!(s < 10_000, "oracle runaway at lambda {lambda}");
        }
    };
    for lambda in [0.0001, 1.0, 10.0, 100.0] {
        assert_eq!(
            poisson_cdf_cutoff(lambda, 1e-6),
            cutoff_oracle(lambda, 1e-6),
            "cutoff mismatch at lambda {lambda}"
        );
    }
    pass("07 poisson kernel", "moments within 3 SE; cutoff exact vs oracle".into());
}

/// Criterion 8: generated bases are orthonormal to 1e-10, the scaled
/// product peaks at exactly 10 (within 1e-9), and the (r+1)-th singular
/// value is below 1e-8 of the first.
#[test]
fn criterion_08_orthonormality_and_scale() {
    for seed in [0u64, 1, 2] {
        let u = orthonormal_factor::<f64>(300, 5, seed).unwrap();
        let defect = u.orthonormality_defect();
        assert!(defect < 1e-10, "seed {seed}: orthonormality defect {defect}");
    }

    let factors = generate_lowrank::<f64>(300, 200, 5, 3).unwrap();
    let full = product_matrix(&factors.p, &factors.q);
    let max = full.max_abs();
    assert!((max - 10.0).abs() < 1e-9, "max |entry| = {max}");

    let na = nalgebra::DMatrix::from_fn(300, 200, |i, j| full.get(i, j));
    let svd = na.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!(
        sv[5] < 1e-8 * sv[0],
        "sigma_6 = {} not below 1e-8 * sigma_1 = {}",
        sv[5],
        1e-8 * sv[0]
    );
    pass(
        "08 orthonormality and scale",
        format!("defect<1e-10, max|PQ^T|-10={:.1e}, sigma_6/sigma_1={:.1e}", max - 10.0, sv[5] / sv[0]),
    );
}

/// Criterion 9: one config, two runs, byte-identical CSV artifacts
/// (splits, shuffles, and Poisson draws are all seed-stable).
#[test]
fn criterion_09_determinism() {
    let mut cfg = ExperimentConfig::default();
    cfg.dataset.synthetic = Some(SyntheticConfig {
        n: 60,
        m: 45,
        rank: 3,
        mask: MaskKind::Skewed,
        density: 1.0,
        pattern_path: None,
    });
    cfg.method = Method::TmfDropout;
    cfg.grid = GridConfig {
        lambda: vec![0.01],
        rank: vec![4],
        rho: vec![1.0],
        steepness: vec![10.0],
        midpoint: vec![0.0, 0.25],
    };
    cfg.train.learning_rate = 0.02;
    cfg.train.max_epochs = 30;
    cfg.train.patience = 10;
    cfg.run.repeats = 2;
    cfg.run.base_seed = 21;

    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("first"), tmp.path().join("second")];
    for dir in &dirs {
        let result = run_experiment(&cfg).unwrap();
        write_experiment(dir, &cfg, &result).unwrap();
    }
    let mut compared = 0;
    for entry in walk(&dirs[0]) {
        let rel = entry.strip_prefix(&dirs[0]).unwrap();
        let a = std::fs::read(&entry).unwrap();
        let b = std::fs::read(dirs[1].join(rel)).unwrap();
        assert_eq!(a, b, "artifact {} differs between runs", rel.display());
        compared += 1;
    }
    assert!(compared >= 10, "only {compared} artifacts compared");
    pass("09 determinism", format!("{compared} artifacts byte-identical"));
}

fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.push(path);
            }
        }
    }
    files.sort();
    files
}

/// Criterion 10: the winning grid cell attains the minimum validation RMSE
/// among non-failed cells, and the default grids equal the reference
/// search lists exactly.
#[test]
fn criterion_10_grid_search_contract() {
    let g = GridConfig::default();
    assert_eq!(g.lambda, vec![0.001, 0.01, 0.1, 1.0, 10.0]);
    assert_eq!(g.rank, vec![1, 5, 10, 15, 25, 50, 75, 100]);
    assert_eq!(g.rho, vec![1.0, 10.0, 50.0]);
    assert_eq!(g.steepness, vec![1.0, 5.0, 10.0, 20.0, 40.0]);
    assert_eq!(g.midpoint, vec![-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75]);

    let factors = generate_lowrank::<f64>(40, 30, 2, 5).unwrap();
    let full = product_matrix(&factors.p, &factors.q);
    let ds = apply_mask_uniform(&full, 0.5, 5).unwrap();
    let (train, val, _) = split(&ds, 0.2, 0.0, 5).unwrap();
    let mut cfg = ExperimentConfig::default();
    cfg.method = Method::Mf;
    // include a step-size-incompatible cell that must fail and be excluded
    cfg.grid.lambda = vec![1e6, 0.01, 0.1];
    cfg.grid.rank = vec![2, 3];
    cfg.train.learning_rate = 0.02;
    cfg.train.max_epochs = 30;
    cfg.train.patience = 10;
    let (grid, _) = tailmf::harness::grid_search(&cfg, &train, &val, 7).unwrap();
    let failed = grid.cells.iter().filter(|c| c.val_rmse.is_none()).count();
    assert!(failed >= 1, "expected the 1e6-lambda cells to fail");
    let min = grid
        .cells
        .iter()
        .filter_map(|c| c.val_rmse)
        .fold(f64::INFINITY, f64::min);
    let winner = grid.winner_cell();
    assert_eq!(winner.val_rmse.unwrap(), min);
    pass(
        "10 grid-search contract",
        format!("winner rmse {:.4} = min over {} ok cells ({} failed)", min, grid.cells.len() - failed, failed),
    );
}
