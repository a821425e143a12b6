//! Skew-aware evaluation statistics: overall RMSE, per-quartile RMSE,
//! item-frequency bucket curves, and MAE-based accuracy counts.
//!
//! All statistics are computed read-only against a [`RatingPredictor`];
//! groups with no test ratings are reported as absent, never as zero.

use serde::Serialize;
use thiserror::Error;

use crate::data::{FrequencyTable, QuartileMap, RatingDataset};
use crate::models::RatingPredictor;
use crate::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("cannot compute RMSE over an empty list")]
    Empty,
}

/// Root mean squared error over `(predicted, actual)` pairs.
pub fn rmse<S: Scalar>(pairs: &[(S, S)]) -> Result<S, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    let sq_sum = pairs
        .iter()
        .fold(S::zero(), |acc, &(p, a)| acc + (p - a) * (p - a));
    Ok((sq_sum / S::from_usize(pairs.len()).expect("len fits scalar")).sqrt())
}

/// RMSE and rating count of one report cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellStat {
    pub count: usize,
    pub rmse: f64,
}

/// One item-frequency bucket of the diagnostic curve. Bucket 0 holds the
/// most frequent items.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketStat {
    pub bucket: usize,
    /// Mean training frequency of the items assigned to this bucket.
    pub mean_freq: f64,
    /// Per-user RMSE averaged over users with test ratings in the bucket;
    /// absent when no user has any.
    pub rmse: Option<f64>,
    pub n_ratings: usize,
    pub n_items: usize,
}

/// MAE-accuracy scatter point for one item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemAccuracy {
    pub item: String,
    pub freq: u64,
    pub accurate_count: usize,
    pub test_count: usize,
}

/// Full evaluation of one predictor on one test split.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub overall_rmse: f64,
    pub n_test: usize,
    pub user_quartiles: [Option<CellStat>; 4],
    pub item_quartiles: [Option<CellStat>; 4],
    pub bucket_curve: Vec<BucketStat>,
    pub mae_accuracy: Vec<ItemAccuracy>,
    /// Test predictions within the MAE threshold, summed over items.
    pub mae_accurate_count: usize,
    pub mae_threshold: f64,
}

/// Per-quartile RMSE of the test ratings, grouped by the user's quartile
/// and, separately, by the item's quartile. Quartiles must come from the
/// training split's frequencies.
pub fn quartile_report<S: Scalar, P: RatingPredictor<S>>(
    predictor: &P,
    test: &RatingDataset<S>,
    quartiles: &QuartileMap,
) -> ([Option<CellStat>; 4], [Option<CellStat>; 4]) {
    let mut user_cells = [(0.0f64, 0usize); 4];
    let mut item_cells = [(0.0f64, 0usize); 4];
    for r in test.ratings() {
        let d = (predictor.predict(r.user, r.item) - r.value)
            .to_f64()
            .expect("finite prediction");
        let sq = d * d;
        let uq = quartiles.user_quartile[r.user].index();
        user_cells[uq].0 += sq;
        user_cells[uq].1 += 1;
        let iq = quartiles.item_quartile[r.item].index();
        item_cells[iq].0 += sq;
        item_cells[iq].1 += 1;
    }
    let finish = |cells: [(f64, usize); 4]| {
        cells.map(|(sq, n)| {
            (n > 0).then(|| CellStat {
                count: n,
                rmse: (sq / n as f64).sqrt(),
            })
        })
    };
    (finish(user_cells), finish(item_cells))
}

/// Assign every item to one of `buckets` near-equal groups by decreasing
/// training frequency (ties broken by identifier). Bucket 0 is the most
/// frequent group; remainder items go to the earliest buckets.
pub fn assign_buckets<S: Scalar>(
    freq: &FrequencyTable<S>,
    item_ids: &[String],
    buckets: usize,
) -> Vec<usize> {
    assert!(buckets > 0);
    let n = item_ids.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        freq.item_count(b)
            .cmp(&freq.item_count(a))
            .then_with(|| item_ids[a].cmp(&item_ids[b]))
    });
    let base = n / buckets;
    let rem = n % buckets;
    let mut assignment = vec![0usize; n];
    let mut cursor = 0;
    for b in 0..buckets {
        let size = base + usize::from(b < rem);
        for &item in &order[cursor..cursor + size] {
            assignment[item] = b;
        }
        cursor += size;
    }
    assignment
}

/// The item-frequency bucket curve: per user, the RMSE of that user's test
/// ratings inside each bucket; per bucket, the average of those user RMSEs
/// over the users that have ratings there. Users without ratings in a
/// bucket are skipped in that bucket's average.
pub fn bucket_curve<S: Scalar, P: RatingPredictor<S>>(
    predictor: &P,
    test: &RatingDataset<S>,
    freq: &FrequencyTable<S>,
    buckets: usize,
) -> Vec<BucketStat> {
    let assignment = assign_buckets(freq, test.item_ids(), buckets);

    // (user, bucket) -> squared-error sum and count
    let n_users = test.n_users();
    let mut sq = vec![0.0f64; n_users * buckets];
    let mut cnt = vec![0usize; n_users * buckets];
    for r in test.ratings() {
        let d = (predictor.predict(r.user, r.item) - r.value)
            .to_f64()
            .expect("finite prediction");
        let slot = r.user * buckets + assignment[r.item];
        sq[slot] += d * d;
        cnt[slot] += 1;
    }

    let mut out = Vec::with_capacity(buckets);
    for b in 0..buckets {
        let members: Vec<usize> = (0..test.n_items()).filter(|&i| assignment[i] == b).collect();
        if members.is_empty() {
            continue;
        }
        let mean_freq = members.iter().map(|&i| freq.item_count(i) as f64).sum::<f64>()
            / members.len() as f64;
        let mut rmse_sum = 0.0;
        let mut users = 0usize;
        let mut n_ratings = 0usize;
        for u in 0..n_users {
            let slot = u * buckets + b;
            if cnt[slot] > 0 {
                rmse_sum += (sq[slot] / cnt[slot] as f64).sqrt();
                users += 1;
                n_ratings += cnt[slot];
            }
        }
        out.push(BucketStat {
            bucket: b,
            mean_freq,
            rmse: (users > 0).then(|| rmse_sum / users as f64),
            n_ratings,
            n_items: members.len(),
        });
    }
    out
}

/// Per-item count of test predictions with `|predicted - actual| <=
/// threshold`, paired with the item's training frequency. Items without
/// test ratings are omitted.
pub fn mae_accuracy<S: Scalar, P: RatingPredictor<S>>(
    predictor: &P,
    test: &RatingDataset<S>,
    freq: &FrequencyTable<S>,
    threshold: f64,
) -> Vec<ItemAccuracy> {
    let mut accurate = vec![0usize; test.n_items()];
    let mut totals = vec![0usize; test.n_items()];
    for r in test.ratings() {
        let d = (predictor.predict(r.user, r.item) - r.value)
            .to_f64()
            .expect("finite prediction");
        totals[r.item] += 1;
        if d.abs() <= threshold {
            accurate[r.item] += 1;
        }
    }
    (0..test.n_items())
        .filter(|&i| totals[i] > 0)
        .map(|i| ItemAccuracy {
            item: test.item_id(i).to_owned(),
            freq: freq.item_count(i),
            accurate_count: accurate[i],
            test_count: totals[i],
        })
        .collect()
}

/// Default MAE accuracy threshold.
pub const DEFAULT_MAE_THRESHOLD: f64 = 0.5;

/// Default number of frequency buckets.
pub const DEFAULT_BUCKETS: usize = 10;

/// Run the full report: overall RMSE, both quartile groupings, the bucket
/// curve, and the MAE scatter.
pub fn evaluate<S: Scalar, P: RatingPredictor<S>>(
    predictor: &P,
    test: &RatingDataset<S>,
    quartiles: &QuartileMap,
    freq: &FrequencyTable<S>,
    buckets: usize,
    mae_threshold: f64,
) -> Result<EvalReport, EvalError> {
    if test.is_empty() {
        return Err(EvalError::Empty);
    }
    let pairs: Vec<(S, S)> = test
        .ratings()
        .iter()
        .map(|r| (predictor.predict(r.user, r.item), r.value))
        .collect();
    let overall_rmse = rmse(&pairs)?.to_f64().expect("finite rmse");
    let (user_quartiles, item_quartiles) = quartile_report(predictor, test, quartiles);
    let curve = bucket_curve(predictor, test, freq, buckets);
    let mae = mae_accuracy(predictor, test, freq, mae_threshold);
    let mae_total = mae.iter().map(|a| a.accurate_count).sum();
    Ok(EvalReport {
        overall_rmse,
        n_test: test.len(),
        user_quartiles,
        item_quartiles,
        bucket_curve: curve,
        mae_accuracy: mae,
        mae_accurate_count: mae_total,
        mae_threshold,
    })
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    pearson(&rx, &ry)
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}
