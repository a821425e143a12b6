//! Rating triples, frequency tables, splits, quartiles, and skewed
//! subsampling.
//!
//! A dataset interns user/item identifiers into dense indices once at
//! construction; every downstream structure (factors, frequency tables,
//! quartile maps) is indexed by those dense ids. Splits and subsamples share
//! the parent's index maps so entity indices agree across them.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::SeededStream;
use crate::Scalar;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed rating line ({reason})")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate (user, item) pair ({user}, {item})")]
    Duplicate {
        line: usize,
        user: String,
        item: String,
    },
    #[error("ratings file contains no data lines")]
    EmptyFile,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("split fractions out of range (val={val}, test={test}; need val+test < 1)")]
    BadFractions { val: f64, test: f64 },
}

/// One observed rating, referencing dense user/item indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rating<S> {
    pub user: usize,
    pub item: usize,
    pub value: S,
}

/// Sparse collection of ratings plus the identifier interning tables.
#[derive(Debug, Clone)]
pub struct RatingDataset<S> {
    ratings: Vec<Rating<S>>,
    user_ids: Vec<String>,
    item_ids: Vec<String>,
    user_index: HashMap<String, usize>,
    item_index: HashMap<String, usize>,
}

impl<S: Scalar> RatingDataset<S> {
    /// Build a dataset from owned `(user, item, value)` triples, interning
    /// identifiers in first-seen order.
    pub fn from_string_triples(triples: Vec<(String, String, S)>) -> Result<Self, DataError> {
        let mut ds = Self {
            ratings: Vec::with_capacity(triples.len()),
            user_ids: Vec::new(),
            item_ids: Vec::new(),
            user_index: HashMap::new(),
            item_index: HashMap::new(),
        };
        let mut seen = HashMap::new();
        for (pos, (user, item, value)) in triples.into_iter().enumerate() {
            ds.push_triple(user, item, value, pos + 1, &mut seen)?;
        }
        Ok(ds)
    }

    fn push_triple(
        &mut self,
        user: String,
        item: String,
        value: S,
        line: usize,
        seen: &mut HashMap<(usize, usize), usize>,
    ) -> Result<(), DataError> {
        if !value.is_finite() {
            return Err(DataError::Malformed {
                line,
                reason: "rating is not finite".into(),
            });
        }
        let u = intern(&mut self.user_index, &mut self.user_ids, user);
        let i = intern(&mut self.item_index, &mut self.item_ids, item);
        if seen.insert((u, i), line).is_some() {
            return Err(DataError::Duplicate {
                line,
                user: self.user_ids[u].clone(),
                item: self.item_ids[i].clone(),
            });
        }
        self.ratings.push(Rating {
            user: u,
            item: i,
            value,
        });
        Ok(())
    }

    /// Load ratings from a text file: one `user<sep>item<sep>rating` per
    /// line, `#`-prefixed comment lines and blank lines skipped. The
    /// separator (tab or comma) is auto-detected per file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let reader = BufReader::new(File::open(path)?);
        let mut ds = Self {
            ratings: Vec::new(),
            user_ids: Vec::new(),
            item_ids: Vec::new(),
            user_index: HashMap::new(),
            item_index: HashMap::new(),
        };
        let mut seen = HashMap::new();
        let mut sep: Option<char> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let sep = *sep.get_or_insert(if trimmed.contains('\t') { '\t' } else { ',' });
            let mut fields = trimmed.split(sep);
            let (user, item, value) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some(u), Some(i), Some(v), None) => (u, i, v),
                _ => {
                    return Err(DataError::Malformed {
                        line: line_no,
                        reason: format!("expected 3 fields separated by {sep:?}"),
                    })
                }
            };
            let value: f64 = value.trim().parse().map_err(|e| DataError::Malformed {
                line: line_no,
                reason: format!("bad rating value: {e}"),
            })?;
            ds.push_triple(
                user.trim().to_owned(),
                item.trim().to_owned(),
                S::from_f64_lossy(value),
                line_no,
                &mut seen,
            )?;
        }
        if ds.ratings.is_empty() {
            return Err(DataError::EmptyFile);
        }
        Ok(ds)
    }

    /// Write the triples as `user,item,rating` lines in dataset order.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), DataError> {
        let mut out = BufWriter::new(File::create(path)?);
        for r in &self.ratings {
            writeln!(
                out,
                "{},{},{}",
                self.user_ids[r.user], self.item_ids[r.item], r.value
            )?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    /// Size of the user index space (see note on splits in the module docs).
    pub fn n_users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_ids.len()
    }

    pub fn ratings(&self) -> &[Rating<S>] {
        &self.ratings
    }

    pub fn user_id(&self, idx: usize) -> &str {
        &self.user_ids[idx]
    }

    pub fn item_id(&self, idx: usize) -> &str {
        &self.item_ids[idx]
    }

    pub fn user_ids(&self) -> &[String] {
        &self.user_ids
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn lookup_user(&self, id: &str) -> Option<usize> {
        self.user_index.get(id).copied()
    }

    pub fn lookup_item(&self, id: &str) -> Option<usize> {
        self.item_index.get(id).copied()
    }

    /// Mean of all rating values; 0 for an empty dataset.
    pub fn global_mean(&self) -> S {
        if self.ratings.is_empty() {
            return S::zero();
        }
        let sum = self
            .ratings
            .iter()
            .fold(S::zero(), |acc, r| acc + r.value);
        sum / S::from_usize(self.ratings.len()).expect("len fits scalar")
    }

    /// New dataset holding the ratings at `indices` (in the given order),
    /// sharing this dataset's identifier maps.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            ratings: indices.iter().map(|&i| self.ratings[i]).collect(),
            user_ids: self.user_ids.clone(),
            item_ids: self.item_ids.clone(),
            user_index: self.user_index.clone(),
            item_index: self.item_index.clone(),
        }
    }
}

fn intern(index: &mut HashMap<String, usize>, ids: &mut Vec<String>, id: String) -> usize {
    if let Some(&i) = index.get(&id) {
        return i;
    }
    let i = ids.len();
    index.insert(id.clone(), i);
    ids.push(id);
    i
}

/// Per-entity rating counts and max-normalized frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyTable<S> {
    user_count: Vec<u64>,
    item_count: Vec<u64>,
    user_norm: Vec<S>,
    item_norm: Vec<S>,
}

impl<S: Scalar> FrequencyTable<S> {
    pub fn user_count(&self, u: usize) -> u64 {
        self.user_count[u]
    }

    pub fn item_count(&self, i: usize) -> u64 {
        self.item_count[i]
    }

    pub fn user_counts(&self) -> &[u64] {
        &self.user_count
    }

    pub fn item_counts(&self) -> &[u64] {
        &self.item_count
    }

    pub fn user_norm(&self, u: usize) -> S {
        self.user_norm[u]
    }

    pub fn item_norm(&self, i: usize) -> S {
        self.item_norm[i]
    }

    /// `min(f_u, f_i)` on the normalized scale, the sigmoid and weighting
    /// input.
    pub fn min_norm(&self, u: usize, i: usize) -> S {
        self.user_norm[u].min(self.item_norm[i])
    }

    pub fn n_users(&self) -> usize {
        self.user_count.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_count.len()
    }
}

/// Count ratings per user and item and normalize each class by its maximum
/// count, so the busiest entity maps to 1 and unseen entities map to 0.
pub fn compute_frequencies<S: Scalar>(ds: &RatingDataset<S>) -> Result<FrequencyTable<S>, DataError> {
    if ds.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let mut user_count = vec![0u64; ds.n_users()];
    let mut item_count = vec![0u64; ds.n_items()];
    for r in ds.ratings() {
        user_count[r.user] += 1;
        item_count[r.item] += 1;
    }
    let normalize = |counts: &[u64]| -> Vec<S> {
        let max = counts.iter().copied().max().unwrap_or(0).max(1);
        counts
            .iter()
            .map(|&c| S::from_u64(c).expect("count fits scalar") / S::from_u64(max).expect("count"))
            .collect()
    };
    Ok(FrequencyTable {
        user_norm: normalize(&user_count),
        item_norm: normalize(&item_count),
        user_count,
        item_count,
    })
}

/// Frequency quartile, ordered from the infrequent tail (Q1) upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quartile {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quartile {
    pub const ALL: [Quartile; 4] = [Quartile::Q1, Quartile::Q2, Quartile::Q3, Quartile::Q4];

    pub fn index(self) -> usize {
        match self {
            Quartile::Q1 => 0,
            Quartile::Q2 => 1,
            Quartile::Q3 => 2,
            Quartile::Q4 => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Quartile::Q1 => "Q1",
            Quartile::Q2 => "Q2",
            Quartile::Q3 => "Q3",
            Quartile::Q4 => "Q4",
        }
    }
}

/// Per-entity quartile labels for users and items.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuartileMap {
    pub user_quartile: Vec<Quartile>,
    pub item_quartile: Vec<Quartile>,
}

/// Partition users and items into four near-equal groups by ascending
/// rating count, ties broken by identifier so the labeling is invariant
/// under permutation of the input triples. When the class has fewer than 4
/// entities everything lands in Q1.
pub fn assign_quartiles<S: Scalar>(freq: &FrequencyTable<S>, ds: &RatingDataset<S>) -> QuartileMap {
    QuartileMap {
        user_quartile: partition_class(freq.user_counts(), ds.user_ids()),
        item_quartile: partition_class(freq.item_counts(), ds.item_ids()),
    }
}

fn partition_class(counts: &[u64], ids: &[String]) -> Vec<Quartile> {
    debug_assert_eq!(counts.len(), ids.len());
    let n = counts.len();
    if n < 4 {
        warn!("fewer than 4 entities ({n}); labeling all of them Q1");
        return vec![Quartile::Q1; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then_with(|| ids[a].cmp(&ids[b])));
    // remainder entities go to the lowest quartiles first
    let base = n / 4;
    let rem = n % 4;
    let sizes = [
        base + usize::from(rem > 0),
        base + usize::from(rem > 1),
        base + usize::from(rem > 2),
        base,
    ];
    let mut labels = vec![Quartile::Q1; n];
    let mut cursor = 0;
    for (q, &size) in Quartile::ALL.iter().zip(&sizes) {
        for &entity in &order[cursor..cursor + size] {
            labels[entity] = *q;
        }
        cursor += size;
    }
    labels
}

/// Deterministically partition the dataset into train/validation/test.
///
/// The requested fractions are rounded to whole counts (so sizes are within
/// one of the exact fractions); all three outputs share the parent's index
/// maps.
pub fn split<S: Scalar>(
    ds: &RatingDataset<S>,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
) -> Result<(RatingDataset<S>, RatingDataset<S>, RatingDataset<S>), DataError> {
    if !(0.0..1.0).contains(&val_frac)
        || !(0.0..1.0).contains(&test_frac)
        || val_frac + test_frac >= 1.0
    {
        return Err(DataError::BadFractions {
            val: val_frac,
            test: test_frac,
        });
    }
    let n = ds.len();
    let n_val = (n as f64 * val_frac).round() as usize;
    let n_test = (n as f64 * test_frac).round() as usize;

    let mut perm: Vec<usize> = (0..n).collect();
    SeededStream::new(seed).shuffle(&mut perm);

    let mut val_idx: Vec<usize> = perm[..n_val].to_vec();
    let mut test_idx: Vec<usize> = perm[n_val..n_val + n_test].to_vec();
    let mut train_idx: Vec<usize> = perm[n_val + n_test..].to_vec();
    // keep each split in original dataset order
    val_idx.sort_unstable();
    test_idx.sort_unstable();
    train_idx.sort_unstable();

    Ok((
        ds.subset(&train_idx),
        ds.subset(&val_idx),
        ds.subset(&test_idx),
    ))
}

/// Two-phase skewed down-sampling.
///
/// Per user, a target count is drawn uniformly in `[1, f_u]` and that many of
/// the user's ratings are kept uniformly without replacement; then the same
/// is done per item over the survivors. The output shares the parent's index
/// maps.
pub fn skewed_subsample<S: Scalar>(ds: &RatingDataset<S>, seed: u64) -> RatingDataset<S> {
    let mut stream = SeededStream::new(seed);

    let mut by_user: Vec<Vec<usize>> = vec![Vec::new(); ds.n_users()];
    for (idx, r) in ds.ratings().iter().enumerate() {
        by_user[r.user].push(idx);
    }
    let mut survivors: Vec<usize> = Vec::new();
    for owned in &by_user {
        if owned.is_empty() {
            continue;
        }
        let target = stream.next_count(1, owned.len());
        survivors.extend(stream.choose_without_replacement(owned, target));
    }

    let mut by_item: Vec<Vec<usize>> = vec![Vec::new(); ds.n_items()];
    for &idx in &survivors {
        by_item[ds.ratings()[idx].item].push(idx);
    }
    let mut kept: Vec<usize> = Vec::new();
    for owned in &by_item {
        if owned.is_empty() {
            continue;
        }
        let target = stream.next_count(1, owned.len());
        kept.extend(stream.choose_without_replacement(owned, target));
    }
    kept.sort_unstable();
    ds.subset(&kept)
}
