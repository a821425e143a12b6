//! Exact-rank synthetic rating matrices and observation masks.
//!
//! A full matrix is built as `P Q^T` from two orthonormal bases of random
//! uniform draws, scaled so the largest entry magnitude is exactly
//! [`RATING_SCALE`]. Masks project the full matrix onto a sparse
//! [`RatingDataset`], either at the positions of an existing dataset or at
//! uniformly drawn positions.

use thiserror::Error;

use crate::data::RatingDataset;
use crate::numeric::{dot, DenseFactor, SeededStream};
use crate::Scalar;

/// Largest entry magnitude of a generated full matrix.
pub const RATING_SCALE: f64 = 10.0;

const RETRY_BUDGET: u64 = 5;
// substream tags separating the two factor draws and their retries
const TAG_ROWS: u64 = 0;
const TAG_COLS: u64 = 0x100;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("rank {rank} exceeds row count {rows}")]
    RankExceedsRows { rank: usize, rows: usize },
    #[error("rank {rank} exceeds min({n}, {m})")]
    RankExceedsDims { rank: usize, n: usize, m: usize },
    #[error("numerically rank-deficient draw after {RETRY_BUDGET} attempts")]
    DegenerateDraw,
    #[error("mask position ({user}, {item}) outside {n}x{m} matrix")]
    MaskOutOfBounds {
        user: usize,
        item: usize,
        n: usize,
        m: usize,
    },
    #[error("mask density {0} outside (0, 1]")]
    BadDensity(f64),
}

/// Dense n x m matrix of ratings.
#[derive(Debug, Clone)]
pub struct FullMatrix<S> {
    n: usize,
    m: usize,
    values: Vec<S>,
}

impl<S: Scalar> FullMatrix<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.values[i * self.m + j]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn max_abs(&self) -> S {
        self.values.iter().fold(S::zero(), |a, v| a.max(v.abs()))
    }
}

/// Generated factor pair with the empirical scale factor applied.
#[derive(Debug, Clone)]
pub struct LowRankFactors<S> {
    pub p: DenseFactor<S>,
    pub q: DenseFactor<S>,
    pub alpha: S,
}

/// The raw `rows x rank` uniform-[0,1) draw behind
/// [`orthonormal_factor`]'s first attempt, exposed so the spanned subspace
/// can be checked independently.
pub fn uniform_matrix<S: Scalar>(rows: usize, rank: usize, seed: u64) -> DenseFactor<S> {
    let mut stream = SeededStream::new(seed).substream(TAG_ROWS);
    DenseFactor::uniform(rows, rank, 0.0, 1.0, &mut stream)
}

/// Orthonormal basis of the column space of `raw` via modified Gram-Schmidt
/// with one reorthogonalization pass. `None` when a column is numerically
/// dependent on its predecessors.
pub fn orthonormalize<S: Scalar>(raw: &DenseFactor<S>) -> Option<DenseFactor<S>> {
    let rows = raw.rows();
    let rank = raw.rank();
    let mut cols: Vec<Vec<S>> = (0..rank).map(|j| raw.column(j)).collect();
    for j in 0..rank {
        let initial = norm(&cols[j]);
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _pass in 0..2 {
            for prev in done.iter() {
                let proj = dot(prev, col);
                for (c, p) in col.iter_mut().zip(prev) {
                    *c = *c - proj * *p;
                }
            }
        }
        let remaining = norm(col);
        if remaining <= initial * S::from_f64_lossy(1e-10) {
            return None;
        }
        let inv = S::one() / remaining;
        for c in col.iter_mut() {
            *c = *c * inv;
        }
    }
    let mut values = vec![S::zero(); rows * rank];
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            values[i * rank + j] = v;
        }
    }
    Some(DenseFactor::from_values(rows, rank, values))
}

fn norm<S: Scalar>(v: &[S]) -> S {
    dot(v, v).sqrt()
}

fn orthonormal_from_seed<S: Scalar>(
    rows: usize,
    rank: usize,
    seed: u64,
    tag_base: u64,
) -> Result<DenseFactor<S>, SynthError> {
    if rank > rows {
        return Err(SynthError::RankExceedsRows { rank, rows });
    }
    for attempt in 0..RETRY_BUDGET {
        let mut stream = SeededStream::new(seed).substream(tag_base + attempt);
        let raw = DenseFactor::uniform(rows, rank, 0.0, 1.0, &mut stream);
        if let Some(u) = orthonormalize(&raw) {
            return Ok(u);
        }
    }
    Err(SynthError::DegenerateDraw)
}

/// Orthonormal basis of the column space of a fresh `rows x rank`
/// uniform-[0,1) draw; a numerically degenerate draw is retried with a
/// perturbed stream up to the retry budget.
pub fn orthonormal_factor<S: Scalar>(
    rows: usize,
    rank: usize,
    seed: u64,
) -> Result<DenseFactor<S>, SynthError> {
    orthonormal_from_seed(rows, rank, seed, TAG_ROWS)
}

/// Generate the scaled factor pair: `P = alpha * U_rows`,
/// `Q = alpha * U_cols`, with `alpha` chosen so that
/// `max|P Q^T| = RATING_SCALE` exactly.
pub fn generate_lowrank<S: Scalar>(
    n: usize,
    m: usize,
    rank: usize,
    seed: u64,
) -> Result<LowRankFactors<S>, SynthError> {
    if rank > n.min(m) {
        return Err(SynthError::RankExceedsDims { rank, n, m });
    }
    let u_rows = orthonormal_from_seed::<S>(n, rank, seed, TAG_ROWS)?;
    let u_cols = orthonormal_from_seed::<S>(m, rank, seed, TAG_COLS)?;

    let mut max_abs = S::zero();
    for i in 0..n {
        let row = u_rows.row(i);
        for j in 0..m {
            max_abs = max_abs.max(dot(row, u_cols.row(j)).abs());
        }
    }
    // alpha^2 * max|U_rows U_cols^T| = RATING_SCALE
    let alpha = (S::from_f64_lossy(RATING_SCALE) / max_abs).sqrt();
    let mut p = u_rows;
    let mut q = u_cols;
    p.scale(alpha);
    q.scale(alpha);
    Ok(LowRankFactors { p, q, alpha })
}

/// Dense product `P Q^T`.
pub fn product_matrix<S: Scalar>(p: &DenseFactor<S>, q: &DenseFactor<S>) -> FullMatrix<S> {
    assert_eq!(p.rank(), q.rank(), "factor rank mismatch");
    let n = p.rows();
    let m = q.rows();
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        let row = p.row(i);
        for j in 0..m {
            values.push(dot(row, q.row(j)));
        }
    }
    FullMatrix { n, m, values }
}

/// Identifier used for synthetic matrix row `i` (zero-padded so that
/// lexicographic and numeric order agree).
pub fn user_label(row: usize) -> String {
    format!("u{row:06}")
}

/// Identifier used for synthetic matrix column `j`.
pub fn item_label(col: usize) -> String {
    format!("i{col:06}")
}

/// Project the full matrix onto the (user, item) positions of `pattern`.
/// The output reuses `pattern`'s identifiers and index maps; values come
/// from the full matrix.
pub fn apply_mask_pattern<S: Scalar>(
    full: &FullMatrix<S>,
    pattern: &RatingDataset<S>,
) -> Result<RatingDataset<S>, SynthError> {
    let triples = pattern
        .ratings()
        .iter()
        .map(|r| {
            if r.user >= full.n || r.item >= full.m {
                return Err(SynthError::MaskOutOfBounds {
                    user: r.user,
                    item: r.item,
                    n: full.n,
                    m: full.m,
                });
            }
            Ok((
                pattern.user_id(r.user).to_owned(),
                pattern.item_id(r.item).to_owned(),
                full.get(r.user, r.item),
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatingDataset::from_string_triples(triples).expect("pattern pairs are unique"))
}

/// Project the full matrix onto `round(density * n * m)` positions drawn
/// uniformly without replacement, emitted in row-major order.
pub fn apply_mask_uniform<S: Scalar>(
    full: &FullMatrix<S>,
    density: f64,
    seed: u64,
) -> Result<RatingDataset<S>, SynthError> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(SynthError::BadDensity(density));
    }
    let total = full.n * full.m;
    let keep = ((total as f64) * density).round() as usize;
    let mut stream = SeededStream::new(seed);
    let all: Vec<usize> = (0..total).collect();
    let positions = stream.choose_without_replacement(&all, keep);
    let triples = positions
        .into_iter()
        .map(|pos| {
            let (i, j) = (pos / full.m, pos % full.m);
            (user_label(i), item_label(j), full.get(i, j))
        })
        .collect();
    Ok(RatingDataset::from_string_triples(triples).expect("positions are unique"))
}
