use serde::{Deserialize, Serialize};

use super::SeededStream;
use crate::Scalar;

/// Dense row-major matrix, used for latent factors and orthonormal bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseFactor<S> {
    rows: usize,
    rank: usize,
    values: Vec<S>,
}

impl<S: Scalar> DenseFactor<S> {
    pub fn zeros(rows: usize, rank: usize) -> Self {
        Self {
            rows,
            rank,
            values: vec![S::zero(); rows * rank],
        }
    }

    pub fn from_values(rows: usize, rank: usize, values: Vec<S>) -> Self {
        assert_eq!(values.len(), rows * rank, "shape mismatch");
        Self { rows, rank, values }
    }

    /// Entries drawn uniformly in `[lo, hi)`, row-major draw order.
    pub fn uniform(rows: usize, rank: usize, lo: f64, hi: f64, stream: &mut SeededStream) -> Self {
        let values = (0..rows * rank).map(|_| stream.next_in_range(lo, hi)).collect();
        Self { rows, rank, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.values[i * self.rank..(i + 1) * self.rank]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.values[i * self.rank..(i + 1) * self.rank]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.values[i * self.rank + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.values[i * self.rank + j] = v;
    }

    /// Column `j` gathered into a vector.
    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn scale(&mut self, alpha: S) {
        for v in &mut self.values {
            *v = *v * alpha;
        }
    }

    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Max-norm of `self^T * self - I`; zero for an orthonormal basis.
    pub fn orthonormality_defect(&self) -> S {
        let mut worst = S::zero();
        for a in 0..self.rank {
            let col_a = self.column(a);
            for b in a..self.rank {
                let col_b = self.column(b);
                let dot = dot(&col_a, &col_b);
                let target = if a == b { S::one() } else { S::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full inner product of two equal-length slices.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    dot_prefix(a, b, a.len())
}

/// Inner product restricted to the leading `k` coordinates.
pub fn dot_prefix<S: Scalar>(a: &[S], b: &[S], k: usize) -> S {
    let mut acc = S::zero();
    for j in 0..k {
        acc = acc + a[j] * b[j];
    }
    acc
}
