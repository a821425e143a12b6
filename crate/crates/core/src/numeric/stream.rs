use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Scalar;

/// Deterministic random stream.
///
/// Backed by ChaCha8 seeded through `seed_from_u64`, which is specified to
/// produce the same byte stream on every platform. All shuffles, factor
/// initializations, subsamples, and Poisson draws in this crate go through a
/// `SeededStream`, so a run is fully reproducible from its seeds.
///
/// Workers in concurrent sections derive their own stream as
/// `SeededStream::new(seed ^ worker_index)`; independent substreams of one
/// logical seed use [`SeededStream::substream`].
#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: ChaCha8Rng,
    seed: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// The seed this stream was created from (substream tag not included).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream with the same seed and a distinct ChaCha stream id.
    pub fn substream(&self, tag: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(tag);
        Self {
            rng,
            seed: self.seed,
        }
    }

    /// Uniform draw in `[0, 1)` with 53-bit precision.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform draw in `[lo, hi)` converted into the scalar type.
    pub fn next_in_range<S: Scalar>(&mut self, lo: f64, hi: f64) -> S {
        S::from_f64_lossy(lo + (hi - lo) * self.next_f64())
    }

    /// Uniform index in `0..n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.gen_range(0..n)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn next_count(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.next_index(i + 1);
            xs.swap(i, j);
        }
    }

    /// Keep `k` elements chosen uniformly without replacement, preserving the
    /// relative order of the survivors.
    pub fn choose_without_replacement<T: Copy>(&mut self, xs: &[T], k: usize) -> Vec<T> {
        debug_assert!(k <= xs.len());
        let mut idx: Vec<usize> = (0..xs.len()).collect();
        // partial Fisher-Yates: after i swaps the prefix is a uniform sample
        for i in 0..k {
            let j = i + self.next_index(xs.len() - i);
            idx.swap(i, j);
        }
        let mut keep = idx[..k].to_vec();
        keep.sort_unstable();
        keep.into_iter().map(|i| xs[i]).collect()
    }
}
