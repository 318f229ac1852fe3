//! Deterministic, splittable randomness for reproducible experiments.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A seeded random source with labelled substream derivation.
///
/// Identical seeds yield identical draw sequences. [`RandomSource::substream`]
/// derives a child source from the parent *seed* and a label without touching
/// the parent's stream state, so any point of a run can be reconstructed from
/// the master seed and the label path alone.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha12Rng,
}

/// SplitMix64 finalizer, used to turn (seed, label) pairs into child seeds.
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child source. Pure in (seed, label): the parent
    /// stream does not advance and repeated calls return identical children.
    pub fn substream(&self, label: u64) -> Self {
        Self::new(mix(self.seed ^ mix(label)))
    }

    /// One uniform bit.
    pub fn bit(&mut self) -> bool {
        self.rng.gen()
    }

    /// Bernoulli draw; `p` must lie in [0, 1].
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Uniform index in `0..bound`.
    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub(crate) fn next_word(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
