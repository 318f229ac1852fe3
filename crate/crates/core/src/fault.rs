//! The adversary's physical access model: a tag whose concatenated key
//! memory can be set bit-by-bit between sessions, with run/reset control.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::protocol::{run_session, KeyPair, ProtocolParams};
use crate::rng::RandomSource;

/// The 2k-bit memory area `w = x ‖ y`. Bits `0..k` hold `x`, bits `k..2k`
/// hold `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMemory {
    bits: BitString,
    key_len: usize,
}

impl KeyMemory {
    pub fn from_key_pair(keys: &KeyPair) -> Self {
        Self {
            bits: keys.x().concat(keys.y()),
            key_len: keys.key_len(),
        }
    }

    pub fn key_len(&self) -> usize {
        self.key_len
    }

    /// Total memory width, `2k`.
    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, index: usize) -> Result<bool> {
        self.bits.get(index)
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    /// Splits the memory back into the key pair it currently encodes.
    pub fn split(&self) -> KeyPair {
        let (x, y) = self.bits.split_at(self.key_len);
        KeyPair::new(x, y).expect("memory halves have equal length")
    }
}

/// A tag under adversarial control. Faults target the key memory only;
/// counters and the noise source are out of reach.
#[derive(Debug, Clone)]
pub struct FaultableTag {
    memory: KeyMemory,
    pristine: BitString,
    noise: f64,
    fault_count: u64,
    fault_reliability: f64,
}

impl FaultableTag {
    pub fn new(keys: &KeyPair, noise: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&noise) {
            return Err(Error::NoiseOutOfRange(noise));
        }
        let memory = KeyMemory::from_key_pair(keys);
        let pristine = memory.bits().clone();
        Ok(Self {
            memory,
            pristine,
            noise,
            fault_count: 0,
            fault_reliability: 1.0,
        })
    }

    /// Probability that an injected fault actually lands. Defaults to 1.0;
    /// anything lower only matters to [`FaultableTag::flip_unreliable`] and
    /// exists for sensitivity studies.
    pub fn with_fault_reliability(mut self, reliability: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reliability) || reliability.is_nan() {
            return Err(Error::ReliabilityOutOfRange(reliability));
        }
        self.fault_reliability = reliability;
        Ok(self)
    }

    /// Sets memory bit `index` (0-based) to `value`, leaving every other bit
    /// untouched. Counts as one fault even when the bit already held `value`.
    pub fn flip(&mut self, index: usize, value: bool) -> Result<()> {
        self.memory.bits.set(index, value)?;
        self.fault_count += 1;
        Ok(())
    }

    /// Like [`FaultableTag::flip`], but the fault lands only with the
    /// configured reliability. Returns whether it landed; the attempt is
    /// counted either way.
    pub fn flip_unreliable(
        &mut self,
        index: usize,
        value: bool,
        rng: &mut RandomSource,
    ) -> Result<bool> {
        if self.fault_reliability >= 1.0 {
            self.flip(index, value)?;
            return Ok(true);
        }
        // Validate the index even when the fault fizzles.
        self.memory.get(index)?;
        self.fault_count += 1;
        let landed = rng.bernoulli(self.fault_reliability);
        if landed {
            self.memory.bits.set(index, value)?;
        }
        Ok(landed)
    }

    /// Restores the pristine memory image. The fault counter models the
    /// adversary's action budget, not device state, and survives.
    pub fn reset(&mut self) {
        self.memory.bits = self.pristine.clone();
    }

    pub fn fault_count(&self) -> u64 {
        self.fault_count
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn memory(&self) -> &KeyMemory {
        &self.memory
    }

    /// Runs one authentication of this tag (current, possibly faulted,
    /// memory; its own noise level) against an honest reader. Returns the
    /// reader's accept decision.
    pub fn run_auth(
        &self,
        reader_keys: &KeyPair,
        params: &ProtocolParams,
        rng: RandomSource,
    ) -> Result<bool> {
        let tag_keys = self.memory.split();
        if self.memory.key_len() != params.key_len() {
            return Err(Error::KeySizeMismatch {
                memory: self.memory.key_len(),
                expected: params.key_len(),
            });
        }
        Ok(run_session(&tag_keys, self.noise, reader_keys, params, rng)?.accepted())
    }
}
