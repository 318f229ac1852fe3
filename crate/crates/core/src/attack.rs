//! Per-bit fault-and-vote key extraction: walk the 2k memory positions,
//! force each bit to 0, let a majority of authentication outcomes decide the
//! original value, and restore the bit when it was a 1.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::fault::FaultableTag;
use crate::protocol::{KeyPair, ProtocolParams};
use crate::rng::RandomSource;

/// Extraction parameters: the number of authentications voted per bit and
/// the protocol parameters of the reader under attack.
#[derive(Debug, Clone, Copy)]
pub struct AttackConfig {
    queries_per_bit: u32,
    params: ProtocolParams,
}

impl AttackConfig {
    /// Odd `queries_per_bit` is recommended: ties on even counts resolve
    /// toward 0.
    pub fn new(queries_per_bit: u32, params: ProtocolParams) -> Result<Self> {
        if queries_per_bit == 0 {
            return Err(Error::NoQueries);
        }
        Ok(Self {
            queries_per_bit,
            params,
        })
    }

    pub fn queries_per_bit(&self) -> u32 {
        self.queries_per_bit
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }
}

/// Outcome of one extraction run.
#[derive(Debug, Clone)]
pub struct AttackResult {
    extracted: KeyPair,
    votes: Vec<u32>,
    faults_used: u64,
    auths_used: u64,
}

impl AttackResult {
    pub fn extracted(&self) -> &KeyPair {
        &self.extracted
    }

    /// Accepted-session counts per memory position, each in `0..=q`.
    pub fn votes(&self) -> &[u32] {
        &self.votes
    }

    /// Faults injected by this run: 2k first-pass flips plus one restoring
    /// flip per extracted 1.
    pub fn faults_used(&self) -> u64 {
        self.faults_used
    }

    /// Always exactly `2k * q`.
    pub fn auths_used(&self) -> u64 {
        self.auths_used
    }
}

/// The majority rule: bit 0 when at least half of the `q` authentications
/// succeeded, bit 1 otherwise. The comparison is `2 * counter >= q`, so it
/// never truncates and ties on even `q` yield 0.
pub fn majority_decide(counter: u32, q: u32) -> bool {
    2 * counter < q
}

/// Runs the extraction against `tag`, which talks to a reader holding
/// `reader_keys`. Authentication `j` of position `i` draws its session
/// randomness from substream `i*q + j` of `rng`, so runs are exactly
/// reproducible. No transcript history is consumed.
///
/// The tag is left holding the extracted key: positions decided 0 keep the
/// forced 0, positions decided 1 are flipped back to 1. Between-session
/// state is never reset during the run.
pub fn break_hb_plus(
    tag: &mut FaultableTag,
    reader_keys: &KeyPair,
    config: &AttackConfig,
    rng: &RandomSource,
) -> Result<AttackResult> {
    let key_len = config.params().key_len();
    if tag.memory().key_len() != key_len {
        return Err(Error::KeySizeMismatch {
            memory: tag.memory().key_len(),
            expected: key_len,
        });
    }
    if reader_keys.key_len() != key_len {
        return Err(Error::KeySizeMismatch {
            memory: reader_keys.key_len(),
            expected: key_len,
        });
    }

    let positions = 2 * key_len;
    let q = config.queries_per_bit();
    let faults_before = tag.fault_count();
    let mut extracted = BitString::zeros(positions);
    let mut votes = Vec::with_capacity(positions);

    for i in 0..positions {
        tag.flip(i, false)?;
        let mut counter = 0u32;
        for j in 0..q {
            let label = i as u64 * u64::from(q) + u64::from(j);
            if tag.run_auth(reader_keys, config.params(), rng.substream(label))? {
                counter += 1;
            }
        }
        votes.push(counter);
        if majority_decide(counter, q) {
            extracted.set(i, true)?;
            tag.flip(i, true)?;
        }
    }

    let (x, y) = extracted.split_at(key_len);
    Ok(AttackResult {
        extracted: KeyPair::new(x, y)?,
        votes,
        faults_used: tag.fault_count() - faults_before,
        auths_used: positions as u64 * u64::from(q),
    })
}
