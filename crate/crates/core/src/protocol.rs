//! The HB+ round engine: challenge/blind/respond rounds and the acceptance
//! rule over a full authentication session.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Acceptance threshold `floor(eta * r)`.
///
/// Products within 1e-9 of an integer are snapped to that integer first, so
/// that e.g. `eta = 0.3, r = 10` yields 3 rather than 2 despite the f64
/// representation of 0.3 falling slightly below 3/10.
pub fn acceptance_threshold(eta: f64, r: u32) -> u32 {
    let product = eta * f64::from(r);
    let snapped = if (product - product.round()).abs() < 1e-9 {
        product.round()
    } else {
        product.floor()
    };
    snapped as u32
}

/// Session parameters: per-key length `k`, round count `r`, noise level
/// `eta`, and the derived acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    key_len: usize,
    rounds: u32,
    noise: f64,
    threshold: u32,
}

impl ProtocolParams {
    /// `eta = 0` is accepted here so that noiseless simulations can run; the
    /// analytic formulas in [`crate::binomial`] reject it separately.
    pub fn new(key_len: usize, rounds: u32, noise: f64) -> Result<Self> {
        if key_len == 0 {
            return Err(Error::EmptyKey);
        }
        if rounds == 0 {
            return Err(Error::NoRounds);
        }
        if !(0.0..0.5).contains(&noise) {
            return Err(Error::NoiseOutOfRange(noise));
        }
        Ok(Self {
            key_len,
            rounds,
            noise,
            threshold: acceptance_threshold(noise, rounds),
        })
    }

    pub fn key_len(&self) -> usize {
        self.key_len
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Maximum number of mismatching rounds the reader tolerates.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }
}

/// The shared secret key pair `(x, y)`, both of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    x: BitString,
    y: BitString,
}

impl KeyPair {
    pub fn new(x: BitString, y: BitString) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptyKey);
        }
        Ok(Self { x, y })
    }

    pub fn random(key_len: usize, rng: &mut RandomSource) -> Result<Self> {
        Self::new(
            BitString::random(key_len, rng),
            BitString::random(key_len, rng),
        )
    }

    pub fn x(&self) -> &BitString {
        &self.x
    }

    pub fn y(&self) -> &BitString {
        &self.y
    }

    pub fn key_len(&self) -> usize {
        self.x.len()
    }
}

/// GF(2) inner product of two equal-length bit strings.
pub fn inner_product(a: &BitString, x: &BitString) -> Result<bool> {
    a.dot(x)
}

/// What the tag emits in one round: its blinding vector, the response bit,
/// and the noise bit it sampled (visible to the simulation only).
#[derive(Debug, Clone)]
pub struct TagResponse {
    pub blinding: BitString,
    pub response: bool,
    pub noise: bool,
}

/// One round of the tag side: draw a fresh blinding vector `b` and noise bit
/// `v ~ Bernoulli(eta)`, answer `z = a·x ⊕ b·y ⊕ v`.
pub fn tag_respond(
    keys: &KeyPair,
    challenge: &BitString,
    noise_level: f64,
    rng: &mut RandomSource,
) -> Result<TagResponse> {
    if !(0.0..0.5).contains(&noise_level) {
        return Err(Error::NoiseOutOfRange(noise_level));
    }
    let blinding = BitString::random(keys.key_len(), rng);
    let noise = rng.bernoulli(noise_level);
    let response =
        inner_product(challenge, keys.x())? ^ inner_product(&blinding, keys.y())? ^ noise;
    Ok(TagResponse {
        blinding,
        response,
        noise,
    })
}

/// The reader's noiseless expectation `z* = a·x ⊕ b·y`.
pub fn reader_expect(keys: &KeyPair, challenge: &BitString, blinding: &BitString) -> Result<bool> {
    Ok(inner_product(challenge, keys.x())? ^ inner_product(blinding, keys.y())?)
}

/// Everything observable (and the hidden noise bit) from one round.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub challenge: BitString,
    pub blinding: BitString,
    pub response: bool,
    pub expected: bool,
    pub noise: bool,
}

impl RoundRecord {
    pub fn mismatched(&self) -> bool {
        self.response != self.expected
    }
}

/// A complete session: per-round records, the mismatch count, and the
/// accept/reject decision.
#[derive(Debug, Clone)]
pub struct AuthTranscript {
    rounds: Vec<RoundRecord>,
    mismatches: u32,
    accepted: bool,
}

impl AuthTranscript {
    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn mismatches(&self) -> u32 {
        self.mismatches
    }

    pub fn accepted(&self) -> bool {
        self.accepted
    }
}

/// Runs a full session. The tag responds with `tag_keys` while the reader
/// checks against `reader_keys`; the two differ when a fault-corrupted tag
/// talks to an honest reader. Accepts iff at most `params.threshold()`
/// rounds mismatch.
///
/// Consumes the random source: every session needs its own substream.
pub fn authenticate(
    tag_keys: &KeyPair,
    reader_keys: &KeyPair,
    params: &ProtocolParams,
    rng: RandomSource,
) -> Result<AuthTranscript> {
    run_session(tag_keys, params.noise(), reader_keys, params, rng)
}

/// Session core with the tag's noise level decoupled from the reader-side
/// parameters; `authenticate` ties them back together for the honest case.
pub(crate) fn run_session(
    tag_keys: &KeyPair,
    tag_noise: f64,
    reader_keys: &KeyPair,
    params: &ProtocolParams,
    rng: RandomSource,
) -> Result<AuthTranscript> {
    let k = params.key_len();
    for keys in [tag_keys, reader_keys] {
        if keys.key_len() != k {
            return Err(Error::KeySizeMismatch {
                memory: keys.key_len(),
                expected: k,
            });
        }
    }
    let mut reader_rng = rng.substream(0);
    let mut tag_rng = rng.substream(1);

    let mut rounds = Vec::with_capacity(params.rounds() as usize);
    let mut mismatches = 0u32;
    for _ in 0..params.rounds() {
        let challenge = BitString::random(k, &mut reader_rng);
        let tag = tag_respond(tag_keys, &challenge, tag_noise, &mut tag_rng)?;
        let expected = reader_expect(reader_keys, &challenge, &tag.blinding)?;
        if tag.response != expected {
            mismatches += 1;
        }
        rounds.push(RoundRecord {
            challenge,
            blinding: tag.blinding,
            response: tag.response,
            expected,
            noise: tag.noise,
        });
    }
    Ok(AuthTranscript {
        rounds,
        mismatches,
        accepted: mismatches <= params.threshold(),
    })
}
