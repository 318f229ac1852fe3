//! Simulation laboratory for the HB+ lightweight authentication protocol
//! under localized key-memory fault injection.
//!
//! The crate provides four layers:
//!
//! * [`protocol`] — the round-level HB+ engine (challenge, blinding, noisy
//!   response, acceptance rule) plus the closed-form false-rejection and
//!   false-acceptance probabilities in [`binomial`];
//! * [`fault`] — a faultable tag whose concatenated key memory `w = x ‖ y`
//!   can be set bit-by-bit between sessions, with reset and an action
//!   counter;
//! * [`attack`] — the per-bit fault-and-majority-vote key extraction;
//! * [`analytics`] — error and leakage quantities: single-query error,
//!   majority-vote error, entropies, mutual information, table/grid
//!   generators, and an exact decision-level model of the attack.
//!
//! All randomness flows through [`rng::RandomSource`], a seeded generator
//! with labelled substream derivation, so every simulation is bit-for-bit
//! reproducible from a single seed.

pub mod analytics;
pub mod attack;
pub mod binomial;
pub mod bits;
pub mod error;
pub mod fault;
pub mod protocol;
pub mod rng;

pub use analytics::{
    attack_prediction, binary_entropy, entropy, leakage_report, one_bit_accept_prob,
    one_bit_disagreement_prob, p_error, single_query_error_prob, surface, AttackPrediction,
    JointDistribution, LeakageReport, SurfaceGrid,
};
pub use attack::{break_hb_plus, majority_decide, AttackConfig, AttackResult};
pub use binomial::{p_false_accept, p_false_reject};
pub use bits::BitString;
pub use error::{Error, Result};
pub use fault::{FaultableTag, KeyMemory};
pub use protocol::{
    acceptance_threshold, authenticate, inner_product, reader_expect, tag_respond,
    AuthTranscript, KeyPair, ProtocolParams, RoundRecord, TagResponse,
};
pub use rng::RandomSource;
