//! Experiment runners behind the CLI subcommands. Every runner is seeded and
//! deterministic: trial `i` draws from substream `i` of a scenario-level
//! source, so parallel execution aggregates exactly what sequential
//! execution would.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use hbplus_core::{
    attack_prediction, break_hb_plus, leakage_report, one_bit_accept_prob, p_false_accept,
    p_false_reject, surface, AttackConfig, FaultableTag, KeyPair, LeakageReport, ProtocolParams,
    RandomSource, Result as CoreResult, SurfaceGrid,
};

use crate::spec::{CliError, ExperimentSpec, SurfaceSpec};

/// The (eta, r) parameter sets of the reference tables.
pub const TABLE_PARAMETER_SETS: [(f64, u32); 3] = [(0.125, 40), (0.125, 80), (0.25, 80)];

/// The query counts of the reference tables.
pub const TABLE_QUERY_COUNTS: [u32; 4] = [7, 11, 17, 19];

/// Builds leakage rows for the cartesian product of parameter sets and
/// query counts.
pub fn build_tables(sets: &[(f64, u32)], query_counts: &[u32]) -> CoreResult<Vec<LeakageReport>> {
    let mut rows = Vec::with_capacity(sets.len() * query_counts.len());
    for &(eta, r) in sets {
        for &q in query_counts {
            rows.push(leakage_report(eta, r, q)?);
        }
    }
    Ok(rows)
}

/// Table rows for one `tables` invocation: the presets by default, a single
/// custom set when eta/r (and optionally q) were given explicitly.
pub fn tables_for_spec(spec: &ExperimentSpec) -> CoreResult<Vec<LeakageReport>> {
    let sets: Vec<(f64, u32)> = if spec.eta_r_explicit {
        vec![(spec.eta, spec.rounds)]
    } else {
        TABLE_PARAMETER_SETS.to_vec()
    };
    let qs: Vec<u32> = if spec.q_explicit {
        vec![spec.queries]
    } else {
        TABLE_QUERY_COUNTS.to_vec()
    };
    build_tables(&sets, &qs)
}

pub fn leakage_for_spec(spec: &ExperimentSpec) -> CoreResult<LeakageReport> {
    leakage_report(spec.eta, spec.rounds, spec.queries)
}

pub fn surface_for_spec(axes: &SurfaceSpec) -> CoreResult<SurfaceGrid> {
    surface(&axes.eta_axis, &axes.r_axis)
}

/// Aggregated outcome of a key-extraction campaign.
///
/// Two per-bit predictions are carried: the pooled single-query model and
/// the conditional model that also accounts for the memory corruption wrong
/// decisions leave behind. `elapsed` is diagnostic only and never
/// serialized, so identical seeds produce byte-identical output files.
#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub key_len: usize,
    pub rounds: u32,
    pub eta: f64,
    pub queries: u32,
    pub trials: u64,
    pub seed: u64,
    pub per_bit_error_rate: f64,
    pub full_key_success_rate: f64,
    pub post_attack_auth_success_rate: f64,
    pub predicted_per_bit_error: f64,
    pub predicted_per_bit_error_exact: f64,
    pub predicted_full_key_success: f64,
    pub bit_errors_total: u64,
    pub faults_total: u64,
    pub auths_total: u64,
    pub elapsed: Duration,
}

struct TrialOutcome {
    bit_errors: u64,
    full_key: bool,
    post_attack_accepted: bool,
    faults: u64,
    auths: u64,
}

fn attack_trial(
    master: &RandomSource,
    trial: u64,
    params: &ProtocolParams,
    config: &AttackConfig,
) -> CoreResult<TrialOutcome> {
    let trial_rng = master.substream(trial);
    let mut key_rng = trial_rng.substream(0);
    let planted = KeyPair::random(params.key_len(), &mut key_rng)?;
    let mut tag = FaultableTag::new(&planted, params.noise())?;
    let result = break_hb_plus(&mut tag, &planted, config, &trial_rng.substream(1))?;
    let bit_errors = (result.extracted().x().hamming(planted.x())?
        + result.extracted().y().hamming(planted.y())?) as u64;
    let post_attack_accepted = tag.run_auth(&planted, params, trial_rng.substream(2))?;
    Ok(TrialOutcome {
        bit_errors,
        full_key: bit_errors == 0,
        post_attack_accepted,
        faults: result.faults_used(),
        auths: result.auths_used(),
    })
}

/// Plants a fresh uniform key per trial, runs the extraction, and scores the
/// recovered bits against the planted ones.
pub fn run_attack_campaign(spec: &ExperimentSpec) -> Result<CampaignSummary, CliError> {
    let params = ProtocolParams::new(spec.key_len, spec.rounds, spec.eta)?;
    let config = AttackConfig::new(spec.queries, params)?;
    let prediction = attack_prediction(spec.eta, spec.rounds, spec.queries, spec.key_len)?;
    let master = RandomSource::new(spec.seed);

    let start = Instant::now();
    let outcomes: CoreResult<Vec<TrialOutcome>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| attack_trial(&master, trial, &params, &config))
        .collect();
    let outcomes = outcomes?;
    let elapsed = start.elapsed();

    let positions = 2 * spec.key_len as u64;
    let bit_errors_total: u64 = outcomes.iter().map(|o| o.bit_errors).sum();
    let full_key_hits = outcomes.iter().filter(|o| o.full_key).count() as u64;
    let post_hits = outcomes.iter().filter(|o| o.post_attack_accepted).count() as u64;

    Ok(CampaignSummary {
        key_len: spec.key_len,
        rounds: spec.rounds,
        eta: spec.eta,
        queries: spec.queries,
        trials: spec.trials,
        seed: spec.seed,
        per_bit_error_rate: bit_errors_total as f64 / (spec.trials * positions) as f64,
        full_key_success_rate: full_key_hits as f64 / spec.trials as f64,
        post_attack_auth_success_rate: post_hits as f64 / spec.trials as f64,
        predicted_per_bit_error: prediction.pooled_bit_error,
        predicted_per_bit_error_exact: prediction.expected_bit_error_rate,
        predicted_full_key_success: prediction.full_key_success_prob,
        bit_errors_total,
        faults_total: outcomes.iter().map(|o| o.faults).sum(),
        auths_total: outcomes.iter().map(|o| o.auths).sum(),
        elapsed,
    })
}

/// One calibration scenario: how many sessions hit the counted event, next
/// to the closed-form rate and the session-level exact rate.
#[derive(Debug, Clone)]
pub struct ScenarioRow {
    pub scenario: &'static str,
    pub trials: u64,
    pub events: u64,
    pub empirical_rate: f64,
    pub model_rate: f64,
    pub exact_rate: f64,
}

/// Runs `trials` honest sessions (counting rejections against the
/// false-rejection probability) and `trials` sessions of a tag corrupted in
/// one uniformly chosen bit (counting acceptances against the
/// false-acceptance model and the exact one-bit analysis).
pub fn run_auth_sim(spec: &ExperimentSpec) -> Result<Vec<ScenarioRow>, CliError> {
    let params = ProtocolParams::new(spec.key_len, spec.rounds, spec.eta)?;
    let pfr = p_false_reject(spec.eta, spec.rounds)?;
    let pfa = p_false_accept(spec.eta, spec.rounds)?;
    let one_bit_exact = one_bit_accept_prob(spec.eta, spec.rounds)?;
    let master = RandomSource::new(spec.seed);

    let honest_root = master.substream(0);
    let rejections: CoreResult<u64> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let trial_rng = honest_root.substream(trial);
            let keys = KeyPair::random(spec.key_len, &mut trial_rng.substream(0))?;
            let accepted = FaultableTag::new(&keys, spec.eta)?.run_auth(
                &keys,
                &params,
                trial_rng.substream(1),
            )?;
            Ok(u64::from(!accepted))
        })
        .sum();
    let rejections = rejections?;

    let corrupted_root = master.substream(1);
    let acceptances: CoreResult<u64> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let trial_rng = corrupted_root.substream(trial);
            let keys = KeyPair::random(spec.key_len, &mut trial_rng.substream(0))?;
            let mut tag = FaultableTag::new(&keys, spec.eta)?;
            let mut position_rng = trial_rng.substream(1);
            let position = position_rng.index(2 * spec.key_len);
            let current = tag.memory().get(position)?;
            tag.flip(position, !current)?;
            let accepted = tag.run_auth(&keys, &params, trial_rng.substream(2))?;
            Ok(u64::from(accepted))
        })
        .sum();
    let acceptances = acceptances?;

    Ok(vec![
        ScenarioRow {
            scenario: "honest_rejection",
            trials: spec.trials,
            events: rejections,
            empirical_rate: rejections as f64 / spec.trials as f64,
            model_rate: pfr,
            exact_rate: pfr,
        },
        ScenarioRow {
            scenario: "corrupted_acceptance",
            trials: spec.trials,
            events: acceptances,
            empirical_rate: acceptances as f64 / spec.trials as f64,
            model_rate: pfa,
            exact_rate: one_bit_exact,
        },
    ])
}
