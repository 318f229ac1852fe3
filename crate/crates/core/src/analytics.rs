//! Closed-form error and leakage quantities: the single-query error
//! probability, majority-vote error, entropy/mutual-information measures,
//! grid generation, and the exact per-bit model of the extraction attack.

use crate::binomial::{lower_tail, p_false_accept, p_false_reject, upper_tail};
use crate::error::{Error, Result};
use crate::protocol::acceptance_threshold;

/// Probability that one fault-plus-authentication query misidentifies a key
/// bit, `(P_FA + P_FR) / 2` for a uniformly distributed bit.
pub fn single_query_error_prob(eta: f64, r: u32) -> Result<f64> {
    Ok((p_false_accept(eta, r)? + p_false_reject(eta, r)?) / 2.0)
}

/// Majority-vote error over `q` queries under the pooled single-query model:
/// the upper tail of `Binomial(q, p)` beyond `floor(q/2)`.
///
/// This treats every query as erring independently with the bit-averaged
/// probability `p`; see [`attack_prediction`] for the conditional model that
/// fixes the true bit value across a position's queries.
pub fn p_error(q: u32, p: f64) -> Result<f64> {
    if q == 0 {
        return Err(Error::NoQueries);
    }
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::CrossoverOutOfRange(p));
    }
    upper_tail(q, p, q / 2 + 1)
}

/// Binary entropy `h(p) = -p log2 p - (1-p) log2 (1-p)`, with
/// `h(0) = h(1) = 0` by continuity.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

fn check_distribution(entries: impl Iterator<Item = f64> + Clone) -> Result<()> {
    for p in entries.clone() {
        if p < 0.0 || p.is_nan() {
            return Err(Error::NegativeProbability(p));
        }
    }
    let sum: f64 = entries.sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(sum));
    }
    Ok(())
}

/// Shannon entropy of a finite distribution, in bits.
pub fn entropy(dist: &[f64]) -> Result<f64> {
    check_distribution(dist.iter().copied())?;
    Ok(dist
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum())
}

/// A joint distribution over two finite variables, `X` indexing rows and `Y`
/// indexing columns.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    cells: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn new(cells: Vec<Vec<f64>>) -> Result<Self> {
        if cells.is_empty() || cells[0].is_empty() {
            return Err(Error::EmptyAxis);
        }
        let cols = cells[0].len();
        if cells.iter().any(|row| row.len() != cols) {
            return Err(Error::RaggedJoint);
        }
        check_distribution(cells.iter().flatten().copied())?;
        Ok(Self { cells })
    }

    /// Uniform binary input through a binary symmetric channel with the given
    /// crossover probability.
    pub fn binary_symmetric(crossover: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&crossover) || crossover.is_nan() {
            return Err(Error::ProbabilityOutOfRange(crossover));
        }
        let stay = (1.0 - crossover) / 2.0;
        let flip = crossover / 2.0;
        Self::new(vec![vec![stay, flip], vec![flip, stay]])
    }

    fn marginal_x(&self) -> Vec<f64> {
        self.cells.iter().map(|row| row.iter().sum()).collect()
    }

    fn marginal_y(&self) -> Vec<f64> {
        let cols = self.cells[0].len();
        (0..cols)
            .map(|j| self.cells.iter().map(|row| row[j]).sum())
            .collect()
    }

    /// `I(X;Y) = sum p(x,y) log2( p(x,y) / (p(x) p(y)) )`.
    pub fn mutual_information(&self) -> f64 {
        let px = self.marginal_x();
        let py = self.marginal_y();
        let mut total = 0.0;
        for (i, row) in self.cells.iter().enumerate() {
            for (j, &pxy) in row.iter().enumerate() {
                if pxy > 0.0 {
                    total += pxy * (pxy / (px[i] * py[j])).log2();
                }
            }
        }
        total.max(0.0)
    }

    /// Equivocation `H(X|Y) = -sum p(x,y) log2 p(x|y)`.
    pub fn equivocation(&self) -> f64 {
        let py = self.marginal_y();
        let mut total = 0.0;
        for row in &self.cells {
            for (j, &pxy) in row.iter().enumerate() {
                if pxy > 0.0 {
                    total -= pxy * (pxy / py[j]).log2();
                }
            }
        }
        total.max(0.0)
    }

    /// Entropy of the row variable `X`.
    pub fn entropy_x(&self) -> f64 {
        self.marginal_x()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }
}

/// One row of the leakage tables: the single-query error `p`, the
/// majority-vote error `P_e(q)`, and the per-bit equivocation and mutual
/// information for a uniform key bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    pub eta: f64,
    pub r: u32,
    pub q: u32,
    pub p: f64,
    pub p_e: f64,
    pub equivocation: f64,
    pub mutual_info: f64,
}

/// Composes [`single_query_error_prob`], [`p_error`], and [`binary_entropy`]
/// into one leakage row. `mutual_info` is `1 - equivocation` exactly.
pub fn leakage_report(eta: f64, r: u32, q: u32) -> Result<LeakageReport> {
    let p = single_query_error_prob(eta, r)?;
    let p_e = p_error(q, p)?;
    let equivocation = binary_entropy(p_e)?;
    Ok(LeakageReport {
        eta,
        r,
        q,
        p,
        p_e,
        equivocation,
        mutual_info: 1.0 - equivocation,
    })
}

/// `p(eta, r)` evaluated over a grid, row-major by `eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub eta_axis: Vec<f64>,
    pub r_axis: Vec<u32>,
    pub values: Vec<Vec<f64>>,
}

pub fn surface(eta_axis: &[f64], r_axis: &[u32]) -> Result<SurfaceGrid> {
    if eta_axis.is_empty() || r_axis.is_empty() {
        return Err(Error::EmptyAxis);
    }
    let mut values = Vec::with_capacity(eta_axis.len());
    for &eta in eta_axis {
        let mut row = Vec::with_capacity(r_axis.len());
        for &r in r_axis {
            row.push(single_query_error_prob(eta, r)?);
        }
        values.push(row);
    }
    Ok(SurfaceGrid {
        eta_axis: eta_axis.to_vec(),
        r_axis: r_axis.to_vec(),
        values,
    })
}

/// Per-round probability that a tag whose key memory differs from the
/// reader's key in at least one bit answers unlike the reader expects.
///
/// The difference parity is carried by fresh uniform challenge/blinding bits,
/// so the noise contribution cancels: `(1-eta)/2 + eta/2 = 1/2` for every
/// noise level.
pub fn one_bit_disagreement_prob(eta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&eta) {
        return Err(Error::NoiseOutOfRange(eta));
    }
    Ok(0.5 * (1.0 - eta) + 0.5 * eta)
}

/// Acceptance probability of a tag corrupted in exactly one key bit:
/// the lower tail of `Binomial(r, rho)` at the acceptance threshold, with
/// `rho` the per-round disagreement probability.
///
/// Numerically identical to [`p_false_accept`] because `rho = 1/2`; this
/// routine keeps the session-level derivation as an independent route.
pub fn one_bit_accept_prob(eta: f64, r: u32) -> Result<f64> {
    if r == 0 {
        return Err(Error::NoRounds);
    }
    let rho = one_bit_disagreement_prob(eta)?;
    lower_tail(r, rho, acceptance_threshold(eta, r))
}

/// Closed-form predictions for a full extraction run.
///
/// Two per-bit models are reported. The pooled model reuses the bit-averaged
/// single-query error inside one binomial. The conditional model keeps the
/// true bit value fixed across a position's queries — an honest-valued
/// position sees acceptances at rate `1 - P_FR`, a corrupted-valued position
/// at rate `P_FA` — and then tracks the run-level consequence of the
/// restore-on-1 rule: every wrong decision leaves the tag memory wrong, and
/// from then on each session disagrees per round with probability 1/2, so
/// later positions decide like coin flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackPrediction {
    /// Majority-vote error under the pooled single-query model.
    pub pooled_bit_error: f64,
    /// Wrong-decision probability for a position whose true bit is 0, with
    /// otherwise-correct memory.
    pub honest_bit_error: f64,
    /// Wrong-decision probability for a position whose true bit is 1, with
    /// otherwise-correct memory.
    pub corrupt_bit_error: f64,
    /// Mean of the two conditional errors: the first-error rate per position.
    pub clean_bit_error: f64,
    /// Expected fraction of wrongly extracted bits over a full 2k-bit run,
    /// including the corruption carried forward by wrong decisions.
    pub expected_bit_error_rate: f64,
    /// Probability that all 2k bits are extracted correctly.
    pub full_key_success_prob: f64,
}

/// Exact decision-level model of one extraction run at the given parameters.
pub fn attack_prediction(eta: f64, r: u32, q: u32, key_len: usize) -> Result<AttackPrediction> {
    if q == 0 {
        return Err(Error::NoQueries);
    }
    if key_len == 0 {
        return Err(Error::EmptyKey);
    }
    let pfr = p_false_reject(eta, r)?;
    let pfa = p_false_accept(eta, r)?;
    let pooled_bit_error = p_error(q, (pfa + pfr) / 2.0)?;

    // Decide 0 iff 2*counter >= q. A true-0 position errs when rejections
    // reach floor(q/2)+1; a true-1 position errs when acceptances reach
    // ceil(q/2). Ties on even q resolve to 0, so the cuts differ there.
    let honest_bit_error = upper_tail(q, pfr, q / 2 + 1)?;
    let corrupt_bit_error = upper_tail(q, pfa, q.div_ceil(2))?;
    let clean_bit_error = 0.5 * (honest_bit_error + corrupt_bit_error);

    let positions = 2 * key_len as u32;
    let survival = 1.0 - clean_bit_error;
    // Expected count of positions still processed with correct memory.
    let clean_positions = if clean_bit_error == 0.0 {
        f64::from(positions)
    } else {
        (1.0 - survival.powi(positions as i32)) / clean_bit_error
    };
    let m = f64::from(positions);
    let expected_bit_error_rate = (clean_positions * (clean_bit_error - 0.5) + m / 2.0) / m;
    let full_key_success_prob = survival.powi(positions as i32);

    Ok(AttackPrediction {
        pooled_bit_error,
        honest_bit_error,
        corrupt_bit_error,
        clean_bit_error,
        expected_bit_error_rate,
        full_key_success_prob,
    })
}
