//! Binomial tail probabilities, evaluated term-by-term in log space.
//!
//! Terms are formed as `exp(ln C(n,i) + i ln p + (n-i) ln(1-p))`, so round
//! counts in the hundreds neither overflow nor pass through a `1 - cdf`
//! subtraction. The test suites cross-check these against a big-rational
//! summation.

use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::protocol::acceptance_threshold;

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(())
}

/// Neumaier-compensated sum of the binomial pmf terms for `i` in `range`.
fn sum_terms(n: u32, p: f64, range: impl Iterator<Item = u32>) -> f64 {
    let ln_p = p.ln();
    let ln_q = (1.0 - p).ln();
    let nf = f64::from(n);
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for i in range {
        let fi = f64::from(i);
        let term = (ln_binomial(u64::from(n), u64::from(i)) + fi * ln_p + (nf - fi) * ln_q).exp();
        let t = sum + term;
        compensation += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    (sum + compensation).clamp(0.0, 1.0)
}

/// `P[X >= from]` for `X ~ Binomial(n, p)`.
pub fn upper_tail(n: u32, p: f64, from: u32) -> Result<f64> {
    check_probability(p)?;
    if from > n {
        return Ok(0.0);
    }
    if from == 0 {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok(sum_terms(n, p, from..=n))
}

/// `P[X <= through]` for `X ~ Binomial(n, p)`.
pub fn lower_tail(n: u32, p: f64, through: u32) -> Result<f64> {
    check_probability(p)?;
    if through >= n {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    Ok(sum_terms(n, p, 0..=through))
}

fn check_analytic_inputs(eta: f64, r: u32) -> Result<()> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::AnalyticNoiseOutOfRange(eta));
    }
    if r == 0 {
        return Err(Error::NoRounds);
    }
    Ok(())
}

/// Probability that an honest tag is rejected: the upper tail of
/// `Binomial(r, eta)` beyond the acceptance threshold `t = floor(eta r)`.
pub fn p_false_reject(eta: f64, r: u32) -> Result<f64> {
    check_analytic_inputs(eta, r)?;
    let t = acceptance_threshold(eta, r);
    upper_tail(r, eta, t + 1)
}

/// Probability that a tag answering uniformly at random is accepted:
/// `sum_{i=0}^{t} C(r, i) 2^{-r}` with `t = floor(eta r)`.
pub fn p_false_accept(eta: f64, r: u32) -> Result<f64> {
    check_analytic_inputs(eta, r)?;
    let t = acceptance_threshold(eta, r);
    let ln_half = -f64::from(r) * std::f64::consts::LN_2;
    let mut sum = 0.0;
    for i in 0..=t.min(r) {
        sum += (ln_binomial(u64::from(r), u64::from(i)) + ln_half).exp();
    }
    Ok(sum.clamp(0.0, 1.0))
}
