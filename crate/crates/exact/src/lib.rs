//! Exact-arithmetic reference computations for the test suites.
//!
//! Everything here is evaluated with big-rational arithmetic (or plain `f64`
//! built on top of big-rational tails) and deliberately shares no code with
//! the floating-point pipeline it cross-checks. Input probabilities given as
//! `f64` are lifted to the *exact* dyadic rational the float represents, so
//! both routes see identical inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The exact rational value of a finite `f64`.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational representable as f64")
}

/// Binomial coefficient `C(n, k)` via the multiplicative recurrence.
pub fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut result = BigInt::one();
    for i in 0..k {
        result = result * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    result
}

/// `P[X >= from]` for `X ~ Binomial(n, p)`, exactly.
pub fn upper_tail(n: u64, p: &BigRational, from: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut sum = BigRational::zero();
    for i in from..=n {
        sum += BigRational::from(choose(n, i)) * pow(p, i) * pow(&q, n - i);
    }
    sum
}

/// `P[X <= through]` for `X ~ Binomial(n, p)`, exactly.
pub fn lower_tail(n: u64, p: &BigRational, through: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut sum = BigRational::zero();
    for i in 0..=through.min(n) {
        sum += BigRational::from(choose(n, i)) * pow(p, i) * pow(&q, n - i);
    }
    sum
}

fn pow(base: &BigRational, exponent: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut base = base.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

/// Acceptance threshold `floor(eta * r)` under the same near-integer snap
/// convention the simulation uses (products within 1e-9 of an integer are
/// treated as that integer).
pub fn acceptance_threshold(eta: f64, r: u64) -> u64 {
    let product = rational(eta) * BigRational::from(BigInt::from(r));
    let floor = product.floor();
    let distance_up = (&floor + BigRational::one()) - &product;
    let snap = rational(1e-9);
    let t = if distance_up.abs() < snap {
        floor + BigRational::one()
    } else {
        floor
    };
    t.to_integer().to_u64().expect("threshold fits in u64")
}

/// Exact probability that an honest tag is rejected.
pub fn false_reject(eta: f64, r: u64) -> BigRational {
    upper_tail(r, &rational(eta), acceptance_threshold(eta, r) + 1)
}

/// Exact probability that a random answerer is accepted:
/// `sum_{i=0}^{t} C(r, i) / 2^r`.
pub fn false_accept(eta: f64, r: u64) -> BigRational {
    let t = acceptance_threshold(eta, r);
    let mut numerator = BigInt::zero();
    for i in 0..=t.min(r) {
        numerator += choose(r, i);
    }
    BigRational::new(numerator, BigInt::from(2u8).pow(r as u32))
}

/// Exact single-query bit-extraction error `(P_FA + P_FR) / 2`.
pub fn single_query_error(eta: f64, r: u64) -> BigRational {
    (false_accept(eta, r) + false_reject(eta, r)) / BigRational::from(BigInt::from(2))
}

/// Exact majority-vote error: the upper tail of `Binomial(q, p)` beyond
/// `floor(q/2)`.
pub fn majority_error(q: u64, p: &BigRational) -> BigRational {
    upper_tail(q, p, q / 2 + 1)
}

/// Closed-form model of one full extraction run, including the memory
/// corruption carried forward by wrong decisions.
///
/// A position queried with otherwise-correct memory errs with probability
/// `e = (err0 + err1) / 2`, where `err0` (true bit 0, tag honest during the
/// queries) is the chance rejections reach a majority and `err1` (true bit 1,
/// tag corrupted during the queries) the chance acceptances do. Any wrong
/// decision leaves the memory wrong, after which every session disagrees per
/// round with probability exactly 1/2 and later positions decide like coin
/// flips; the first wrong decision is therefore absorbing.
#[derive(Debug, Clone, Copy)]
pub struct AttackModel {
    pub pooled_bit_error: f64,
    pub honest_bit_error: f64,
    pub corrupt_bit_error: f64,
    pub clean_bit_error: f64,
    pub expected_bit_error_rate: f64,
    pub full_key_success: f64,
    pub errors_per_trial_mean: f64,
    pub errors_per_trial_std: f64,
}

pub fn attack_model(eta: f64, r: u64, q: u64, key_len: u64) -> AttackModel {
    let pfr = false_reject(eta, r);
    let pfa = false_accept(eta, r);
    let pooled =
        (&pfa + &pfr) / BigRational::from(BigInt::from(2));
    let pooled_bit_error = to_f64(&majority_error(q, &pooled));

    // Decide 0 iff 2*counter >= q; ties on even q fall to 0.
    let honest_bit_error = to_f64(&upper_tail(q, &pfr, q / 2 + 1));
    let corrupt_bit_error = to_f64(&upper_tail(q, &pfa, q.div_ceil(2)));
    let e = 0.5 * (honest_bit_error + corrupt_bit_error);

    let m = 2 * key_len as usize;
    // clean[i]: probability the memory is still fully correct when position
    // i comes up. P[error at i] = clean[i]*e + (1 - clean[i])/2.
    let clean: Vec<f64> = (0..m).map(|i| (1.0 - e).powi(i as i32)).collect();
    let per_position: Vec<f64> = clean.iter().map(|c| c * e + (1.0 - c) * 0.5).collect();
    let mean_errors: f64 = per_position.iter().sum();

    // Second moment: for i < j, E[X_i X_j] splits on the state at i. From a
    // clean state an error (prob e) makes every later decision a fair coin;
    // from a dirty state both decisions are fair coins already.
    let mut second_moment = mean_errors;
    for (i, c) in clean.iter().enumerate() {
        let later = (m - 1 - i) as f64;
        second_moment += 2.0 * later * (c * e * 0.5 + (1.0 - c) * 0.25);
    }
    let variance = (second_moment - mean_errors * mean_errors).max(0.0);

    AttackModel {
        pooled_bit_error,
        honest_bit_error,
        corrupt_bit_error,
        clean_bit_error: e,
        expected_bit_error_rate: mean_errors / m as f64,
        full_key_success: (1.0 - e).powi(m as i32),
        errors_per_trial_mean: mean_errors,
        errors_per_trial_std: variance.sqrt(),
    }
}
