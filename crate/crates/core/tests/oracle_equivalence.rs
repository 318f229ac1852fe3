//! Cross-checks the floating-point binomial machinery against big-rational
//! summation. The two routes share no code: the library sums in log space,
//! the reference sums exact rationals.

use hbplus_core::{analytics, binomial};
use hbplus_exact as exact;

fn assert_rel(float: f64, reference: f64, bound: f64, context: &str) {
    let denom = reference.abs().max(f64::MIN_POSITIVE);
    let rel = (float - reference).abs() / denom;
    assert!(
        rel < bound,
        "{context}: {float} vs {reference} (relative error {rel:.3e})"
    );
}

#[test]
fn false_rates_match_exact_rationals_up_to_r_30() {
    for &eta in &[0.05, 0.125, 0.25, 0.3, 0.45] {
        for r in 1..=30u32 {
            assert_rel(
                binomial::p_false_reject(eta, r).unwrap(),
                exact::to_f64(&exact::false_reject(eta, u64::from(r))),
                1e-12,
                &format!("p_false_reject({eta}, {r})"),
            );
            assert_rel(
                binomial::p_false_accept(eta, r).unwrap(),
                exact::to_f64(&exact::false_accept(eta, u64::from(r))),
                1e-12,
                &format!("p_false_accept({eta}, {r})"),
            );
        }
    }
}

#[test]
fn majority_error_matches_exact_rationals_up_to_q_25() {
    for &p in &[0.05, 0.1919, 0.2084, 0.2201, 0.3] {
        for q in 1..=25u32 {
            assert_rel(
                analytics::p_error(q, p).unwrap(),
                exact::to_f64(&exact::majority_error(u64::from(q), &exact::rational(p))),
                1e-12,
                &format!("p_error({q}, {p})"),
            );
        }
    }
}

#[test]
fn single_query_error_matches_exact_rationals() {
    for &(eta, r) in &[(0.125, 40u32), (0.125, 80), (0.25, 80), (0.3, 33), (0.05, 200)] {
        assert_rel(
            analytics::single_query_error_prob(eta, r).unwrap(),
            exact::to_f64(&exact::single_query_error(eta, u64::from(r))),
            1e-12,
            &format!("single_query_error_prob({eta}, {r})"),
        );
    }
}

#[test]
fn attack_prediction_matches_the_independent_model() {
    for &(eta, r, q, k) in &[
        (0.125, 40u32, 19u32, 32usize),
        (0.25, 8, 5, 4),
        (0.125, 80, 7, 16),
        (0.3, 20, 3, 8),
    ] {
        let ours = analytics::attack_prediction(eta, r, q, k).unwrap();
        let reference = exact::attack_model(eta, u64::from(r), u64::from(q), k as u64);
        assert_rel(
            ours.pooled_bit_error,
            reference.pooled_bit_error,
            1e-10,
            "pooled",
        );
        assert_rel(
            ours.clean_bit_error,
            reference.clean_bit_error,
            1e-10,
            "clean bit error",
        );
        assert_rel(
            ours.expected_bit_error_rate,
            reference.expected_bit_error_rate,
            1e-10,
            "expected rate",
        );
        assert_rel(
            ours.full_key_success_prob,
            reference.full_key_success,
            1e-10,
            "full key success",
        );
    }
}
