//! End-to-end check of the orthogonal-multiplexing construction: placing
//! `M` pairs on one surface at the matched pair's companion positions makes
//! the whole channel diagonal, and the achieved sum-rate meets the
//! closed-form single-surface bound.

use irsnet::{
    logdet_capacity, mrc_weights, optimal_positions, single_irs_bound, single_irs_channel,
    sinr_sum_rate, Angle, RateParams, TransceiverPair, UlaSurface,
};

#[test]
fn companion_set_achieves_the_single_surface_bound() {
    let surface = UlaSurface::new(4, 0.5).unwrap();
    let fixed = TransceiverPair::new(
        Angle::from_degrees(30.0).unwrap(),
        Angle::from_degrees(135.0).unwrap(),
    );
    let design = mrc_weights(&fixed, &surface, None);

    let mut pairs = vec![fixed];
    for (aoa, aod) in optimal_positions(&fixed, &surface) {
        pairs.push(TransceiverPair::new(aoa, aod));
    }
    assert_eq!(pairs.len(), 4, "element count many pairs");

    let channel = single_irs_channel(&surface, &design.weights, &pairs).unwrap();
    let h = channel.matrix();
    for i in 0..4 {
        for u in 0..4 {
            if i == u {
                assert!(
                    (h[(i, u)].norm() - 4.0).abs() < 1e-9,
                    "own gain of pair {i}: {}",
                    h[(i, u)].norm()
                );
            } else {
                assert!(
                    h[(i, u)].norm() < 1e-9,
                    "cross gain ({i},{u}): {}",
                    h[(i, u)].norm()
                );
            }
        }
    }

    let params = RateParams::from_snr_db(10.0).unwrap();
    let bound = single_irs_bound(4, 4, &params).unwrap();
    let (_, achieved) = sinr_sum_rate(h, &params).unwrap();
    assert!(
        (achieved - bound).abs() < 1e-9,
        "achieved {achieved}, bound {bound}"
    );
    // With a diagonal channel the joint capacity coincides.
    let cap = logdet_capacity(h, &params).unwrap();
    assert!((cap - bound).abs() < 1e-9);
}

#[test]
fn extra_pair_beyond_the_element_budget_interferes() {
    // A fifth pair has nowhere orthogonal left on a 4-element surface: it
    // must leak interference against at least one served pair.
    let surface = UlaSurface::new(4, 0.5).unwrap();
    let fixed = TransceiverPair::new(
        Angle::from_degrees(30.0).unwrap(),
        Angle::from_degrees(135.0).unwrap(),
    );
    let design = mrc_weights(&fixed, &surface, None);
    let mut pairs = vec![fixed];
    for (aoa, aod) in optimal_positions(&fixed, &surface) {
        pairs.push(TransceiverPair::new(aoa, aod));
    }
    pairs.push(TransceiverPair::new(
        Angle::from_degrees(77.0).unwrap(),
        Angle::from_degrees(51.0).unwrap(),
    ));

    let channel = single_irs_channel(&surface, &design.weights, &pairs).unwrap();
    let h = channel.matrix();
    let worst_leak = (0..5)
        .flat_map(|i| (0..5).map(move |u| (i, u)))
        .filter(|(i, u)| i != u)
        .map(|(i, u)| h[(i, u)].norm())
        .fold(0.0f64, f64::max);
    assert!(worst_leak > 1e-3, "expected interference, got {worst_leak}");
}
