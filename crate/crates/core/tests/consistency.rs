//! Sampled correlators against the transfer spectrum of the same rule.

use stringnet::automaton::{rule_from_single_line, time_correlator, CorrelatorSpec};
use stringnet::geometry::ProductBoundary;
use stringnet::paths::{PathName, PathSpec};
use stringnet::spectral::{correlation_length, ring_correlator, SolveMode};

#[test]
fn correlator_decay_matches_transfer_gap_at_half_deformation() {
    let w = PathSpec::new(PathName::Z22Z4Seg1, None).unwrap().rule_tensor(0.5).unwrap();
    let rule = rule_from_single_line(&w).unwrap();
    let l = 10;
    let xi = correlation_length(&rule, 8, SolveMode::Auto).unwrap().xi;
    let exact = ring_correlator(&rule, l, 2, 10).unwrap();

    // Sampled values agree with the exact ring correlator until the light cone
    // (two sites per double layer on each side) wraps around the ring.
    let mut spec = CorrelatorSpec::new(2, 256, 4, 20_000, 11);
    spec.t0 = 0;
    let sampled = time_correlator(&rule, &ProductBoundary::plus(4, spec.width).probabilities(), &spec).unwrap();
    for p in sampled.iter().filter(|p| 4 * p.r < l) {
        let dev = (p.estimate - exact[p.r - 1]).norm();
        assert!(dev < 3.0 * p.standard_error, "r={} sampled {} exact {}", p.r, p.estimate, exact[p.r - 1]);
    }

    // The late-time decay rate of the same correlator is 1/ξ.
    let rate = (exact[7].norm() / exact[9].norm()).ln() / 2.0;
    assert!((rate * xi - 1.0).abs() < 0.15, "rate {rate}, 1/ξ {}", 1.0 / xi);
}

#[test]
fn fixed_point_correlator_vanishes_exactly() {
    let rule = rule_from_single_line(&stringnet::paths::named_rule("TC4").unwrap()).unwrap();
    assert!(ring_correlator(&rule, 6, 1, 4).unwrap().iter().all(|c| c.norm() < 1e-14));
    assert_eq!(correlation_length(&rule, 6, SolveMode::Auto).unwrap().xi, 0.0);
}
