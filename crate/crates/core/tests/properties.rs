use std::collections::BTreeSet;

use proptest::prelude::*;
use stringnet::automaton::{estimate_diagonal, rule_from_single_line, simulate};
use stringnet::checks::random_case;
use stringnet::geometry::ProductBoundary;
use stringnet::opcompile::compile_single_line;
use stringnet::oracle::{amplitude_product, contract_single_line, ORACLE_CAP};
use stringnet::paths::{named_rule, qutrits, PathName, PathSpec};
use stringnet::spectral::{build_transfer_operator, correlation_length, SolveMode};
use stringnet::tensors::{check_isometry, check_virtual_symmetry, Tensor};

fn path_at(index: usize, u: f64) -> (PathSpec, f64) {
    let spec = PathSpec::new(PathName::ALL[index], None).unwrap();
    let (lo, hi) = spec.range;
    (spec, lo + (hi - lo) * u)
}

fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    match (a, b) {
        (Tensor::Single(x), Tensor::Single(y)) => x.max_abs_diff(y),
        (Tensor::Double(x), Tensor::Double(y)) => x.max_abs_diff(y),
        _ => f64::INFINITY,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_diagonal_matches_exact_expectation(seed in any::<u64>(), index in 0u64..1 << 20) {
        let case = random_case(seed, index, false).unwrap();
        let st = contract_single_line(&case.net, ORACLE_CAP).unwrap();
        let exact = st.expectation_pauli(&case.op).unwrap();
        let compiled = st.expectation_diagonal(&compile_single_line(&case.net, &case.op).unwrap()).unwrap();
        prop_assert!((exact - compiled).norm() < 1e-10, "{exact} vs {compiled}");
    }

    #[test]
    fn compiled_support_stays_next_to_the_operator(seed in any::<u64>(), index in 0u64..1 << 20) {
        let case = random_case(seed, index, false).unwrap();
        let geo = &case.net.geometry;
        let compiled = compile_single_line(&case.net, &case.op).unwrap();
        let near: BTreeSet<usize> = case.op.iter()
            .flat_map(|(e, _)| [geo.edges[e].source, geo.edges[e].target])
            .flatten()
            .map(|(v, _)| v)
            .collect();
        let support = compiled.support_vertices();
        prop_assert!(support.is_subset(&near));
        prop_assert!(support.len() <= 2 * case.op.weight());
    }

    #[test]
    fn amplitudes_factorize_with_boundary(seed in any::<u64>(), index in 0u64..1 << 20) {
        let case = random_case(seed, index, false).unwrap();
        let st = contract_single_line(&case.net, ORACLE_CAP).unwrap();
        for idx in (0..st.amplitudes.len()).step_by(7) {
            let labels = st.labels(idx);
            prop_assert!((st.amplitudes[idx] - amplitude_product(&case.net, &labels)).norm() < 1e-12);
        }
    }

    #[test]
    fn paths_are_isometric_with_declared_symmetries(p in 0usize..7, u in 0.0f64..=1.0) {
        let (spec, g) = path_at(p, u);
        let t = spec.evaluate(g).unwrap();
        prop_assert!(check_isometry(&t).max_residual < 1e-12);
        for kind in spec.declared_symmetries(g) {
            prop_assert!(check_virtual_symmetry(&t, kind).unwrap().holds, "{} g={g} {kind:?}", spec.name);
        }
    }

    #[test]
    fn paths_are_continuous(p in 0usize..7, u in 0.0f64..=1.0) {
        let (spec, g) = path_at(p, u);
        let h = g + 1e-7;
        prop_assume!(h <= spec.range.1 && g.abs() > 1e-3);
        let d = max_diff(&spec.evaluate(g).unwrap(), &spec.evaluate(h).unwrap());
        prop_assert!(d < 1e-6, "{} g={g}: {d}", spec.name);
    }

    #[test]
    fn transfer_operators_are_stochastic(p in 0usize..4, u in 0.0f64..=1.0) {
        let (spec, g) = path_at(p, u);
        let rule = rule_from_single_line(&spec.rule_tensor(g).unwrap()).unwrap();
        let t = build_transfer_operator(&rule, 4).unwrap();
        for col in t.column_iter() {
            prop_assert!((col.sum() - 1.0).abs() < 1e-12);
            prop_assert!(col.iter().all(|&x| x >= 0.0));
        }
        let s = correlation_length(&rule, 4, SolveMode::Dense).unwrap();
        prop_assert!((s.leading_eigenvalues[0].norm() - 1.0).abs() < 1e-10);
        prop_assert!(s.leading_eigenvalues.windows(2).all(|w| w[0].norm() >= w[1].norm() - 1e-12));
    }

    #[test]
    fn trajectories_are_reproducible(seed in any::<u64>(), index in 0u64..1000) {
        let rule = rule_from_single_line(&named_rule("WP").unwrap()).unwrap();
        let b = ProductBoundary::plus(9, 8).probabilities();
        let a: Vec<Vec<usize>> = simulate(&rule, &b, 5, seed, index).unwrap().collect();
        let c: Vec<Vec<usize>> = simulate(&rule, &b, 5, seed, index).unwrap().collect();
        prop_assert_eq!(a, c);
    }
}

/// Row totals that critical rules conserve exactly.
fn staggered(row: &[usize]) -> i64 {
    row.iter().enumerate().map(|(s, &n)| if s % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

fn low_bits(row: &[usize]) -> usize {
    row.iter().map(|n| n % 2).sum()
}

fn charge_and_dipole(row: &[usize]) -> (usize, usize) {
    row.iter().enumerate().fold((0, 0), |(q, d), (i, &n)| {
        let (a1, a2) = qutrits(n);
        (q + a1 + a2, d + (2 * i + 1) * a1 + (2 * i + 2) * a2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn critical_trajectories_conserve_their_charges(seed in any::<u64>(), index in 0u64..1000) {
        let tc_ds = rule_from_single_line(&PathSpec::new(PathName::TcDs, None).unwrap().rule_tensor(0.0).unwrap()).unwrap();
        let b2 = ProductBoundary::plus(2, 16).probabilities();
        let rows: Vec<_> = simulate(&tc_ds, &b2, 20, seed, index).unwrap().collect();
        prop_assert!(rows.iter().all(|r| staggered(r) == staggered(&rows[0])));

        for name in [PathName::Z22Z4Seg1, PathName::SetFrac] {
            let rule = rule_from_single_line(&PathSpec::new(name, None).unwrap().rule_tensor(0.0).unwrap()).unwrap();
            let rows: Vec<_> = simulate(&rule, &ProductBoundary::plus(4, 16).probabilities(), 20, seed, index).unwrap().collect();
            prop_assert!(rows.iter().all(|r| low_bits(r) == low_bits(&rows[0])));
        }

        let b9 = ProductBoundary::plus(9, 16).probabilities();
        let wq = rule_from_single_line(&named_rule("WQ").unwrap()).unwrap();
        let rows: Vec<_> = simulate(&wq, &b9, 20, seed, index).unwrap().collect();
        prop_assert!(rows.iter().all(|r| charge_and_dipole(r).0 == charge_and_dipole(&rows[0]).0));
        let wp = rule_from_single_line(&named_rule("WP").unwrap()).unwrap();
        let rows: Vec<_> = simulate(&wp, &b9, 20, seed, index).unwrap().collect();
        prop_assert!(rows.iter().all(|r| charge_and_dipole(r) == charge_and_dipole(&rows[0])));
    }
}

#[test]
fn critical_transfer_operators_are_block_diagonal() {
    let l = 6;
    let decode = |idx: usize, n: usize| -> Vec<usize> { (0..l).map(|s| (idx / n.pow((l - 1 - s) as u32)) % n).collect() };
    let tc = rule_from_single_line(&PathSpec::new(PathName::TcDs, None).unwrap().rule_tensor(0.0).unwrap()).unwrap();
    let t = build_transfer_operator(&tc, l).unwrap();
    for ((i, j), &x) in t.iter().enumerate().map(|(k, x)| ((k % t.nrows(), k / t.nrows()), x)) {
        if x != 0.0 {
            assert_eq!(staggered(&decode(i, 2)), staggered(&decode(j, 2)));
        }
    }
    for name in [PathName::Z22Z4Seg1, PathName::Z22Z4Seg2, PathName::SetFrac] {
        let rule = rule_from_single_line(&PathSpec::new(name, None).unwrap().rule_tensor(0.0).unwrap()).unwrap();
        let t = build_transfer_operator(&rule, l).unwrap();
        for ((i, j), &x) in t.iter().enumerate().map(|(k, x)| ((k % t.nrows(), k / t.nrows()), x)) {
            if x != 0.0 {
                assert_eq!(low_bits(&decode(i, 4)), low_bits(&decode(j, 4)), "{name}");
            }
        }
    }
}

#[test]
fn zero_crossing_switches_only_vanishing_entries() {
    for name in [PathName::TcDs, PathName::SetFrac] {
        let spec = PathSpec::new(name, None).unwrap();
        let d = max_diff(&spec.evaluate(-1e-13).unwrap(), &spec.evaluate(1e-13).unwrap());
        assert!(d < 1e-6, "{name}: {d}");
    }
}

#[test]
fn estimator_is_unbiased_on_an_oracle_patch() {
    let (case, exact) = (0..)
        .map(|i| {
            let case = random_case(99, i, true).unwrap();
            let exact = contract_single_line(&case.net, ORACLE_CAP).unwrap().expectation_pauli(&case.op).unwrap();
            (case, exact)
        })
        .find(|(_, e)| e.norm() > 0.05)
        .unwrap();
    let compiled = compile_single_line(&case.net, &case.op).unwrap();
    let rule = rule_from_single_line(&case.net.tensors[0]).unwrap();
    let hits = (0..100)
        .filter(|&rep| {
            let s = estimate_diagonal(&rule, &compiled, &case.net.geometry, &case.net.boundary, 4000, 1000 + rep).unwrap();
            (s.estimate - exact).norm() < 3.0 * s.standard_error
        })
        .count();
    assert!(hits >= 99, "{hits}/100 within 3σ");
}
