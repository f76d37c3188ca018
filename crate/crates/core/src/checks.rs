//! Check suites shared by the `validate` and `oracle-check` subcommands and the
//! acceptance tests. Each suite returns one row per individual check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{estimate_diagonal, rule_from_single_line};
use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, ProductBoundary};
use crate::network::{DoubleLineNet, SingleLineNet};
use crate::opcompile::{compile_loop_double_line, compile_single_line, reduce_double_to_single};
use crate::oracle::{contract_double_line, contract_single_line, ORACLE_CAP};
use crate::parent::{build_parent_hamiltonian_terms, deformed_hamiltonian_check, FixedPoint};
use crate::paths::{conservation_violations, named_rule, path_set_frac, path_tc_ds, ConservedQuantity, PathName, PathSpec};
use crate::spectral::{correlation_length, SolveMode};
use crate::tensors::{check_isometry, check_virtual_symmetry, classify_symmetry_action, random_single_line, toric_code_double_line, FracClass, WSingleLine};
use crate::zn::PauliString;

pub const ISOMETRY_TOL: f64 = 1e-12;
pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-10;
pub const PARENT_TOL: f64 = 1e-12;
pub const DEFORMED_TOL: f64 = 1e-10;
/// Largest patch used for random compiler cases.
pub const RANDOM_CASE_EDGES: usize = 12;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub subject: String,
    pub g: Option<f64>,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn below(check: &str, subject: impl Into<String>, g: Option<f64>, value: f64, tolerance: f64) -> Self {
        Self { check: check.into(), subject: subject.into(), g, value, tolerance, pass: value < tolerance }
    }

    fn flag(check: &str, subject: impl Into<String>, g: Option<f64>, pass: bool) -> Self {
        Self { check: check.into(), subject: subject.into(), g, value: if pass { 1.0 } else { 0.0 }, tolerance: 1.0, pass }
    }
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

/// Uniform grid of `points` values over the path's range.
pub fn uniform_grid(path: &PathSpec, points: usize) -> Vec<f64> {
    let (lo, hi) = path.range;
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64).collect()
}

/// Row normalization and declared virtual symmetries on every path at `points` grid values.
pub fn isometry_suite(points: usize) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in PathName::ALL {
        let spec = PathSpec::new(name, None)?;
        let per_g: Vec<Result<Vec<CheckRow>>> = uniform_grid(&spec, points)
            .into_par_iter()
            .map(|g| {
                let t = spec.evaluate(g)?;
                let mut out = vec![CheckRow::below("isometry", name.as_str(), Some(g), check_isometry(&t).max_residual, ISOMETRY_TOL)];
                for kind in spec.declared_symmetries(g) {
                    let rep = check_virtual_symmetry(&t, kind)?;
                    out.push(CheckRow::flag(&format!("symmetry:{kind:?}"), name.as_str(), Some(g), rep.holds));
                }
                Ok(out)
            })
            .collect();
        for r in per_g {
            rows.extend(r?);
        }
    }
    Ok(rows)
}

/// Critical rules and the quantity each one conserves.
pub fn conservation_table() -> Result<Vec<(String, WSingleLine, ConservedQuantity)>> {
    let tc_ds = PathSpec::new(PathName::TcDs, None)?;
    let seg1 = PathSpec::new(PathName::Z22Z4Seg1, None)?;
    let seg2 = PathSpec::new(PathName::Z22Z4Seg2, None)?;
    let frac = PathSpec::new(PathName::SetFrac, None)?;
    Ok(vec![
        ("tc-ds@0".into(), tc_ds.rule_tensor(0.0)?, ConservedQuantity::DomainWallDifference),
        ("z22-z4-seg1@0".into(), seg1.rule_tensor(0.0)?, ConservedQuantity::LowBitCount),
        ("z22-z4-seg2@0".into(), seg2.rule_tensor(0.0)?, ConservedQuantity::LowBitCount),
        ("set-frac@0".into(), frac.rule_tensor(0.0)?, ConservedQuantity::LowBitCount),
        ("WQ".into(), named_rule("WQ")?, ConservedQuantity::QutritCharge),
        ("WP".into(), named_rule("WP")?, ConservedQuantity::QutritChargeAndDipole),
    ])
}

/// Zero violating transitions for every critical rule.
pub fn conservation_suite() -> Result<Vec<CheckRow>> {
    Ok(conservation_table()?
        .into_iter()
        .map(|(name, w, q)| {
            let bad = conservation_violations(&w, q);
            CheckRow { check: format!("conservation:{q:?}"), subject: name, g: None, value: bad as f64, tolerance: 1.0, pass: bad == 0 }
        })
        .collect())
}

/// Classification along the N = 4 fractionalization path at `per_side` points on each side of 0.
pub fn classification_suite(per_side: usize) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut gs = vec![0.0];
    for i in 1..=per_side {
        let x = i as f64 / per_side as f64;
        gs.push(x);
        gs.push(-x);
    }
    for g in gs {
        let class = classify_symmetry_action(&path_set_frac(g, 4)?)?;
        let expected = if g > 0.0 {
            FracClass::Trivial
        } else if g < 0.0 {
            FracClass::Nontrivial
        } else {
            FracClass::Both
        };
        rows.push(CheckRow::flag(&format!("classification:{expected:?}"), "set-frac", Some(g), class == expected));
    }
    Ok(rows)
}

/// Fixed-point rules whose transfer operators must have η₂ = 0.
pub fn fixed_point_rules() -> Result<Vec<(String, WSingleLine)>> {
    Ok(vec![
        ("TC2".into(), named_rule("TC2")?),
        ("TC4".into(), named_rule("TC4")?),
        ("DS".into(), named_rule("DS")?),
        ("Z9".into(), named_rule("Z9")?),
    ])
}

pub fn fixed_point_suite(ls: &[usize]) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, w) in fixed_point_rules()? {
        let rule = rule_from_single_line(&w)?;
        for &l in ls {
            let s = correlation_length(&rule, l, SolveMode::Auto)?;
            rows.push(CheckRow::below("fixed-point-eta2", format!("{name} L={l}"), None, s.eta2.norm(), FIXED_POINT_TOL));
        }
    }
    Ok(rows)
}

/// |η₂| at the critical point of `path` for each ring width.
pub fn critical_eta(path: PathName, ls: &[usize]) -> Result<Vec<f64>> {
    let spec = PathSpec::new(path, None)?;
    let g = path.critical_point().ok_or_else(|| Error::InvalidArgument(format!("{path} has no critical point")))?;
    let rule = rule_from_single_line(&spec.rule_tensor(g)?)?;
    ls.iter().map(|&l| Ok(correlation_length(&rule, l, SolveMode::Auto)?.eta2.norm())).collect()
}

/// Gap closing at a critical point: |η₂| strictly increasing in L and
/// 1 − |η₂| shrinking by at least `factor` from the first to the last width.
pub fn gap_closing_rows(path: PathName, ls: &[usize], factor: f64) -> Result<Vec<CheckRow>> {
    let eta = critical_eta(path, ls)?;
    let increasing = eta.windows(2).all(|w| w[1] > w[0]);
    let ratio = (1.0 - eta[0]) / (1.0 - eta[eta.len() - 1]);
    let label = |what: &str| format!("{path} {what} eta={eta:?}");
    Ok(vec![
        CheckRow::flag("gap-increasing", label("L"), Some(0.0), increasing),
        CheckRow { check: "gap-shrink-factor".into(), subject: label("ratio"), g: Some(0.0), value: ratio, tolerance: factor, pass: ratio >= factor },
    ])
}

/// Reproducible per-case generator.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random normalized patch and Pauli string.
#[derive(Clone, Debug)]
pub struct RandomCase {
    pub net: SingleLineNet,
    pub op: PauliString,
}

/// Random open patch with at most [`RANDOM_CASE_EDGES`] edges, N ∈ {2, 3}, random
/// normalized tensors (one per vertex unless `uniform`), a random product
/// boundary and a Pauli string of weight 1..=3.
pub fn random_case(seed: u64, index: u64, uniform: bool) -> Result<RandomCase> {
    let mut rng = case_rng(seed, index);
    let n = rng.gen_range(2..=3usize);
    let mut shapes = Vec::new();
    for (w, l) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let geo = PatchGeometry::open(w, l)?;
        if geo.num_edges() <= RANDOM_CASE_EDGES {
            shapes.push(geo);
        }
    }
    let geo = shapes[rng.gen_range(0..shapes.len())].clone();
    let density = rng.gen_range(0.3..1.0);
    let tensors: Vec<WSingleLine> = if uniform {
        vec![random_single_line(n, density, &mut rng); geo.num_vertices()]
    } else {
        (0..geo.num_vertices()).map(|_| random_single_line(n, density, &mut rng)).collect()
    };
    let mut amp: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..std::f64::consts::TAU))).collect();
    let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amp.iter_mut().for_each(|z| *z /= norm);
    let boundary = ProductBoundary::uniform(amp, geo.width)?;
    let weight = rng.gen_range(1..=3usize).min(geo.num_edges());
    let mut edges: Vec<usize> = (0..geo.num_edges()).collect();
    let mut factors = Vec::new();
    for _ in 0..weight {
        let e = edges.swap_remove(rng.gen_range(0..edges.len()));
        let (z, x) = loop {
            let z = rng.gen_range(0..n as i64);
            let x = rng.gen_range(0..n as i64);
            if z != 0 || x != 0 {
                break (z, x);
            }
        };
        factors.push((e, z, x));
    }
    let op = PauliString::from_factors(n as u32, factors)?;
    let net = SingleLineNet::new(geo, tensors, Some(boundary))?;
    Ok(RandomCase { net, op })
}

/// Exact ⟨O⟩ against the exact expectation of its compiled diagonal.
pub fn compiler_oracle_case(seed: u64, index: u64) -> Result<CheckRow> {
    let case = random_case(seed, index, false)?;
    let st = contract_single_line(&case.net, ORACLE_CAP)?;
    let exact = st.expectation_pauli(&case.op)?;
    let compiled = st.expectation_diagonal(&compile_single_line(&case.net, &case.op)?)?;
    Ok(CheckRow::below("compiler-oracle", format!("case {index}"), None, (exact - compiled).norm(), ORACLE_TOL))
}

pub fn compiler_oracle_suite(cases: u64, seed: u64) -> Result<Vec<CheckRow>> {
    (0..cases).into_par_iter().map(|i| compiler_oracle_case(seed, i)).collect()
}

/// Sampled estimate of a compiled diagonal against the exact value; the row value
/// is the deviation in units of the standard error.
pub fn monte_carlo_case(seed: u64, index: u64, samples: u64) -> Result<CheckRow> {
    let case = random_case(seed, index, true)?;
    let st = contract_single_line(&case.net, ORACLE_CAP)?;
    let exact = st.expectation_pauli(&case.op)?;
    let compiled = compile_single_line(&case.net, &case.op)?;
    let rule = rule_from_single_line(&case.net.tensors[0])?;
    let est = estimate_diagonal(&rule, &compiled, &case.net.geometry, &case.net.boundary, samples, seed.wrapping_add(index))?;
    let dev = (est.estimate - exact).norm();
    let sigmas = if dev < 1e-12 { 0.0 } else { dev / est.standard_error };
    Ok(CheckRow::below("monte-carlo-oracle", format!("case {index}"), None, sigmas, 3.0))
}

pub fn monte_carlo_suite(cases: u64, samples: u64, seed: u64) -> Result<Vec<CheckRow>> {
    (0..cases).map(|i| monte_carlo_case(seed, i, samples)).collect()
}

/// Double-line diagonal statistics against the reduced single-line rule, and the
/// g ↔ −g blindness of the reduction.
pub fn reduction_suite(gs: &[f64]) -> Result<Vec<CheckRow>> {
    let geo = PatchGeometry::open(4, 3)?;
    let mut rows = Vec::new();
    for &g in gs {
        let a = path_tc_ds(g)?;
        let dnet = DoubleLineNet::uniform(geo.clone(), a.clone(), None)?;
        let dl = contract_double_line(&dnet, ORACLE_CAP)?;
        let w = reduce_double_to_single(&a)?;
        let sl = contract_single_line(&SingleLineNet::uniform(geo.clone(), w.clone(), None)?, ORACLE_CAP)?;
        let mut worst = 0.0f64;
        // Every Z string of weight ≤ 2.
        for e in 0..geo.num_edges() {
            for f in e..geo.num_edges() {
                let op = if e == f { PauliString::from_factors(2, [(e, 1, 0)])? } else { PauliString::from_factors(2, [(e, 1, 0), (f, 1, 0)])? };
                worst = worst.max((dl.expectation_pauli(&op)? - sl.expectation_pauli(&op)?).norm());
            }
        }
        // Plaquette loops: exact on the double-line state, compiled on the reduced one.
        for p in geo.interior_plaquettes() {
            let mut s = vec![0; geo.num_plaquettes()];
            s[p] = 1;
            let xs = geo.shift_to_edges(&s);
            let op = PauliString::from_factors(2, xs.iter().enumerate().map(|(e, &x)| (e, 0, x)))?;
            let exact = dl.expectation_pauli(&op)?;
            let reduced = sl.expectation_diagonal(&compile_loop_double_line(&dnet, &[p])?)?;
            worst = worst.max((exact - reduced).norm());
        }
        rows.push(CheckRow::below("reduction-diagonal", "tc-ds", Some(g), worst, ORACLE_TOL));
        let mirror = reduce_double_to_single(&path_tc_ds(-g)?)?;
        let diff = w.max_abs_diff(&mirror);
        rows.push(CheckRow { check: "reduction-sign-blind".into(), subject: "tc-ds".into(), g: Some(g), value: diff, tolerance: 0.0, pass: diff == 0.0 });
    }
    Ok(rows)
}

/// Parent Hamiltonian of the N = 2 toric code on the 2×2 torus.
pub fn parent_suite() -> Result<Vec<CheckRow>> {
    let geo = PatchGeometry::torus(4, 2)?;
    let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(2), &geo)?;
    let psi = contract_double_line(&DoubleLineNet::uniform(geo, toric_code_double_line(2), None)?, ORACLE_CAP)?;
    let (rv, rp) = terms.annihilation_residual(&psi.amplitudes)?;
    Ok(vec![
        CheckRow::below("parent-commute", "TC2 torus", None, terms.max_commutator_norm()?, PARENT_TOL),
        CheckRow::below("parent-annihilate-vertex", "TC2 torus", None, rv, PARENT_TOL),
        CheckRow::below("parent-annihilate-plaquette", "TC2 torus", None, rp, PARENT_TOL),
        CheckRow::below("parent-loop-fidelity", "TC2 torus", None, 1.0 - psi.fidelity(&terms.projected_loop_state()), PARENT_TOL),
    ])
}

/// Paths, parameters and patches for the deformed parent-Hamiltonian check.
pub fn deformed_cases() -> Result<Vec<(PathName, Vec<f64>, PatchGeometry)>> {
    let torus = PatchGeometry::torus(4, 2)?;
    // N = 9 on the torus is beyond the dense cap; one interior plaquette suffices.
    let small = PatchGeometry::open(2, 3)?;
    Ok(vec![
        (PathName::Z22Z4Seg1, vec![0.25, 0.5, 0.75], torus.clone()),
        (PathName::Z22Z4Seg2, vec![0.25, 0.5, 0.75], torus.clone()),
        (PathName::SetFrac, vec![-0.5, 0.5, 1.0], torus),
        (PathName::DipoleSeg1, vec![0.25, 0.5, 0.75], small),
    ])
}

pub fn deformed_suite() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, gs, geo) in deformed_cases()? {
        let spec = PathSpec::new(name, None)?;
        for g in gs {
            let r = deformed_hamiltonian_check(&spec, g, &geo)?;
            rows.push(CheckRow::below("deformed-parent", name.as_str(), Some(g), r.residual(), DEFORMED_TOL));
        }
    }
    // These segments connect critical rules, so no invertible deformation of a fixed point exists.
    let small = PatchGeometry::open(2, 3)?;
    for name in [PathName::DipoleSeg2, PathName::DipoleSeg3] {
        let spec = PathSpec::new(name, None)?;
        let rejected = matches!(deformed_hamiltonian_check(&spec, 0.5, &small), Err(Error::Unsupported(_)));
        rows.push(CheckRow::flag("deformed-parent-rejected", name.as_str(), Some(0.5), rejected));
    }
    Ok(rows)
}

/// Everything `validate` runs: isometry and declared symmetries on every path grid,
/// conservation tables and the fractionalization classification.
pub fn validation_suite(points: usize) -> Result<Vec<CheckRow>> {
    let mut rows = isometry_suite(points)?;
    rows.extend(conservation_suite()?);
    rows.extend(classification_suite(21)?);
    Ok(rows)
}

/// Everything `oracle-check` runs.
pub fn oracle_suite(cases: u64, mc_cases: u64, samples: u64, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = compiler_oracle_suite(cases, seed)?;
    rows.extend(monte_carlo_suite(mc_cases, samples, seed)?);
    rows.extend(reduction_suite(&[-0.8, -0.3, 0.3, 0.8])?);
    rows.extend(parent_suite()?);
    rows.extend(deformed_suite()?);
    Ok(rows)
}
