use num_complex::Complex64;

use super::*;
use crate::rotor::{make_test_state, simulate_pr, DensityBlock, MeasurementGrid, RotorSpec, TestStateKind};

fn simulate(block: &DensityBlock, spec: &RotorSpec, n_periods: u32) -> MeasurementGrid {
    let plan = SamplingPlan::auto(spec, block.j_max(), n_periods, None);
    simulate_pr(block, spec, &plan.x_grid().unwrap(), &plan.times(spec).unwrap()).unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn ground_state_has_no_coherences() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let mut b = DensityBlock::zeros(0, 0, 4).unwrap();
    b.set(0, 0, c(1.0));
    let g = simulate(&b, &spec, 1);
    for e in reconstruct_offdiag(&g, &spec, 4).unwrap() {
        assert!(e.value.norm() < 1e-10);
    }
}

#[test]
fn two_level_superposition() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = DensityBlock::from_fn(0, 0, 1, |_, _| c(0.5)).unwrap();
    let g = simulate(&b, &spec, 1);
    let off = reconstruct_offdiag(&g, &spec, 1).unwrap();
    assert_eq!(off.len(), 1);
    assert!((off[0].value - c(0.5)).norm() < 1e-9);
}

#[test]
fn random_pure_offdiagonals() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomPure, 0, 0, 5, 42, 0.0).unwrap();
    let g = simulate(&b, &spec, 1);
    for e in reconstruct_offdiag(&g, &spec, 5).unwrap() {
        assert!((e.value - b.get(e.j1, e.j2)).norm() < 1e-8, "({}, {})", e.j1, e.j2);
        assert!(!e.contaminated());
    }
}

#[test]
fn diagonal_trace_matches_zeroth_moment() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 4, 8, 0.0).unwrap();
    let g = simulate(&b, &spec, 1);
    let d = reconstruct_diag(&g, &spec, 4).unwrap();
    let i00 = moment_integral(&g, 0, 0, &spec).unwrap().value.re;
    assert!((d.iter().sum::<f64>() - 2f64.sqrt() * i00).abs() < 1e-10);
}

#[test]
fn block_round_trip_with_small_residual() {
    let spec = RotorSpec::rigid_linear(1.0, 1);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 1, 6, 3, 0.0).unwrap();
    let g = simulate(&b, &spec, 2);
    let r = reconstruct_block(&g, &spec, 6).unwrap();
    assert!(r.block.max_abs_diff(&b) < 1e-8);
    assert!(r.diagnostics.residual < 1e-9);
    assert_eq!(r.diagnostics.flagged().count(), 0);
    let report = r.diagnostics.report();
    assert!(report.contains("residual=") && report.contains("coherences"));
}

#[test]
fn symmetric_top_round_trip() {
    let spec = RotorSpec::symmetric_top(1.0, 0.37, 1, 1);
    let b = make_test_state(TestStateKind::RandomMixed, 1, 1, 5, 19, 0.0).unwrap();
    let g = simulate(&b, &spec, 1);
    let r = reconstruct_block(&g, &spec, 5).unwrap();
    assert!(r.block.max_abs_diff(&b) < 1e-8, "{}", r.block.max_abs_diff(&b));
}

#[test]
fn k_zero_symmetric_top_matches_linear() {
    let lin = RotorSpec::rigid_linear(1.0, 2);
    let top = RotorSpec::symmetric_top(1.0, 0.6, 0, 2);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 2, 5, 4, 0.0).unwrap();
    let g = simulate(&b, &lin, 1);
    let a = reconstruct_block(&g, &lin, 5).unwrap().block;
    let t = reconstruct_block(&g, &top, 5).unwrap().block;
    assert!(a.max_abs_diff(&t) < 1e-11);
}

#[test]
fn truncated_search_flags_the_deep_chain() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomPure, 0, 0, 5, 1, 0.0).unwrap();
    let g = simulate(&b, &spec, 1);
    let opts = ReconstructOptions { j_search_cap: Some(20), ..Default::default() };
    let r = reconstruct_block_with(&g, &spec, 5, &opts).unwrap();
    let e = r.diagnostics.elements.iter().find(|e| (e.j1, e.j2) == (5, 0)).unwrap();
    assert_eq!(e.neglected, vec![ChainMember::new(29, 1)]);
    assert!(r.diagnostics.report().contains("contaminated-by-truncation neglected=[(29,1)]"));
    // the neglected member is empty in this data, so the value is still right
    assert!((e.value - b.get(5, 0)).norm() < 1e-8);
}

#[test]
fn zero_data_gives_zero_block() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = DensityBlock::zeros(0, 0, 3).unwrap();
    let g = simulate(&b, &spec, 1);
    let r = reconstruct_block(&g, &spec, 3).unwrap();
    assert_eq!(r.block.max_abs_diff(&b), 0.0);
    assert_eq!(r.diagnostics.residual, 0.0);
}

#[test]
fn undersampled_time_axis_is_rejected() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomPure, 0, 0, 3, 1, 0.0).unwrap();
    let plan = SamplingPlan::auto(&spec, 3, 1, None);
    let times = crate::rotor::TimeSamples::new(10, 1, spec.window_period()).unwrap();
    let g = simulate_pr(&b, &spec, &plan.x_grid().unwrap(), &times).unwrap();
    let err = reconstruct_block(&g, &spec, 3).unwrap_err();
    assert!(err.to_string().contains("e.g. n_t = 13"), "{err}");
}

#[test]
fn centrifugal_round_trip_and_rigid_reduction() {
    let spec = RotorSpec::centrifugal_linear(1.0, 1e-3, 0);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 5, 6, 0.0).unwrap();
    let g = simulate(&b, &spec, 64);
    let r = reconstruct_block(&g, &spec, 5).unwrap();
    assert!(r.block.max_abs_diff(&b) < 1e-6, "{}", r.block.max_abs_diff(&b));
    let e = r.diagnostics.elements.iter().find(|e| (e.j1, e.j2) == (5, 0)).unwrap();
    assert_eq!(e.chain, vec![ChainMember::new(5, 5)]);

    let cd0 = RotorSpec::centrifugal_linear(1.0, 0.0, 0);
    let rigid = RotorSpec::rigid_linear(1.0, 0);
    let g0 = simulate(&b, &rigid, 4);
    let a = reconstruct_block(&g0, &rigid, 5).unwrap().block;
    let mut g_cd = g0.clone();
    g_cd.header.kind = cd0.kind;
    let d = reconstruct_block(&g_cd, &cd0, 5).unwrap().block;
    assert!(a.max_abs_diff(&d) < 1e-10, "{}", a.max_abs_diff(&d));
}

#[test]
fn psd_option_keeps_physical_blocks() {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 3, 2, 0.0).unwrap();
    let g = simulate(&b, &spec, 1);
    let opts = ReconstructOptions { project_psd: true, ..Default::default() };
    let r = reconstruct_block_with(&g, &spec, 3, &opts).unwrap();
    assert!(r.block.max_abs_diff(&b) < 1e-8);
    assert!(r.diagnostics.psd_projected);
}
