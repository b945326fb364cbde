//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotomo_core::basis::{
    cached_grid, clebsch_gordan, legendre_norm_column, legendre_p, product_decomp, wigner_d_column, Eigenbasis,
};
use rotomo_core::rotor::{
    add_shot_noise, make_test_state, simulate_pr, DensityBlock, MeasurementGrid, RotorSpec, TestStateKind,
};
use rotomo_core::tomography::{
    degeneracy_set, moment_integral, pattern_function_with, reconstruct_block, reconstruct_diag, ChainMember,
    MomentEngine, PatternMethod, SamplingPlan,
};

struct Outcome {
    ok: bool,
    detail: String,
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn simulate(block: &DensityBlock, spec: &RotorSpec, n_periods: u32) -> MeasurementGrid {
    let plan = SamplingPlan::auto(spec, block.j_max(), n_periods, None);
    simulate_pr(block, spec, &plan.x_grid().unwrap(), &plan.times(spec).unwrap()).unwrap()
}

// Exhaustive scan: every coherence with the probe's frequency whose
// Legendre expansion reaches order alpha.
fn brute_chain(alpha: u32, beta: i32, m: u32, cap: u32) -> Vec<(u32, i32)> {
    let target = beta as i64 * (alpha as i64 + 1);
    let mut found = Vec::new();
    for j1 in m..=cap {
        for j2 in m..=cap {
            let (j, dj) = (j1 + j2, j1 as i32 - j2 as i32);
            if j > cap || j < alpha || !(j - alpha).is_multiple_of(2) || dj.unsigned_abs() > alpha {
                continue;
            }
            let y = |x: u32| x as i64 * (x as i64 + 1);
            if y(j1) - y(j2) == target {
                found.push((j, dj));
            }
        }
    }
    found.sort_by_key(|&(j, dj)| (std::cmp::Reverse(dj.unsigned_abs()), j));
    found
}

fn c1_degeneracy() -> Outcome {
    let pairs = |a, b| degeneracy_set(a, b, 0, 40).members.iter().map(|m| (m.j, m.dj)).collect::<Vec<_>>();
    let ex5 = pairs(5, 5) == vec![(5, 5), (9, 3), (29, 1)];
    let ex3 = pairs(3, 3) == vec![(3, 3), (11, 1)];
    let mut mismatches = 0;
    let mut checked = 0;
    for m in 0..=3u32 {
        for alpha in m..=20u32 {
            for beta in (-(alpha as i32)..=alpha as i32).step_by(2).filter(|b| *b != 0) {
                let got: Vec<_> = degeneracy_set(alpha, beta, m, 40).members.iter().map(|p| (p.j, p.dj)).collect();
                checked += 1;
                if got != brute_chain(alpha, beta, m, 40) {
                    mismatches += 1;
                }
            }
        }
    }
    check(ex5 && ex3 && mismatches == 0, format!("worked examples {ex5}/{ex3}, oracle mismatches {mismatches}/{checked}"))
}

fn c2_rigid_round_trip() -> Outcome {
    let mut worst = 0.0_f64;
    let mut worst_res = 0.0_f64;
    for i in 0..20u64 {
        let m = (i % 3) as i32;
        let kind = if i % 2 == 0 { TestStateKind::RandomMixed } else { TestStateKind::RandomPure };
        let spec = RotorSpec::rigid_linear(1.0, m);
        let b = make_test_state(kind, 0, m, 6, 100 + i, 0.0).unwrap();
        let g = simulate(&b, &spec, 1);
        let r = reconstruct_block(&g, &spec, 6).unwrap();
        worst = worst.max(r.block.max_abs_diff(&b));
        worst_res = worst_res.max(r.diagnostics.residual);
    }
    check(worst < 1e-8 && worst_res < 1e-9, format!("max error {worst:.2e}, max residual {worst_res:.2e}"))
}

fn c3_symmetric_top() -> Outcome {
    let spec = RotorSpec::symmetric_top(1.0, 0.41, 1, 1);
    let mut worst = 0.0_f64;
    for i in 0..5u64 {
        let kind = if i % 2 == 0 { TestStateKind::RandomMixed } else { TestStateKind::RandomPure };
        let b = make_test_state(kind, 1, 1, 5, 200 + i, 0.0).unwrap();
        let r = reconstruct_block(&simulate(&b, &spec, 1), &spec, 5).unwrap();
        worst = worst.max(r.block.max_abs_diff(&b));
    }
    let mut k0 = 0.0_f64;
    for m in 0..=2 {
        let lin = RotorSpec::rigid_linear(1.0, m);
        let top = RotorSpec::symmetric_top(1.0, 0.41, 0, m);
        let b = make_test_state(TestStateKind::RandomMixed, 0, m, 5, 210 + m as u64, 0.0).unwrap();
        let g = simulate(&b, &lin, 1);
        let a = reconstruct_block(&g, &lin, 5).unwrap().block;
        let t = reconstruct_block(&g, &top, 5).unwrap().block;
        k0 = k0.max(a.max_abs_diff(&t));
    }
    check(worst < 1e-8 && k0 < 1e-11, format!("max error {worst:.2e}, k=0 vs linear {k0:.2e}"))
}

fn c4_centrifugal() -> Outcome {
    let spec = RotorSpec::centrifugal_linear(1.0, 1e-3, 0);
    let mut worst = 0.0_f64;
    let mut single = true;
    for i in 0..3u64 {
        let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 5, 300 + i, 0.0).unwrap();
        let r = reconstruct_block(&simulate(&b, &spec, 64), &spec, 5).unwrap();
        worst = worst.max(r.block.max_abs_diff(&b));
        let e = r.diagnostics.elements.iter().find(|e| (e.j1, e.j2) == (5, 0)).unwrap();
        single &= e.chain == vec![ChainMember::new(5, 5)];
    }
    let rigid = RotorSpec::rigid_linear(1.0, 0);
    let cd0 = RotorSpec::centrifugal_linear(1.0, 0.0, 0);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 5, 310, 0.0).unwrap();
    let g = simulate(&b, &cd0, 64);
    let plan = SamplingPlan::auto(&rigid, 5, 64, None);
    let g = simulate_pr(&b, &cd0, &plan.x_grid().unwrap(), g.times()).unwrap();
    let a = reconstruct_block(&g, &rigid, 5).unwrap().block;
    let d = reconstruct_block(&g, &cd0, 5).unwrap().block;
    let reduce = a.max_abs_diff(&d);
    check(
        worst < 1e-6 && reduce < 1e-10 && single,
        format!("max error {worst:.2e}, D=0 vs rigid {reduce:.2e}, (5,0) chain isolated {single}"),
    )
}

fn c5_diagonal_dual() -> Outcome {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let patterns: Vec<_> = (0..=8)
        .map(|j| pattern_function_with(Eigenbasis::for_km(0, 0), j, 8, PatternMethod::Cramer).unwrap())
        .collect();
    let mut coeff_gap = 0.0_f64;
    for p in &patterns {
        let t = pattern_function_with(Eigenbasis::for_km(0, 0), p.j1, 8, PatternMethod::Triangular).unwrap();
        for ((_, a), (_, b)) in p.coeffs.iter().zip(&t.coeffs) {
            coeff_gap = coeff_gap.max((a - b).abs());
        }
    }
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let w: Vec<f64> = (0..=8).map(|_| rng.gen::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let b = DensityBlock::from_fn(0, 0, 8, |a, c| {
            if a == c { Complex64::new(w[a as usize] / s, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
        .unwrap();
        let g = simulate(&b, &spec, 1);
        let tri = reconstruct_diag(&g, &spec, 8).unwrap();
        for (j, p) in patterns.iter().enumerate() {
            worst = worst.max((p.apply(&g).unwrap() - tri[j]).abs());
        }
    }
    check(worst < 1e-10 && coeff_gap < 1e-10, format!("max disagreement {worst:.2e}, coefficient gap {coeff_gap:.2e}"))
}

fn c6_special_functions() -> Outcome {
    let mut worst = [0.0_f64; 5];
    // Legendre orthonormality
    let q = cached_grid(48).unwrap();
    for m in -8..=8i32 {
        let cols: Vec<Vec<f64>> = q.nodes().iter().map(|&x| legendre_norm_column(m, 40, x).unwrap()).collect();
        let lo = m.unsigned_abs() as usize;
        for a in lo..=40 {
            for b in lo..=40 {
                let s: f64 = cols.iter().zip(q.weights()).map(|(c, w)| w * c[a - lo] * c[b - lo]).sum();
                worst[0] = worst[0].max((s - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    // Wigner-d orthogonality and reduction to P_J
    for (k, m) in [(0, 0), (1, 0), (1, 1), (2, -1), (3, 2), (-4, 4)] {
        let cols: Vec<Vec<f64>> = q.nodes().iter().map(|&x| wigner_d_column(k, m, 40, x).unwrap()).collect();
        let lo = k.unsigned_abs().max(m.unsigned_abs()) as usize;
        for a in lo..=40 {
            for b in lo..=40 {
                let s: f64 = cols.iter().zip(q.weights()).map(|(c, w)| w * c[a - lo] * c[b - lo]).sum();
                let want = if a == b { 2.0 / (2 * a + 1) as f64 } else { 0.0 };
                worst[1] = worst[1].max((s - want).abs());
            }
        }
    }
    for i in 0..=200 {
        let x = -1.0 + i as f64 / 100.0;
        let d = wigner_d_column(0, 0, 40, x).unwrap();
        for (j, v) in d.iter().enumerate() {
            worst[2] = worst[2].max((v - legendre_p(j as u32, x)).abs());
        }
    }
    // CG unitarity: for each (j1, j2, M) the matrix <j1 m1 j2 M-m1 | J M> is orthogonal
    for j1 in 0..=20u32 {
        for j2 in 0..=20u32 {
            let big = (j1 + j2) as i32;
            for mm in -big..=big {
                let m1s: Vec<i32> = (-(j1 as i32)..=j1 as i32).filter(|m1| (mm - m1).unsigned_abs() <= j2).collect();
                let js: Vec<u32> = (j1.abs_diff(j2)..=j1 + j2).filter(|&j| mm.unsigned_abs() <= j).collect();
                let u: Vec<Vec<f64>> =
                    m1s.iter().map(|&m1| js.iter().map(|&j| clebsch_gordan(j1, j2, j, m1, mm - m1, mm)).collect()).collect();
                for a in 0..js.len() {
                    for b in a..js.len() {
                        let s: f64 = u.iter().map(|r| r[a] * r[b]).sum();
                        worst[3] = worst[3].max((s - if a == b { 1.0 } else { 0.0 }).abs());
                    }
                }
            }
        }
    }
    // Product decomposition pointwise
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (k, m) in [(0, 0), (0, 2), (1, 1), (2, -1), (-1, 3)] {
        let basis = Eigenbasis::for_km(k, m);
        let lo = basis.j_min();
        for j1 in lo..=16 {
            for j2 in lo..=16 {
                let terms = product_decomp(j1, j2, k, m).unwrap();
                for _ in 0..4 {
                    let x: f64 = rng.gen_range(-1.0..1.0);
                    let p = legendre_norm_column(0, j1 + j2, x).unwrap();
                    let lhs = basis.eval(j1, x).unwrap() * basis.eval(j2, x).unwrap();
                    let rhs: f64 = terms.iter().map(|&(l, c)| c * p[l as usize]).sum();
                    worst[4] = worst[4].max((lhs - rhs).abs());
                }
            }
        }
    }
    let ok = worst.iter().all(|w| *w < 1e-11);
    check(
        ok,
        format!(
            "legendre {:.1e}, wigner {:.1e}, d00=P {:.1e}, cg {:.1e}, product {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn c7_hermiticity_linearity() -> Outcome {
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let b = make_test_state(TestStateKind::RandomMixed, 0, 0, 5, 700, 0.0).unwrap();
    let clean = simulate(&b, &spec, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = clean.map_values(|_| rng.gen_range(-1.0..1.0));
    let mut herm = 0.0_f64;
    for g in [&clean, &noise] {
        let e = MomentEngine::new(g, spec, 12).unwrap();
        for a in 0..=12u32 {
            for beta in (1..=a as i32).filter(|x| (a as i32 - x) % 2 == 0) {
                let p = e.moment(a, beta).unwrap().value;
                let q = e.moment(a, -beta).unwrap().value;
                herm = herm.max((p - q.conj()).norm());
            }
        }
    }
    let one = moment_integral(&noise, 7, 3, &spec).unwrap().value;
    let other = moment_integral(&noise, 7, -3, &spec).unwrap().value;
    herm = herm.max((one - other.conj()).norm());

    let b2 = make_test_state(TestStateKind::RandomPure, 0, 0, 5, 701, 0.0).unwrap();
    let g2 = simulate(&b2, &spec, 2);
    let mut lin = 0.0_f64;
    for (g1, lambda) in [(&clean, 0.3), (&noise, 0.71)] {
        let mixed = MeasurementGrid::new(
            g1.header,
            g1.x_grid().clone(),
            *g1.times(),
            g1.values().iter().zip(g2.values()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect(),
        )
        .unwrap();
        let r1 = reconstruct_block(g1, &spec, 5).unwrap().block;
        let r2 = reconstruct_block(&g2, &spec, 5).unwrap().block;
        let rm = reconstruct_block(&mixed, &spec, 5).unwrap().block;
        lin = lin.max(rm.max_abs_diff(&r1.mix(&r2, lambda).unwrap()));
    }
    check(herm < 1e-10 && lin < 1e-9, format!("conjugate symmetry {herm:.2e}, linearity {lin:.2e}"))
}

fn c8_noise() -> Outcome {
    const SAMPLES: u64 = 1_000_000;
    const TRIALS: u64 = 50;
    const RESAMPLES: u64 = 30;
    let spec = RotorSpec::rigid_linear(1.0, 0);
    let truth = make_test_state(TestStateKind::RandomMixed, 0, 0, 3, 800, 0.0).unwrap();
    let clean = simulate(&truth, &spec, 1);
    let mut passed = 0;
    let mut worst_z = 0.0_f64;
    for trial in 0..TRIALS {
        let noisy = add_shot_noise(&clean, SAMPLES, 10_000 + trial).unwrap();
        let est = reconstruct_block(&noisy, &spec, 3).unwrap().block;
        let boots: Vec<DensityBlock> = (0..RESAMPLES)
            .map(|r| {
                let g = add_shot_noise(&noisy, SAMPLES, 1_000_000 * (trial + 1) + r).unwrap();
                reconstruct_block(&g, &spec, 3).unwrap().block
            })
            .collect();
        let mut ok = true;
        for j1 in truth.js() {
            for j2 in truth.js().filter(|&j2| j2 <= j1) {
                let t = truth.get(j1, j2);
                if t.norm() <= 0.05 {
                    continue;
                }
                let vals: Vec<Complex64> = boots.iter().map(|b| b.get(j1, j2)).collect();
                let mean = vals.iter().sum::<Complex64>() / vals.len() as f64;
                let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (vals.len() - 1) as f64;
                let z = (est.get(j1, j2) - t).norm() / var.sqrt();
                worst_z = worst_z.max(z);
                ok &= z <= 5.0;
            }
        }
        passed += ok as u32;
    }
    check(passed * 100 >= 95 * TRIALS as u32, format!("{passed}/{TRIALS} trials within 5 SE, worst z {worst_z:.2}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 degeneracy fidelity", Duration::from_secs(1), c1_degeneracy),
        ("2 rigid round trip", Duration::from_secs(30), c2_rigid_round_trip),
        ("3 symmetric-top round trip", Duration::from_secs(20), c3_symmetric_top),
        ("4 centrifugal path", Duration::from_secs(30), c4_centrifugal),
        ("5 diagonal dual-method", Duration::from_secs(5), c5_diagonal_dual),
        ("6 special functions", Duration::from_secs(60), c6_special_functions),
        ("7 hermiticity and linearity", Duration::from_secs(60), c7_hermiticity_linearity),
        ("8 noise sanity", Duration::from_secs(300), c8_noise),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took < limit;
        failed += !ok as u32;
        println!(
            "[{}] criterion {name}: {} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
