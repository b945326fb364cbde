//! Inversion for spectra without exact revivals.
//!
//! Over a finite window the time average at one Bohr frequency also picks up
//! every other coherence through the window kernel
//! `K(ν) = (1/N_t) Σ_i e^{iν t_i}`. With
//! `a_α(t) = Σ_J C(J,J,α) ρ_JJ + Σ_{J1>J2} C(J1,J2,α) (ρ e^{-iωt} + c.c.)`
//! a probe `(α_p, ω_p)` measures
//!
//! `I_p = Σ_J C K(ω_p) ρ_JJ + Σ_e C [K(ω_p - ω_e) ρ_e + K(ω_p + ω_e) ρ_e*]`,
//!
//! which is linear in the block. One probe per unknown gives a square real
//! system that is exact for any window length.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::CoefficientTable;
use crate::error::{Error, Result};
use crate::rotor::{RotorSpec, TimeSamples};

use super::chain::{degeneracy_set_cd, ChainMember, ParityRule};
use super::moment::MomentEngine;
use super::offdiag::ElementEstimate;

pub fn window_kernel(times: &TimeSamples, nu: f64) -> Complex64 {
    let s: Complex64 = times.iter().map(|t| Complex64::from_polar(1.0, nu * t)).sum();
    s / times.n_t() as f64
}

/// Fourier resolution `2 pi / (N_T T)` of the observation window.
pub fn default_tolerance(times: &TimeSamples) -> f64 {
    2.0 * std::f64::consts::PI / times.window()
}

pub(crate) struct KernelSolution {
    pub populations: Vec<f64>,
    pub elements: Vec<ElementEstimate>,
}

pub(crate) fn kernel_solve(
    engine: &MomentEngine<'_>,
    table: &CoefficientTable,
    spec: &RotorSpec,
    times: &TimeSamples,
    j_max: u32,
    freq_tolerance: f64,
) -> Result<KernelSolution> {
    let m = table.basis().j_min();
    let pops: Vec<u32> = (m..=j_max).collect();
    let coh: Vec<(u32, u32)> = (m..=j_max).flat_map(|a| (m..a).map(move |b| (a, b))).collect();
    let nd = pops.len();
    let ne = coh.len();
    let n = nd + 2 * ne;
    let freq: Vec<f64> = coh.iter().map(|&(a, b)| spec.bohr_frequency(a, b)).collect();

    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    // rows 0..nd: static probes, real part; then (re, im) per coherence probe
    let mut fill = |rows: &[usize], alpha: u32, w: f64| -> Result<()> {
        let i = engine.at_frequency(alpha, w);
        let k0 = window_kernel(times, w);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for (d, &j) in pops.iter().enumerate() {
            line[d] = k0 * table.element(j, j, alpha)?;
        }
        for (e, &(j1, j2)) in coh.iter().enumerate() {
            let c = table.element(j1, j2, alpha)?;
            if c == 0.0 {
                continue;
            }
            let k1 = window_kernel(times, w - freq[e]);
            let k2 = window_kernel(times, w + freq[e]);
            line[nd + e] = (k1 + k2) * c;
            line[nd + ne + e] = (k1 - k2) * Complex64::new(0.0, c);
        }
        rhs[rows[0]] = i.re;
        for (col, v) in line.iter().enumerate() {
            a[(rows[0], col)] = v.re;
        }
        if let Some(&r) = rows.get(1) {
            rhs[r] = i.im;
            for (col, v) in line.iter().enumerate() {
                a[(r, col)] = v.im;
            }
        }
        Ok(())
    };
    for (d, &j) in pops.iter().enumerate() {
        fill(&[d], 2 * j, 0.0)?;
    }
    for (e, &(j1, j2)) in coh.iter().enumerate() {
        fill(&[nd + e, nd + ne + e], j1 + j2, freq[e])?;
    }
    let x = a.lu().solve(&rhs).ok_or(Error::Singular { index: 0, value: 0.0 })?;

    let elements = coh
        .iter()
        .enumerate()
        .map(|(e, &(j1, j2))| {
            let chain = degeneracy_set_cd(j1 + j2, (j1 - j2) as i32, m, 2 * j_max, spec, freq_tolerance, ParityRule::Matched)
                .members
                .into_iter()
                .filter(|p: &ChainMember| p.element().0 <= j_max)
                .collect();
            ElementEstimate { j1, j2, value: Complex64::new(x[nd + e], x[nd + ne + e]), chain, neglected: Vec::new() }
        })
        .collect();
    Ok(KernelSolution { populations: x.as_slice()[..nd].to_vec(), elements })
}
