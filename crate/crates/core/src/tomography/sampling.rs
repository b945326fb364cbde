//! Sampling conditions under which the discrete moment integrals are exact.
//!
//! Time: with `n_t` uniform samples over `N_T` windows of `pi / omega`, the
//! harmonic `h` of `2 omega` is sampled at `n_t / gcd(n_t, N_T)` distinct
//! phases. Two harmonics inside a block differ by at most `2 h_max`, so
//! orthogonality is exact once the distinct-phase count exceeds that.
//!
//! Space: `Pr(x, t)` is a polynomial of degree `2 j_max` in `x`; projecting
//! it onto `𝒫_α` needs a Gauss-Legendre rule exact to degree `α + 2 j_max`.

use std::sync::Arc;

use crate::basis::{cached_grid, QuadratureGrid};
use crate::error::{Error, Result};
use crate::rotor::{MeasurementGrid, RotorSpec, TimeSamples};

use super::chain::{default_search_cap, degeneracy_chain, ParityRule};

/// What a grid must satisfy to reconstruct a block truncated at `j_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingRequirement {
    pub j_max: u32,
    pub j_search_cap: u32,
    /// Largest `|E_{J1} - E_{J2}| / (2 omega)` inside the block, rounded up.
    pub max_harmonic: u64,
    pub min_distinct_phases: usize,
    /// Highest Legendre order that will be probed.
    pub alpha_max: u32,
    pub min_n_x: usize,
}

impl SamplingRequirement {
    pub fn new(spec: &RotorSpec, j_max: u32, j_search_cap: Option<u32>) -> Self {
        let cap = j_search_cap.unwrap_or_else(|| default_search_cap(j_max));
        let m = spec.m_km();
        let max_harmonic = if j_max <= m {
            0
        } else if spec.is_commensurate() {
            let y = |j: u32| j as u64 * (j as u64 + 1);
            (y(j_max) - y(m)) / 2
        } else {
            let mut w = 0.0_f64;
            for j1 in m..=j_max {
                for j2 in m..j1 {
                    w = w.max(spec.bohr_frequency(j1, j2).abs());
                }
            }
            (w / (2.0 * spec.omega)).ceil() as u64
        };
        let mut alpha_max = 2 * j_max;
        if spec.is_commensurate() {
            let parity = ParityRule::for_basis(spec.eigenbasis());
            for j1 in m..=j_max {
                for j2 in m..j1 {
                    let chain = degeneracy_chain(j1 + j2, (j1 - j2) as i32, m, cap, parity);
                    if let Some(last) = chain.members.last() {
                        alpha_max = alpha_max.max(last.j);
                    }
                }
            }
        }
        let base = 2 * j_max as usize + 1;
        let min_n_x = base.max((alpha_max as usize + 2 * j_max as usize + 2) / 2);
        Self {
            j_max,
            j_search_cap: cap,
            max_harmonic,
            min_distinct_phases: 2 * max_harmonic as usize + 1,
            alpha_max,
            min_n_x,
        }
    }

    /// Smallest `n_t` meeting the time condition over `n_periods` windows.
    pub fn auto_n_t(&self, n_periods: u32) -> usize {
        self.min_distinct_phases * n_periods as usize
    }

    /// Checks a grid against this requirement and the rotor it claims to
    /// describe. Errors name the required `n_t` / `n_x`.
    pub fn check(&self, grid: &MeasurementGrid, spec: &RotorSpec) -> Result<()> {
        check_header(grid, spec)?;
        let times = grid.times();
        let have = times.distinct_phases();
        if have < self.min_distinct_phases {
            return Err(Error::Sampling(format!(
                "n_t = {} over N_T = {} windows gives {} distinct phases; j_max = {} needs {} \
                 (required n_t / gcd(n_t, N_T) >= {}, e.g. n_t = {})",
                times.n_t(),
                times.n_periods(),
                have,
                self.j_max,
                self.min_distinct_phases,
                self.min_distinct_phases,
                self.auto_n_t(times.n_periods())
            )));
        }
        if grid.n_x() < self.min_n_x {
            return Err(Error::Sampling(format!(
                "n_x = {} cannot integrate Legendre order {} against a j_max = {} signal exactly \
                 (required n_x = {})",
                grid.n_x(),
                self.alpha_max,
                self.j_max,
                self.min_n_x
            )));
        }
        Ok(())
    }
}

/// Verifies that a grid's metadata matches the rotor used to invert it.
pub(crate) fn check_header(grid: &MeasurementGrid, spec: &RotorSpec) -> Result<()> {
    let h = &grid.header;
    if (h.k, h.m) != (spec.k, spec.m) {
        return Err(Error::Mismatch(format!(
            "grid has (k, m) = ({}, {}), rotor has ({}, {})",
            h.k, h.m, spec.k, spec.m
        )));
    }
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if !rel(h.omega, spec.omega) {
        return Err(Error::Mismatch(format!("grid has omega = {}, rotor has {}", h.omega, spec.omega)));
    }
    if !rel(grid.times().period(), spec.window_period()) {
        return Err(Error::Mismatch(format!(
            "grid window period {} differs from pi/omega = {}",
            grid.times().period(),
            spec.window_period()
        )));
    }
    Ok(())
}

/// Concrete sampling orders for a simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingPlan {
    pub n_t: usize,
    pub n_x: usize,
    pub n_periods: u32,
}

impl SamplingPlan {
    /// `n_t` / `n_x` of `None` or `Some(0)` are derived from the requirement.
    pub fn resolve(req: &SamplingRequirement, n_periods: u32, n_t: Option<usize>, n_x: Option<usize>) -> Self {
        let n_t = n_t.filter(|&n| n > 0).unwrap_or_else(|| req.auto_n_t(n_periods.max(1)));
        let n_x = n_x.filter(|&n| n > 0).unwrap_or(req.min_n_x);
        Self { n_t, n_x, n_periods }
    }

    pub fn auto(spec: &RotorSpec, j_max: u32, n_periods: u32, j_search_cap: Option<u32>) -> Self {
        Self::resolve(&SamplingRequirement::new(spec, j_max, j_search_cap), n_periods, None, None)
    }

    pub fn times(&self, spec: &RotorSpec) -> Result<TimeSamples> {
        TimeSamples::new(self.n_t, self.n_periods, spec.window_period())
    }

    pub fn x_grid(&self) -> Result<Arc<QuadratureGrid>> {
        cached_grid(self.n_x)
    }
}
