//! Full-block reconstruction and its diagnostics.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::basis::CoefficientTable;
use crate::error::{Error, Result};
use crate::rotor::{simulate_pr, DensityBlock, MeasurementGrid, RotorKind, RotorSpec};

use super::centrifugal::{default_tolerance, kernel_solve};
use super::chain::ChainMember;
use super::diag::diag_from_engine;
use super::moment::MomentEngine;
use super::offdiag::{chains_from_engine, ElementEstimate};
use super::psd::project_psd;
use super::sampling::SamplingRequirement;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReconstructOptions {
    /// Deepest `J` searched for degenerate partners; `None` covers every
    /// chain of the block.
    pub j_search_cap: Option<u32>,
    /// Frequency window for reporting near-degenerate partners of a
    /// distorted spectrum; `None` uses the window's Fourier resolution.
    pub freq_tolerance: Option<f64>,
    /// Clip negative eigenvalues after inversion.
    pub project_psd: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact degeneracies resolved by back substitution.
    Chains,
    /// Dense solve including the finite-window kernel.
    WindowKernel,
}

impl Method {
    pub fn for_spec(spec: &RotorSpec) -> Self {
        match spec.kind {
            RotorKind::CentrifugalLinear => Method::WindowKernel,
            _ => Method::Chains,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Chains => "chains",
            Method::WindowKernel => "window-kernel",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub spec: RotorSpec,
    pub method: Method,
    pub j_max: u32,
    pub j_search_cap: u32,
    pub freq_tolerance: Option<f64>,
    pub n_t: usize,
    pub n_x: usize,
    pub n_periods: u32,
    pub populations: Vec<(u32, f64)>,
    pub elements: Vec<ElementEstimate>,
    /// `sqrt(2) I(0, 0)`, the norm of the measured signal.
    pub signal_trace: f64,
    /// `max |simulate(ρ) - data|` over the grid.
    pub residual: f64,
    pub psd_projected: bool,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn flagged(&self) -> impl Iterator<Item = &ElementEstimate> {
        self.elements.iter().filter(|e| e.contaminated())
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let sp = &self.spec;
        let _ = writeln!(s, "rotor {} omega={} k={} m={}", sp.kind, sp.omega, sp.k, sp.m);
        if sp.kind == RotorKind::CentrifugalLinear {
            let _ = writeln!(s, "d_cd={}", sp.d_cd);
        }
        let _ = writeln!(
            s,
            "j_max={} method={} j_search_cap={} n_t={} n_x={} n_periods={}",
            self.j_max,
            self.method.as_str(),
            self.j_search_cap,
            self.n_t,
            self.n_x,
            self.n_periods
        );
        if let Some(tol) = self.freq_tolerance {
            let _ = writeln!(s, "freq_tolerance={tol:e}");
        }
        let trace: f64 = self.populations.iter().map(|p| p.1).sum();
        let _ = writeln!(s, "trace={trace:.12} signal_trace={:.12}", self.signal_trace);
        let _ = writeln!(s, "residual={:e}", self.residual);
        let _ = writeln!(s, "min_eigenvalue={:e} psd_projected={}", self.min_eigenvalue, self.psd_projected);
        let _ = writeln!(s, "flagged={}", self.flagged().count());
        let _ = writeln!(s, "\npopulations");
        for (j, p) in &self.populations {
            let _ = writeln!(s, "  {j:>3} {p:+.12e}");
        }
        let _ = writeln!(s, "\ncoherences (j1 j2 re im chain flags)");
        for e in &self.elements {
            let _ = write!(
                s,
                "  {:>3} {:>3} {:+.12e} {:+.12e} [{}]",
                e.j1,
                e.j2,
                e.value.re,
                e.value.im,
                join(&e.chain)
            );
            if e.contaminated() {
                let _ = write!(s, " contaminated-by-truncation neglected=[{}]", join(&e.neglected));
            }
            s.push('\n');
        }
        s
    }
}

fn join(ms: &[ChainMember]) -> String {
    ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub block: DensityBlock,
    pub diagnostics: Diagnostics,
}

struct Setup<'a> {
    engine: MomentEngine<'a>,
    table: CoefficientTable,
    req: SamplingRequirement,
}

fn setup<'a>(grid: &'a MeasurementGrid, spec: &RotorSpec, j_max: u32, opts: &ReconstructOptions) -> Result<Setup<'a>> {
    spec.validate(j_max)?;
    if j_max < spec.m_km() {
        return Err(Error::domain(format!("j_max = {j_max} lies below M_km = {}", spec.m_km())));
    }
    let req = SamplingRequirement::new(spec, j_max, opts.j_search_cap);
    req.check(grid, spec)?;
    let engine = MomentEngine::new(grid, *spec, req.alpha_max)?;
    Ok(Setup { engine, table: CoefficientTable::new(spec.eigenbasis()), req })
}

struct Solved {
    populations: Vec<f64>,
    elements: Vec<ElementEstimate>,
    tolerance: Option<f64>,
}

fn solve(s: &Setup<'_>, grid: &MeasurementGrid, spec: &RotorSpec, j_max: u32, opts: &ReconstructOptions) -> Result<Solved> {
    match Method::for_spec(spec) {
        Method::Chains => Ok(Solved {
            populations: diag_from_engine(&s.engine, &s.table, j_max)?,
            elements: chains_from_engine(&s.engine, &s.table, j_max, s.req.j_search_cap)?,
            tolerance: None,
        }),
        Method::WindowKernel => {
            let tol = opts.freq_tolerance.unwrap_or_else(|| default_tolerance(grid.times()));
            let k = kernel_solve(&s.engine, &s.table, spec, grid.times(), j_max, tol)?;
            Ok(Solved { populations: k.populations, elements: k.elements, tolerance: Some(tol) })
        }
    }
}

/// Populations `ρ(J, J)`, `J = M_km ..= j_max`.
pub fn reconstruct_diag(grid: &MeasurementGrid, spec: &RotorSpec, j_max: u32) -> Result<Vec<f64>> {
    let opts = ReconstructOptions::default();
    let s = setup(grid, spec, j_max, &opts)?;
    match Method::for_spec(spec) {
        Method::Chains => diag_from_engine(&s.engine, &s.table, j_max),
        Method::WindowKernel => solve(&s, grid, spec, j_max, &opts).map(|r| r.populations),
    }
}

/// Coherences `ρ(J1, J2)`, `J1 > J2`, with their chains and truncation flags.
pub fn reconstruct_offdiag(grid: &MeasurementGrid, spec: &RotorSpec, j_max: u32) -> Result<Vec<ElementEstimate>> {
    reconstruct_offdiag_with(grid, spec, j_max, &ReconstructOptions::default())
}

pub fn reconstruct_offdiag_with(
    grid: &MeasurementGrid,
    spec: &RotorSpec,
    j_max: u32,
    opts: &ReconstructOptions,
) -> Result<Vec<ElementEstimate>> {
    let s = setup(grid, spec, j_max, opts)?;
    match Method::for_spec(spec) {
        Method::Chains => chains_from_engine(&s.engine, &s.table, j_max, s.req.j_search_cap),
        Method::WindowKernel => solve(&s, grid, spec, j_max, opts).map(|r| r.elements),
    }
}

pub fn reconstruct_block(grid: &MeasurementGrid, spec: &RotorSpec, j_max: u32) -> Result<Reconstruction> {
    reconstruct_block_with(grid, spec, j_max, &ReconstructOptions::default())
}

pub fn reconstruct_block_with(
    grid: &MeasurementGrid,
    spec: &RotorSpec,
    j_max: u32,
    opts: &ReconstructOptions,
) -> Result<Reconstruction> {
    let s = setup(grid, spec, j_max, opts)?;
    let solved = solve(&s, grid, spec, j_max, opts)?;
    let m = spec.m_km();
    let mut block = DensityBlock::zeros(spec.k, spec.m, j_max)?;
    for (i, p) in solved.populations.iter().enumerate() {
        let j = m + i as u32;
        block.set(j, j, Complex64::new(*p, 0.0));
    }
    for e in &solved.elements {
        block.set_hermitian(e.j1, e.j2, e.value);
    }
    let min_eigenvalue = block.eigenvalues().first().copied().unwrap_or(0.0);
    if opts.project_psd {
        block = project_psd(&block)?;
    }
    let resim = simulate_pr(&block, spec, grid.x_grid(), grid.times())?;
    let residual = resim.max_abs_diff(grid)?;
    let diagnostics = Diagnostics {
        spec: *spec,
        method: Method::for_spec(spec),
        j_max,
        j_search_cap: s.req.j_search_cap,
        freq_tolerance: solved.tolerance,
        n_t: grid.n_t(),
        n_x: grid.n_x(),
        n_periods: grid.times().n_periods(),
        populations: block.js().map(|j| (j, block.get(j, j).re)).collect(),
        elements: solved
            .elements
            .into_iter()
            .map(|e| ElementEstimate { value: block.get(e.j1, e.j2), ..e })
            .collect(),
        signal_trace: 2f64.sqrt() * s.engine.at_harmonic(0, 0).re,
        residual,
        psd_projected: opts.project_psd,
        min_eigenvalue,
    };
    Ok(Reconstruction { block, diagnostics })
}
