//! Moment integrals `I(α, β) = (1/N_t) Σ_t e^{iωt} Σ_x w 𝒫⁰_α(x) Pr(x, t)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::legendre_norm_column;
use crate::error::{Error, Result};
use crate::rotor::{MeasurementGrid, RotorSpec};

use super::chain::ChainMember;
use super::sampling::check_header;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentValue {
    pub alpha: u32,
    pub beta: i32,
    pub value: Complex64,
}

/// Precomputed Legendre projections `Σ_x w 𝒫⁰_α Pr(x, t_i)` for every
/// `α <= alpha_max`, from which any moment is one time sum.
///
/// Immutable after construction, so it can be shared across threads.
#[derive(Debug)]
pub struct MomentEngine<'a> {
    grid: &'a MeasurementGrid,
    spec: RotorSpec,
    proj: Vec<Vec<f64>>,
    /// `exp(2 pi i r / n_t)`; used for commensurate spectra.
    roots: Vec<Complex64>,
}

impl<'a> MomentEngine<'a> {
    pub fn new(grid: &'a MeasurementGrid, spec: RotorSpec, alpha_max: u32) -> Result<Self> {
        check_header(grid, &spec)?;
        let n_x = grid.n_x();
        let n_t = grid.n_t();
        let mut table = vec![vec![0.0; n_x]; alpha_max as usize + 1];
        for (j, (x, w)) in grid.x_grid().iter().enumerate() {
            for (a, p) in legendre_norm_column(0, alpha_max, x)?.into_iter().enumerate() {
                table[a][j] = w * p;
            }
        }
        let proj = table
            .iter()
            .map(|wp| (0..n_t).map(|i| grid.slice(i).iter().zip(wp).map(|(v, c)| v * c).sum()).collect())
            .collect();
        let roots = (0..n_t).map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n_t as f64)).collect();
        Ok(Self { grid, spec, proj, roots })
    }

    pub fn alpha_max(&self) -> u32 {
        self.proj.len() as u32 - 1
    }

    pub fn spec(&self) -> &RotorSpec {
        &self.spec
    }

    /// `Σ_x w 𝒫⁰_α Pr(x, t_i)` for all `i`.
    pub fn projection(&self, alpha: u32) -> &[f64] {
        &self.proj[alpha as usize]
    }

    /// Time average of the `α` projection against `e^{iωt}`.
    pub fn at_frequency(&self, alpha: u32, omega: f64) -> Complex64 {
        let times = self.grid.times();
        let s: Complex64 =
            self.projection(alpha).iter().enumerate().map(|(i, &p)| Complex64::from_polar(p, omega * times.t(i))).sum();
        s / times.n_t() as f64
    }

    /// Same as [`Self::at_frequency`] for `ω = 2 omega h`, with phases taken
    /// from exact roots of unity.
    pub fn at_harmonic(&self, alpha: u32, h: i64) -> Complex64 {
        let times = self.grid.times();
        let n = times.n_t() as i128;
        let step = (h as i128 * times.n_periods() as i128).rem_euclid(n);
        let s: Complex64 = self
            .projection(alpha)
            .iter()
            .enumerate()
            .map(|(i, &p)| self.roots[((step * i as i128) % n) as usize] * p)
            .sum();
        s / times.n_t() as f64
    }

    /// `I(α, β)` at the Bohr frequency of the coherence `((α+β)/2, (α−β)/2)`.
    pub fn moment(&self, alpha: u32, beta: i32) -> Result<MomentValue> {
        check_indices(alpha, beta, &self.spec)?;
        if alpha > self.alpha_max() {
            return Err(Error::domain(format!("alpha = {alpha} exceeds the engine's alpha_max = {}", self.alpha_max())));
        }
        Ok(MomentValue { alpha, beta, value: self.moment_unchecked(ChainMember::new(alpha, beta)) })
    }

    pub(crate) fn moment_unchecked(&self, member: ChainMember) -> Complex64 {
        let (j1, j2) = member.element();
        if self.spec.is_commensurate() {
            let y = |j: u32| j as i64 * (j as i64 + 1);
            self.at_harmonic(member.j, (y(j1) - y(j2)) / 2)
        } else {
            self.at_frequency(member.j, self.spec.bohr_frequency(j1, j2))
        }
    }
}

fn check_indices(alpha: u32, beta: i32, spec: &RotorSpec) -> Result<()> {
    if beta.unsigned_abs() > alpha || !(alpha + beta.unsigned_abs()).is_multiple_of(2) {
        return Err(Error::domain(format!("(alpha, beta) = ({alpha}, {beta}) needs |beta| <= alpha, beta ≡ alpha mod 2")));
    }
    let m = spec.m_km();
    if alpha < m {
        return Err(Error::domain(format!("alpha = {alpha} is below M_km = {m}")));
    }
    Ok(())
}

/// One moment integral straight from a grid.
///
/// The grid must resolve `𝒫_α` (`2 n_x - 1 >= α`) and, for commensurate
/// spectra, the probe harmonic `h` without folding it onto `-h`.
pub fn moment_integral(grid: &MeasurementGrid, alpha: u32, beta: i32, spec: &RotorSpec) -> Result<MomentValue> {
    check_indices(alpha, beta, spec)?;
    if (alpha as usize) > 2 * grid.n_x() - 1 {
        return Err(Error::Sampling(format!(
            "n_x = {} cannot resolve Legendre order {alpha}; required n_x >= {}",
            grid.n_x(),
            (alpha as usize + 2) / 2
        )));
    }
    let (j1, j2) = ChainMember::new(alpha, beta).element();
    if spec.is_commensurate() {
        let h = (spec.bohr_frequency(j1, j2) / (2.0 * spec.omega)).round().abs() as usize;
        let have = grid.times().distinct_phases();
        if have < 2 * h + 1 {
            return Err(Error::Sampling(format!(
                "{have} distinct phases alias harmonic {h}; required n_t >= {} distinct phases \
                 (n_t = {} for N_T = {})",
                2 * h + 1,
                (2 * h + 1) * grid.times().n_periods() as usize,
                grid.times().n_periods()
            )));
        }
    }
    MomentEngine::new(grid, *spec, alpha)?.moment(alpha, beta)
}
