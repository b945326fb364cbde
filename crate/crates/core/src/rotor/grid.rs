use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{DensityBlock, RotorKind, RotorSpec};
use crate::basis::QuadratureGrid;
use crate::{Error, Result};

/// Uniform times `t_i = i * n_periods * period / n_t`, `i = 0 .. n_t`,
/// covering `[0, n_periods * period)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSamples {
    n_t: usize,
    n_periods: u32,
    period: f64,
}

impl TimeSamples {
    pub fn new(n_t: usize, n_periods: u32, period: f64) -> Result<Self> {
        if n_t == 0 || n_periods == 0 {
            return Err(Error::domain("need at least one time sample and one period"));
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::domain(format!("period must be positive, got {period}")));
        }
        Ok(Self { n_t, n_periods, period })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_periods(&self) -> u32 {
        self.n_periods
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total observation time `n_periods * period`.
    pub fn window(&self) -> f64 {
        self.n_periods as f64 * self.period
    }

    pub fn dt(&self) -> f64 {
        self.window() / self.n_t as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.window() / self.n_t as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_t).map(|i| self.t(i))
    }

    /// Number of distinct phases `exp(2 pi i h * n_periods * i / n_t)` the
    /// samples resolve: `n_t / gcd(n_t, n_periods)`. Harmonics of the period
    /// are exactly orthogonal when they differ by less than this.
    pub fn distinct_phases(&self) -> usize {
        self.n_t / gcd(self.n_t, self.n_periods as usize)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Rotor metadata carried by a measurement file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridHeader {
    pub kind: RotorKind,
    pub omega: f64,
    pub k: i32,
    pub m: i32,
}

impl GridHeader {
    pub fn from_spec(spec: &RotorSpec) -> Self {
        Self { kind: spec.kind, omega: spec.omega, k: spec.k, m: spec.m }
    }
}

/// `Pr(x_j, t_i)` on a Gauss-Legendre grid in `x` times uniform times.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementGrid {
    pub header: GridHeader,
    x_grid: QuadratureGrid,
    times: TimeSamples,
    /// Row-major `[t][x]`.
    values: Vec<f64>,
}

impl MeasurementGrid {
    pub fn new(header: GridHeader, x_grid: QuadratureGrid, times: TimeSamples, values: Vec<f64>) -> Result<Self> {
        if values.len() != x_grid.order() * times.n_t() {
            return Err(Error::domain(format!(
                "expected {} x {} values, got {}",
                times.n_t(),
                x_grid.order(),
                values.len()
            )));
        }
        Ok(Self { header, x_grid, times, values })
    }

    pub fn x_grid(&self) -> &QuadratureGrid {
        &self.x_grid
    }

    pub fn times(&self) -> &TimeSamples {
        &self.times
    }

    pub fn n_x(&self) -> usize {
        self.x_grid.order()
    }

    pub fn n_t(&self) -> usize {
        self.times.n_t()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Pr(x_j, t_i)` for all `j` at time index `i`.
    pub fn slice(&self, i: usize) -> &[f64] {
        let n = self.n_x();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_x() + j]
    }

    /// Quadrature integral `sum_j w_j Pr(x_j, t_i)`.
    pub fn integral_at(&self, i: usize) -> f64 {
        self.slice(i).iter().zip(self.x_grid.weights()).map(|(p, w)| p * w).sum()
    }

    /// Largest pointwise difference to another grid of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::domain("grids differ in shape"));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn map_values(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }
}

/// Forward model: `Pr(x,t) = sum ρ(J1,J2) f_{J1}(x) f_{J2}(x) exp(-i (E_{J1} - E_{J2}) t)`.
pub fn simulate_pr(
    block: &DensityBlock,
    spec: &RotorSpec,
    x_grid: &QuadratureGrid,
    times: &TimeSamples,
) -> Result<MeasurementGrid> {
    simulate_pr_checked(block, spec, x_grid, times).map(|(g, _)| g)
}

/// Like [`simulate_pr`], also returning the largest imaginary part that was
/// discarded.
pub fn simulate_pr_checked(
    block: &DensityBlock,
    spec: &RotorSpec,
    x_grid: &QuadratureGrid,
    times: &TimeSamples,
) -> Result<(MeasurementGrid, f64)> {
    if (block.k(), block.m()) != (spec.k, spec.m) {
        return Err(Error::Mismatch(format!(
            "block has (k, m) = ({}, {}), rotor has ({}, {})",
            block.k(),
            block.m(),
            spec.k,
            spec.m
        )));
    }
    let need = 2 * block.j_max() as usize + 1;
    if x_grid.order() < need {
        return Err(Error::Sampling(format!(
            "n_x = {} aliases a block with j_max = {}; need n_x >= {need}",
            x_grid.order(),
            block.j_max()
        )));
    }
    let basis = spec.eigenbasis();
    let n = block.dim();
    let f: Vec<Vec<f64>> = x_grid.nodes().iter().map(|&x| basis.column_unchecked(block.j_max(), x)).collect();
    let energies: Vec<f64> = block.js().map(|j| spec.energy(j) - spec.energy(block.j_min())).collect();
    let rho = block.to_matrix();

    let mut values = Vec::with_capacity(times.n_t() * x_grid.order());
    let mut max_imag = 0.0_f64;
    let mut scale = 0.0_f64;
    for t in times.iter() {
        let phase: Vec<Complex64> = energies.iter().map(|e| Complex64::from_polar(1.0, -e * t)).collect();
        // R_t = D ρ D^†
        let mut r = rho.clone();
        for a in 0..n {
            for b in 0..n {
                r[(a, b)] *= phase[a] * phase[b].conj();
            }
        }
        for fx in &f {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                let mut row = Complex64::new(0.0, 0.0);
                for b in 0..n {
                    row += r[(a, b)] * fx[b];
                }
                acc += row * fx[a];
            }
            max_imag = max_imag.max(acc.im.abs());
            scale = scale.max(acc.re.abs());
            values.push(acc.re);
        }
    }
    if max_imag > 1e-10 * scale.max(1.0) {
        return Err(Error::domain(format!(
            "simulated Pr(x,t) has imaginary part {max_imag:e}; block is not Hermitian"
        )));
    }
    let header = GridHeader::from_spec(spec);
    Ok((MeasurementGrid::new(header, x_grid.clone(), *times, values)?, max_imag))
}

/// Replaces each time slice by a finite-count estimate: `samples_per_time`
/// detections are distributed over the quadrature nodes with probabilities
/// `w_j Pr(x_j, t) / sum`, and the counts are mapped back to densities so
/// that the weighted integral of every slice is preserved.
pub fn add_shot_noise(grid: &MeasurementGrid, samples_per_time: u64, seed: u64) -> Result<MeasurementGrid> {
    if samples_per_time == 0 {
        return Err(Error::domain("samples_per_time must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = grid.x_grid().weights();
    let mut values = Vec::with_capacity(grid.values().len());
    for i in 0..grid.n_t() {
        let mass: Vec<f64> = grid.slice(i).iter().zip(weights).map(|(p, w)| (p * w).max(0.0)).collect();
        let total: f64 = mass.iter().sum();
        let norm = grid.integral_at(i);
        if total <= 0.0 {
            values.extend(std::iter::repeat_n(0.0, grid.n_x()));
            continue;
        }
        // multinomial draw as a chain of conditional binomials
        let mut left = samples_per_time;
        let mut rest = total;
        let mut counts = Vec::with_capacity(mass.len());
        for (j, &p) in mass.iter().enumerate() {
            let c = if j + 1 == mass.len() || left == 0 {
                left
            } else {
                let q = if rest > 0.0 { (p / rest).clamp(0.0, 1.0) } else { 1.0 };
                Binomial::new(left, q).map_err(|e| Error::domain(e.to_string()))?.sample(&mut rng)
            };
            counts.push(c);
            left -= c;
            rest -= p;
        }
        let n = samples_per_time as f64;
        values.extend(counts.iter().zip(weights).map(|(&c, w)| c as f64 / n * norm / w));
    }
    MeasurementGrid::new(grid.header, grid.x_grid().clone(), *grid.times(), values)
}

/// `(t_i, <cos^2 theta>(t_i))` with `<cos^2 theta> = ∫ x^2 Pr(x,t) dx`.
pub fn alignment_trace(grid: &MeasurementGrid) -> Vec<(f64, f64)> {
    let x = grid.x_grid();
    (0..grid.n_t())
        .map(|i| {
            let v = grid.slice(i).iter().zip(x.iter()).map(|(p, (x, w))| w * x * x * p).sum();
            (grid.times().t(i), v)
        })
        .collect()
}
