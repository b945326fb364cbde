//! Populations from the static moments `I(2J, 0)`.
//!
//! Row `α = 2J_r`, column `J_c` of `𝓜` holds `C(J_c, J_c, L = 2J_r)`, which
//! vanishes for `J_c < J_r`: the system is upper triangular.

use nalgebra::DMatrix;

use crate::basis::{CoefficientTable, Eigenbasis};
use crate::error::{Error, Result};
use crate::rotor::MeasurementGrid;

use super::moment::MomentEngine;

/// Diagonal entries of `𝓜` below this magnitude are treated as singular.
pub const SINGULAR_PIVOT: f64 = 1e-14;

/// `𝓜` for populations `J = M_km ..= j_cap`, indexed from `M_km`.
pub fn diagonal_matrix(table: &CoefficientTable, j_cap: u32) -> Result<DMatrix<f64>> {
    let m = table.basis().j_min();
    if j_cap < m {
        return Err(Error::domain(format!("j_cap = {j_cap} lies below M_km = {m}")));
    }
    let n = (j_cap - m + 1) as usize;
    let mut a = DMatrix::zeros(n, n);
    for r in 0..n {
        for c in r..n {
            let j = m + c as u32;
            a[(r, c)] = table.element(j, j, 2 * (m + r as u32))?;
        }
    }
    for i in 0..n {
        if a[(i, i)].abs() < SINGULAR_PIVOT {
            return Err(Error::Singular { index: i, value: a[(i, i)] });
        }
    }
    Ok(a)
}

/// Backward substitution `𝓜 ρ = I` on an upper-triangular matrix.
pub fn solve_upper(a: &DMatrix<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let d = a[(i, i)];
        if d.abs() < SINGULAR_PIVOT {
            return Err(Error::Singular { index: i, value: d });
        }
        let s: f64 = (i + 1..n).map(|j| a[(i, j)] * x[j]).sum();
        x[i] = (rhs[i] - s) / d;
    }
    Ok(x)
}

pub(crate) fn diag_from_engine(engine: &MomentEngine<'_>, table: &CoefficientTable, j_max: u32) -> Result<Vec<f64>> {
    let m = table.basis().j_min();
    let a = diagonal_matrix(table, j_max)?;
    let rhs: Vec<f64> = (m..=j_max).map(|j| engine.at_harmonic(2 * j, 0).re).collect();
    solve_upper(&a, &rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternMethod {
    /// Minor determinants: `f_{i,j} = (-1)^{i+j} det 𝓜[i..j, i+1..=j] / Π_{γ=i..=j} 𝓜_γγ`.
    Cramer,
    /// Forward substitution on `𝓜ᵀ f = e_{J1}`.
    Triangular,
}

/// `ℱ_{J1}(x) = Σ_J f_{J1,J} 𝒫_{2J}(x)`: integrating it against the time
/// averaged signal yields `ρ(J1, J1)` directly.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternFunction {
    pub j1: u32,
    pub k: i32,
    pub m: i32,
    /// `(J, f_{J1,J})` for `J = j1 ..= j_cap`.
    pub coeffs: Vec<(u32, f64)>,
}

impl PatternFunction {
    pub fn j_cap(&self) -> u32 {
        self.coeffs.last().map_or(self.j1, |c| c.0)
    }

    pub fn coeff(&self, j: u32) -> f64 {
        self.coeffs.iter().find(|c| c.0 == j).map_or(0.0, |c| c.1)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let p = crate::basis::legendre_norm_column(0, 2 * self.j_cap(), x)?;
        Ok(self.coeffs.iter().map(|&(j, f)| f * p[2 * j as usize]).sum())
    }

    /// `(1/N_t) Σ_t Σ_x w ℱ(x) Pr(x, t)`.
    pub fn apply(&self, grid: &MeasurementGrid) -> Result<f64> {
        let kernel: Vec<f64> =
            grid.x_grid().iter().map(|(x, w)| self.eval(x).map(|f| f * w)).collect::<Result<_>>()?;
        let n_t = grid.n_t();
        let total: f64 =
            (0..n_t).map(|i| grid.slice(i).iter().zip(&kernel).map(|(p, k)| p * k).sum::<f64>()).sum();
        Ok(total / n_t as f64)
    }
}

/// Pattern function by the minor-determinant formula.
pub fn pattern_function(j1: u32, k: i32, m: i32, j_cap: u32) -> Result<PatternFunction> {
    pattern_function_with(Eigenbasis::for_km(k, m), j1, j_cap, PatternMethod::Cramer)
}

pub fn pattern_function_with(basis: Eigenbasis, j1: u32, j_cap: u32, method: PatternMethod) -> Result<PatternFunction> {
    let j_min = basis.j_min();
    if j1 < j_min || j1 > j_cap {
        return Err(Error::domain(format!("need M_km = {j_min} <= j1 = {j1} <= j_cap = {j_cap}")));
    }
    let a = diagonal_matrix(&CoefficientTable::new(basis), j_cap)?;
    let i = (j1 - j_min) as usize;
    let n = a.nrows();
    let values: Vec<f64> = match method {
        PatternMethod::Cramer => (i..n)
            .map(|j| {
                let minor = if j == i { 1.0 } else { a.view((i, i + 1), (j - i, j - i)).into_owned().determinant() };
                let pivots: f64 = (i..=j).map(|g| a[(g, g)]).product();
                let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * minor / pivots
            })
            .collect(),
        PatternMethod::Triangular => {
            let mut f = vec![0.0; n];
            for j in i..n {
                let s: f64 = (i..j).map(|r| a[(r, j)] * f[r]).sum();
                f[j] = (if j == i { 1.0 } else { 0.0 } - s) / a[(j, j)];
            }
            f.split_off(i)
        }
    };
    Ok(PatternFunction {
        j1,
        k: basis.k(),
        m: basis.m(),
        coeffs: values.into_iter().enumerate().map(|(d, f)| (j1 + d as u32, f)).collect(),
    })
}
