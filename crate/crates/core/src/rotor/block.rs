use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Fixed-`(k, m)` block `ρ(J1, J2)` of a rotational density operator,
/// indexed by `J1, J2` in `j_min ..= j_max` with `j_min = max(|k|, |m|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityBlock {
    k: i32,
    m: i32,
    j_min: u32,
    j_max: u32,
    data: Vec<Complex64>,
}

impl DensityBlock {
    pub fn zeros(k: i32, m: i32, j_max: u32) -> Result<Self> {
        let j_min = k.unsigned_abs().max(m.unsigned_abs());
        if j_max < j_min {
            return Err(Error::domain(format!("j_max = {j_max} lies below M_km = {j_min}")));
        }
        if j_max > crate::MAX_J {
            return Err(Error::domain(format!("j_max = {j_max} exceeds {}", crate::MAX_J)));
        }
        let n = (j_max - j_min + 1) as usize;
        Ok(Self { k, m, j_min, j_max, data: vec![Complex64::new(0.0, 0.0); n * n] })
    }

    /// Block whose element `(J1, J2)` is `f(J1, J2)`.
    pub fn from_fn(k: i32, m: i32, j_max: u32, mut f: impl FnMut(u32, u32) -> Complex64) -> Result<Self> {
        let mut b = Self::zeros(k, m, j_max)?;
        for j1 in b.js() {
            for j2 in b.js() {
                let i = b.index(j1, j2);
                b.data[i] = f(j1, j2);
            }
        }
        Ok(b)
    }

    pub fn from_matrix(k: i32, m: i32, mat: &DMatrix<Complex64>) -> Result<Self> {
        let j_min = k.unsigned_abs().max(m.unsigned_abs());
        if mat.nrows() == 0 || mat.nrows() != mat.ncols() {
            return Err(Error::domain("density block matrix must be square and non-empty"));
        }
        let j_max = j_min + mat.nrows() as u32 - 1;
        Self::from_fn(k, m, j_max, |a, b| mat[((a - j_min) as usize, (b - j_min) as usize)])
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn dim(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn js(&self) -> std::ops::RangeInclusive<u32> {
        self.j_min..=self.j_max
    }

    fn index(&self, j1: u32, j2: u32) -> usize {
        (j1 - self.j_min) as usize * self.dim() + (j2 - self.j_min) as usize
    }

    fn contains(&self, j: u32) -> bool {
        self.js().contains(&j)
    }

    /// `ρ(j1, j2)`; zero outside the stored range.
    pub fn get(&self, j1: u32, j2: u32) -> Complex64 {
        if self.contains(j1) && self.contains(j2) {
            self.data[self.index(j1, j2)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// # Panics
    /// If either index lies outside `j_min ..= j_max`.
    pub fn set(&mut self, j1: u32, j2: u32, value: Complex64) {
        assert!(self.contains(j1) && self.contains(j2), "({j1}, {j2}) outside block");
        let i = self.index(j1, j2);
        self.data[i] = value;
    }

    /// Sets `ρ(j1, j2)` and its Hermitian partner.
    pub fn set_hermitian(&mut self, j1: u32, j2: u32, value: Complex64) {
        if j1 == j2 {
            self.set(j1, j1, Complex64::new(value.re, 0.0));
        } else {
            self.set(j1, j2, value);
            self.set(j2, j1, value.conj());
        }
    }

    pub fn trace(&self) -> f64 {
        self.js().map(|j| self.get(j, j).re).sum()
    }

    /// `max |ρ(a,b) - conj ρ(b,a)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in self.js() {
            for b in self.js() {
                worst = worst.max((self.get(a, b) - self.get(b, a).conj()).norm());
            }
        }
        worst
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| self.data[r * n + c])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mat = self.to_matrix();
        let herm = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.eigenvalues().first().is_none_or(|&e| e >= -tol)
    }

    /// Copy with a different upper index: zero-padded when growing,
    /// truncated when shrinking.
    pub fn with_j_max(&self, j_max: u32) -> Result<Self> {
        Self::from_fn(self.k, self.m, j_max, |a, b| self.get(a, b))
    }

    /// Largest element-wise difference over the union of both ranges.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.j_min.min(other.j_min);
        let hi = self.j_max.max(other.j_max);
        let mut worst = 0.0_f64;
        for a in lo..=hi {
            for b in lo..=hi {
                worst = worst.max((self.get(a, b) - other.get(a, b)).norm());
            }
        }
        worst
    }

    /// `lambda * self + (1 - lambda) * other` on a common range.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if (self.k, self.m) != (other.k, other.m) {
            return Err(Error::Mismatch(format!(
                "cannot mix (k, m) = ({}, {}) with ({}, {})",
                self.k, self.m, other.k, other.m
            )));
        }
        let hi = self.j_max.max(other.j_max);
        Self::from_fn(self.k, self.m, hi, |a, b| {
            self.get(a, b) * lambda + other.get(a, b) * (1.0 - lambda)
        })
    }

    /// `(J1, J2, ρ)` for `J1 <= J2`.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.js().flat_map(move |a| (a..=self.j_max).map(move |b| (a, b, self.get(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_setters_and_trace() {
        let mut b = DensityBlock::zeros(0, 1, 3).unwrap();
        assert_eq!(b.j_min(), 1);
        assert_eq!(b.dim(), 3);
        b.set_hermitian(1, 1, c(0.5, 0.0));
        b.set_hermitian(2, 2, c(0.5, 0.0));
        b.set_hermitian(2, 1, c(0.1, 0.2));
        assert_eq!(b.get(1, 2), c(0.1, -0.2));
        assert_eq!(b.trace(), 1.0);
        assert_eq!(b.hermiticity_error(), 0.0);
        assert!(b.is_psd(1e-12));
        assert_eq!(b.get(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn padding_and_diff() {
        let mut b = DensityBlock::zeros(0, 0, 1).unwrap();
        b.set(0, 0, c(1.0, 0.0));
        let p = b.with_j_max(4).unwrap();
        assert_eq!(p.dim(), 5);
        assert_eq!(p.max_abs_diff(&b), 0.0);
        let t = p.with_j_max(0).unwrap();
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn non_psd_detected() {
        let mut b = DensityBlock::zeros(0, 0, 1).unwrap();
        b.set_hermitian(0, 0, c(0.5, 0.0));
        b.set_hermitian(1, 1, c(0.5, 0.0));
        b.set_hermitian(1, 0, c(0.9, 0.0));
        assert!(!b.is_psd(1e-12));
        assert!((b.eigenvalues()[0] + 0.4).abs() < 1e-12);
    }

    #[test]
    fn below_sector_rejected() {
        assert!(DensityBlock::zeros(2, 1, 1).is_err());
    }
}
