//! Decomposition of eigenfunction products into Legendre polynomials.
//!
//! For a fixed `(k, m)` sector the normalized polar eigenfunctions are
//! `f_J = 𝒫^m_J` (linear rotor) or `f_J = sqrt((2J+1)/2) d^J_{km}`
//! (symmetric top). Their products expand as
//!
//! ```text
//! f_{J1}(x) f_{J2}(x) = sum_{L=|J1-J2|}^{J1+J2} c_L 𝒫^0_L(x)
//! ```
//!
//! and `c_L` is defined here by Gauss-Legendre projection, exact because the
//! integrand is a polynomial of degree at most `2(J1+J2)`. The closed form
//! that reproduces the projection is
//!
//! ```text
//! c_L = (-1)^(k-m) sqrt((2J1+1)(2J2+1) / (2(2L+1)))
//!       * <J1 m; J2 -m | L 0> <J1 k; J2 -k | L 0>
//! ```
//!
//! which differs from both `sqrt(2 pi) <J1 m; J2 -m | L 0>` and
//! `sqrt(2/(2L+1)) <..|m,-m,0><..|k,-k,0>` by the `J`-dependent factor in
//! front; see the tests for the comparison. When both `k` and `m` are
//! non-zero the product has no definite parity in `x`, so `L` of either
//! parity can appear.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::legendre::column_unchecked as legendre_column;
use super::wigner::column_unchecked as wigner_column;
use super::{cached_grid, check_j};
use crate::{Error, Result};

/// Family of polar eigenfunctions for one `(k, m)` sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Eigenbasis {
    /// `𝒫^m_J(x)` of the linear rotor.
    Legendre { m: i32 },
    /// `sqrt((2J+1)/2) d^J_{km}(x)` of the symmetric top.
    SymmetricTop { k: i32, m: i32 },
}

impl Eigenbasis {
    /// Legendre functions when `k == 0`, Wigner functions otherwise.
    pub fn for_km(k: i32, m: i32) -> Self {
        if k == 0 {
            Eigenbasis::Legendre { m }
        } else {
            Eigenbasis::SymmetricTop { k, m }
        }
    }

    pub fn k(&self) -> i32 {
        match *self {
            Eigenbasis::Legendre { .. } => 0,
            Eigenbasis::SymmetricTop { k, .. } => k,
        }
    }

    pub fn m(&self) -> i32 {
        match *self {
            Eigenbasis::Legendre { m } | Eigenbasis::SymmetricTop { m, .. } => m,
        }
    }

    /// `M_km = max(|k|, |m|)`, the lowest J of the sector.
    pub fn j_min(&self) -> u32 {
        self.k().unsigned_abs().max(self.m().unsigned_abs())
    }

    /// True when products `f_{J1} f_{J2}` contain Legendre components of
    /// both parities (symmetric top with `k m != 0`).
    pub fn mixed_parity(&self) -> bool {
        self.k() != 0 && self.m() != 0
    }

    /// `f_J(x)` for `J = j_min ..= j_max`.
    pub fn column(&self, j_max: u32, x: f64) -> Result<Vec<f64>> {
        check_j(j_max)?;
        super::check_x(x)?;
        Ok(self.column_unchecked(j_max, x))
    }

    pub(crate) fn column_unchecked(&self, j_max: u32, x: f64) -> Vec<f64> {
        match *self {
            Eigenbasis::Legendre { m } => legendre_column(m, j_max, x),
            Eigenbasis::SymmetricTop { k, m } => {
                let j0 = self.j_min();
                let mut col = wigner_column(k, m, j_max, x);
                for (i, v) in col.iter_mut().enumerate() {
                    let j = (j0 as usize + i) as f64;
                    *v *= ((2.0 * j + 1.0) / 2.0).sqrt();
                }
                col
            }
        }
    }

    pub fn eval(&self, j: u32, x: f64) -> Result<f64> {
        if j < self.j_min() {
            return Err(Error::domain(format!("J = {j} lies below M_km = {}", self.j_min())));
        }
        Ok(*self.column(j, x)?.last().unwrap())
    }

    fn check_pair(&self, j1: u32, j2: u32) -> Result<()> {
        let lo = self.j_min();
        if j1 < lo || j2 < lo {
            return Err(Error::domain(format!("J1 = {j1}, J2 = {j2} must both be >= M_km = {lo}")));
        }
        check_j(j1.max(j2))
    }
}

/// Projections `c_L` for every `L = |J1-J2| ..= J1+J2` (both parities).
fn project_pair(basis: Eigenbasis, j1: u32, j2: u32) -> Result<Vec<f64>> {
    basis.check_pair(j1, j2)?;
    let l_lo = j1.abs_diff(j2);
    let l_hi = j1 + j2;
    let grid = cached_grid((l_hi + 1) as usize)?;
    let j0 = basis.j_min();
    let mut out = vec![0.0; (l_hi - l_lo + 1) as usize];
    for (x, w) in grid.iter() {
        let f = basis.column_unchecked(j1.max(j2), x);
        let prod = w * f[(j1 - j0) as usize] * f[(j2 - j0) as usize];
        let p = legendre_column(0, l_hi, x);
        for (c, pl) in out.iter_mut().zip(&p[l_lo as usize..]) {
            *c += prod * pl;
        }
    }
    Ok(out)
}

/// Expansion of `f_{J1} f_{J2}` in `𝒫^0_L` for the `(k, m)` sector. Lists
/// every `L` the selection rules allow: `L ≡ J1 + J2 (mod 2)` unless the
/// sector has mixed parity.
pub fn product_decomp(j1: u32, j2: u32, k: i32, m: i32) -> Result<Vec<(u32, f64)>> {
    let basis = Eigenbasis::for_km(k, m);
    let coeffs = project_pair(basis, j1, j2)?;
    let l_lo = j1.abs_diff(j2);
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| (l_lo + i as u32, c))
        .filter(|(l, _)| basis.mixed_parity() || (l + j1 + j2).is_multiple_of(2))
        .collect())
}

/// One row `C^{km}_{J,ΔJ,L}` of a [`CoefficientTable`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientRow {
    pub j: u32,
    pub dj: i32,
    pub l: u32,
    pub value: f64,
}

type PairCache = HashMap<(u32, u32), Arc<[f64]>>;

/// Memoized `C^{km}_{J,ΔJ,L}` with `J = J1 + J2`, `ΔJ = J1 - J2`.
///
/// Pairs are projected once and kept; lookups from several threads are safe.
#[derive(Debug)]
pub struct CoefficientTable {
    basis: Eigenbasis,
    pairs: RwLock<PairCache>,
}

impl CoefficientTable {
    pub fn new(basis: Eigenbasis) -> Self {
        Self { basis, pairs: RwLock::new(HashMap::new()) }
    }

    pub fn for_km(k: i32, m: i32) -> Self {
        Self::new(Eigenbasis::for_km(k, m))
    }

    pub fn basis(&self) -> Eigenbasis {
        self.basis
    }

    /// All `c_L`, `L = |J1-J2| ..= J1+J2`, for the element pair.
    pub fn pair(&self, j1: u32, j2: u32) -> Result<Arc<[f64]>> {
        let key = (j1.min(j2), j1.max(j2));
        if let Some(v) = self.pairs.read().unwrap().get(&key) {
            return Ok(Arc::clone(v));
        }
        let coeffs: Arc<[f64]> = project_pair(self.basis, key.0, key.1)?.into();
        let mut w = self.pairs.write().unwrap();
        Ok(Arc::clone(w.entry(key).or_insert(coeffs)))
    }

    /// Coefficient of `𝒫^0_L` in `f_{J1} f_{J2}`; zero for `L` outside
    /// `|J1-J2| ..= J1+J2`.
    pub fn element(&self, j1: u32, j2: u32, l: u32) -> Result<f64> {
        let lo = j1.abs_diff(j2);
        if l < lo || l > j1 + j2 {
            self.basis.check_pair(j1, j2)?;
            return Ok(0.0);
        }
        Ok(self.pair(j1, j2)?[(l - lo) as usize])
    }

    /// `C^{km}_{J,ΔJ,L}`.
    pub fn get(&self, j: u32, dj: i32, l: u32) -> Result<f64> {
        let (j1, j2) = split(j, dj)?;
        self.element(j1, j2, l)
    }

    /// Stored rows for `J` in `j_lo ..= j_hi`, restricted to the entries the
    /// selection rules allow.
    pub fn rows(&self, j_lo: u32, j_hi: u32) -> Result<Vec<CoefficientRow>> {
        let mut out = Vec::new();
        let m0 = self.basis.j_min();
        for j in j_lo..=j_hi {
            for dj in (-(j as i32)..=j as i32).step_by(2) {
                let (j1, j2) = split(j, dj)?;
                if j1 < m0 || j2 < m0 {
                    continue;
                }
                let coeffs = self.pair(j1, j2)?;
                let lo = dj.unsigned_abs();
                for (i, &value) in coeffs.iter().enumerate() {
                    let l = lo + i as u32;
                    if !self.basis.mixed_parity() && !(l + j).is_multiple_of(2) {
                        continue;
                    }
                    out.push(CoefficientRow { j, dj, l, value });
                }
            }
        }
        Ok(out)
    }
}

/// `(J, ΔJ) -> (J1, J2)`.
pub(crate) fn split(j: u32, dj: i32) -> Result<(u32, u32)> {
    let j = j as i64;
    let dj = dj as i64;
    if dj.abs() > j || (j + dj) % 2 != 0 {
        return Err(Error::domain(format!("(J, ΔJ) = ({j}, {dj}) does not name an element")));
    }
    Ok((((j + dj) / 2) as u32, ((j - dj) / 2) as u32))
}
