//! Special functions and quadrature shared by the forward model and the
//! inverse solvers.

mod clebsch;
mod decomp;
mod legendre;
mod quadrature;
mod wigner;

pub use clebsch::clebsch_gordan;
pub use decomp::{product_decomp, CoefficientRow, CoefficientTable, Eigenbasis};
pub use legendre::{assoc_legendre_norm, legendre_norm_column, legendre_p};
pub use quadrature::{cached_grid, gauss_legendre_grid, QuadratureGrid};
pub use wigner::{wigner_d, wigner_d_column};

use crate::{Error, Result, MAX_J};

pub(crate) fn check_x(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} lies outside [-1, 1]")));
    }
    Ok(())
}

pub(crate) fn check_j(j: u32) -> Result<()> {
    if j > MAX_J {
        return Err(Error::domain(format!("J = {j} exceeds the supported maximum {MAX_J}")));
    }
    Ok(())
}

/// `ln(n!)` for `n` up to a few times [`MAX_J`], accumulated with
/// compensated summation.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let len = 4 * MAX_J as usize + 8;
        let mut out = Vec::with_capacity(len);
        out.push(0.0);
        let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
        for i in 1..len {
            let y = (i as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            out.push(sum);
        }
        out
    });
    table[n]
}
