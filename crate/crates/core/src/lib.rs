//! Reconstruction of rotational density-matrix blocks of linear and
//! symmetric-top rotors from time-resolved polar angular distributions.
//!
//! The crate is split into three layers:
//!
//! * [`basis`]: normalized associated Legendre functions, Wigner small-d
//!   functions, Clebsch-Gordan coefficients, Gauss-Legendre quadrature and the
//!   decomposition of eigenfunction products into Legendre polynomials.
//! * [`rotor`]: rotor Hamiltonians, density blocks, the forward simulator that
//!   turns a block into `Pr(x, t)` and the file formats for both.
//! * [`tomography`]: moment integrals, degeneracy chains and the inverse
//!   solvers that recover the block from `Pr(x, t)`.
//!
//! Units are natural: `hbar = 1`, energies are angular frequencies and the
//! default rotational constant `omega = 1` gives a revival period of `pi`.

pub mod basis;
pub mod error;
pub mod rotor;
pub mod tomography;

pub use error::{Error, Result};

/// Largest angular momentum accepted by the special-function routines.
pub const MAX_J: u32 = 200;
