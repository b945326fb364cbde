use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::Eigenbasis;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotorKind {
    RigidLinear,
    CentrifugalLinear,
    SymmetricTop,
}

impl RotorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RotorKind::RigidLinear => "rigid-linear",
            RotorKind::CentrifugalLinear => "centrifugal-linear",
            RotorKind::SymmetricTop => "symmetric-top",
        }
    }
}

impl fmt::Display for RotorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RotorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rigid-linear" => Ok(RotorKind::RigidLinear),
            "centrifugal-linear" => Ok(RotorKind::CentrifugalLinear),
            "symmetric-top" => Ok(RotorKind::SymmetricTop),
            other => Err(Error::domain(format!("unknown rotor kind `{other}`"))),
        }
    }
}

/// Free-rotor Hamiltonian of one `(k, m)` sector, in units with `hbar = 1`.
///
/// * rigid linear: `E_J = omega J(J+1)`
/// * centrifugal linear: `E_J = omega J(J+1) - d_cd J^2 (J+1)^2`
/// * symmetric top: `E_J = omega J(J+1) - omega2 k^2`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotorSpec {
    pub kind: RotorKind,
    /// Rotational constant `omega = 1 / (2 I)`; `omega_1` for a symmetric top.
    pub omega: f64,
    /// `omega_2` of the symmetric top; ignored otherwise.
    pub omega2: f64,
    /// Centrifugal distortion constant; ignored unless centrifugal.
    pub d_cd: f64,
    pub k: i32,
    pub m: i32,
}

impl RotorSpec {
    pub fn rigid_linear(omega: f64, m: i32) -> Self {
        Self { kind: RotorKind::RigidLinear, omega, omega2: 0.0, d_cd: 0.0, k: 0, m }
    }

    pub fn centrifugal_linear(omega: f64, d_cd: f64, m: i32) -> Self {
        Self { kind: RotorKind::CentrifugalLinear, omega, omega2: 0.0, d_cd, k: 0, m }
    }

    pub fn symmetric_top(omega1: f64, omega2: f64, k: i32, m: i32) -> Self {
        Self { kind: RotorKind::SymmetricTop, omega: omega1, omega2, d_cd: 0.0, k, m }
    }

    /// `M_km = max(|k|, |m|)`.
    pub fn m_km(&self) -> u32 {
        self.k.unsigned_abs().max(self.m.unsigned_abs())
    }

    /// Polar eigenfunctions of this rotor. Symmetric tops always use the
    /// Wigner form, even for `k = 0`.
    pub fn eigenbasis(&self) -> Eigenbasis {
        match self.kind {
            RotorKind::SymmetricTop => Eigenbasis::SymmetricTop { k: self.k, m: self.m },
            _ => Eigenbasis::Legendre { m: self.m },
        }
    }

    /// Checks the parameter invariants for a model truncated at `j_cap`.
    ///
    /// For the centrifugal rotor `E_J` must stay monotone up to `j_cap`,
    /// i.e. `d_cd / omega < 1 / (2 j_cap (j_cap + 1))`.
    pub fn validate(&self, j_cap: u32) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::domain(format!("omega must be positive, got {}", self.omega)));
        }
        match self.kind {
            RotorKind::RigidLinear | RotorKind::CentrifugalLinear if self.k != 0 => {
                Err(Error::domain(format!("{} rotor requires k = 0, got {}", self.kind, self.k)))
            }
            RotorKind::CentrifugalLinear => {
                if !(self.d_cd >= 0.0) || !self.d_cd.is_finite() {
                    return Err(Error::domain(format!("d_cd must be non-negative, got {}", self.d_cd)));
                }
                let y = (j_cap as f64) * (j_cap as f64 + 1.0);
                if j_cap > 0 && self.d_cd / self.omega >= 1.0 / (2.0 * y) {
                    return Err(Error::domain(format!(
                        "d_cd/omega = {} is not below 1/(2 J(J+1)) = {} at J = {j_cap}; energies would turn over",
                        self.d_cd / self.omega,
                        1.0 / (2.0 * y)
                    )));
                }
                Ok(())
            }
            RotorKind::SymmetricTop if !self.omega2.is_finite() => {
                Err(Error::domain("omega2 must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Eigenfrequency `E_J` (angular frequency units).
    pub fn energy(&self, j: u32) -> f64 {
        let y = j as f64 * (j as f64 + 1.0);
        match self.kind {
            RotorKind::RigidLinear => self.omega * y,
            RotorKind::CentrifugalLinear => self.omega * y - self.d_cd * y * y,
            RotorKind::SymmetricTop => self.omega * y - self.omega2 * (self.k as f64).powi(2),
        }
    }

    /// Bohr frequency `E_{j1} - E_{j2}` of the coherence `ρ(j1, j2)`.
    pub fn bohr_frequency(&self, j1: u32, j2: u32) -> f64 {
        match self.kind {
            // exact integer arithmetic keeps commensurate frequencies exact
            RotorKind::RigidLinear | RotorKind::SymmetricTop => {
                let y = |j: u32| (j as i64) * (j as i64 + 1);
                self.omega * (y(j1) - y(j2)) as f64
            }
            RotorKind::CentrifugalLinear => {
                let y = |j: u32| (j as i64) * (j as i64 + 1);
                let (y1, y2) = (y(j1), y(j2));
                self.omega * (y1 - y2) as f64 - self.d_cd * (y1 * y1 - y2 * y2) as f64
            }
        }
    }

    /// Exact recurrence time `T = pi / omega` of a rigid spectrum.
    pub fn revival_period(&self) -> Result<f64> {
        match self.kind {
            RotorKind::CentrifugalLinear => Err(Error::NoExactPeriod("centrifugal-linear")),
            _ => Ok(PI / self.omega),
        }
    }

    /// Time unit used to lay out observation windows: `pi / omega` for every
    /// kind, which is the revival period whenever one exists.
    pub fn window_period(&self) -> f64 {
        PI / self.omega
    }

    /// True when all Bohr frequencies are integer multiples of `2 omega`.
    pub fn is_commensurate(&self) -> bool {
        self.kind != RotorKind::CentrifugalLinear || self.d_cd == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies() {
        let rigid = RotorSpec::rigid_linear(1.0, 0);
        assert_eq!(rigid.energy(0), 0.0);
        assert_eq!(rigid.energy(1), 2.0);
        let cd = RotorSpec::centrifugal_linear(1.0, 1e-3, 0);
        assert!((cd.energy(1) - (2.0 - 4e-3)).abs() < 1e-15);
        let top = RotorSpec::symmetric_top(1.0, 0.3, 2, 1);
        assert!((top.energy(3) - (12.0 - 1.2)).abs() < 1e-15);
        // the k^2 term cancels in coherences
        assert_eq!(top.bohr_frequency(4, 3), 8.0);
    }

    #[test]
    fn bohr_frequency_matches_energy_difference() {
        let cd = RotorSpec::centrifugal_linear(1.3, 2e-4, 1);
        for j1 in 0..12 {
            for j2 in 0..12 {
                let d = cd.energy(j1) - cd.energy(j2);
                assert!((cd.bohr_frequency(j1, j2) - d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn revival_periods() {
        assert!((RotorSpec::rigid_linear(1.0, 0).revival_period().unwrap() - PI).abs() < 1e-15);
        assert!((RotorSpec::rigid_linear(0.5, 0).revival_period().unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(matches!(
            RotorSpec::centrifugal_linear(1.0, 1e-3, 0).revival_period(),
            Err(Error::NoExactPeriod(_))
        ));
    }

    #[test]
    fn validation() {
        assert!(RotorSpec::rigid_linear(-1.0, 0).validate(4).is_err());
        let mut s = RotorSpec::rigid_linear(1.0, 0);
        s.k = 1;
        assert!(s.validate(4).is_err());
        assert!(RotorSpec::centrifugal_linear(1.0, 1e-3, 0).validate(5).is_ok());
        assert!(RotorSpec::centrifugal_linear(1.0, 1e-3, 0).validate(30).is_err());
        assert!(RotorSpec::symmetric_top(1.0, 0.2, 3, -2).validate(10).is_ok());
    }

    #[test]
    fn kind_round_trips_through_text() {
        for k in [RotorKind::RigidLinear, RotorKind::CentrifugalLinear, RotorKind::SymmetricTop] {
            assert_eq!(k.as_str().parse::<RotorKind>().unwrap(), k);
        }
        assert!("asymmetric-top".parse::<RotorKind>().is_err());
    }
}
