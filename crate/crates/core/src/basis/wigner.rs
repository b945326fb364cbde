//! Wigner small-d functions `d^J_{km}(x)` with `x = cos(beta)`.
//!
//! Convention: `d^J_{km}(beta) = <J k| exp(-i beta J_y) |J m>` (Wigner's
//! passive form with the Condon-Shortley phase), so that `d^J_{00} = P_J`
//! and `d^1_{11} = (1 + x) / 2`. Values are built from the Jacobi form
//!
//! ```text
//! d^J_{km} = xi * sqrt(s! (s+a+b)! / ((s+a)! (s+b)!))
//!            * sin^a(beta/2) cos^b(beta/2) P^{(a,b)}_s(x)
//! ```
//!
//! with `a = |m - k|`, `b = |m + k|`, `s = J - max(|k|, |m|)` and
//! `xi = 1` for `k <= m`, `(-1)^(k-m)` otherwise.

use super::{check_j, check_x, ln_factorial};
use crate::{Error, Result};

pub fn wigner_d(j: u32, k: i32, m: i32, x: f64) -> Result<f64> {
    check_j(j)?;
    check_x(x)?;
    if k.unsigned_abs() > j || m.unsigned_abs() > j {
        return Err(Error::domain(format!("|k| = {} or |m| = {} exceeds J = {j}", k.abs(), m.abs())));
    }
    Ok(*column_unchecked(k, m, j, x).last().unwrap())
}

/// `d^J_{km}(x)` for `J = max(|k|,|m|) ..= j_max`.
pub fn wigner_d_column(k: i32, m: i32, j_max: u32, x: f64) -> Result<Vec<f64>> {
    check_j(j_max)?;
    check_x(x)?;
    Ok(column_unchecked(k, m, j_max, x))
}

pub(crate) fn column_unchecked(k: i32, m: i32, j_max: u32, x: f64) -> Vec<f64> {
    let j_min = k.unsigned_abs().max(m.unsigned_abs());
    if j_max < j_min {
        return Vec::new();
    }
    let a = (m - k).unsigned_abs();
    let b = (m + k).unsigned_abs();
    let xi = if k <= m || (k - m) % 2 == 0 { 1.0 } else { -1.0 };

    let half_sin2 = (1.0 - x) / 2.0;
    let half_cos2 = (1.0 + x) / 2.0;
    let (af, bf) = (a as f64, b as f64);
    let envelope = if (a > 0 && half_sin2 == 0.0) || (b > 0 && half_cos2 == 0.0) {
        0.0
    } else {
        let ln_binom = ln_factorial((a + b) as usize) - ln_factorial(a as usize) - ln_factorial(b as usize);
        let mut ln = 0.5 * ln_binom;
        if a > 0 {
            ln += 0.5 * af * half_sin2.ln();
        }
        if b > 0 {
            ln += 0.5 * bf * half_cos2.ln();
        }
        xi * ln.exp()
    };

    let n_terms = (j_max - j_min + 1) as usize;
    let mut out = Vec::with_capacity(n_terms);
    // Jacobi P^{(a,b)}_s via the standard three-term recurrence, with the
    // normalization ratio sqrt(s!(s+a+b)!/((s+a)!(s+b)!)) updated in step.
    let mut norm = 1.0;
    let mut p_prev = 0.0;
    let mut p_cur = 1.0;
    for s in 0..n_terms {
        if s == 1 {
            p_prev = 1.0;
            p_cur = (af - bf) / 2.0 + (af + bf + 2.0) * x / 2.0;
        } else if s >= 2 {
            let n = s as f64;
            let c = 2.0 * n + af + bf;
            let c1 = 2.0 * n * (n + af + bf) * (c - 2.0);
            let c2 = (c - 1.0) * (af * af - bf * bf);
            let c3 = (c - 2.0) * (c - 1.0) * c;
            let c4 = 2.0 * (n + af - 1.0) * (n + bf - 1.0) * c;
            let next = ((c2 + c3 * x) * p_cur - c4 * p_prev) / c1;
            p_prev = p_cur;
            p_cur = next;
        }
        if s >= 1 {
            let n = s as f64;
            norm *= (n * (n + af + bf) / ((n + af) * (n + bf))).sqrt();
        }
        out.push(envelope * norm * p_cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{gauss_legendre_grid, legendre_p};

    /// Wigner's explicit sum with plain factorials (small J only).
    fn explicit(j: i32, k: i32, m: i32, x: f64) -> f64 {
        let fact = |n: i32| (1..=n).map(|i| i as f64).product::<f64>();
        let beta = x.acos();
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let pre = (fact(j + k) * fact(j - k) * fact(j + m) * fact(j - m)).sqrt();
        let mut sum = 0.0;
        for t in 0..=2 * j {
            let d = [j + m - t, t, k - m + t, j - k - t];
            if d.iter().any(|&v| v < 0) {
                continue;
            }
            let sign = if (k - m + t) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * c.powi(2 * j + m - k - 2 * t) * s.powi(k - m + 2 * t)
                / d.iter().map(|&v| fact(v)).product::<f64>();
        }
        pre * sum
    }

    #[test]
    fn spot_values() {
        for j in 0..30 {
            assert!((wigner_d(j, 0, 0, 1.0).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!((wigner_d(1, 1, 1, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((wigner_d(1, 0, 0, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let x: f64 = 0.2;
        let sin = (1.0 - x * x).sqrt();
        assert!((wigner_d(1, 1, 0, x).unwrap() + sin / 2f64.sqrt()).abs() < 1e-15);
        assert!((wigner_d(1, 0, 1, x).unwrap() - sin / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn matches_explicit_sum() {
        for j in 0..=8 {
            for k in -j..=j {
                for m in -j..=j {
                    for &x in &[-0.95, -0.3, 0.0, 0.41, 0.8] {
                        let got = wigner_d(j as u32, k, m, x).unwrap();
                        let want = explicit(j, k, m, x);
                        assert!((got - want).abs() < 1e-12, "J={j} k={k} m={m} x={x}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn endpoints() {
        // d^J_{km}(beta = 0) = delta_km
        for j in 0..6u32 {
            for k in -(j as i32)..=j as i32 {
                for m in -(j as i32)..=j as i32 {
                    let v = wigner_d(j, k, m, 1.0).unwrap();
                    let want = if k == m { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn reduces_to_legendre() {
        let g = gauss_legendre_grid(60).unwrap();
        for &x in g.nodes() {
            let col = wigner_d_column(0, 0, 40, x).unwrap();
            for (j, v) in col.iter().enumerate() {
                assert!((v - legendre_p(j as u32, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(wigner_d(1, 2, 0, 0.0).is_err());
        assert!(wigner_d(1, 0, -2, 0.0).is_err());
        assert!(wigner_d(1, 0, 0, -1.01).is_err());
    }
}
