use super::{check_j, check_x};
use crate::{Error, Result};

/// Normalized associated Legendre function `𝒫^m_J(x)`, orthonormal on
/// `[-1, 1]` and carrying the Condon-Shortley phase.
///
/// Negative orders follow `𝒫^{-m}_J = (-1)^m 𝒫^m_J`.
pub fn assoc_legendre_norm(j: u32, m: i32, x: f64) -> Result<f64> {
    check_j(j)?;
    check_x(x)?;
    if m.unsigned_abs() > j {
        return Err(Error::domain(format!("|m| = {} exceeds J = {j}", m.abs())));
    }
    let col = column_unchecked(m, j, x);
    Ok(*col.last().unwrap())
}

/// `𝒫^m_J(x)` for `J = |m| ..= j_max`; index `i` holds `J = |m| + i`.
///
/// Empty when `j_max < |m|`.
pub fn legendre_norm_column(m: i32, j_max: u32, x: f64) -> Result<Vec<f64>> {
    check_j(j_max)?;
    check_x(x)?;
    Ok(column_unchecked(m, j_max, x))
}

pub(crate) fn column_unchecked(m: i32, j_max: u32, x: f64) -> Vec<f64> {
    let ma = m.unsigned_abs();
    if j_max < ma {
        return Vec::new();
    }
    let mf = ma as f64;
    let sign = if m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };

    // 𝒫^m_m = (-1)^m sqrt((2m+1)/2 * prod_{i<=m} (2i-1)/(2i)) (1-x^2)^{m/2}
    let mut start = ((2.0 * mf + 1.0) / 2.0).sqrt();
    let sin2 = (1.0 - x) * (1.0 + x);
    let s = sin2.sqrt();
    for i in 1..=ma {
        let fi = i as f64;
        start *= -((2.0 * fi - 1.0) / (2.0 * fi)).sqrt() * s;
    }

    let mut out = Vec::with_capacity((j_max - ma + 1) as usize);
    out.push(sign * start);
    if j_max == ma {
        return out;
    }
    let mut prev = start;
    let mut cur = x * (2.0 * mf + 3.0).sqrt() * start;
    out.push(sign * cur);
    for l in (ma + 2)..=j_max {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / ((lf - mf) * (lf + mf))).sqrt();
        let b = ((2.0 * lf + 1.0) * (lf - 1.0 - mf) * (lf - 1.0 + mf)
            / ((2.0 * lf - 3.0) * (lf - mf) * (lf + mf)))
            .sqrt();
        let next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
        out.push(sign * cur);
    }
    out
}

/// Un-normalized Legendre polynomial `P_J(x)`.
pub fn legendre_p(j: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if j == 0 {
        return 1.0;
    }
    for k in 2..=j {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    p1
}
