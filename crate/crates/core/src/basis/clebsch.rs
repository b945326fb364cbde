//! Clebsch-Gordan coefficients for integer angular momenta.
//!
//! The alternating Racah sum is evaluated exactly in integer arithmetic in
//! its binomial form
//!
//! ```text
//! Z = sum_k (-1)^k C(a, k) C(b, j1 - m1 - k) C(c, j2 + m2 - k)
//! a = j1 + j2 - j3,  b = j1 - j2 + j3,  c = -j1 + j2 + j3
//! ```
//!
//! and only the square-root prefactor goes through log-factorials, so there
//! is no cancellation error even near `j = 200`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ln_factorial;

/// `<j1 m1; j2 m2 | j3 m3>`. Returns 0 for forbidden combinations (triangle
/// violation, `m1 + m2 != m3`, `|mi| > ji`).
pub fn clebsch_gordan(j1: u32, j2: u32, j3: u32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 != m3
        || m1.unsigned_abs() > j1
        || m2.unsigned_abs() > j2
        || m3.unsigned_abs() > j3
        || j3 < j1.abs_diff(j2)
        || j3 > j1 + j2
    {
        return 0.0;
    }
    let (j1, j2, j3) = (j1 as i64, j2 as i64, j3 as i64);
    let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
    let a = j1 + j2 - j3;
    let b = j1 - j2 + j3;
    let c = -j1 + j2 + j3;
    let c1 = j1 - m1;
    let c2 = j2 + m2;
    let k_lo = 0.max(c1 - b).max(c2 - c);
    let k_hi = a.min(c1).min(c2);
    if k_lo > k_hi {
        return 0.0;
    }

    let (sign, ln_z) = match racah_sum_i128(a, b, c, c1, c2, k_lo, k_hi) {
        Some(0) => return 0.0,
        Some(z) => (z.signum() as f64, (z.unsigned_abs() as f64).ln()),
        None => {
            let z = racah_sum_big(a, b, c, c1, c2, k_lo, k_hi);
            if z.is_zero() {
                return 0.0;
            }
            let sign = if z.is_negative() { -1.0 } else { 1.0 };
            (sign, ln_big(&z.abs()))
        }
    };

    let lf = |n: i64| ln_factorial(n as usize);
    let ln_pre = 0.5
        * (((2 * j3 + 1) as f64).ln() - lf(j1 + j2 + j3 + 1)
            + lf(j3 + m3)
            + lf(j3 - m3)
            + lf(j1 - m1)
            + lf(j1 + m1)
            + lf(j2 - m2)
            + lf(j2 + m2)
            - lf(a)
            - lf(b)
            - lf(c));
    sign * (ln_pre + ln_z).exp()
}

fn binom_i128(n: i64, k: i64) -> Option<i128> {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as i128)? / i as i128;
    }
    Some(acc)
}

fn racah_sum_i128(a: i64, b: i64, c: i64, c1: i64, c2: i64, k_lo: i64, k_hi: i64) -> Option<i128> {
    let mut z: i128 = 0;
    for k in k_lo..=k_hi {
        let t = binom_i128(a, k)?
            .checked_mul(binom_i128(b, c1 - k)?)?
            .checked_mul(binom_i128(c, c2 - k)?)?;
        z = if k % 2 == 0 { z.checked_add(t)? } else { z.checked_sub(t)? };
    }
    Some(z)
}

fn binom_big(n: i64, k: i64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

fn racah_sum_big(a: i64, b: i64, c: i64, c1: i64, c2: i64, k_lo: i64, k_hi: i64) -> BigInt {
    let mut z = BigInt::zero();
    for k in k_lo..=k_hi {
        let t = binom_big(a, k) * binom_big(b, c1 - k) * binom_big(c, c2 - k);
        if k % 2 == 0 {
            z += t;
        } else {
            z -= t;
        }
    }
    z
}

fn ln_big(z: &BigInt) -> f64 {
    let bits = z.bits();
    if bits <= 1000 {
        return z.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (z >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
