//! Synthetic density blocks for round-trip studies.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::DensityBlock;
use crate::basis::{CoefficientTable, Eigenbasis};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestStateKind {
    /// `|psi><psi|` with i.i.d. complex Gaussian amplitudes.
    RandomPure,
    /// Random convex mixture of three random pure blocks.
    RandomMixed,
    /// `exp(i P cos^2 theta) |M_km>`, truncated at `j_max`.
    Cos2Kicked,
}

impl std::str::FromStr for TestStateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random-pure" => Ok(Self::RandomPure),
            "random-mixed" => Ok(Self::RandomMixed),
            "cos2-kicked" => Ok(Self::Cos2Kicked),
            other => Err(Error::domain(format!("unknown test state kind `{other}`"))),
        }
    }
}

pub fn make_test_state(
    kind: TestStateKind,
    k: i32,
    m: i32,
    j_max: u32,
    seed: u64,
    kick_strength: f64,
) -> Result<DensityBlock> {
    let j_min = k.unsigned_abs().max(m.unsigned_abs());
    if j_max < j_min {
        return Err(Error::domain(format!("j_max = {j_max} lies below M_km = {j_min}")));
    }
    let n = (j_max - j_min + 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        TestStateKind::RandomPure => pure_block(k, m, j_max, &random_vector(&mut rng, n)),
        TestStateKind::RandomMixed => {
            let weights: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut acc = DMatrix::<Complex64>::zeros(n, n);
            for w in weights {
                let v = random_vector(&mut rng, n);
                acc += outer(&v) * Complex64::new(w / total, 0.0);
            }
            DensityBlock::from_matrix(k, m, &acc)
        }
        TestStateKind::Cos2Kicked => {
            let mut amps = cos2_kick(k, m, j_max, kick_strength)?;
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            amps.iter_mut().for_each(|a| *a /= norm);
            pure_block(k, m, j_max, &amps)
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn outer(v: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(v.len(), v.len(), |a, b| v[a] * v[b].conj())
}

fn pure_block(k: i32, m: i32, j_max: u32, amps: &[Complex64]) -> Result<DensityBlock> {
    let j_min = k.unsigned_abs().max(m.unsigned_abs());
    DensityBlock::from_fn(k, m, j_max, |a, b| amps[(a - j_min) as usize] * amps[(b - j_min) as usize].conj())
}

/// Amplitudes of `exp(i P x^2) |M_km>` on `J = M_km ..= j_max`, before
/// renormalization.
///
/// The propagator is built in a basis padded well beyond `j_max` so that the
/// returned amplitudes are converged; their squared norm is the population
/// retained by the truncation. `<J'|x^2|J>` comes from the product
/// decomposition, `x^2 = (sqrt 2 / 3) 𝒫_0 + (2/3) sqrt(2/5) 𝒫_2`.
pub fn cos2_kick(k: i32, m: i32, j_max: u32, strength: f64) -> Result<Vec<Complex64>> {
    let basis = Eigenbasis::for_km(k, m);
    let j_min = basis.j_min();
    if j_max < j_min {
        return Err(Error::domain(format!("j_max = {j_max} lies below M_km = {j_min}")));
    }
    let keep = (j_max - j_min + 1) as usize;
    if strength == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); keep];
        v[0] = Complex64::new(1.0, 0.0);
        return Ok(v);
    }
    let pad = 24 + 2 * strength.abs().ceil() as u32;
    let j_big = (j_max + pad).min(crate::MAX_J);
    let n = (j_big - j_min + 1) as usize;
    let table = CoefficientTable::new(basis);
    let c2 = 2.0 / 3.0 * (2.0f64 / 5.0).sqrt();
    let mut x2 = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let (ja, jb) = (j_min + a as u32, j_min + b as u32);
            let mut v = c2 * table.element(ja, jb, 2)?;
            if a == b {
                v += 1.0 / 3.0;
            }
            x2[(a, b)] = v;
            x2[(b, a)] = v;
        }
    }
    let eig = x2.symmetric_eigen();
    let mut out = Vec::with_capacity(keep);
    for r in 0..keep {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, &lambda) in eig.eigenvalues.iter().enumerate() {
            acc += Complex64::from_polar(eig.eigenvectors[(r, c)] * eig.eigenvectors[(0, c)], strength * lambda);
        }
        out.push(acc);
    }
    Ok(out)
}
