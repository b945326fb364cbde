//! Degeneracy chains: all coherences `(J, ΔJ)` that share a Bohr frequency
//! with the probe `(α, β)` and survive the Legendre projection onto `𝒫_α`.
//!
//! For a rigid spectrum the frequency condition is `ΔJ (J+1) = β (α+1)`, and
//! the projection requires `|ΔJ| <= α <= J`. Together they force
//! `|ΔJ| <= |β|` with the sign of `β`, so a chain is enumerated by walking the
//! divisors `|ΔJ|` of the target from `|β|` downwards. Every member's own
//! chain is the tail that follows it, which makes the system triangular.

use crate::basis::Eigenbasis;
use crate::rotor::RotorSpec;

/// Which `(J, ΔJ)` can share the probe's Legendre order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityRule {
    /// `J ≡ ΔJ ≡ α (mod 2)`: sectors with `k m = 0`.
    Matched,
    /// Any parity: symmetric-top sectors with `k m != 0`, whose eigenfunction
    /// products carry Legendre components of both parities.
    Free,
}

impl ParityRule {
    pub fn for_basis(basis: Eigenbasis) -> Self {
        if basis.mixed_parity() { ParityRule::Free } else { ParityRule::Matched }
    }

    fn admits(self, alpha: u32, j: u32) -> bool {
        match self {
            ParityRule::Matched => j % 2 == alpha % 2,
            ParityRule::Free => true,
        }
    }
}

/// One coherence in `(J, ΔJ)` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainMember {
    pub j: u32,
    pub dj: i32,
}

impl ChainMember {
    pub fn new(j: u32, dj: i32) -> Self {
        Self { j, dj }
    }

    /// `(J1, J2) = ((J + ΔJ)/2, (J - ΔJ)/2)`.
    pub fn element(&self) -> (u32, u32) {
        let j = self.j as i64;
        let d = self.dj as i64;
        (((j + d) / 2) as u32, ((j - d) / 2) as u32)
    }

    pub fn from_element(j1: u32, j2: u32) -> Self {
        Self { j: j1 + j2, dj: j1 as i32 - j2 as i32 }
    }
}

impl std::fmt::Display for ChainMember {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.j, self.dj)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyChain {
    pub alpha: u32,
    pub beta: i32,
    /// `β (α + 1)`.
    pub target: i64,
    /// Members within the search cap, ordered by decreasing `|ΔJ|`.
    pub members: Vec<ChainMember>,
    /// Members that exist but lie beyond the search cap.
    pub beyond_cap: Vec<ChainMember>,
}

impl DegeneracyChain {
    pub fn is_truncated(&self) -> bool {
        !self.beyond_cap.is_empty()
    }
}

/// Rigid-rotor chain for `(α, β)` with parity locked to `α`.
pub fn degeneracy_set(alpha: u32, beta: i32, m_km: u32, j_search_cap: u32) -> DegeneracyChain {
    degeneracy_chain(alpha, beta, m_km, j_search_cap, ParityRule::Matched)
}

/// Rigid-rotor chain with an explicit parity rule, by divisor enumeration of
/// the target `β (α + 1)`. `β = 0` yields an empty chain.
pub fn degeneracy_chain(alpha: u32, beta: i32, m_km: u32, j_search_cap: u32, parity: ParityRule) -> DegeneracyChain {
    let target = beta as i64 * (alpha as i64 + 1);
    let mut chain = DegeneracyChain { alpha, beta, target, members: Vec::new(), beyond_cap: Vec::new() };
    if beta == 0 {
        return chain;
    }
    let sign = beta.signum();
    let t = target.unsigned_abs();
    for d in (1..=beta.unsigned_abs()).rev() {
        if !t.is_multiple_of(d as u64) {
            continue;
        }
        let j = t / d as u64 - 1;
        if j > u32::MAX as u64 {
            continue;
        }
        let j = j as u32;
        if !(j + d).is_multiple_of(2) || !parity.admits(alpha, j) {
            continue;
        }
        if (j - d) / 2 < m_km {
            continue;
        }
        let member = ChainMember::new(j, sign * d as i32);
        if j <= j_search_cap {
            chain.members.push(member);
        } else {
            chain.beyond_cap.push(member);
        }
    }
    chain
}

/// Chain for a rotor whose frequencies are not exactly degenerate (e.g.
/// centrifugal distortion): members are the `(J, ΔJ)` admitted by the
/// projection rules whose Bohr frequency `E_{J1} - E_{J2}` lies within
/// `freq_tolerance` of the probe's. With `d_cd = 0` and a tolerance below
/// `2 omega` this reproduces [`degeneracy_chain`].
pub fn degeneracy_set_cd(
    alpha: u32,
    beta: i32,
    m_km: u32,
    j_search_cap: u32,
    spec: &RotorSpec,
    freq_tolerance: f64,
    parity: ParityRule,
) -> DegeneracyChain {
    let target = beta as i64 * (alpha as i64 + 1);
    let mut chain = DegeneracyChain { alpha, beta, target, members: Vec::new(), beyond_cap: Vec::new() };
    if beta == 0 || beta.unsigned_abs() > alpha || !(alpha + beta.unsigned_abs()).is_multiple_of(2) {
        return chain;
    }
    let probe = ChainMember::new(alpha, beta).element();
    let probe_freq = spec.bohr_frequency(probe.0, probe.1);
    let sign = beta.signum();
    // Rigid partners can sit as deep as J = |target| - 1.
    let scan_to = j_search_cap.max(target.unsigned_abs() as u32);
    for d in (1..=beta.unsigned_abs()).rev() {
        for j in alpha..=scan_to {
            if (j + d) % 2 != 0 || !parity.admits(alpha, j) || (j - d) / 2 < m_km {
                continue;
            }
            let member = ChainMember::new(j, sign * d as i32);
            let (j1, j2) = member.element();
            if (spec.bohr_frequency(j1, j2) - probe_freq).abs() > freq_tolerance {
                continue;
            }
            if j <= j_search_cap {
                chain.members.push(member);
            } else {
                chain.beyond_cap.push(member);
            }
        }
    }
    chain
}

/// Search cap that covers every chain of a block truncated at `j_max`:
/// any coherence inside the block has `|β(α+1)| <= j_max (j_max + 1)`, and
/// the deepest partner has `J = |β(α+1)| - 1`.
pub fn default_search_cap(j_max: u32) -> u32 {
    j_max * (j_max + 1)
}
