//! Coherences by back substitution along degeneracy chains.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::basis::CoefficientTable;
use crate::error::{Error, Result};

use super::chain::{degeneracy_chain, ChainMember, ParityRule};
use super::diag::SINGULAR_PIVOT;
use super::moment::MomentEngine;

/// One reconstructed coherence `ρ(j1, j2)`, `j1 > j2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementEstimate {
    pub j1: u32,
    pub j2: u32,
    pub value: Complex64,
    /// Coherences sharing the probe's frequency that were solved for.
    pub chain: Vec<ChainMember>,
    /// Chain members beyond the search cap, assumed zero.
    pub neglected: Vec<ChainMember>,
}

impl ElementEstimate {
    pub fn contaminated(&self) -> bool {
        !self.neglected.is_empty()
    }
}

/// Solves every chain of a `j_max` block. Solutions are memoized per member:
/// the tail of a chain is itself the chain of its first member.
pub(crate) fn chains_from_engine(
    engine: &MomentEngine<'_>,
    table: &CoefficientTable,
    j_max: u32,
    j_search_cap: u32,
) -> Result<Vec<ElementEstimate>> {
    let basis = table.basis();
    let m = basis.j_min();
    let parity = ParityRule::for_basis(basis);
    let mut solved: HashMap<ChainMember, Complex64> = HashMap::new();
    let mut out = Vec::new();
    for j1 in m..=j_max {
        for j2 in m..j1 {
            let chain = degeneracy_chain(j1 + j2, (j1 - j2) as i32, m, j_search_cap, parity);
            let members = &chain.members;
            for i in (0..members.len()).rev() {
                let p = members[i];
                if solved.contains_key(&p) {
                    continue;
                }
                let (a1, a2) = p.element();
                let mut rhs = engine.moment_unchecked(p);
                for q in &members[i + 1..] {
                    let (b1, b2) = q.element();
                    rhs -= solved[q] * table.element(b1, b2, p.j)?;
                }
                let pivot = table.element(a1, a2, p.j)?;
                if pivot.abs() < SINGULAR_PIVOT {
                    return Err(Error::Singular { index: i, value: pivot });
                }
                solved.insert(p, rhs / pivot);
            }
            let value = members.first().map_or(Complex64::new(0.0, 0.0), |p| solved[p]);
            out.push(ElementEstimate { j1, j2, value, chain: chain.members, neglected: chain.beyond_cap });
        }
    }
    Ok(out)
}
