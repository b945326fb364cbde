//! Inversion of `Pr(x, t)` into a fixed-`(k, m)` density block.

mod centrifugal;
mod chain;
mod diag;
mod moment;
mod offdiag;
mod psd;
mod reconstruct;
mod sampling;

pub use centrifugal::{default_tolerance, window_kernel};
pub use chain::{
    default_search_cap, degeneracy_chain, degeneracy_set, degeneracy_set_cd, ChainMember, DegeneracyChain,
    ParityRule,
};
pub use diag::{diagonal_matrix, pattern_function, pattern_function_with, solve_upper, PatternFunction, PatternMethod};
pub use moment::{moment_integral, MomentEngine, MomentValue};
pub use offdiag::ElementEstimate;
pub use psd::project_psd;
pub use reconstruct::{
    reconstruct_block, reconstruct_block_with, reconstruct_diag, reconstruct_offdiag, reconstruct_offdiag_with,
    Diagnostics, Method, ReconstructOptions, Reconstruction,
};
pub use sampling::{SamplingPlan, SamplingRequirement};

#[cfg(test)]
mod tests;
