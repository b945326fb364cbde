//! Rotor Hamiltonians, density blocks and the forward model `ρ -> Pr(x, t)`.

mod block;
mod grid;
pub mod io;
mod spec;
mod state;

pub use block::DensityBlock;
pub use grid::{add_shot_noise, alignment_trace, simulate_pr, simulate_pr_checked, GridHeader, MeasurementGrid, TimeSamples};
pub use spec::{RotorKind, RotorSpec};
pub use state::{cos2_kick, make_test_state, TestStateKind};
