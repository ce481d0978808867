//! Exact solvers for election bribery problems.

pub mod extended;
pub mod matrix;
pub mod nfold;

pub use nfold::{
    enumerate_brick_assignments, Bound, BrickSolutionTable, SolveConfig, SolveOutcome,
    StandardNFoldProgram,
};
