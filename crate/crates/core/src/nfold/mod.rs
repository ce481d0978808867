//! Block-structured integer programs in standard form and an exact solver.
//!
//! A program holds matrices `D` (global rows) and `A` (local rows) together
//! with bounds, weights and a right-hand side. The constraint matrix is the
//! block layout with `D` repeated across the top and `A` on the block
//! diagonal, which splits the `n*t` variables into `n` bricks of width `t`.
//!
//! Solving works by enumerating each brick's local solutions and running a
//! dynamic program over the accumulated global-row contributions; see
//! [`solve`]. [`brute::brute_force_solve`] is a deliberately independent
//! full-box enumeration used as an oracle in tests.

pub mod brute;
pub mod enumerate;
pub(crate) mod interval;
pub mod solve;
pub mod text;

pub use enumerate::{
    enumerate_brick_assignments, enumerate_feasible, BrickEntry, BrickSolutionTable,
};
pub use solve::{unbounded_certificate, UnboundedCertificate};
pub use text::{format_program, parse_program, ProgramTextError};

use crate::matrix::Matrix;
use thiserror::Error;

/// A variable bound, either finite or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }
}

impl From<i64> for Bound {
    fn from(v: i64) -> Self {
        Bound::Finite(v)
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "inf"),
            Bound::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// An n-fold integer program in standard form.
///
/// `b` stores the `r` global entries first, then `s` entries per brick.
/// `lower`, `upper` and `weights` have length `n*t`, brick-major.
///
/// `scale` optionally multiplies brick `i`'s contribution to every global
/// row by `scale[i]`. A uniform program leaves it `None`; the subset-sum
/// encoding uses it to realize per-brick coefficients in the single global
/// row while keeping `r = t = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardNFoldProgram {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub d: Matrix,
    pub a: Matrix,
    pub b: Vec<i64>,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    pub weights: Vec<i64>,
    pub scale: Option<Vec<i64>>,
}

/// Result of an exact solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Infeasible,
    Unbounded,
    Optimal { assignment: Vec<i64>, value: i64 },
}

/// Feasibility and objective value of a candidate assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub feasible: bool,
    pub value: i64,
}

/// A validation finding; an empty diagnostic list means the program is
/// well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    EmptyBox {
        coord: usize,
    },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::DimensionMismatch {
                field,
                expected,
                found,
            } => write!(f, "{field}: expected {expected}, found {found}"),
            Diagnostic::EmptyBox { coord } => {
                write!(f, "empty box at coordinate {coord} (lower > upper)")
            }
        }
    }
}

/// Budgets for the exact solver. Exceeding any of them is an explicit
/// error, never a silent approximation.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Maximum number of entries in a single brick's solution table.
    pub brick_table_cap: u64,
    /// Maximum number of dynamic-programming states across all bricks.
    pub dp_state_cap: u64,
    /// Maximum number of search nodes while enumerating one brick.
    pub search_node_cap: u64,
    /// Largest entry magnitude tried when searching for an unbounded ray.
    pub ray_entry_bound: i64,
    /// Maximum number of candidate ray vectors examined.
    pub ray_vector_cap: u64,
    /// Bound ranges wider than this are projected out of brick enumeration
    /// when the column is free (zero weight, no local rows, one unit global
    /// coefficient).
    pub projection_range: i64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            brick_table_cap: 1_000_000,
            dp_state_cap: 1_000_000,
            search_node_cap: 20_000_000,
            ray_entry_bound: 3,
            ray_vector_cap: 500_000,
            projection_range: 64,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid program: {}", format_diagnostics(.0))]
    InvalidProgram(Vec<Diagnostic>),
    #[error("input error: {0}")]
    Input(String),
    #[error("resource budget exceeded: {budget} (limit {limit})")]
    Resource { budget: &'static str, limit: u64 },
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl StandardNFoldProgram {
    /// Largest absolute coefficient of the constraint matrix, taking the
    /// per-brick global scaling into account.
    pub fn coefficient_bound(&self) -> i64 {
        let scale_max = self
            .scale
            .as_ref()
            .map(|s| s.iter().map(|v| v.abs()).max().unwrap_or(1))
            .unwrap_or(1);
        (self.d.max_abs().saturating_mul(scale_max)).max(self.a.max_abs())
    }

    /// Effective multiplier for brick `i`'s global-row contributions.
    pub fn brick_scale(&self, i: usize) -> i64 {
        self.scale.as_ref().map_or(1, |s| s[i])
    }

    /// Local right-hand side of brick `i` (the `s` entries after the global
    /// block).
    pub fn local_rhs(&self, i: usize) -> &[i64] {
        &self.b[self.r + i * self.s..self.r + (i + 1) * self.s]
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let nt = self.n * self.t;
        let mut dim = |field: &'static str, expected: usize, found: usize| {
            if expected != found {
                diags.push(Diagnostic::DimensionMismatch {
                    field,
                    expected,
                    found,
                });
            }
        };
        dim("D rows", self.r, self.d.rows());
        dim("D cols", self.t, self.d.cols());
        dim("A rows", self.s, self.a.rows());
        dim("A cols", self.t, self.a.cols());
        dim("b", self.r + self.n * self.s, self.b.len());
        dim("l", nt, self.lower.len());
        dim("u", nt, self.upper.len());
        dim("w", nt, self.weights.len());
        if let Some(scale) = &self.scale {
            dim("scale", self.n, scale.len());
        }
        for j in 0..self.lower.len().min(self.upper.len()).min(nt) {
            if self.lower[j] > self.upper[j] {
                diags.push(Diagnostic::EmptyBox { coord: j });
            }
        }
        diags
    }

    /// Evaluates feasibility of `x` against all rows and bounds, and its
    /// objective value (reported regardless of feasibility).
    pub fn evaluate(&self, x: &[i64]) -> Result<Evaluation, SolveError> {
        let nt = self.n * self.t;
        if x.len() != nt {
            return Err(SolveError::Input(format!(
                "assignment has length {}, expected {nt}",
                x.len()
            )));
        }
        let mut feasible = true;
        for j in 0..nt {
            let v = x[j];
            match self.lower[j] {
                Bound::Finite(l) if v < l => feasible = false,
                Bound::PosInf => feasible = false,
                _ => {}
            }
            match self.upper[j] {
                Bound::Finite(u) if v > u => feasible = false,
                Bound::NegInf => feasible = false,
                _ => {}
            }
        }
        for g in 0..self.r {
            let mut sum: i64 = 0;
            for i in 0..self.n {
                let brick = &x[i * self.t..(i + 1) * self.t];
                let mut dot: i64 = 0;
                for j in 0..self.t {
                    let term = self
                        .d
                        .get(g, j)
                        .checked_mul(brick[j])
                        .ok_or(SolveError::Overflow("global row evaluation"))?;
                    dot = dot
                        .checked_add(term)
                        .ok_or(SolveError::Overflow("global row evaluation"))?;
                }
                let scaled = dot
                    .checked_mul(self.brick_scale(i))
                    .ok_or(SolveError::Overflow("global row evaluation"))?;
                sum = sum
                    .checked_add(scaled)
                    .ok_or(SolveError::Overflow("global row evaluation"))?;
            }
            if sum != self.b[g] {
                feasible = false;
            }
        }
        for i in 0..self.n {
            let brick = &x[i * self.t..(i + 1) * self.t];
            let rhs = self.local_rhs(i);
            for q in 0..self.s {
                let mut dot: i64 = 0;
                for j in 0..self.t {
                    let term = self
                        .a
                        .get(q, j)
                        .checked_mul(brick[j])
                        .ok_or(SolveError::Overflow("local row evaluation"))?;
                    dot = dot
                        .checked_add(term)
                        .ok_or(SolveError::Overflow("local row evaluation"))?;
                }
                if dot != rhs[q] {
                    feasible = false;
                }
            }
        }
        let mut value: i64 = 0;
        for j in 0..nt {
            let term = self.weights[j]
                .checked_mul(x[j])
                .ok_or(SolveError::Overflow("objective evaluation"))?;
            value = value
                .checked_add(term)
                .ok_or(SolveError::Overflow("objective evaluation"))?;
        }
        Ok(Evaluation { feasible, value })
    }

    /// Solves the program exactly with default budgets.
    pub fn solve(&self) -> Result<SolveOutcome, SolveError> {
        self.solve_with(&SolveConfig::default())
    }

    /// Solves the program exactly with the given budgets.
    pub fn solve_with(&self, cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
        solve::solve_with(self, cfg)
    }

    /// Exhaustive full-box enumeration with default budgets.
    pub fn brute_force_solve(&self) -> Result<SolveOutcome, SolveError> {
        brute::brute_force_solve(self, &SolveConfig::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_var_program() -> StandardNFoldProgram {
        StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 1,
            d: Matrix::from_rows(&[vec![1]]),
            a: Matrix::zeros(0, 1),
            b: vec![3],
            lower: vec![Bound::Finite(0)],
            upper: vec![Bound::Finite(5)],
            weights: vec![2],
            scale: None,
        }
    }

    #[test]
    fn validate_accepts_well_formed_program() {
        assert!(one_var_program().validate().is_empty());
    }

    #[test]
    fn validate_flags_wide_d() {
        let mut p = one_var_program();
        p.d = Matrix::from_rows(&[vec![1, 1]]);
        let diags = p.validate();
        assert!(diags.iter().any(|d| matches!(
            d,
            Diagnostic::DimensionMismatch { field: "D cols", .. }
        )));
    }

    #[test]
    fn validate_flags_empty_box() {
        let mut p = one_var_program();
        p.lower = vec![Bound::Finite(5)];
        p.upper = vec![Bound::Finite(2)];
        assert_eq!(p.validate(), vec![Diagnostic::EmptyBox { coord: 0 }]);
    }

    #[test]
    fn evaluate_examples() {
        let p = one_var_program();
        assert_eq!(
            p.evaluate(&[3]).unwrap(),
            Evaluation {
                feasible: true,
                value: 6
            }
        );
        assert!(!p.evaluate(&[2]).unwrap().feasible);
        assert!(!p.evaluate(&[7]).unwrap().feasible);
        assert!(p.evaluate(&[1, 2]).is_err());
    }
}
