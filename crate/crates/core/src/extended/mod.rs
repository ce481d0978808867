//! The extended constraint language over n-fold programs.
//!
//! Extended programs keep the brick structure of standard programs but allow
//! inequalities, negation, disjunction, and the bounded indicator operations
//! `bool_m` / `sgn_m` inside uniform constraints. [`rewrite`] lowers any
//! valid extended program back to standard form; [`certify_validity`]
//! establishes by interval propagation that no operation can hit its
//! undefined range, and [`ExtendedProgram::eval`] is the reference
//! semantics used to cross-check the rewriting.

pub mod gadgets;
pub(crate) mod lower;
pub mod rewrite;
pub mod text;

pub use gadgets::{inversion_indicators, permutation_block, split_by_bit, SplitVar};
pub use rewrite::{rewrite, Accounting, RewriteResult};
pub use text::{format_extended, parse_extended};

use thiserror::Error;

/// Comparison relations permitted in constraints and under `bool_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn token(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// An expression with coefficients identical across bricks. Per-brick
/// variation is possible only through additive constants
/// ([`UniformExpr::BrickConst`]) and constraint right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UniformExpr {
    /// Brick-local variable by declared index.
    Var(usize),
    Const(i64),
    /// An additive constant that differs per brick (one entry per brick).
    BrickConst(Vec<i64>),
    LinComb(Vec<(i64, UniformExpr)>),
    Not(Box<UniformExpr>),
    Or(Box<UniformExpr>, Box<UniformExpr>),
    /// `bool_m`: 0 at argument 0, 1 at nonzero arguments of magnitude at
    /// most `m`, undefined beyond.
    BoolM(i64, Box<UniformExpr>),
    /// `sgn_m`: sign of the argument, defined for magnitudes at most `m`.
    SgnM(i64, Box<UniformExpr>),
    /// A comparison; only meaningful directly under [`UniformExpr::BoolM`].
    Cmp(Relation, Box<UniformExpr>, Box<UniformExpr>),
}

impl UniformExpr {
    pub fn var(j: usize) -> Self {
        UniformExpr::Var(j)
    }

    pub fn constant(v: i64) -> Self {
        UniformExpr::Const(v)
    }

    pub fn brick_const(vals: Vec<i64>) -> Self {
        UniformExpr::BrickConst(vals)
    }

    pub fn lin(terms: Vec<(i64, UniformExpr)>) -> Self {
        UniformExpr::LinComb(terms)
    }

    pub fn not(self) -> Self {
        UniformExpr::Not(Box::new(self))
    }

    pub fn or(self, other: Self) -> Self {
        UniformExpr::Or(Box::new(self), Box::new(other))
    }

    /// Conjunction of binary expressions via De Morgan.
    pub fn and(self, other: Self) -> Self {
        self.not().or(other.not()).not()
    }

    pub fn bool_m(m: i64, e: Self) -> Self {
        assert!(m >= 1, "bool_m needs a positive height");
        UniformExpr::BoolM(m, Box::new(e))
    }

    pub fn sgn_m(m: i64, e: Self) -> Self {
        assert!(m >= 1, "sgn_m needs a positive height");
        UniformExpr::SgnM(m, Box::new(e))
    }

    /// The `bool_m(f <> g)` comparison form.
    pub fn bool_cmp(m: i64, rel: Relation, f: Self, g: Self) -> Self {
        assert!(m >= 1, "bool_m needs a positive height");
        UniformExpr::BoolM(m, Box::new(UniformExpr::Cmp(rel, Box::new(f), Box::new(g))))
    }

    pub fn sub(self, other: Self) -> Self {
        UniformExpr::LinComb(vec![(1, self), (-1, other)])
    }

    pub fn add(self, other: Self) -> Self {
        UniformExpr::LinComb(vec![(1, self), (1, other)])
    }

    pub fn scaled(self, c: i64) -> Self {
        UniformExpr::LinComb(vec![(c, self)])
    }
}

/// Right-hand side: a single integer for global constraints, one integer
/// per brick for local constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintRhs {
    Global(i64),
    Local(Vec<i64>),
}

/// A globally or locally uniform constraint `lhs <rel> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformConstraint {
    pub lhs: UniformExpr,
    pub relation: Relation,
    pub rhs: ConstraintRhs,
}

impl UniformConstraint {
    pub fn is_global(&self) -> bool {
        matches!(self.rhs, ConstraintRhs::Global(_))
    }
}

/// Interval certificates produced by validity checking: for each
/// constraint, the certified interval of its left-hand side per brick.
#[derive(Debug, Clone)]
pub struct Certificates {
    pub constraint_intervals: Vec<Vec<(i64, i64)>>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExtendedError {
    #[error("validity error in {expr}: {reason}")]
    Invalid { expr: String, reason: String },
    #[error("input error: {0}")]
    Input(String),
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
}

/// Outcome of evaluating an extended program on a declared assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendedEval {
    /// Some operation was applied outside its domain.
    Undefined,
    Defined { feasible: bool, value: i64 },
}

/// An extended n-fold program: `n` bricks of `t` declared variables with
/// finite per-brick bounds and weights, plus uniform constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedProgram {
    n: usize,
    t: usize,
    lower: Vec<Vec<i64>>,
    upper: Vec<Vec<i64>>,
    weights: Vec<Vec<i64>>,
    constraints: Vec<UniformConstraint>,
}

impl ExtendedProgram {
    /// An empty program over `n` bricks with no variables yet.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a program needs at least one brick");
        ExtendedProgram {
            n,
            t: 0,
            lower: vec![Vec::new(); n],
            upper: vec![Vec::new(); n],
            weights: vec![Vec::new(); n],
            constraints: Vec::new(),
        }
    }

    pub fn with_vars(n: usize, t: usize, lo: i64, hi: i64) -> Self {
        let mut ep = ExtendedProgram::new(n);
        for _ in 0..t {
            ep.add_var(lo, hi);
        }
        ep
    }

    /// Declares a fresh variable with uniform bounds in every brick.
    pub fn add_var(&mut self, lo: i64, hi: i64) -> usize {
        let j = self.t;
        self.t += 1;
        for i in 0..self.n {
            self.lower[i].push(lo);
            self.upper[i].push(hi);
            self.weights[i].push(0);
        }
        j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn bounds(&self, brick: usize, var: usize) -> (i64, i64) {
        (self.lower[brick][var], self.upper[brick][var])
    }

    pub fn set_bounds(&mut self, var: usize, lo: i64, hi: i64) {
        for i in 0..self.n {
            self.lower[i][var] = lo;
            self.upper[i][var] = hi;
        }
    }

    pub fn set_brick_bounds(&mut self, brick: usize, var: usize, lo: i64, hi: i64) {
        self.lower[brick][var] = lo;
        self.upper[brick][var] = hi;
    }

    pub fn weight(&self, brick: usize, var: usize) -> i64 {
        self.weights[brick][var]
    }

    pub fn set_weight(&mut self, var: usize, w: i64) {
        for i in 0..self.n {
            self.weights[i][var] = w;
        }
    }

    pub fn set_brick_weight(&mut self, brick: usize, var: usize, w: i64) {
        self.weights[brick][var] = w;
    }

    pub fn constraints(&self) -> &[UniformConstraint] {
        &self.constraints
    }

    /// Adds a locally uniform constraint with per-brick right-hand sides.
    pub fn add_local(&mut self, lhs: UniformExpr, relation: Relation, rhs: Vec<i64>) {
        assert_eq!(rhs.len(), self.n, "one local rhs entry per brick");
        self.constraints.push(UniformConstraint {
            lhs,
            relation,
            rhs: ConstraintRhs::Local(rhs),
        });
    }

    /// Adds a locally uniform constraint whose right-hand side is the same
    /// in every brick.
    pub fn add_local_uniform(&mut self, lhs: UniformExpr, relation: Relation, rhs: i64) {
        let rhs = vec![rhs; self.n];
        self.add_local(lhs, relation, rhs);
    }

    /// Adds a globally uniform constraint (the lhs is summed over bricks).
    pub fn add_global(&mut self, lhs: UniformExpr, relation: Relation, rhs: i64) {
        self.constraints.push(UniformConstraint {
            lhs,
            relation,
            rhs: ConstraintRhs::Global(rhs),
        });
    }

    pub(crate) fn push_constraint(&mut self, c: UniformConstraint) {
        if let ConstraintRhs::Local(rhs) = &c.rhs {
            assert_eq!(rhs.len(), self.n);
        }
        self.constraints.push(c);
    }

    /// Count of inequalities and logical/indicator operations, each
    /// distinct operation counted once across all bricks.
    pub fn width(&self) -> usize {
        lower::Lowered::build(self).map_or(0, |low| low.width())
    }

    /// Largest `m` in any `bool_m` or `sgn_m` operation (0 when none).
    pub fn height(&self) -> i64 {
        lower::Lowered::build(self).map_or(0, |low| low.height())
    }

    /// Largest absolute coefficient appearing in any constraint.
    pub fn coefficient_bound(&self) -> i64 {
        lower::Lowered::build(self).map_or(0, |low| low.coefficient_bound())
    }

    /// Certifies that no operation can leave its defined domain, by
    /// interval propagation from the declared bounds.
    pub fn certify_validity(&self) -> Result<Certificates, ExtendedError> {
        let low = lower::Lowered::build(self)?;
        let intervals = low.certify(self)?;
        let constraint_intervals = low
            .constraint_roots()
            .iter()
            .map(|&root| {
                (0..self.n)
                    .map(|brick| intervals.node_interval(root, brick))
                    .collect()
            })
            .collect();
        Ok(Certificates {
            constraint_intervals,
        })
    }

    /// Evaluates the program on per-brick assignments of the declared
    /// variables, by the definitional semantics of each operation.
    pub fn eval(&self, assignment: &[Vec<i64>]) -> Result<ExtendedEval, ExtendedError> {
        if assignment.len() != self.n || assignment.iter().any(|b| b.len() != self.t) {
            return Err(ExtendedError::Input(format!(
                "assignment must be {} bricks of {} values",
                self.n, self.t
            )));
        }
        let low = lower::Lowered::build(self)?;
        low.eval(self, assignment)
    }

    /// Rewrites to a standard n-fold program.
    pub fn rewrite(&self) -> Result<RewriteResult, ExtendedError> {
        rewrite::rewrite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_counts_distinct_operations_once() {
        let mut ep = ExtendedProgram::with_vars(2, 2, -2, 2);
        let d = UniformExpr::var(0).sub(UniformExpr::var(1));
        // The same bool twice in two constraints, plus one inequality.
        ep.add_local_uniform(UniformExpr::bool_m(4, d.clone()), Relation::Eq, 1);
        ep.add_local_uniform(
            UniformExpr::lin(vec![(2, UniformExpr::bool_m(4, d))]),
            Relation::Eq,
            2,
        );
        ep.add_global(UniformExpr::var(0), Relation::Le, 3);
        assert_eq!(ep.width(), 2); // one shared bool + one inequality
        assert_eq!(ep.height(), 4);
    }
}
