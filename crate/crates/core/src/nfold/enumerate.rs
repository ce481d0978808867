//! Exhaustive enumeration of one brick's local solutions.
//!
//! Rewritten bribery bricks carry dozens of auxiliary variables that are
//! functionally forced by a handful of decision variables, so plain box
//! enumeration is hopeless. The enumerator instead runs a depth-first
//! search that branches on the variable with the smallest remaining domain
//! and re-tightens all intervals through the brick's equality rows after
//! every assignment.

use super::interval::{index_var_rows, propagate_fixpoint, Ival, Row};
use super::{SolveConfig, SolveError, StandardNFoldProgram};

/// One local solution of a brick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickEntry {
    /// The brick assignment, length `t`.
    pub y: Vec<i64>,
    /// Its contribution to the global rows, `scale_i * D * y`.
    pub d: Vec<i64>,
    /// Its contribution to the objective, `w^i . y`.
    pub cost: i64,
}

/// All local solutions of one brick, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickSolutionTable {
    pub brick: usize,
    pub entries: Vec<BrickEntry>,
}

/// The per-brick subproblem fed to the search: local equality rows over
/// brick-local coordinates plus the (possibly pre-tightened) box.
pub(crate) struct BrickProblem {
    pub rows: Vec<Row>,
    pub ivals: Vec<Ival>,
    /// Columns to solve for; inactive columns are projected out by the
    /// caller and reported as 0 in `y`.
    pub active: Vec<bool>,
}

pub(crate) struct SearchBudget {
    pub table_cap: u64,
    pub node_cap: u64,
    pub nodes: u64,
}

impl SearchBudget {
    pub fn new(cfg: &SolveConfig) -> Self {
        SearchBudget {
            table_cap: cfg.brick_table_cap,
            node_cap: cfg.search_node_cap,
            nodes: 0,
        }
    }
}

/// Enumerates all integer points of the brick problem. Solutions are
/// returned in no particular order; callers sort.
pub(crate) fn search_brick(
    problem: &BrickProblem,
    budget: &mut SearchBudget,
) -> Result<Vec<Vec<i64>>, SolveError> {
    let var_rows = index_var_rows(&problem.rows, problem.ivals.len());
    let mut ivals = problem.ivals.clone();
    let max_rounds = 16 * (problem.ivals.len() + problem.rows.len() + 4);
    if !propagate_fixpoint(&problem.rows, &var_rows, &mut ivals, max_rounds) {
        return Ok(Vec::new());
    }
    for (j, iv) in ivals.iter().enumerate() {
        if problem.active[j] && !iv.is_finite() {
            return Err(SolveError::Resource {
                budget: "finite brick box after tightening",
                limit: 0,
            });
        }
    }
    let mut out = Vec::new();
    dfs(problem, &var_rows, ivals, max_rounds, budget, &mut out)?;
    Ok(out)
}

fn dfs(
    problem: &BrickProblem,
    var_rows: &[Vec<usize>],
    ivals: Vec<Ival>,
    max_rounds: usize,
    budget: &mut SearchBudget,
    out: &mut Vec<Vec<i64>>,
) -> Result<(), SolveError> {
    budget.nodes += 1;
    if budget.nodes > budget.node_cap {
        return Err(SolveError::Resource {
            budget: "brick search nodes",
            limit: budget.node_cap,
        });
    }
    // Branch on the smallest unfixed domain.
    let mut branch: Option<(usize, i128)> = None;
    for (j, iv) in ivals.iter().enumerate() {
        if !problem.active[j] {
            continue;
        }
        let size = iv.size().expect("active intervals are finite here");
        if size > 1 && branch.map_or(true, |(_, best)| size < best) {
            branch = Some((j, size));
        }
    }
    let Some((var, _)) = branch else {
        // All active variables fixed: record the solution.
        if out.len() as u64 >= budget.table_cap {
            return Err(SolveError::Resource {
                budget: "brick table entries",
                limit: budget.table_cap,
            });
        }
        let y: Vec<i64> = ivals
            .iter()
            .enumerate()
            .map(|(j, iv)| {
                if problem.active[j] {
                    iv.fixed().expect("fixed") as i64
                } else {
                    0
                }
            })
            .collect();
        out.push(y);
        return Ok(());
    };
    let lo = ivals[var].lo.unwrap();
    let hi = ivals[var].hi.unwrap();
    for v in lo..=hi {
        let mut child = ivals.clone();
        child[var] = Ival::point(v);
        let ok = var_rows[var].is_empty()
            || propagate_fixpoint_from(problem, var_rows, &mut child, var, max_rounds);
        if ok {
            dfs(problem, var_rows, child, max_rounds, budget, out)?;
        }
    }
    Ok(())
}

/// Propagation seeded from one just-assigned variable.
fn propagate_fixpoint_from(
    problem: &BrickProblem,
    var_rows: &[Vec<usize>],
    ivals: &mut [Ival],
    seed_var: usize,
    max_rounds: usize,
) -> bool {
    let mut queued = vec![false; problem.rows.len()];
    let mut queue: Vec<usize> = Vec::new();
    for &row in &var_rows[seed_var] {
        queued[row] = true;
        queue.push(row);
    }
    let mut rounds = 0usize;
    while let Some(row_idx) = queue.pop() {
        queued[row_idx] = false;
        match super::interval::propagate_row(&problem.rows[row_idx], ivals) {
            None => return false,
            Some(changed) => {
                for var in changed {
                    for &other in &var_rows[var] {
                        if other != row_idx && !queued[other] {
                            queued[other] = true;
                            queue.push(other);
                        }
                    }
                }
            }
        }
        rounds += 1;
        if rounds > max_rounds {
            break;
        }
    }
    true
}

/// Builds the local equality rows of brick `i` in brick-local coordinates.
pub(crate) fn local_rows(p: &StandardNFoldProgram, brick: usize) -> Vec<Row> {
    let rhs = p.local_rhs(brick);
    (0..p.s)
        .map(|q| Row {
            terms: (0..p.t)
                .filter(|&j| p.a.get(q, j) != 0)
                .map(|j| (j, p.a.get(q, j)))
                .collect(),
            rhs: i128::from(rhs[q]),
        })
        .collect()
}

pub(crate) fn brick_bounds(p: &StandardNFoldProgram, brick: usize) -> Vec<Ival> {
    (0..p.t)
        .map(|j| Ival::from_bounds(p.lower[brick * p.t + j], p.upper[brick * p.t + j]))
        .collect()
}

fn checked_dot(a: impl Iterator<Item = (i64, i64)>, what: &'static str) -> Result<i64, SolveError> {
    let mut acc: i64 = 0;
    for (x, y) in a {
        let term = x.checked_mul(y).ok_or(SolveError::Overflow(what))?;
        acc = acc.checked_add(term).ok_or(SolveError::Overflow(what))?;
    }
    Ok(acc)
}

pub(crate) fn entry_for(
    p: &StandardNFoldProgram,
    brick: usize,
    y: Vec<i64>,
) -> Result<BrickEntry, SolveError> {
    let scale = p.brick_scale(brick);
    let mut d = Vec::with_capacity(p.r);
    for g in 0..p.r {
        let dot = checked_dot(
            (0..p.t).map(|j| (p.d.get(g, j), y[j])),
            "brick global contribution",
        )?;
        d.push(
            dot.checked_mul(scale)
                .ok_or(SolveError::Overflow("brick global contribution"))?,
        );
    }
    let cost = checked_dot(
        (0..p.t).map(|j| (p.weights[brick * p.t + j], y[j])),
        "brick objective contribution",
    )?;
    Ok(BrickEntry { y, d, cost })
}

/// Enumerates every local solution of brick `i`: the set of `y` with
/// `A y = b^i` inside the brick's box, each with its global-row projection
/// and objective contribution. The box must be finite, or become finite
/// after tightening through the brick's own rows.
pub fn enumerate_brick_assignments(
    p: &StandardNFoldProgram,
    brick: usize,
) -> Result<BrickSolutionTable, SolveError> {
    enumerate_with(p, brick, &SolveConfig::default())
}

pub fn enumerate_with(
    p: &StandardNFoldProgram,
    brick: usize,
    cfg: &SolveConfig,
) -> Result<BrickSolutionTable, SolveError> {
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    if brick >= p.n {
        return Err(SolveError::Input(format!(
            "brick index {brick} out of range (n = {})",
            p.n
        )));
    }
    let problem = BrickProblem {
        rows: local_rows(p, brick),
        ivals: brick_bounds(p, brick),
        active: vec![true; p.t],
    };
    let mut budget = SearchBudget::new(cfg);
    let mut ys = search_brick(&problem, &mut budget)?;
    ys.sort();
    let entries = ys
        .into_iter()
        .map(|y| entry_for(p, brick, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BrickSolutionTable { brick, entries })
}

/// Enumerates every feasible assignment of the whole program, in
/// lexicographic order. Requires the box to be finite after propagation;
/// meant for cross-checking small programs, not for solving.
pub fn enumerate_feasible(
    p: &StandardNFoldProgram,
    cfg: &SolveConfig,
) -> Result<Vec<Vec<i64>>, SolveError> {
    use super::interval::{index_var_rows, propagate_fixpoint};

    let diags = p.validate();
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    let nt = p.n * p.t;
    let mut ivals: Vec<Ival> = (0..nt)
        .map(|j| Ival::from_bounds(p.lower[j], p.upper[j]))
        .collect();
    let rows = super::solve::all_program_rows(p);
    let var_rows = index_var_rows(&rows, nt);
    if !propagate_fixpoint(&rows, &var_rows, &mut ivals, 16 * (nt + rows.len() + 4)) {
        return Ok(Vec::new());
    }
    if ivals.iter().any(|iv| !iv.is_finite()) {
        return Err(SolveError::Resource {
            budget: "finite box after tightening",
            limit: 0,
        });
    }

    let mut budget = SearchBudget::new(cfg);
    let mut tables: Vec<Vec<BrickEntry>> = Vec::with_capacity(p.n);
    for i in 0..p.n {
        let problem = BrickProblem {
            rows: local_rows(p, i),
            ivals: ivals[i * p.t..(i + 1) * p.t].to_vec(),
            active: vec![true; p.t],
        };
        let mut ys = search_brick(&problem, &mut budget)?;
        ys.sort();
        tables.push(
            ys.into_iter()
                .map(|y| entry_for(p, i, y))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(nt);
    let acc = vec![0i64; p.r];
    join_bricks(p, &tables, 0, acc, &mut prefix, &mut out, cfg)?;
    Ok(out)
}

fn join_bricks(
    p: &StandardNFoldProgram,
    tables: &[Vec<BrickEntry>],
    brick: usize,
    acc: Vec<i64>,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    cfg: &SolveConfig,
) -> Result<(), SolveError> {
    if brick == p.n {
        if acc.iter().zip(&p.b[0..p.r]).all(|(a, b)| a == b) {
            if out.len() as u64 >= cfg.brick_table_cap {
                return Err(SolveError::Resource {
                    budget: "feasible set size",
                    limit: cfg.brick_table_cap,
                });
            }
            out.push(prefix.clone());
        }
        return Ok(());
    }
    for e in &tables[brick] {
        let mut acc2 = Vec::with_capacity(p.r);
        for g in 0..p.r {
            acc2.push(acc[g] + e.d[g]);
        }
        prefix.extend_from_slice(&e.y);
        join_bricks(p, tables, brick + 1, acc2, prefix, out, cfg)?;
        prefix.truncate(prefix.len() - p.t);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::nfold::Bound;

    fn program(
        n: usize,
        r: usize,
        s: usize,
        t: usize,
        d: Matrix,
        a: Matrix,
        b: Vec<i64>,
        bounds: &[(i64, i64)],
        w: Vec<i64>,
    ) -> StandardNFoldProgram {
        StandardNFoldProgram {
            n,
            r,
            s,
            t,
            d,
            a,
            b,
            lower: bounds.iter().map(|&(l, _)| Bound::Finite(l)).collect(),
            upper: bounds.iter().map(|&(_, u)| Bound::Finite(u)).collect(),
            weights: w,
            scale: None,
        }
    }

    #[test]
    fn two_var_sum_brick() {
        // A = [1 1], b^0 = 1, bounds {0,1}^2.
        let p = program(
            1,
            0,
            1,
            2,
            Matrix::zeros(0, 2),
            Matrix::from_rows(&[vec![1, 1]]),
            vec![1],
            &[(0, 1), (0, 1)],
            vec![0, 0],
        );
        let table = enumerate_brick_assignments(&p, 0).unwrap();
        let ys: Vec<_> = table.entries.iter().map(|e| e.y.clone()).collect();
        assert_eq!(ys, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn unconstrained_single_var() {
        let p = program(
            1,
            0,
            0,
            1,
            Matrix::zeros(0, 1),
            Matrix::zeros(0, 1),
            vec![],
            &[(0, 2)],
            vec![0],
        );
        let table = enumerate_brick_assignments(&p, 0).unwrap();
        let ys: Vec<_> = table.entries.iter().map(|e| e.y.clone()).collect();
        assert_eq!(ys, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn parity_empty_table() {
        // A = [2], b = 1: no integer solution in 0..3.
        let p = program(
            1,
            0,
            1,
            1,
            Matrix::zeros(0, 1),
            Matrix::from_rows(&[vec![2]]),
            vec![1],
            &[(0, 3)],
            vec![0],
        );
        let table = enumerate_brick_assignments(&p, 0).unwrap();
        assert!(table.entries.is_empty());
    }
}
