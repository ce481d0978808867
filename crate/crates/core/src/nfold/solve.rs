//! Exact solve by brick decomposition.
//!
//! Pipeline: tighten all variable bounds by interval propagation through
//! every row; project out free wide-range columns (the slack columns that
//! global inequalities leave behind); enumerate each brick's remaining
//! solutions; run a dynamic program over accumulated global-row
//! contributions; reconstruct the lexicographically smallest optimal
//! assignment.
//!
//! Programs that stay infinite after propagation are either certified
//! unbounded (an improving kernel ray with room to move plus a feasible
//! point) or rejected with a resource error; they are never silently
//! clipped into a wrong answer.

use std::collections::HashMap;

use super::enumerate::{entry_for, local_rows, search_brick, BrickProblem, SearchBudget};
use super::interval::{index_var_rows, propagate_fixpoint, Ival, Row};
use super::{Bound, SolveConfig, SolveError, SolveOutcome, StandardNFoldProgram};

/// A column removed from brick enumeration: free (zero weight, no local
/// rows) with a single unit-coefficient global row, so its value can be
/// absorbed into that row's right-hand side as an interval.
#[derive(Debug, Clone)]
struct ProjectedColumn {
    brick: usize,
    col: usize,
    row: usize,
    /// Effective coefficient in the global row, +1 or -1.
    coeff: i64,
    ival: Ival,
}

impl ProjectedColumn {
    fn contribution(&self) -> Ival {
        self.ival.scaled(self.coeff)
    }
}

/// A witness that a program has no finite minimum: `point + k * ray` is
/// feasible for every `k >= 0` and each step improves the objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundedCertificate {
    pub point: Vec<i64>,
    pub ray: Vec<i64>,
}

pub(crate) fn solve_with(
    p: &StandardNFoldProgram,
    cfg: &SolveConfig,
) -> Result<SolveOutcome, SolveError> {
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    let mut ivals = all_bounds(p);
    let rows = all_program_rows(p);
    let var_rows = index_var_rows(&rows, p.n * p.t);
    let rounds = 16 * (p.n * p.t + rows.len() + 4);
    if !propagate_fixpoint(&rows, &var_rows, &mut ivals, rounds) {
        return Ok(SolveOutcome::Infeasible);
    }

    let (projected, blocking_infinite) = choose_projection(p, &ivals, cfg);
    if blocking_infinite {
        return solve_infinite(p, &ivals, cfg);
    }
    solve_finite(p, &ivals, projected, cfg)
}

/// Re-runs the unboundedness search and returns the certificate, if the
/// program is one this solver reports as unbounded.
pub fn unbounded_certificate(
    p: &StandardNFoldProgram,
    cfg: &SolveConfig,
) -> Result<Option<UnboundedCertificate>, SolveError> {
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    let mut ivals = all_bounds(p);
    let rows = all_program_rows(p);
    let var_rows = index_var_rows(&rows, p.n * p.t);
    let rounds = 16 * (p.n * p.t + rows.len() + 4);
    if !propagate_fixpoint(&rows, &var_rows, &mut ivals, rounds) {
        return Ok(None);
    }
    let Some((brick, ray)) = find_improving_ray(p, &ivals, cfg)? else {
        return Ok(None);
    };
    let clipped = clip_program(p, &ivals);
    match clipped.solve_with(cfg)? {
        SolveOutcome::Optimal { assignment, .. } => {
            let mut full_ray = vec![0i64; p.n * p.t];
            full_ray[brick * p.t..(brick + 1) * p.t].copy_from_slice(&ray);
            Ok(Some(UnboundedCertificate {
                point: assignment,
                ray: full_ray,
            }))
        }
        _ => Ok(None),
    }
}

fn all_bounds(p: &StandardNFoldProgram) -> Vec<Ival> {
    (0..p.n * p.t)
        .map(|j| Ival::from_bounds(p.lower[j], p.upper[j]))
        .collect()
}

/// Every equality row of the program over global coordinates: the `r`
/// global rows (with per-brick scaling) followed by each brick's local rows.
pub(crate) fn all_program_rows(p: &StandardNFoldProgram) -> Vec<Row> {
    let mut rows = Vec::with_capacity(p.r + p.n * p.s);
    for g in 0..p.r {
        let mut terms = Vec::new();
        for i in 0..p.n {
            let scale = p.brick_scale(i);
            for j in 0..p.t {
                let c = p.d.get(g, j).saturating_mul(scale);
                if c != 0 {
                    terms.push((i * p.t + j, c));
                }
            }
        }
        rows.push(Row {
            terms,
            rhs: i128::from(p.b[g]),
        });
    }
    for i in 0..p.n {
        let rhs = p.local_rhs(i);
        for q in 0..p.s {
            let terms = (0..p.t)
                .filter(|&j| p.a.get(q, j) != 0)
                .map(|j| (i * p.t + j, p.a.get(q, j)))
                .collect();
            rows.push(Row {
                terms,
                rhs: i128::from(rhs[q]),
            });
        }
    }
    rows
}

/// Decides which columns get projected out. Returns the projected set and
/// whether some non-projectable column is still unbounded.
fn choose_projection(
    p: &StandardNFoldProgram,
    ivals: &[Ival],
    cfg: &SolveConfig,
) -> (Vec<ProjectedColumn>, bool) {
    let mut projected = Vec::new();
    let mut blocking = false;
    for i in 0..p.n {
        let scale = p.brick_scale(i);
        for j in 0..p.t {
            let coord = i * p.t + j;
            let iv = ivals[coord];
            let wide = match iv.size() {
                None => true,
                Some(sz) => sz > i128::from(cfg.projection_range),
            };
            if !wide {
                continue;
            }
            let free_local = (0..p.s).all(|q| p.a.get(q, j) == 0);
            let global_cols: Vec<usize> =
                (0..p.r).filter(|&g| p.d.get(g, j) != 0).collect();
            let projectable = p.weights[coord] == 0
                && free_local
                && match global_cols.as_slice() {
                    [] => true,
                    [g] => p.d.get(*g, j).saturating_mul(scale).abs() == 1,
                    _ => false,
                };
            if projectable {
                let (row, coeff) = match global_cols.as_slice() {
                    [] => (usize::MAX, 0),
                    [g] => (*g, p.d.get(*g, j) * scale),
                    _ => unreachable!(),
                };
                projected.push(ProjectedColumn {
                    brick: i,
                    col: j,
                    row,
                    coeff,
                    ival: iv,
                });
            } else if !iv.is_finite() {
                blocking = true;
            }
        }
    }
    (projected, blocking)
}

fn solve_finite(
    p: &StandardNFoldProgram,
    ivals: &[Ival],
    projected: Vec<ProjectedColumn>,
    cfg: &SolveConfig,
) -> Result<SolveOutcome, SolveError> {
    // Per-row interval of everything the projected columns can absorb.
    let mut slack_box = vec![Ival::point(0); p.r];
    for col in &projected {
        if col.row != usize::MAX {
            slack_box[col.row] = slack_box[col.row].add(&col.contribution());
        }
    }

    // Brick tables over the remaining columns.
    let mut budget = SearchBudget::new(cfg);
    let mut tables: Vec<Vec<super::BrickEntry>> = Vec::with_capacity(p.n);
    for i in 0..p.n {
        let mut active = vec![true; p.t];
        for col in &projected {
            if col.brick == i {
                active[col.col] = false;
            }
        }
        let mut brick_ivals = Vec::with_capacity(p.t);
        for j in 0..p.t {
            brick_ivals.push(if active[j] {
                ivals[i * p.t + j]
            } else {
                Ival::point(0)
            });
        }
        let problem = BrickProblem {
            rows: local_rows(p, i),
            ivals: brick_ivals,
            active,
        };
        let mut ys = search_brick(&problem, &mut budget)?;
        if ys.is_empty() {
            return Ok(SolveOutcome::Infeasible);
        }
        ys.sort();
        let entries = ys
            .into_iter()
            .map(|y| entry_for(p, i, y))
            .collect::<Result<Vec<_>, _>>()?;
        tables.push(entries);
    }

    // Suffix contribution ranges for pruning unreachable states.
    let mut suffix_min = vec![vec![0i128; p.r]; p.n + 1];
    let mut suffix_max = vec![vec![0i128; p.r]; p.n + 1];
    for i in (0..p.n).rev() {
        for g in 0..p.r {
            let lo = tables[i]
                .iter()
                .map(|e| i128::from(e.d[g]))
                .min()
                .unwrap_or(0);
            let hi = tables[i]
                .iter()
                .map(|e| i128::from(e.d[g]))
                .max()
                .unwrap_or(0);
            suffix_min[i][g] = suffix_min[i + 1][g] + lo;
            suffix_max[i][g] = suffix_max[i + 1][g] + hi;
        }
    }
    let reachable = |layer: usize, acc: &[i64]| -> bool {
        (0..p.r).all(|g| {
            let needed = i128::from(p.b[g]) - i128::from(acc[g]);
            let lo = match slack_box[g].lo {
                Some(v) => Some(v + suffix_min[layer][g]),
                None => None,
            };
            let hi = match slack_box[g].hi {
                Some(v) => Some(v + suffix_max[layer][g]),
                None => None,
            };
            lo.is_none_or(|v| needed >= v) && hi.is_none_or(|v| needed <= v)
        })
    };

    // Forward reachable state layers.
    let mut layers: Vec<Vec<Vec<i64>>> = Vec::with_capacity(p.n + 1);
    layers.push(vec![vec![0i64; p.r]]);
    let mut total_states: u64 = 1;
    for i in 0..p.n {
        let mut next: HashMap<Vec<i64>, ()> = HashMap::new();
        for acc in &layers[i] {
            for e in &tables[i] {
                let mut acc2 = Vec::with_capacity(p.r);
                let mut ok = true;
                for g in 0..p.r {
                    match acc[g].checked_add(e.d[g]) {
                        Some(v) => acc2.push(v),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    return Err(SolveError::Overflow("dp accumulation"));
                }
                if reachable(i + 1, &acc2) {
                    next.insert(acc2, ());
                }
            }
        }
        total_states += next.len() as u64;
        if total_states > cfg.dp_state_cap {
            return Err(SolveError::Resource {
                budget: "dp states",
                limit: cfg.dp_state_cap,
            });
        }
        let mut states: Vec<Vec<i64>> = next.into_keys().collect();
        states.sort();
        layers.push(states);
    }

    // Backward optimal completion costs.
    let mut values: Vec<HashMap<Vec<i64>, i64>> = vec![HashMap::new(); p.n + 1];
    for acc in &layers[p.n] {
        let terminal = (0..p.r).all(|g| {
            let needed = i128::from(p.b[g]) - i128::from(acc[g]);
            slack_box[g].contains(needed)
        });
        if terminal {
            values[p.n].insert(acc.clone(), 0);
        }
    }
    for i in (0..p.n).rev() {
        let (head, tail) = values.split_at_mut(i + 1);
        let this = &mut head[i];
        let next = &tail[0];
        for acc in &layers[i] {
            let mut best: Option<i64> = None;
            for e in &tables[i] {
                let mut acc2 = Vec::with_capacity(p.r);
                for g in 0..p.r {
                    acc2.push(acc[g] + e.d[g]);
                }
                if let Some(&completion) = next.get(&acc2) {
                    let total = e
                        .cost
                        .checked_add(completion)
                        .ok_or(SolveError::Overflow("dp objective"))?;
                    if best.map_or(true, |b| total < b) {
                        best = Some(total);
                    }
                }
            }
            if let Some(v) = best {
                this.insert(acc.clone(), v);
            }
        }
    }

    let Some(&optimal) = values[0].get(&vec![0i64; p.r]) else {
        return Ok(SolveOutcome::Infeasible);
    };

    // Forward walk picking the lexicographically smallest optimal brick
    // solutions (tables are sorted, so the first match wins).
    let mut assignment = vec![0i64; p.n * p.t];
    let mut acc = vec![0i64; p.r];
    let mut remaining = optimal;
    for i in 0..p.n {
        let mut chosen = None;
        for e in &tables[i] {
            let mut acc2 = Vec::with_capacity(p.r);
            for g in 0..p.r {
                acc2.push(acc[g] + e.d[g]);
            }
            if let Some(&completion) = values[i + 1].get(&acc2) {
                if e.cost + completion == remaining {
                    chosen = Some((e, acc2));
                    break;
                }
            }
        }
        let (e, acc2) = chosen.expect("dp reconstruction is total on optimal states");
        assignment[i * p.t..(i + 1) * p.t].copy_from_slice(&e.y);
        remaining -= e.cost;
        acc = acc2;
    }

    fill_projected(p, &projected, &acc, &mut assignment)?;
    debug_assert!(p.evaluate(&assignment)?.feasible);
    Ok(SolveOutcome::Optimal {
        assignment,
        value: optimal,
    })
}

/// Distributes each global row's residual over that row's projected
/// columns, giving the earliest coordinate the smallest feasible value.
fn fill_projected(
    p: &StandardNFoldProgram,
    projected: &[ProjectedColumn],
    core_acc: &[i64],
    assignment: &mut [i64],
) -> Result<(), SolveError> {
    let mut by_row: Vec<Vec<&ProjectedColumn>> = vec![Vec::new(); p.r];
    for col in projected {
        if col.row == usize::MAX {
            // Entirely unconstrained: smallest finite bound, else 0.
            let v = match (col.ival.lo, col.ival.hi) {
                (Some(lo), _) => lo,
                (None, Some(hi)) => hi.min(0),
                (None, None) => 0,
            };
            assignment[col.brick * p.t + col.col] = clamp_i64(v)?;
            continue;
        }
        by_row[col.row].push(col);
    }
    for g in 0..p.r {
        let cols = &mut by_row[g];
        cols.sort_by_key(|c| c.brick * p.t + c.col);
        let mut residual = i128::from(p.b[g]) - i128::from(core_acc[g]);
        // Suffix sums of what later columns can still absorb.
        let m = cols.len();
        let mut suffix = vec![Ival::point(0); m + 1];
        for k in (0..m).rev() {
            suffix[k] = suffix[k + 1].add(&cols[k].contribution());
        }
        for k in 0..m {
            let contrib = cols[k].contribution();
            let later = suffix[k + 1];
            // Contribution for this column must leave the rest coverable.
            let lo = match later.hi {
                Some(h) => contrib.lo.map_or(residual - h, |l| l.max(residual - h)),
                None => contrib.lo.unwrap_or(0).min(residual),
            };
            let hi = match later.lo {
                Some(l) => contrib.hi.map_or(residual - l, |h| h.min(residual - l)),
                None => contrib.hi.unwrap_or(0).max(residual),
            };
            debug_assert!(lo <= hi, "projected fill infeasible");
            // Smallest variable value: smallest contribution for +1
            // columns, largest for -1 columns.
            let chosen_contrib = if cols[k].coeff > 0 { lo } else { hi };
            let value = chosen_contrib * i128::from(cols[k].coeff.signum());
            assignment[cols[k].brick * p.t + cols[k].col] = clamp_i64(value)?;
            residual -= chosen_contrib;
        }
    }
    Ok(())
}

fn clamp_i64(v: i128) -> Result<i64, SolveError> {
    i64::try_from(v).map_err(|_| SolveError::Overflow("projected column value"))
}

/// Handles programs that keep a non-projectable unbounded coordinate:
/// certify unboundedness or fail with a named budget.
fn solve_infinite(
    p: &StandardNFoldProgram,
    ivals: &[Ival],
    cfg: &SolveConfig,
) -> Result<SolveOutcome, SolveError> {
    if let Some((_brick, _ray)) = find_improving_ray(p, ivals, cfg)? {
        let clipped = clip_program(p, ivals);
        match clipped.solve_with(cfg)? {
            SolveOutcome::Optimal { .. } => return Ok(SolveOutcome::Unbounded),
            SolveOutcome::Infeasible => {
                return Err(SolveError::Resource {
                    budget: "feasible point search window",
                    limit: cfg.projection_range as u64,
                })
            }
            SolveOutcome::Unbounded => unreachable!("clipped program has finite bounds"),
        }
    }
    Err(SolveError::Resource {
        budget: "finite box after propagation",
        limit: cfg.ray_vector_cap,
    })
}

/// Searches one brick at a time for an integer kernel ray with negative
/// weight whose movement only pushes coordinates toward their unbounded
/// sides.
fn find_improving_ray(
    p: &StandardNFoldProgram,
    ivals: &[Ival],
    cfg: &SolveConfig,
) -> Result<Option<(usize, Vec<i64>)>, SolveError> {
    let mut tried: u64 = 0;
    for brick in 0..p.n {
        let mut z = vec![0i64; p.t];
        if let Some(ray) = ray_dfs(p, brick, ivals, &mut z, 0, &mut tried, cfg)? {
            return Ok(Some((brick, ray)));
        }
    }
    Ok(None)
}

fn ray_dfs(
    p: &StandardNFoldProgram,
    brick: usize,
    ivals: &[Ival],
    z: &mut Vec<i64>,
    depth: usize,
    tried: &mut u64,
    cfg: &SolveConfig,
) -> Result<Option<Vec<i64>>, SolveError> {
    if depth == p.t {
        *tried += 1;
        if *tried > cfg.ray_vector_cap {
            return Err(SolveError::Resource {
                budget: "ray search vectors",
                limit: cfg.ray_vector_cap,
            });
        }
        let base = brick * p.t;
        let scale = p.brick_scale(brick);
        if is_improving_ray(p, base, scale, ivals, z) {
            return Ok(Some(z.clone()));
        }
        return Ok(None);
    }
    let coord = brick * p.t + depth;
    for v in -cfg.ray_entry_bound..=cfg.ray_entry_bound {
        // A ray can only move coordinates toward an unbounded side.
        let headroom =
            (v <= 0 || ivals[coord].hi.is_none()) && (v >= 0 || ivals[coord].lo.is_none());
        if !headroom {
            continue;
        }
        z[depth] = v;
        if let Some(found) = ray_dfs(p, brick, ivals, z, depth + 1, tried, cfg)? {
            return Ok(Some(found));
        }
    }
    z[depth] = 0;
    Ok(None)
}

fn is_improving_ray(
    p: &StandardNFoldProgram,
    base: usize,
    scale: i64,
    ivals: &[Ival],
    z: &[i64],
) -> bool {
    if z.iter().all(|&v| v == 0) {
        return false;
    }
    for q in 0..p.s {
        let dot: i64 = (0..p.t).map(|j| p.a.get(q, j) * z[j]).sum();
        if dot != 0 {
            return false;
        }
    }
    for g in 0..p.r {
        let dot: i64 = (0..p.t).map(|j| p.d.get(g, j) * z[j]).sum();
        if dot.saturating_mul(scale) != 0 {
            return false;
        }
    }
    let weight: i64 = (0..p.t).map(|j| p.weights[base + j] * z[j]).sum();
    if weight >= 0 {
        return false;
    }
    z.iter().enumerate().all(|(j, &v)| {
        (v <= 0 || ivals[base + j].hi.is_none()) && (v >= 0 || ivals[base + j].lo.is_none())
    })
}

/// Replaces unbounded sides with a window wide enough to contain a
/// feasible point of every instance this crate generates itself.
fn clip_program(p: &StandardNFoldProgram, ivals: &[Ival]) -> StandardNFoldProgram {
    let max_b = p.b.iter().map(|v| v.abs()).max().unwrap_or(0);
    let max_finite = ivals
        .iter()
        .flat_map(|iv| [iv.lo, iv.hi])
        .flatten()
        .map(|v| v.unsigned_abs().min(u128::from(u32::MAX)) as i64)
        .max()
        .unwrap_or(0);
    let w = 1 + max_b + max_finite + p.coefficient_bound() * p.t as i64;
    let mut clipped = p.clone();
    for j in 0..p.n * p.t {
        let (lo, hi) = match (ivals[j].lo, ivals[j].hi) {
            (Some(l), Some(h)) => (l, h),
            (Some(l), None) => (l, l + i128::from(w)),
            (None, Some(h)) => (h - i128::from(w), h),
            (None, None) => (-i128::from(w), i128::from(w)),
        };
        clipped.lower[j] = Bound::Finite(lo.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64);
        clipped.upper[j] = Bound::Finite(hi.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64);
    }
    clipped
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn bounds(v: &[(i64, i64)]) -> (Vec<Bound>, Vec<Bound>) {
        (
            v.iter().map(|&(l, _)| Bound::Finite(l)).collect(),
            v.iter().map(|&(_, u)| Bound::Finite(u)).collect(),
        )
    }

    #[test]
    fn split_three_across_two_bricks() {
        let (lower, upper) = bounds(&[(0, 2), (0, 2)]);
        let p = StandardNFoldProgram {
            n: 2,
            r: 1,
            s: 0,
            t: 1,
            d: Matrix::from_rows(&[vec![1]]),
            a: Matrix::zeros(0, 1),
            b: vec![3],
            lower,
            upper,
            weights: vec![1, 1],
            scale: None,
        };
        assert_eq!(
            p.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![1, 2],
                value: 3
            }
        );
    }

    #[test]
    fn infeasible_when_target_exceeds_box() {
        let (lower, upper) = bounds(&[(0, 2), (0, 2)]);
        let p = StandardNFoldProgram {
            n: 2,
            r: 1,
            s: 0,
            t: 1,
            d: Matrix::from_rows(&[vec![1]]),
            a: Matrix::zeros(0, 1),
            b: vec![5],
            lower,
            upper,
            weights: vec![1, 1],
            scale: None,
        };
        assert_eq!(p.solve().unwrap(), SolveOutcome::Infeasible);
    }

    #[test]
    fn unbounded_diagonal_ray() {
        // x1 - x2 = 0, both in [0, inf), objective -x1.
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 2,
            d: Matrix::from_rows(&[vec![1, -1]]),
            a: Matrix::zeros(0, 2),
            b: vec![0],
            lower: vec![Bound::Finite(0), Bound::Finite(0)],
            upper: vec![Bound::PosInf, Bound::PosInf],
            weights: vec![-1, 0],
            scale: None,
        };
        assert_eq!(p.solve().unwrap(), SolveOutcome::Unbounded);
        let cert = unbounded_certificate(&p, &SolveConfig::default())
            .unwrap()
            .expect("certificate");
        assert!(p.evaluate(&cert.point).unwrap().feasible);
        let ray_weight: i64 = cert
            .ray
            .iter()
            .zip(&p.weights)
            .map(|(z, w)| z * w)
            .sum();
        assert!(ray_weight < 0);
    }

    #[test]
    fn brick_level_example_with_local_row() {
        // One brick, D = [1, 2], b = [4], bounds 0..2, w = (1, 1): the
        // nine box points give optimum (0, 2) at value 2.
        let (lower, upper) = bounds(&[(0, 2), (0, 2)]);
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 2,
            d: Matrix::from_rows(&[vec![1, 2]]),
            a: Matrix::zeros(0, 2),
            b: vec![4],
            lower,
            upper,
            weights: vec![1, 1],
            scale: None,
        };
        assert_eq!(
            p.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![0, 2],
                value: 2
            }
        );
    }

    #[test]
    fn slack_column_tightened_through_global_row() {
        // x + slack = 5 with slack in [0, inf): propagation bounds the
        // slack to [2, 5] and the cheapest x wins.
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 2,
            d: Matrix::from_rows(&[vec![1, 1]]),
            a: Matrix::zeros(0, 2),
            b: vec![5],
            lower: vec![Bound::Finite(0), Bound::Finite(0)],
            upper: vec![Bound::Finite(3), Bound::PosInf],
            weights: vec![1, 0],
            scale: None,
        };
        assert_eq!(
            p.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![0, 5],
                value: 0
            }
        );
    }

    #[test]
    fn wide_free_slack_column_is_projected() {
        // x in [0, 1000] with weight 1, free slack in [0, inf), global row
        // x + slack = 2000. The slack range stays far above the projection
        // threshold, so it is absorbed into the row and reconstructed.
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 2,
            d: Matrix::from_rows(&[vec![1, 1]]),
            a: Matrix::zeros(0, 2),
            b: vec![2000],
            lower: vec![Bound::Finite(0), Bound::Finite(0)],
            upper: vec![Bound::Finite(1000), Bound::PosInf],
            weights: vec![1, 0],
            scale: None,
        };
        assert_eq!(
            p.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![0, 2000],
                value: 0
            }
        );
    }

    #[test]
    fn per_brick_scale_multiplies_global_contribution() {
        // Bricks carry weights 3, 5, 7 through the scale; target 12 is met
        // by picking the second and third bricks.
        let p = StandardNFoldProgram {
            n: 3,
            r: 1,
            s: 0,
            t: 1,
            d: Matrix::from_rows(&[vec![1]]),
            a: Matrix::zeros(0, 1),
            b: vec![12],
            lower: vec![Bound::Finite(0); 3],
            upper: vec![Bound::Finite(1); 3],
            weights: vec![0, 0, 0],
            scale: Some(vec![3, 5, 7]),
        };
        assert_eq!(
            p.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![0, 1, 1],
                value: 0
            }
        );
    }
}
