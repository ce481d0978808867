//! Mechanical rewriting of valid extended programs to standard form.
//!
//! Every primitive operation becomes a small bundle of auxiliary columns
//! and locally uniform equality rows whose solutions are forced, so the
//! feasible assignments of the standard program project bijectively onto
//! the feasible assignments of the extended program:
//!
//! * negation is inlined as `1 - e` (no new columns);
//! * `or` gets one binary column pinned by three unit-coefficient
//!   inequality rows;
//! * `bool_m`/`sgn_m` share a sign partition: three binaries summing to 1
//!   marking argument positive, zero, or negative, pinned by two rows with
//!   coefficient exactly `m` (so the rewritten coefficient bound stays
//!   `max(a, M)` even when an argument can reach magnitude `m`);
//! * local inequalities get one slack column with sign-restricted bounds
//!   of magnitude `Q = max(||l||, ||u||) * a * n * t`;
//! * global inequalities get one slack column per brick, live in the
//!   first brick and pinned to zero elsewhere.

use std::collections::HashMap;

use super::lower::{Intervals, Lowered, Node, NodeId};
use super::{ConstraintRhs, ExtendedError, ExtendedProgram, Relation};
use crate::matrix::Matrix;
use crate::nfold::{Bound, StandardNFoldProgram};

/// Size bookkeeping across one rewrite, used to check the growth claims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accounting {
    pub t_in: usize,
    pub r_in: usize,
    pub s_in: usize,
    pub a_in: i64,
    pub width: usize,
    pub height: i64,
    pub t_out: usize,
    pub r_out: usize,
    pub s_out: usize,
    pub a_out: i64,
}

#[derive(Debug, Clone)]
pub struct RewriteResult {
    pub program: StandardNFoldProgram,
    /// Standard-form column of each declared variable (brick-local; the
    /// full coordinate of `(brick i, var j)` is `i * t_out + var_map[j]`).
    pub var_map: Vec<usize>,
    pub accounting: Accounting,
}

/// A linear form over standard columns plus one additive constant per
/// brick; expression compilation returns these so purely linear structure
/// never allocates columns.
#[derive(Debug, Clone)]
struct LinForm {
    terms: Vec<(usize, i64)>,
    constant: Vec<i64>,
}

impl LinForm {
    fn constant_only(n: usize, v: i64) -> Self {
        LinForm {
            terms: Vec::new(),
            constant: vec![v; n],
        }
    }

    fn from_col(n: usize, col: usize) -> Self {
        LinForm {
            terms: vec![(col, 1)],
            constant: vec![0; n],
        }
    }

    fn add_scaled(&mut self, other: &LinForm, c: i64) {
        for &(col, coeff) in &other.terms {
            self.terms.push((col, c * coeff));
        }
        for (mine, theirs) in self.constant.iter_mut().zip(&other.constant) {
            *mine += c * theirs;
        }
    }

    fn negated_plus_one(&self) -> Self {
        let mut out = LinForm {
            terms: self.terms.iter().map(|&(col, c)| (col, -c)).collect(),
            constant: self.constant.iter().map(|v| 1 - v).collect(),
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.terms.sort_by_key(|&(col, _)| col);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(self.terms.len());
        for &(col, c) in &self.terms {
            match merged.last_mut() {
                Some((last_col, last_c)) if *last_col == col => *last_c += c,
                _ => merged.push((col, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        self.terms = merged;
    }
}

struct ARow {
    terms: Vec<(usize, i64)>,
    rhs: Vec<i64>,
}

struct DRow {
    terms: Vec<(usize, i64)>,
    rhs: i64,
    /// Pending slack relation for a global inequality; the slack column is
    /// appended after all other columns and patched in.
    pending_slack: Option<Relation>,
}

struct Column {
    lower: Vec<Bound>,
    upper: Vec<Bound>,
    weights: Vec<i64>,
}

struct Rewriter<'a> {
    ep: &'a ExtendedProgram,
    low: &'a Lowered,
    iv: &'a Intervals,
    n: usize,
    q_slack: i64,
    columns: Vec<Column>,
    a_rows: Vec<ARow>,
    d_rows: Vec<DRow>,
    form_memo: HashMap<NodeId, LinForm>,
    partition_memo: HashMap<(i64, NodeId), (usize, usize, usize)>,
}

pub fn rewrite(ep: &ExtendedProgram) -> Result<RewriteResult, ExtendedError> {
    let low = Lowered::build(ep)?;
    let iv = low.certify(ep)?;
    let n = ep.n();

    let mut max_bound = 0i64;
    for brick in 0..n {
        for j in 0..ep.t() {
            let (lo, hi) = ep.bounds(brick, j);
            max_bound = max_bound.max(lo.abs()).max(hi.abs());
        }
    }
    let a_in = low.coefficient_bound();
    let q = i128::from(max_bound)
        * i128::from(a_in.max(1))
        * i128::from(n as i64)
        * i128::from(ep.t().max(1) as i64);
    let q_slack = i64::try_from(q).map_err(|_| ExtendedError::Overflow("slack magnitude"))?;

    let mut rw = Rewriter {
        ep,
        low: &low,
        iv: &iv,
        n,
        q_slack,
        columns: Vec::new(),
        a_rows: Vec::new(),
        d_rows: Vec::new(),
        form_memo: HashMap::new(),
        partition_memo: HashMap::new(),
    };

    // Declared variables keep their positions as the first t columns.
    for j in 0..ep.t() {
        rw.columns.push(Column {
            lower: (0..n).map(|i| Bound::Finite(ep.bounds(i, j).0)).collect(),
            upper: (0..n).map(|i| Bound::Finite(ep.bounds(i, j).1)).collect(),
            weights: (0..n).map(|i| ep.weight(i, j)).collect(),
        });
    }

    for (c, &root) in ep.constraints().iter().zip(low.constraint_roots()) {
        let form = rw.compile(root)?;
        match (&c.rhs, c.relation) {
            (ConstraintRhs::Local(rhs), Relation::Eq) => {
                let row_rhs = (0..n).map(|i| rhs[i] - form.constant[i]).collect();
                rw.a_rows.push(ARow {
                    terms: form.terms.clone(),
                    rhs: row_rhs,
                });
            }
            (ConstraintRhs::Local(rhs), rel) => {
                rw.local_inequality(&form, rel, rhs, root)?;
            }
            (ConstraintRhs::Global(rhs), Relation::Eq) => {
                let folded: i64 = rhs - form.constant.iter().sum::<i64>();
                rw.d_rows.push(DRow {
                    terms: form.terms.clone(),
                    rhs: folded,
                    pending_slack: None,
                });
            }
            (ConstraintRhs::Global(rhs), rel) => {
                let folded: i64 = rhs - form.constant.iter().sum::<i64>();
                rw.d_rows.push(DRow {
                    terms: form.terms.clone(),
                    rhs: folded,
                    pending_slack: Some(rel),
                });
            }
        }
    }

    // Slack columns for global inequalities are appended last so they
    // trail every constrained column of their brick.
    for row_idx in 0..rw.d_rows.len() {
        let Some(rel) = rw.d_rows[row_idx].pending_slack.take() else {
            continue;
        };
        let (live_lo, live_hi) = match rel {
            Relation::Le => (Bound::Finite(0), Bound::PosInf),
            Relation::Lt => (Bound::Finite(1), Bound::PosInf),
            Relation::Ge => (Bound::NegInf, Bound::Finite(0)),
            Relation::Gt => (Bound::NegInf, Bound::Finite(-1)),
            Relation::Eq => unreachable!(),
        };
        let col = rw.columns.len();
        let mut lower = vec![Bound::Finite(0); n];
        let mut upper = vec![Bound::Finite(0); n];
        lower[0] = live_lo;
        upper[0] = live_hi;
        rw.columns.push(Column {
            lower,
            upper,
            weights: vec![0; n],
        });
        rw.d_rows[row_idx].terms.push((col, 1));
    }

    let t_out = rw.columns.len();
    let r_out = rw.d_rows.len();
    let s_out = rw.a_rows.len();

    let mut d = Matrix::zeros(r_out, t_out);
    for (g, row) in rw.d_rows.iter().enumerate() {
        for &(col, c) in &row.terms {
            d.set(g, col, d.get(g, col) + c);
        }
    }
    let mut a = Matrix::zeros(s_out, t_out);
    for (q_idx, row) in rw.a_rows.iter().enumerate() {
        for &(col, c) in &row.terms {
            a.set(q_idx, col, a.get(q_idx, col) + c);
        }
    }
    let mut b = Vec::with_capacity(r_out + n * s_out);
    b.extend(rw.d_rows.iter().map(|row| row.rhs));
    for i in 0..n {
        b.extend(rw.a_rows.iter().map(|row| row.rhs[i]));
    }
    let mut lower = Vec::with_capacity(n * t_out);
    let mut upper = Vec::with_capacity(n * t_out);
    let mut weights = Vec::with_capacity(n * t_out);
    for i in 0..n {
        for col in &rw.columns {
            lower.push(col.lower[i]);
            upper.push(col.upper[i]);
            weights.push(col.weights[i]);
        }
    }

    let program = StandardNFoldProgram {
        n,
        r: r_out,
        s: s_out,
        t: t_out,
        d,
        a,
        b,
        lower,
        upper,
        weights,
        scale: None,
    };

    let r_in = ep.constraints().iter().filter(|c| c.is_global()).count();
    let s_in = ep.constraints().len() - r_in;
    let accounting = Accounting {
        t_in: ep.t(),
        r_in,
        s_in,
        a_in,
        width: low.width(),
        height: low.height(),
        t_out,
        r_out,
        s_out,
        a_out: program.coefficient_bound(),
    };
    debug_assert_eq!(accounting.r_out, accounting.r_in);
    debug_assert_eq!(
        accounting.a_out,
        accounting.a_in.max(accounting.height),
        "coefficient bound drifted from max(a, M)"
    );

    Ok(RewriteResult {
        program,
        var_map: (0..ep.t()).collect(),
        accounting,
    })
}

impl<'a> Rewriter<'a> {
    fn new_column(&mut self, lo: Bound, hi: Bound) -> usize {
        let col = self.columns.len();
        self.columns.push(Column {
            lower: vec![lo; self.n],
            upper: vec![hi; self.n],
            weights: vec![0; self.n],
        });
        col
    }

    fn binary_column(&mut self) -> usize {
        self.new_column(Bound::Finite(0), Bound::Finite(1))
    }

    fn compile(&mut self, node: NodeId) -> Result<LinForm, ExtendedError> {
        if let Some(form) = self.form_memo.get(&node) {
            return Ok(form.clone());
        }
        let form = match self.low.nodes[node].clone() {
            Node::Var(j) => LinForm::from_col(self.n, j),
            Node::Const(v) => LinForm::constant_only(self.n, v),
            Node::BrickConst(idx) => LinForm {
                terms: Vec::new(),
                constant: self.low.brick_consts[idx].clone(),
            },
            Node::Lin(terms) => {
                let mut acc = LinForm::constant_only(self.n, 0);
                for (c, child) in terms {
                    let child_form = self.compile(child)?;
                    acc.add_scaled(&child_form, c);
                }
                acc.normalize();
                acc
            }
            Node::Not(e) => self.compile(e)?.negated_plus_one(),
            Node::Or(a, b) => {
                let fa = self.compile(a)?;
                let fb = self.compile(b)?;
                let z = self.binary_column();
                let z_form = LinForm::from_col(self.n, z);
                let mut sum = fa.clone();
                sum.add_scaled(&fb, 1);
                sum.normalize();
                // a <= z, b <= z, z <= a + b: all unit coefficients.
                self.le_row(&fa, &z_form, 1);
                self.le_row(&fb, &z_form, 1);
                self.le_row(&z_form, &sum, 2);
                z_form
            }
            Node::Bool(m, e) => {
                let (vp, _v0, vm) = self.sign_partition(m, e)?;
                let mut form = LinForm {
                    terms: vec![(vp, 1), (vm, 1)],
                    constant: vec![0; self.n],
                };
                form.normalize();
                form
            }
            Node::Sgn(m, e) => {
                let (vp, _v0, vm) = self.sign_partition(m, e)?;
                let mut form = LinForm {
                    terms: vec![(vp, 1), (vm, -1)],
                    constant: vec![0; self.n],
                };
                form.normalize();
                form
            }
        };
        self.form_memo.insert(node, form.clone());
        Ok(form)
    }

    /// Emits `lhs <= rhs` as `lhs - rhs + s = 0` with `s in [0, cap]`.
    fn le_row(&mut self, lhs: &LinForm, rhs: &LinForm, cap: i64) {
        let s = self.new_column(Bound::Finite(0), Bound::Finite(cap));
        let mut combined = lhs.clone();
        combined.add_scaled(rhs, -1);
        combined.normalize();
        let mut terms = combined.terms;
        terms.push((s, 1));
        let row_rhs = combined.constant.iter().map(|v| -v).collect();
        let mut row = ARow {
            terms,
            rhs: row_rhs,
        };
        normalize_row(&mut row);
        self.a_rows.push(row);
    }

    /// The shared bool/sgn gadget: binaries marking the argument positive,
    /// zero, or negative.
    ///
    /// ```text
    /// vp + v0 + vm = 1
    /// F - vp + m*vm >= 0     (excludes vp=0,v0/vm wrong side)
    /// F - m*vp + vm <= 0
    /// ```
    fn sign_partition(
        &mut self,
        m: i64,
        arg: NodeId,
    ) -> Result<(usize, usize, usize), ExtendedError> {
        if let Some(&triple) = self.partition_memo.get(&(m, arg)) {
            return Ok(triple);
        }
        let form = self.compile(arg)?;
        let vp = self.binary_column();
        let v0 = self.binary_column();
        let vm = self.binary_column();
        let mut row1 = ARow {
            terms: vec![(vp, 1), (v0, 1), (vm, 1)],
            rhs: vec![1; self.n],
        };
        normalize_row(&mut row1);
        self.a_rows.push(row1);

        // F - vp + m*vm - s2 = 0, s2 in [0, 2m].
        let s2 = self.new_column(Bound::Finite(0), Bound::Finite(2 * m));
        let mut terms2 = form.terms.clone();
        terms2.push((vp, -1));
        terms2.push((vm, m));
        terms2.push((s2, -1));
        let rhs2 = form.constant.iter().map(|v| -v).collect();
        let mut row2 = ARow {
            terms: terms2,
            rhs: rhs2,
        };
        normalize_row(&mut row2);
        self.a_rows.push(row2);

        // F - m*vp + vm + s3 = 0, s3 in [0, 2m].
        let s3 = self.new_column(Bound::Finite(0), Bound::Finite(2 * m));
        let mut terms3 = form.terms.clone();
        terms3.push((vp, -m));
        terms3.push((vm, 1));
        terms3.push((s3, 1));
        let rhs3 = form.constant.iter().map(|v| -v).collect();
        let mut row3 = ARow {
            terms: terms3,
            rhs: rhs3,
        };
        normalize_row(&mut row3);
        self.a_rows.push(row3);

        self.partition_memo.insert((m, arg), (vp, v0, vm));
        Ok((vp, v0, vm))
    }

    fn local_inequality(
        &mut self,
        form: &LinForm,
        rel: Relation,
        rhs: &[i64],
        root: NodeId,
    ) -> Result<(), ExtendedError> {
        // Slack magnitude: the prescribed Q, widened if the certified
        // interval of `rhs - lhs` somehow exceeds it.
        let mut needed = 0i64;
        for brick in 0..self.n {
            let (lo, hi) = self.iv.node_interval(root, brick);
            needed = needed
                .max((rhs[brick] - lo).abs())
                .max((rhs[brick] - hi).abs());
        }
        let q = self.q_slack.max(needed);
        let (lo, hi) = match rel {
            Relation::Le => (Bound::Finite(0), Bound::Finite(q)),
            Relation::Lt => (Bound::Finite(1), Bound::Finite(q)),
            Relation::Ge => (Bound::Finite(-q), Bound::Finite(0)),
            Relation::Gt => (Bound::Finite(-q), Bound::Finite(-1)),
            Relation::Eq => unreachable!(),
        };
        let s = self.new_column(lo, hi);
        let mut terms = form.terms.clone();
        terms.push((s, 1));
        let row_rhs = (0..self.n).map(|i| rhs[i] - form.constant[i]).collect();
        let mut row = ARow {
            terms,
            rhs: row_rhs,
        };
        normalize_row(&mut row);
        self.a_rows.push(row);
        Ok(())
    }
}

fn normalize_row(row: &mut ARow) {
    row.terms.sort_by_key(|&(col, _)| col);
    let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.terms.len());
    for &(col, c) in &row.terms {
        match merged.last_mut() {
            Some((last_col, last_c)) if *last_col == col => *last_c += c,
            _ => merged.push((col, c)),
        }
    }
    merged.retain(|&(_, c)| c != 0);
    row.terms = merged;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::gadgets;
    use crate::extended::UniformExpr as E;
    use crate::nfold::{enumerate_feasible, SolveConfig, SolveOutcome};

    fn feasible_projections(result: &RewriteResult, t_declared: usize) -> Vec<Vec<i64>> {
        let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
        let tp = result.program.t;
        let mut projected: Vec<Vec<i64>> = all
            .iter()
            .map(|x| {
                let mut p = Vec::new();
                for brick in 0..result.program.n {
                    for j in 0..t_declared {
                        p.push(x[brick * tp + result.var_map[j]]);
                    }
                }
                p
            })
            .collect();
        projected.sort();
        projected.dedup();
        projected
    }

    #[test]
    fn or_rewrite_matches_truth_table() {
        for (a, b, want) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)] {
            let mut ep = ExtendedProgram::with_vars(1, 2, 0, 1);
            ep.set_bounds(0, a, a);
            ep.set_bounds(1, b, b);
            ep.add_local_uniform(E::var(0).or(E::var(1)), Relation::Eq, want);
            let result = rewrite(&ep).unwrap();
            // The single extended point must survive, with the auxiliary
            // columns forced uniquely.
            let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
            assert_eq!(all.len(), 1, "({a},{b}) -> {want}");
            // And the wrong output value must be infeasible.
            let mut bad = ExtendedProgram::with_vars(1, 2, 0, 1);
            bad.set_bounds(0, a, a);
            bad.set_bounds(1, b, b);
            bad.add_local_uniform(E::var(0).or(E::var(1)), Relation::Eq, 1 - want);
            let bad_result = rewrite(&bad).unwrap();
            let none = enumerate_feasible(&bad_result.program, &SolveConfig::default()).unwrap();
            assert!(none.is_empty());
        }
    }

    #[test]
    fn bool_indicators_at_positive_argument() {
        // bool_5 at a fixed argument of 2: the sign-partition binaries are
        // forced to (positive, zero, negative) = (1, 0, 0) and the bool
        // value is 1.
        let mut ep = ExtendedProgram::with_vars(1, 1, -3, 3);
        ep.set_bounds(0, 2, 2);
        ep.add_local_uniform(E::bool_m(5, E::var(0)), Relation::Eq, 1);
        let result = rewrite(&ep).unwrap();
        let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        // Columns: declared x, then vp, v0, vm, then the two row slacks.
        assert_eq!(all[0][0], 2);
        assert_eq!(&all[0][1..4], &[1, 0, 0]);
    }

    #[test]
    fn sgn_result_at_zero_argument() {
        let mut ep = ExtendedProgram::with_vars(1, 1, -3, 3);
        ep.set_bounds(0, 0, 0);
        ep.add_local_uniform(E::sgn_m(5, E::var(0)), Relation::Eq, 0);
        let result = rewrite(&ep).unwrap();
        let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(&all[0][1..4], &[0, 1, 0]);
    }

    #[test]
    fn bool_and_sgn_share_the_partition() {
        let mut ep = ExtendedProgram::with_vars(1, 1, -4, 4);
        let d = E::var(0);
        ep.add_local_uniform(E::bool_m(4, d.clone()), Relation::Eq, 1);
        ep.add_local_uniform(E::sgn_m(4, d), Relation::Eq, 1);
        let result = rewrite(&ep).unwrap();
        // One shared triple: 1 declared + 3 binaries + 2 slacks.
        assert_eq!(result.program.t, 6);
    }

    #[test]
    fn global_inequality_gets_one_live_slack() {
        let mut ep = ExtendedProgram::with_vars(3, 1, 0, 2);
        ep.add_global(E::var(0), Relation::Le, 4);
        ep.set_weight(0, -1);
        let result = rewrite(&ep).unwrap();
        let p = &result.program;
        assert_eq!(p.r, 1);
        assert_eq!(p.t, 2);
        // Slack column bounds: live in brick 0, pinned to zero elsewhere.
        use crate::nfold::Bound;
        assert_eq!(p.lower[1], Bound::Finite(0));
        assert_eq!(p.upper[1], Bound::PosInf);
        for brick in 1..3 {
            assert_eq!(p.lower[brick * 2 + 1], Bound::Finite(0));
            assert_eq!(p.upper[brick * 2 + 1], Bound::Finite(0));
        }
        // Maximizing x under the cap hits exactly 4.
        assert!(matches!(
            p.solve().unwrap(),
            SolveOutcome::Optimal { value: -4, .. }
        ));
    }

    #[test]
    fn strict_global_inequality_excludes_equality() {
        let mut ep = ExtendedProgram::with_vars(2, 1, 0, 3);
        ep.add_global(E::var(0), Relation::Lt, 4);
        ep.set_weight(0, -1);
        let result = rewrite(&ep).unwrap();
        assert!(matches!(
            result.program.solve().unwrap(),
            SolveOutcome::Optimal { value: -3, .. }
        ));
    }

    #[test]
    fn permutation_block_feasible_set_is_all_permutations() {
        for m in 1..=4usize {
            let ep = gadgets::permutation_block(m);
            let result = rewrite(&ep).unwrap();
            let projected = feasible_projections(&result, m);
            let mut expected: Vec<Vec<i64>> = Vec::new();
            permutations(m as i64, &mut Vec::new(), &mut expected);
            expected.sort();
            assert_eq!(projected, expected, "m = {m}");
        }
    }

    fn permutations(m: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() as i64 == m {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=m {
            if !prefix.contains(&v) {
                prefix.push(v);
                permutations(m, prefix, out);
                prefix.pop();
            }
        }
    }

    #[test]
    fn accounting_invariants_on_permutation_block() {
        let ep = gadgets::permutation_block(3);
        let result = rewrite(&ep).unwrap();
        let acc = &result.accounting;
        assert_eq!(acc.r_out, acc.r_in);
        assert_eq!(acc.a_out, acc.a_in.max(acc.height));
        assert!(acc.t_out <= acc.t_in + 6 * acc.width);
        assert!(acc.s_out <= acc.s_in + 6 * acc.width);
        assert_eq!(acc.height, 3);
    }

    #[test]
    fn inversion_indicators_match_reference_examples() {
        // Reference (1,2): x = (2,1) inverts the pair, x = (1,2) does not.
        let (ep, pairs) = gadgets::inversion_indicators(2, &[1, 2]).unwrap();
        assert_eq!(pairs.len(), 1);
        let check = |x: &[i64], s: i64| {
            let mut asg = x.to_vec();
            asg.push(s);
            matches!(
                ep.eval(&[asg]).unwrap(),
                crate::extended::ExtendedEval::Defined { feasible: true, .. }
            )
        };
        assert!(check(&[2, 1], 1));
        assert!(!check(&[2, 1], 0));
        assert!(check(&[1, 2], 0));
        assert!(!check(&[1, 2], 1));

        // Reference (1,3,2) versus x = (1,2,3): only the pair (2,3) is
        // ordered oppositely.
        let (ep, pairs) = gadgets::inversion_indicators(3, &[1, 3, 2]).unwrap();
        let values = [0, 0, 1]; // pairs in order (0,1), (0,2), (1,2)
        assert_eq!(
            pairs.iter().map(|&(p, _)| p).collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
        let mut asg = vec![1, 2, 3];
        asg.extend_from_slice(&values);
        assert!(matches!(
            ep.eval(&[asg]).unwrap(),
            crate::extended::ExtendedEval::Defined { feasible: true, .. }
        ));
        // And the rewritten program agrees.
        let mut pinned = ep.clone();
        for (j, v) in [1i64, 2, 3].iter().enumerate() {
            pinned.set_bounds(j, *v, *v);
        }
        let pinned_result = rewrite(&pinned).unwrap();
        let all = enumerate_feasible(&pinned_result.program, &SolveConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        let s_cols: Vec<i64> = pairs.iter().map(|&(_, var)| all[0][var]).collect();
        assert_eq!(s_cols, vec![0, 0, 1]);
    }

    #[test]
    fn split_by_bit_follows_the_gate() {
        // x in [0,4], z = 1 keeps the value; z = 0 zeroes it.
        for (z, want) in [(1i64, 3i64), (0, 0)] {
            let mut ep = ExtendedProgram::with_vars(1, 2, 0, 4);
            ep.set_bounds(0, 3, 3);
            ep.set_bounds(1, z, z);
            let split = gadgets::split_by_bit(&mut ep, E::var(0), E::var(1), 0, 4);
            // Pin the split expression's value via a probe constraint.
            ep.add_local_uniform(split.expr.clone(), Relation::Eq, want);
            let result = rewrite(&ep).unwrap();
            let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
            assert_eq!(all.len(), 1, "z = {z}");
        }
    }

    #[test]
    fn split_by_bit_with_shifted_lower_bound() {
        // x in [-2, 2], x = -2, z = 0 gives a split value of 0 after the
        // normalizing substitution.
        let mut ep = ExtendedProgram::with_vars(1, 2, -2, 2);
        ep.set_bounds(0, -2, -2);
        ep.set_bounds(1, 0, 0);
        let split = gadgets::split_by_bit(&mut ep, E::var(0), E::var(1), -2, 2);
        ep.add_local_uniform(split.expr.clone(), Relation::Eq, 0);
        let result = rewrite(&ep).unwrap();
        let all = enumerate_feasible(&result.program, &SolveConfig::default()).unwrap();
        assert_eq!(all.len(), 1);
        // With z = 1 the split value equals x = -2.
        let mut ep2 = ExtendedProgram::with_vars(1, 2, -2, 2);
        ep2.set_bounds(0, -2, -2);
        ep2.set_bounds(1, 1, 1);
        let split2 = gadgets::split_by_bit(&mut ep2, E::var(0), E::var(1), -2, 2);
        ep2.add_local_uniform(split2.expr.clone(), Relation::Eq, -2);
        let result2 = rewrite(&ep2).unwrap();
        let all2 = enumerate_feasible(&result2.program, &SolveConfig::default()).unwrap();
        assert_eq!(all2.len(), 1);
    }

    #[test]
    fn objective_carries_over_to_standard_form() {
        let mut ep = ExtendedProgram::with_vars(2, 1, 0, 3);
        ep.set_brick_weight(0, 0, 2);
        ep.set_brick_weight(1, 0, -1);
        ep.add_global(E::var(0), Relation::Eq, 4);
        let result = rewrite(&ep).unwrap();
        // min 2a - b with a + b = 4: a = 1, b = 3 gives -1.
        assert_eq!(
            result.program.solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![1, 3],
                value: -1
            }
        );
    }
}
