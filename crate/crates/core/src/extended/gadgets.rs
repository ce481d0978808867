//! Reusable constraint bundles: permutation blocks, inversion indicators
//! against a reference order, and conditional variable splitting.

use super::{ExtendedError, ExtendedProgram, Relation, UniformExpr};

/// Imposes "the given variables form a permutation of 1..m" on every
/// brick: box bounds, the fixed-sum row, and pairwise disequalities.
pub fn add_permutation_constraints(ep: &mut ExtendedProgram, vars: &[usize]) {
    let m = vars.len() as i64;
    for &v in vars {
        ep.set_bounds(v, 1, m);
    }
    let sum = UniformExpr::lin(vars.iter().map(|&v| (1, UniformExpr::var(v))).collect());
    ep.add_local_uniform(sum, Relation::Eq, m * (m + 1) / 2);
    for (idx, &vj) in vars.iter().enumerate() {
        for &vk in &vars[idx + 1..] {
            let diff = UniformExpr::var(vj).sub(UniformExpr::var(vk));
            ep.add_local_uniform(UniformExpr::bool_m(m, diff), Relation::Eq, 1);
        }
    }
}

/// A one-brick program over `m` fresh variables whose feasible points are
/// exactly the permutations of 1..m.
pub fn permutation_block(m: usize) -> ExtendedProgram {
    assert!(m >= 1);
    let mut ep = ExtendedProgram::with_vars(1, m, 1, m as i64);
    let vars: Vec<usize> = (0..m).collect();
    add_permutation_constraints(&mut ep, &vars);
    ep
}

/// Adds, for every pair `j < k` of the given permutation variables, a
/// binary indicator that is 1 exactly when the pair is ordered oppositely
/// to the brick's reference permutation. Returns `((j, k), var)` in pair
/// order.
pub fn add_inversion_indicators(
    ep: &mut ExtendedProgram,
    vars: &[usize],
    references: &[Vec<i64>],
) -> Result<Vec<((usize, usize), usize)>, ExtendedError> {
    let m = vars.len();
    if references.len() != ep.n() {
        return Err(ExtendedError::Input(format!(
            "need one reference per brick ({} given, {} bricks)",
            references.len(),
            ep.n()
        )));
    }
    for r in references {
        check_permutation(r, m)?;
    }
    let mut out = Vec::new();
    for j in 0..m {
        for k in j + 1..m {
            let s = ep.add_var(0, 1);
            // sgn_m(o_k - o_j) is a constant of the brick.
            let reference_sign: Vec<i64> = references
                .iter()
                .map(|r| (r[k] - r[j]).signum())
                .collect();
            let sgn = UniformExpr::sgn_m(
                m as i64,
                UniformExpr::var(vars[j]).sub(UniformExpr::var(vars[k])),
            );
            let inverted = UniformExpr::bool_cmp(
                2,
                Relation::Eq,
                sgn,
                UniformExpr::brick_const(reference_sign),
            );
            ep.add_local_uniform(UniformExpr::var(s).sub(inverted), Relation::Eq, 0);
            out.push(((j, k), s));
        }
    }
    Ok(out)
}

/// One-brick bundle per the module-level operation: permutation block plus
/// indicators against a single reference permutation.
pub fn inversion_indicators(
    m: usize,
    reference: &[i64],
) -> Result<(ExtendedProgram, Vec<((usize, usize), usize)>), ExtendedError> {
    check_permutation(reference, m)?;
    let mut ep = permutation_block(m);
    let vars: Vec<usize> = (0..m).collect();
    let pairs = add_inversion_indicators(&mut ep, &vars, &[reference.to_vec()])?;
    Ok((ep, pairs))
}

fn check_permutation(reference: &[i64], m: usize) -> Result<(), ExtendedError> {
    let mut seen = vec![false; m];
    if reference.len() != m {
        return Err(ExtendedError::Input(format!(
            "reference has length {}, expected {m}",
            reference.len()
        )));
    }
    for &v in reference {
        if v < 1 || v > m as i64 || seen[(v - 1) as usize] {
            return Err(ExtendedError::Input(format!(
                "reference is not a permutation of 1..{m}"
            )));
        }
        seen[(v - 1) as usize] = true;
    }
    Ok(())
}

/// Handle returned by [`split_by_bit`].
#[derive(Debug, Clone)]
pub struct SplitVar {
    /// Expression equal to `x` when `z = 1` and to 0 when `z = 0`.
    pub expr: UniformExpr,
    /// The shifted copy variable (value `x - lo` when `z = 1`).
    pub shifted: usize,
    /// Its complement (value `x - lo` when `z = 0`).
    pub complement: usize,
}

/// Conditional copy of `x` gated by a binary `z`: one auxiliary variable
/// beyond the copy and three locally uniform constraints of height
/// `hi - lo`. `lo`/`hi` must bound `x` in every brick.
pub fn split_by_bit(
    ep: &mut ExtendedProgram,
    x: UniformExpr,
    z: UniformExpr,
    lo: i64,
    hi: i64,
) -> SplitVar {
    assert!(lo <= hi, "split_by_bit needs a nonempty range");
    let range = hi - lo;
    let shifted = ep.add_var(0, range);
    let complement = ep.add_var(0, range);
    // shifted <= range * z
    ep.add_local_uniform(
        UniformExpr::lin(vec![(1, UniformExpr::var(shifted)), (-range, z.clone())]),
        Relation::Le,
        0,
    );
    // complement <= range * (1 - z)
    ep.add_local_uniform(
        UniformExpr::lin(vec![(1, UniformExpr::var(complement)), (range, z.clone())]),
        Relation::Le,
        range,
    );
    // shifted + complement = x - lo
    ep.add_local_uniform(
        UniformExpr::lin(vec![
            (1, UniformExpr::var(shifted)),
            (1, UniformExpr::var(complement)),
            (-1, x),
        ]),
        Relation::Eq,
        -lo,
    );
    let expr = if lo == 0 {
        UniformExpr::var(shifted)
    } else {
        UniformExpr::lin(vec![(1, UniformExpr::var(shifted)), (lo, z)])
    };
    SplitVar {
        expr,
        shifted,
        complement,
    }
}
