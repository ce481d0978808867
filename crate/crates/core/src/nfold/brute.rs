//! Full-box enumeration, the independent oracle against which the real
//! solver is cross-checked. Deliberately shares nothing with the brick
//! decomposition: it walks the whole box and calls `evaluate` per point.

use super::{Bound, SolveConfig, SolveError, SolveOutcome, StandardNFoldProgram};

pub fn brute_force_solve(
    p: &StandardNFoldProgram,
    cfg: &SolveConfig,
) -> Result<SolveOutcome, SolveError> {
    let diags = p.validate();
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    let nt = p.n * p.t;
    let mut lo = Vec::with_capacity(nt);
    let mut hi = Vec::with_capacity(nt);
    for j in 0..nt {
        match (p.lower[j], p.upper[j]) {
            (Bound::Finite(l), Bound::Finite(u)) => {
                lo.push(l);
                hi.push(u);
            }
            _ => {
                return Err(SolveError::Input(format!(
                    "brute force requires finite bounds, coordinate {j} is unbounded"
                )))
            }
        }
    }
    let mut volume: u128 = 1;
    for j in 0..nt {
        volume = volume.saturating_mul((hi[j] - lo[j] + 1) as u128);
        if volume > u128::from(cfg.brick_table_cap) {
            return Err(SolveError::Resource {
                budget: "enumeration box volume",
                limit: cfg.brick_table_cap,
            });
        }
    }

    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut x = lo.clone();
    if nt == 0 {
        let ev = p.evaluate(&x)?;
        if ev.feasible {
            return Ok(SolveOutcome::Optimal {
                assignment: x,
                value: ev.value,
            });
        }
        return Ok(SolveOutcome::Infeasible);
    }
    // Odometer walk; the rightmost coordinate moves fastest, so points come
    // out in lexicographic order and the first optimum found is the
    // lexicographically smallest one.
    'outer: loop {
        let ev = p.evaluate(&x)?;
        if ev.feasible && best.as_ref().map_or(true, |(v, _)| ev.value < *v) {
            best = Some((ev.value, x.clone()));
        }
        let mut j = nt;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            if x[j] < hi[j] {
                x[j] += 1;
                for k in j + 1..nt {
                    x[k] = lo[k];
                }
                break;
            }
        }
    }
    Ok(match best {
        Some((value, assignment)) => SolveOutcome::Optimal { assignment, value },
        None => SolveOutcome::Infeasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    #[test]
    fn matches_by_hand_brick_example() {
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 2,
            d: Matrix::from_rows(&[vec![1, 2]]),
            a: Matrix::zeros(0, 2),
            b: vec![4],
            lower: vec![Bound::Finite(0), Bound::Finite(0)],
            upper: vec![Bound::Finite(2), Bound::Finite(2)],
            weights: vec![1, 1],
            scale: None,
        };
        assert_eq!(
            p.brute_force_solve().unwrap(),
            SolveOutcome::Optimal {
                assignment: vec![0, 2],
                value: 2
            }
        );
    }

    #[test]
    fn rejects_infinite_bounds() {
        let p = StandardNFoldProgram {
            n: 1,
            r: 0,
            s: 0,
            t: 1,
            d: Matrix::zeros(0, 1),
            a: Matrix::zeros(0, 1),
            b: vec![],
            lower: vec![Bound::Finite(0)],
            upper: vec![Bound::PosInf],
            weights: vec![1],
            scale: None,
        };
        assert!(matches!(
            p.brute_force_solve(),
            Err(SolveError::Input(_))
        ));
    }

    #[test]
    fn empty_region_is_infeasible() {
        let p = StandardNFoldProgram {
            n: 1,
            r: 1,
            s: 0,
            t: 1,
            d: Matrix::from_rows(&[vec![2]]),
            a: Matrix::zeros(0, 1),
            b: vec![1],
            lower: vec![Bound::Finite(0)],
            upper: vec![Bound::Finite(3)],
            weights: vec![1],
            scale: None,
        };
        assert_eq!(p.brute_force_solve().unwrap(), SolveOutcome::Infeasible);
    }
}
