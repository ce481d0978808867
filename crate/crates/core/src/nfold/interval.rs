//! Interval arithmetic over possibly-unbounded integer ranges, plus the row
//! propagation used to tighten variable bounds before enumeration.

use super::Bound;

/// An integer interval; `None` marks an unbounded side. Bounds kept in
/// `i128` so that intermediate sums cannot overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ival {
    pub lo: Option<i128>,
    pub hi: Option<i128>,
}

impl Ival {
    pub fn from_bounds(lo: Bound, hi: Bound) -> Self {
        Ival {
            lo: lo.finite().map(i128::from),
            hi: hi.finite().map(i128::from),
        }
    }

    pub fn point(v: i128) -> Self {
        Ival {
            lo: Some(v),
            hi: Some(v),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn fixed(&self) -> Option<i128> {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Some(l),
            _ => None,
        }
    }

    /// Number of integers in the interval; `None` when unbounded.
    pub fn size(&self) -> Option<i128> {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) => Some((h - l + 1).max(0)),
            _ => None,
        }
    }

    /// Interval of `c * x` for `x` in `self`.
    pub fn scaled(&self, c: i64) -> Self {
        let c = i128::from(c);
        if c == 0 {
            return Ival::point(0);
        }
        let (lo, hi) = if c > 0 {
            (self.lo.map(|v| v * c), self.hi.map(|v| v * c))
        } else {
            (self.hi.map(|v| v * c), self.lo.map(|v| v * c))
        };
        Ival { lo, hi }
    }

    pub fn add(&self, other: &Ival) -> Self {
        Ival {
            lo: match (self.lo, other.lo) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            hi: match (self.hi, other.hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn intersect(&self, other: &Ival) -> Self {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ival { lo, hi }
    }

    pub fn contains(&self, v: i128) -> bool {
        self.lo.is_none_or(|l| v >= l) && self.hi.is_none_or(|h| v <= h)
    }
}

/// Floor division for `i128` that rounds toward negative infinity.
fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

/// Solution interval for `c * x` in `[lo, hi]`, rounded to integers.
pub fn div_interval(range: Ival, c: i64) -> Ival {
    debug_assert!(c != 0);
    let c = i128::from(c);
    let (lo, hi) = if c > 0 {
        (range.lo, range.hi)
    } else {
        (range.hi, range.lo)
    };
    Ival {
        lo: lo.map(|v| div_ceil(v, c)),
        hi: hi.map(|v| div_floor(v, c)),
    }
}

/// A sparse equality row `sum coeff * var = rhs` over global coordinates.
#[derive(Debug, Clone)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub rhs: i128,
}

/// Tightens `ivals` against one equality row. Returns the set of variables
/// whose interval changed, or `None` when some interval became empty.
pub fn propagate_row(row: &Row, ivals: &mut [Ival]) -> Option<Vec<usize>> {
    if row.terms.is_empty() {
        return if row.rhs == 0 { Some(Vec::new()) } else { None };
    }
    // Componentwise sums with infinity counts so each term's residual can
    // be recovered exactly.
    let mut sum_lo: i128 = 0;
    let mut sum_hi: i128 = 0;
    let mut inf_lo = 0usize;
    let mut inf_hi = 0usize;
    let mut contribs = Vec::with_capacity(row.terms.len());
    for &(var, c) in &row.terms {
        let contrib = ivals[var].scaled(c);
        match contrib.lo {
            Some(v) => sum_lo += v,
            None => inf_lo += 1,
        }
        match contrib.hi {
            Some(v) => sum_hi += v,
            None => inf_hi += 1,
        }
        contribs.push(contrib);
    }
    let mut changed = Vec::new();
    for (idx, &(var, c)) in row.terms.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let contrib = contribs[idx];
        // Residual interval of the other terms.
        let res_lo = match contrib.lo {
            Some(v) if inf_lo == 0 => Some(sum_lo - v),
            None if inf_lo == 1 => Some(sum_lo),
            _ => None,
        };
        let res_hi = match contrib.hi {
            Some(v) if inf_hi == 0 => Some(sum_hi - v),
            None if inf_hi == 1 => Some(sum_hi),
            _ => None,
        };
        // c * x must lie in rhs - residual.
        let target = Ival {
            lo: res_hi.map(|v| row.rhs - v),
            hi: res_lo.map(|v| row.rhs - v),
        };
        let allowed = div_interval(target, c);
        let tightened = ivals[var].intersect(&allowed);
        if tightened != ivals[var] {
            ivals[var] = tightened;
            if tightened.is_empty() {
                return None;
            }
            changed.push(var);
        }
    }
    Some(changed)
}

/// Runs row propagation to a fixpoint (with a round cap so pathological
/// slow convergence cannot hang the solver). Returns `false` when a
/// variable's interval became empty.
pub fn propagate_fixpoint(
    rows: &[Row],
    var_rows: &[Vec<usize>],
    ivals: &mut [Ival],
    max_rounds: usize,
) -> bool {
    let mut queued: Vec<bool> = vec![true; rows.len()];
    let mut queue: Vec<usize> = (0..rows.len()).collect();
    let mut rounds = 0usize;
    while let Some(row_idx) = queue.pop() {
        queued[row_idx] = false;
        match propagate_row(&rows[row_idx], ivals) {
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

/// Maps each variable to the rows mentioning it.
pub fn index_var_rows(rows: &[Row], num_vars: usize) -> Vec<Vec<usize>> {
    let mut var_rows = vec![Vec::new(); num_vars];
    for (idx, row) in rows.iter().enumerate() {
        for &(var, c) in &row.terms {
            if c != 0 {
                var_rows[var].push(idx);
            }
        }
    }
    var_rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_row_empties_box() {
        // 2x = 1 over x in [0, 3] has no integer solution.
        let rows = vec![Row {
            terms: vec![(0, 2)],
            rhs: 1,
        }];
        let mut ivals = vec![Ival {
            lo: Some(0),
            hi: Some(3),
        }];
        let var_rows = index_var_rows(&rows, 1);
        assert!(!propagate_fixpoint(&rows, &var_rows, &mut ivals, 100));
    }

    #[test]
    fn propagation_bounds_slack_through_finite_vars() {
        // x - y + s = 0 with x, y in [0, 4] forces s into [-4, 4].
        let rows = vec![Row {
            terms: vec![(0, 1), (1, -1), (2, 1)],
            rhs: 0,
        }];
        let mut ivals = vec![
            Ival {
                lo: Some(0),
                hi: Some(4),
            },
            Ival {
                lo: Some(0),
                hi: Some(4),
            },
            Ival {
                lo: Some(0),
                hi: None,
            },
        ];
        let var_rows = index_var_rows(&rows, 3);
        assert!(propagate_fixpoint(&rows, &var_rows, &mut ivals, 100));
        assert_eq!(ivals[2].hi, Some(4));
    }

    #[test]
    fn div_interval_rounds_inward() {
        // 3x in [-4, 7] means x in [-1, 2].
        let got = div_interval(
            Ival {
                lo: Some(-4),
                hi: Some(7),
            },
            3,
        );
        assert_eq!(got, Ival { lo: Some(-1), hi: Some(2) });
    }
}
