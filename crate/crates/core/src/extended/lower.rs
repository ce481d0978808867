//! Lowering of expression trees into a hash-consed DAG of primitive
//! operations. Comparison forms are desugared here, so width accounting,
//! validity certification, reference evaluation and rewriting all agree on
//! what the primitive operations are.
//!
//! Desugaring follows the comparison bullets of the rewriting proof:
//! `bool_m(f = g)` becomes `not(bool_m(f - g))`, `bool_m(f > g)` becomes
//! `not(bool_2(sgn_m(f - g) - 1))`, `bool_m(f >= g)` is the disjunction of
//! the two, and `<`/`<=` swap operands.

use std::collections::HashMap;

use super::{
    ConstraintRhs, ExtendedError, ExtendedEval, ExtendedProgram, Relation, UniformExpr,
};

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Var(usize),
    Const(i64),
    /// Index into the brick-constant pool.
    BrickConst(usize),
    Lin(Vec<(i64, NodeId)>),
    Not(NodeId),
    Or(NodeId, NodeId),
    Bool(i64, NodeId),
    Sgn(i64, NodeId),
}

#[derive(Debug)]
pub(crate) struct Lowered {
    pub nodes: Vec<Node>,
    memo: HashMap<Node, NodeId>,
    pub brick_consts: Vec<Vec<i64>>,
    /// Lowered root per constraint, in constraint order.
    roots: Vec<NodeId>,
    /// Constraints whose relation is not equality.
    inequalities: usize,
}

/// Certified per-node, per-brick value intervals.
pub(crate) struct Intervals {
    /// `ivals[node][brick] = (lo, hi)`.
    ivals: Vec<Vec<(i64, i64)>>,
}

impl Intervals {
    pub fn node_interval(&self, node: NodeId, brick: usize) -> (i64, i64) {
        self.ivals[node][brick]
    }
}

impl Lowered {
    pub fn build(ep: &ExtendedProgram) -> Result<Lowered, ExtendedError> {
        let mut low = Lowered {
            nodes: Vec::new(),
            memo: HashMap::new(),
            brick_consts: Vec::new(),
            roots: Vec::new(),
            inequalities: ep
                .constraints()
                .iter()
                .filter(|c| c.relation != Relation::Eq)
                .count(),
        };
        for c in ep.constraints() {
            let root = low.lower_expr(&c.lhs, ep)?;
            low.roots.push(root);
        }
        Ok(low)
    }

    pub fn constraint_roots(&self) -> &[NodeId] {
        &self.roots
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.memo.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.memo.insert(node, id);
        id
    }

    fn intern_brick_const(&mut self, vals: &[i64]) -> NodeId {
        let idx = match self
            .brick_consts
            .iter()
            .position(|existing| existing == vals)
        {
            Some(idx) => idx,
            None => {
                self.brick_consts.push(vals.to_vec());
                self.brick_consts.len() - 1
            }
        };
        self.intern(Node::BrickConst(idx))
    }

    fn lower_expr(
        &mut self,
        expr: &UniformExpr,
        ep: &ExtendedProgram,
    ) -> Result<NodeId, ExtendedError> {
        match expr {
            UniformExpr::Var(j) => {
                if *j >= ep.t() {
                    return Err(ExtendedError::Input(format!(
                        "variable x{j} out of range (t = {})",
                        ep.t()
                    )));
                }
                Ok(self.intern(Node::Var(*j)))
            }
            UniformExpr::Const(v) => Ok(self.intern(Node::Const(*v))),
            UniformExpr::BrickConst(vals) => {
                if vals.len() != ep.n() {
                    return Err(ExtendedError::Input(format!(
                        "brick constant has {} entries, expected {}",
                        vals.len(),
                        ep.n()
                    )));
                }
                Ok(self.intern_brick_const(vals))
            }
            UniformExpr::LinComb(terms) => {
                let mut lowered = Vec::with_capacity(terms.len());
                for (c, e) in terms {
                    lowered.push((*c, self.lower_expr(e, ep)?));
                }
                Ok(self.intern(Node::Lin(lowered)))
            }
            UniformExpr::Not(e) => {
                let id = self.lower_expr(e, ep)?;
                Ok(self.intern(Node::Not(id)))
            }
            UniformExpr::Or(e, f) => {
                let a = self.lower_expr(e, ep)?;
                let b = self.lower_expr(f, ep)?;
                Ok(self.intern(Node::Or(a, b)))
            }
            UniformExpr::BoolM(m, e) => match e.as_ref() {
                UniformExpr::Cmp(rel, f, g) => self.lower_cmp(*m, *rel, f, g, ep),
                _ => {
                    let id = self.lower_expr(e, ep)?;
                    Ok(self.intern(Node::Bool(*m, id)))
                }
            },
            UniformExpr::SgnM(m, e) => {
                if matches!(e.as_ref(), UniformExpr::Cmp(..)) {
                    return Err(ExtendedError::Input(
                        "comparisons are not defined under sgn_m".into(),
                    ));
                }
                let id = self.lower_expr(e, ep)?;
                Ok(self.intern(Node::Sgn(*m, id)))
            }
            UniformExpr::Cmp(..) => Err(ExtendedError::Input(
                "bare comparison outside bool_m has no arithmetic value".into(),
            )),
        }
    }

    /// `bool_m(f <rel> g)`, desugared to primitive operations.
    fn lower_cmp(
        &mut self,
        m: i64,
        rel: Relation,
        f: &UniformExpr,
        g: &UniformExpr,
        ep: &ExtendedProgram,
    ) -> Result<NodeId, ExtendedError> {
        match rel {
            Relation::Lt => self.lower_cmp(m, Relation::Gt, g, f, ep),
            Relation::Le => self.lower_cmp(m, Relation::Ge, g, f, ep),
            Relation::Eq => {
                let diff = self.lower_diff(f, g, ep)?;
                let b = self.intern(Node::Bool(m, diff));
                Ok(self.intern(Node::Not(b)))
            }
            Relation::Gt => {
                let diff = self.lower_diff(f, g, ep)?;
                let sgn = self.intern(Node::Sgn(m, diff));
                let neg_one = self.memo_const(-1);
                let shifted = self.intern(Node::Lin(vec![(1, sgn), (1, neg_one)]));
                let b = self.intern(Node::Bool(2, shifted));
                Ok(self.intern(Node::Not(b)))
            }
            Relation::Ge => {
                let gt = self.lower_cmp(m, Relation::Gt, f, g, ep)?;
                let eq = self.lower_cmp(m, Relation::Eq, f, g, ep)?;
                Ok(self.intern(Node::Or(gt, eq)))
            }
        }
    }

    fn memo_const(&mut self, v: i64) -> NodeId {
        self.intern(Node::Const(v))
    }

    fn lower_diff(
        &mut self,
        f: &UniformExpr,
        g: &UniformExpr,
        ep: &ExtendedProgram,
    ) -> Result<NodeId, ExtendedError> {
        let a = self.lower_expr(f, ep)?;
        let b = self.lower_expr(g, ep)?;
        Ok(self.intern(Node::Lin(vec![(1, a), (-1, b)])))
    }

    /// Extended width: distinct primitive operations plus inequality
    /// constraints.
    pub fn width(&self) -> usize {
        let ops = self
            .nodes
            .iter()
            .filter(|n| matches!(n, Node::Not(_) | Node::Or(..) | Node::Bool(..) | Node::Sgn(..)))
            .count();
        ops + self.inequalities
    }

    pub fn height(&self) -> i64 {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Bool(m, _) | Node::Sgn(m, _) => Some(*m),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest absolute linear coefficient (1 when any variable is
    /// referenced at all, since a bare variable is a unit coefficient).
    pub fn coefficient_bound(&self) -> i64 {
        let mut best = 0i64;
        for node in &self.nodes {
            match node {
                Node::Var(_) => best = best.max(1),
                Node::Lin(terms) => {
                    for (c, _) in terms {
                        best = best.max(c.abs());
                    }
                }
                _ => {}
            }
        }
        best
    }

    /// Renders a node for error messages.
    pub fn render(&self, id: NodeId) -> String {
        match &self.nodes[id] {
            Node::Var(j) => format!("x{j}"),
            Node::Const(v) => v.to_string(),
            Node::BrickConst(idx) => {
                let vals = &self.brick_consts[*idx];
                let body = vals
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("(bc {body})")
            }
            Node::Lin(terms) => {
                let body = terms
                    .iter()
                    .map(|(c, e)| format!("({c} {})", self.render(*e)))
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("(lin {body})")
            }
            Node::Not(e) => format!("(not {})", self.render(*e)),
            Node::Or(a, b) => format!("(or {} {})", self.render(*a), self.render(*b)),
            Node::Bool(m, e) => format!("(bool {m} {})", self.render(*e)),
            Node::Sgn(m, e) => format!("(sgn {m} {})", self.render(*e)),
        }
    }

    /// Interval analysis; errors when an operation can leave its domain.
    pub fn certify(&self, ep: &ExtendedProgram) -> Result<Intervals, ExtendedError> {
        let n = ep.n();
        let mut ivals: Vec<Vec<(i64, i64)>> = Vec::with_capacity(self.nodes.len());
        for (id, node) in self.nodes.iter().enumerate() {
            let mut per_brick = Vec::with_capacity(n);
            for brick in 0..n {
                let (lo, hi) = match node {
                    Node::Var(j) => ep.bounds(brick, *j),
                    Node::Const(v) => (*v, *v),
                    Node::BrickConst(idx) => {
                        let v = self.brick_consts[*idx][brick];
                        (v, v)
                    }
                    Node::Lin(terms) => {
                        let mut lo = 0i128;
                        let mut hi = 0i128;
                        for (c, child) in terms {
                            let (clo, chi) = ivals[*child][brick];
                            let (clo, chi) = (i128::from(clo), i128::from(chi));
                            let c = i128::from(*c);
                            if c >= 0 {
                                lo += c * clo;
                                hi += c * chi;
                            } else {
                                lo += c * chi;
                                hi += c * clo;
                            }
                        }
                        (
                            i64::try_from(lo)
                                .map_err(|_| ExtendedError::Overflow("interval analysis"))?,
                            i64::try_from(hi)
                                .map_err(|_| ExtendedError::Overflow("interval analysis"))?,
                        )
                    }
                    Node::Not(e) => {
                        let (lo, hi) = ivals[*e][brick];
                        self.require_binary(*e, lo, hi)?;
                        (1 - hi, 1 - lo)
                    }
                    Node::Or(a, b) => {
                        let (alo, ahi) = ivals[*a][brick];
                        let (blo, bhi) = ivals[*b][brick];
                        self.require_binary(*a, alo, ahi)?;
                        self.require_binary(*b, blo, bhi)?;
                        (
                            if alo == 0 && blo == 0 { 0 } else { 1 },
                            if ahi == 0 && bhi == 0 { 0 } else { 1 },
                        )
                    }
                    Node::Bool(m, e) => {
                        let (lo, hi) = ivals[*e][brick];
                        self.require_height(id, *e, *m, lo, hi)?;
                        (
                            if lo <= 0 && hi >= 0 { 0 } else { 1 },
                            if lo == 0 && hi == 0 { 0 } else { 1 },
                        )
                    }
                    Node::Sgn(m, e) => {
                        let (lo, hi) = ivals[*e][brick];
                        self.require_height(id, *e, *m, lo, hi)?;
                        (lo.signum(), hi.signum())
                    }
                };
                per_brick.push((lo, hi));
            }
            ivals.push(per_brick);
        }
        Ok(Intervals { ivals })
    }

    fn require_binary(&self, node: NodeId, lo: i64, hi: i64) -> Result<(), ExtendedError> {
        if lo < 0 || hi > 1 {
            return Err(ExtendedError::Invalid {
                expr: self.render(node),
                reason: format!("operand of a logical operation has interval [{lo}, {hi}], not binary"),
            });
        }
        Ok(())
    }

    fn require_height(
        &self,
        op: NodeId,
        arg: NodeId,
        m: i64,
        lo: i64,
        hi: i64,
    ) -> Result<(), ExtendedError> {
        let _ = arg;
        if m < 1 {
            return Err(ExtendedError::Invalid {
                expr: self.render(op),
                reason: format!("height {m} is not positive"),
            });
        }
        if lo < -m || hi > m {
            return Err(ExtendedError::Invalid {
                expr: self.render(op),
                reason: format!("argument interval [{lo}, {hi}] escapes [-{m}, {m}]"),
            });
        }
        Ok(())
    }

    /// Definitional evaluation on one declared assignment.
    pub fn eval(
        &self,
        ep: &ExtendedProgram,
        assignment: &[Vec<i64>],
    ) -> Result<ExtendedEval, ExtendedError> {
        let n = ep.n();
        // values[node][brick]; None marks undefined.
        let mut values: Vec<Vec<Option<i64>>> = Vec::with_capacity(self.nodes.len());
        let mut any_undefined = false;
        for node in &self.nodes {
            let mut per_brick = Vec::with_capacity(n);
            for brick in 0..n {
                let v: Option<i64> = match node {
                    Node::Var(j) => Some(assignment[brick][*j]),
                    Node::Const(v) => Some(*v),
                    Node::BrickConst(idx) => Some(self.brick_consts[*idx][brick]),
                    Node::Lin(terms) => {
                        let mut acc: Option<i128> = Some(0);
                        for (c, child) in terms {
                            acc = match (acc, values[*child][brick]) {
                                (Some(a), Some(v)) => Some(a + i128::from(*c) * i128::from(v)),
                                _ => None,
                            };
                        }
                        match acc {
                            Some(a) => Some(
                                i64::try_from(a)
                                    .map_err(|_| ExtendedError::Overflow("evaluation"))?,
                            ),
                            None => None,
                        }
                    }
                    Node::Not(e) => match values[*e][brick] {
                        Some(0) => Some(1),
                        Some(1) => Some(0),
                        _ => None,
                    },
                    Node::Or(a, b) => match (values[*a][brick], values[*b][brick]) {
                        (Some(x @ (0 | 1)), Some(y @ (0 | 1))) => Some((x | y) & 1),
                        _ => None,
                    },
                    Node::Bool(m, e) => match values[*e][brick] {
                        Some(0) => Some(0),
                        Some(v) if v.abs() <= *m => Some(1),
                        _ => None,
                    },
                    Node::Sgn(m, e) => match values[*e][brick] {
                        Some(v) if v.abs() <= *m => Some(v.signum()),
                        _ => None,
                    },
                };
                if v.is_none() {
                    any_undefined = true;
                }
                per_brick.push(v);
            }
            values.push(per_brick);
        }
        if any_undefined {
            return Ok(ExtendedEval::Undefined);
        }

        let mut feasible = true;
        for (c, &root) in ep.constraints().iter().zip(&self.roots) {
            match &c.rhs {
                ConstraintRhs::Local(rhs) => {
                    for brick in 0..n {
                        let lhs = values[root][brick].expect("defined");
                        if !c.relation.holds(lhs, rhs[brick]) {
                            feasible = false;
                        }
                    }
                }
                ConstraintRhs::Global(rhs) => {
                    let mut sum = 0i128;
                    for brick in 0..n {
                        sum += i128::from(values[root][brick].expect("defined"));
                    }
                    let sum =
                        i64::try_from(sum).map_err(|_| ExtendedError::Overflow("evaluation"))?;
                    if !c.relation.holds(sum, *rhs) {
                        feasible = false;
                    }
                }
            }
        }

        let mut value = 0i128;
        for brick in 0..n {
            for j in 0..ep.t() {
                value += i128::from(ep.weight(brick, j)) * i128::from(assignment[brick][j]);
            }
        }
        let value = i64::try_from(value).map_err(|_| ExtendedError::Overflow("evaluation"))?;
        Ok(ExtendedEval::Defined { feasible, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::UniformExpr as E;

    #[test]
    fn bool_definitional_values() {
        let mut ep = ExtendedProgram::with_vars(1, 1, -5, 5);
        ep.add_local_uniform(E::bool_m(3, E::var(0)), Relation::Eq, 0);
        // bool_3(0) = 0 inside the constraint, so x = 0 is feasible.
        assert_eq!(
            ep.eval(&[vec![0]]).unwrap(),
            ExtendedEval::Defined {
                feasible: true,
                value: 0
            }
        );
        // bool_3(5) is undefined.
        assert_eq!(ep.eval(&[vec![5]]).unwrap(), ExtendedEval::Undefined);
    }

    #[test]
    fn sgn_definitional_values() {
        let mut ep = ExtendedProgram::with_vars(1, 1, -5, 5);
        ep.add_local_uniform(E::sgn_m(5, E::var(0)), Relation::Eq, -1);
        assert_eq!(
            ep.eval(&[vec![-4]]).unwrap(),
            ExtendedEval::Defined {
                feasible: true,
                value: 0
            }
        );
        assert_eq!(
            ep.eval(&[vec![2]]).unwrap(),
            ExtendedEval::Defined {
                feasible: false,
                value: 0
            }
        );
    }

    #[test]
    fn certify_flags_escaping_height() {
        let mut ep = ExtendedProgram::with_vars(1, 1, -3, 3);
        ep.add_local_uniform(E::bool_m(5, E::var(0)), Relation::Eq, 1);
        assert!(ep.certify_validity().is_ok());

        let mut bad = ExtendedProgram::with_vars(1, 1, -3, 3);
        bad.add_local_uniform(E::bool_m(2, E::var(0)), Relation::Eq, 1);
        assert!(matches!(
            bad.certify_validity(),
            Err(ExtendedError::Invalid { .. })
        ));
    }

    #[test]
    fn certify_flags_non_binary_or_operand() {
        let mut ep = ExtendedProgram::with_vars(1, 2, 0, 2);
        ep.set_bounds(1, 0, 1);
        ep.add_local_uniform(E::var(0).or(E::var(1)), Relation::Eq, 1);
        assert!(matches!(
            ep.certify_validity(),
            Err(ExtendedError::Invalid { .. })
        ));
    }

    #[test]
    fn undefined_wins_over_feasibility() {
        // A valid-looking constraint whose bool argument exceeds m at the
        // evaluated point.
        let mut ep = ExtendedProgram::with_vars(1, 1, -9, 9);
        ep.add_local_uniform(E::bool_m(2, E::var(0)), Relation::Eq, 1);
        assert_eq!(ep.eval(&[vec![7]]).unwrap(), ExtendedEval::Undefined);
    }
}
