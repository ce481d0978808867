//! S-expression dump of extended programs, one constraint per line.
//! Printing then parsing reproduces the program exactly.

use super::{ConstraintRhs, ExtendedProgram, Relation, UniformExpr};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("extended text error: {0}")]
pub struct ExtendedTextError(pub String);

pub fn format_extended(ep: &ExtendedProgram) -> String {
    let mut out = String::new();
    out.push_str(&format!("extended {} {}\n", ep.n(), ep.t()));
    let flat = |f: &dyn Fn(usize, usize) -> i64| -> String {
        let mut vals = Vec::with_capacity(ep.n() * ep.t());
        for i in 0..ep.n() {
            for j in 0..ep.t() {
                vals.push(f(i, j).to_string());
            }
        }
        vals.join(" ")
    };
    out.push_str(&format!("lower {}\n", flat(&|i, j| ep.bounds(i, j).0)));
    out.push_str(&format!("upper {}\n", flat(&|i, j| ep.bounds(i, j).1)));
    out.push_str(&format!("weights {}\n", flat(&|i, j| ep.weight(i, j))));
    for c in ep.constraints() {
        match &c.rhs {
            ConstraintRhs::Local(rhs) => {
                let rhs = rhs
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!(
                    "local {} {} : {}\n",
                    c.relation.token(),
                    rhs,
                    format_expr(&c.lhs)
                ));
            }
            ConstraintRhs::Global(rhs) => {
                out.push_str(&format!(
                    "global {} {} : {}\n",
                    c.relation.token(),
                    rhs,
                    format_expr(&c.lhs)
                ));
            }
        }
    }
    out
}

pub fn format_expr(e: &UniformExpr) -> String {
    match e {
        UniformExpr::Var(j) => format!("x{j}"),
        UniformExpr::Const(v) => v.to_string(),
        UniformExpr::BrickConst(vals) => {
            let body = vals
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            format!("(bc {body})")
        }
        UniformExpr::LinComb(terms) => {
            let body = terms
                .iter()
                .map(|(c, e)| format!("({c} {})", format_expr(e)))
                .collect::<Vec<_>>()
                .join(" ");
            format!("(lin {body})")
        }
        UniformExpr::Not(e) => format!("(not {})", format_expr(e)),
        UniformExpr::Or(a, b) => format!("(or {} {})", format_expr(a), format_expr(b)),
        UniformExpr::BoolM(m, e) => format!("(bool {m} {})", format_expr(e)),
        UniformExpr::SgnM(m, e) => format!("(sgn {m} {})", format_expr(e)),
        UniformExpr::Cmp(rel, f, g) => format!(
            "(cmp {} {} {})",
            rel.token(),
            format_expr(f),
            format_expr(g)
        ),
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn parse_relation(tok: &str) -> Result<Relation, ExtendedTextError> {
    Ok(match tok {
        "=" => Relation::Eq,
        "<" => Relation::Lt,
        "<=" => Relation::Le,
        ">" => Relation::Gt,
        ">=" => Relation::Ge,
        _ => return Err(ExtendedTextError(format!("unknown relation `{tok}`"))),
    })
}

struct Tokens {
    toks: Vec<String>,
    pos: usize,
}

impl Tokens {
    fn next(&mut self) -> Result<&str, ExtendedTextError> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| ExtendedTextError("unexpected end of expression".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: &str) -> Result<(), ExtendedTextError> {
        let t = self.next()?;
        if t != tok {
            return Err(ExtendedTextError(format!("expected `{tok}`, found `{t}`")));
        }
        Ok(())
    }

    fn peek_is(&self, tok: &str) -> bool {
        self.toks.get(self.pos).is_some_and(|t| t == tok)
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }
}

pub fn parse_expr_str(s: &str) -> Result<UniformExpr, ExtendedTextError> {
    let mut toks = Tokens {
        toks: tokenize(s),
        pos: 0,
    };
    let e = parse_expr(&mut toks)?;
    if !toks.done() {
        return Err(ExtendedTextError("trailing tokens after expression".into()));
    }
    Ok(e)
}

fn parse_expr(toks: &mut Tokens) -> Result<UniformExpr, ExtendedTextError> {
    let tok = toks.next()?.to_string();
    if tok != "(" {
        if let Some(idx) = tok.strip_prefix('x') {
            if let Ok(j) = idx.parse::<usize>() {
                return Ok(UniformExpr::Var(j));
            }
        }
        return tok
            .parse::<i64>()
            .map(UniformExpr::Const)
            .map_err(|_| ExtendedTextError(format!("bad atom `{tok}`")));
    }
    let head = toks.next()?.to_string();
    let expr = match head.as_str() {
        "bc" => {
            let mut vals = Vec::new();
            while !toks.peek_is(")") {
                let t = toks.next()?;
                vals.push(
                    t.parse::<i64>()
                        .map_err(|_| ExtendedTextError(format!("bad brick constant `{t}`")))?,
                );
            }
            UniformExpr::BrickConst(vals)
        }
        "lin" => {
            let mut terms = Vec::new();
            while !toks.peek_is(")") {
                toks.expect("(")?;
                let c = toks.next()?;
                let c = c
                    .parse::<i64>()
                    .map_err(|_| ExtendedTextError(format!("bad coefficient `{c}`")))?;
                let e = parse_expr(toks)?;
                toks.expect(")")?;
                terms.push((c, e));
            }
            UniformExpr::LinComb(terms)
        }
        "not" => UniformExpr::Not(Box::new(parse_expr(toks)?)),
        "or" => {
            let a = parse_expr(toks)?;
            let b = parse_expr(toks)?;
            UniformExpr::Or(Box::new(a), Box::new(b))
        }
        "bool" | "sgn" => {
            let m = toks.next()?;
            let m = m
                .parse::<i64>()
                .map_err(|_| ExtendedTextError(format!("bad height `{m}`")))?;
            let e = parse_expr(toks)?;
            if head == "bool" {
                UniformExpr::BoolM(m, Box::new(e))
            } else {
                UniformExpr::SgnM(m, Box::new(e))
            }
        }
        "cmp" => {
            let rel = parse_relation(toks.next()?)?;
            let f = parse_expr(toks)?;
            let g = parse_expr(toks)?;
            UniformExpr::Cmp(rel, Box::new(f), Box::new(g))
        }
        _ => return Err(ExtendedTextError(format!("unknown form `{head}`"))),
    };
    toks.expect(")")?;
    Ok(expr)
}

pub fn parse_extended(text: &str) -> Result<ExtendedProgram, ExtendedTextError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ExtendedTextError("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "extended" {
        return Err(ExtendedTextError("expected header `extended n t`".into()));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| ExtendedTextError("bad n".into()))?;
    let t: usize = fields[2]
        .parse()
        .map_err(|_| ExtendedTextError("bad t".into()))?;
    let mut ep = ExtendedProgram::with_vars(n, t, 0, 0);

    let mut grid = |line: Option<&str>, name: &str| -> Result<Vec<i64>, ExtendedTextError> {
        let line = line.ok_or_else(|| ExtendedTextError(format!("missing {name} line")))?;
        let rest = line
            .strip_prefix(name)
            .ok_or_else(|| ExtendedTextError(format!("expected `{name} ...`")))?;
        let vals: Result<Vec<i64>, _> = rest
            .split_whitespace()
            .map(|v| {
                v.parse::<i64>()
                    .map_err(|_| ExtendedTextError(format!("bad value `{v}` in {name}")))
            })
            .collect();
        let vals = vals?;
        if vals.len() != n * t {
            return Err(ExtendedTextError(format!(
                "{name}: expected {} values, found {}",
                n * t,
                vals.len()
            )));
        }
        Ok(vals)
    };
    let lower = grid(lines.next(), "lower")?;
    let upper = grid(lines.next(), "upper")?;
    let weights = grid(lines.next(), "weights")?;
    for i in 0..n {
        for j in 0..t {
            ep.set_brick_bounds(i, j, lower[i * t + j], upper[i * t + j]);
            ep.set_brick_weight(i, j, weights[i * t + j]);
        }
    }

    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (head, expr_text) = line
            .split_once(" : ")
            .ok_or_else(|| ExtendedTextError(format!("missing ` : ` in `{line}`")))?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(ExtendedTextError(format!("bad constraint head `{head}`")));
        }
        let relation = parse_relation(fields[1])?;
        let lhs = parse_expr_str(expr_text)?;
        let nums: Result<Vec<i64>, _> = fields[2..]
            .iter()
            .map(|v| {
                v.parse::<i64>()
                    .map_err(|_| ExtendedTextError(format!("bad rhs `{v}`")))
            })
            .collect();
        let nums = nums?;
        match fields[0] {
            "local" => {
                if nums.len() != n {
                    return Err(ExtendedTextError(format!(
                        "local rhs needs {n} entries, found {}",
                        nums.len()
                    )));
                }
                ep.add_local(lhs, relation, nums);
            }
            "global" => {
                if nums.len() != 1 {
                    return Err(ExtendedTextError("global rhs needs one entry".into()));
                }
                ep.add_global(lhs, relation, nums[0]);
            }
            other => {
                return Err(ExtendedTextError(format!(
                    "unknown constraint scope `{other}`"
                )))
            }
        }
    }
    Ok(ep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::UniformExpr as E;

    #[test]
    fn round_trips_exactly() {
        let mut ep = ExtendedProgram::with_vars(2, 2, -3, 3);
        ep.set_brick_bounds(1, 0, 0, 2);
        ep.set_weight(1, 5);
        ep.add_local(
            E::bool_cmp(3, Relation::Gt, E::var(0), E::var(1)),
            Relation::Eq,
            vec![1, 0],
        );
        ep.add_global(
            E::lin(vec![(2, E::var(0)), (-1, E::brick_const(vec![1, -1]))]),
            Relation::Le,
            4,
        );
        let text = format_extended(&ep);
        let back = parse_extended(&text).unwrap();
        assert_eq!(back, ep);
        assert_eq!(format_extended(&back), text);
    }
}
