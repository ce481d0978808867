//! Line-oriented text format for standard programs.
//!
//! ```text
//! nfold <n> <r> <s> <t>
//! <r lines: D row-major>
//! <s lines: A row-major>
//! <b as one line>
//! <l as one line, inf/-inf permitted>
//! <u as one line, inf/-inf permitted>
//! <w as one line>
//! scale <n integers>          (only for per-brick scaled programs)
//! ```
//!
//! Writing then parsing is the identity, byte for byte.

use super::{Bound, StandardNFoldProgram};
use crate::matrix::Matrix;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("program text error at line {line}: {message}")]
pub struct ProgramTextError {
    pub line: usize,
    pub message: String,
}

pub fn format_program(p: &StandardNFoldProgram) -> String {
    let mut out = String::new();
    out.push_str(&format!("nfold {} {} {} {}\n", p.n, p.r, p.s, p.t));
    for g in 0..p.r {
        out.push_str(&join(p.d.row(g).iter()));
        out.push('\n');
    }
    for q in 0..p.s {
        out.push_str(&join(p.a.row(q).iter()));
        out.push('\n');
    }
    out.push_str(&join(p.b.iter()));
    out.push('\n');
    out.push_str(&join_bounds(&p.lower));
    out.push('\n');
    out.push_str(&join_bounds(&p.upper));
    out.push('\n');
    out.push_str(&join(p.weights.iter()));
    out.push('\n');
    if let Some(scale) = &p.scale {
        out.push_str("scale ");
        out.push_str(&join(scale.iter()));
        out.push('\n');
    }
    out
}

fn join<'a>(vals: impl Iterator<Item = &'a i64>) -> String {
    vals.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_bounds(vals: &[Bound]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_program(text: &str) -> Result<StandardNFoldProgram, ProgramTextError> {
    let mut lines = text.lines().enumerate();
    let err = |line: usize, message: String| ProgramTextError { line, message };

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "nfold" {
        return Err(err(
            line_no + 1,
            "expected header `nfold n r s t`".into(),
        ));
    }
    let dim = |f: &str, line: usize| -> Result<usize, ProgramTextError> {
        f.parse()
            .map_err(|_| err(line, format!("bad dimension `{f}`")))
    };
    let n = dim(fields[1], line_no + 1)?;
    let r = dim(fields[2], line_no + 1)?;
    let s = dim(fields[3], line_no + 1)?;
    let t = dim(fields[4], line_no + 1)?;

    let mut next_line = |what: &str| -> Result<(usize, &str), ProgramTextError> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or_else(|| err(0, format!("missing {what}")))
    };
    let parse_ints = |line: &str, line_no: usize, expect: usize, what: &str| {
        let vals: Result<Vec<i64>, _> = line
            .split_whitespace()
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| err(line_no, format!("bad integer `{f}` in {what}")))
            })
            .collect();
        let vals = vals?;
        if vals.len() != expect {
            return Err(err(
                line_no,
                format!("{what}: expected {expect} values, found {}", vals.len()),
            ));
        }
        Ok(vals)
    };

    let mut d_rows = Vec::with_capacity(r);
    for _ in 0..r {
        let (no, line) = next_line("D row")?;
        d_rows.push(parse_ints(line, no, t, "D row")?);
    }
    let mut a_rows = Vec::with_capacity(s);
    for _ in 0..s {
        let (no, line) = next_line("A row")?;
        a_rows.push(parse_ints(line, no, t, "A row")?);
    }
    let (no, line) = next_line("b")?;
    let b = parse_ints(line, no, r + n * s, "b")?;

    let parse_bounds = |line: &str, line_no: usize, what: &str| {
        let vals: Result<Vec<Bound>, _> = line
            .split_whitespace()
            .map(|f| match f {
                "inf" => Ok(Bound::PosInf),
                "-inf" => Ok(Bound::NegInf),
                _ => f
                    .parse::<i64>()
                    .map(Bound::Finite)
                    .map_err(|_| err(line_no, format!("bad bound `{f}` in {what}"))),
            })
            .collect();
        let vals = vals?;
        if vals.len() != n * t {
            return Err(err(
                line_no,
                format!("{what}: expected {} values, found {}", n * t, vals.len()),
            ));
        }
        Ok(vals)
    };
    let (no, line) = next_line("l")?;
    let lower = parse_bounds(line, no, "l")?;
    let (no, line) = next_line("u")?;
    let upper = parse_bounds(line, no, "u")?;
    let (no, line) = next_line("w")?;
    let weights = parse_ints(line, no, n * t, "w")?;

    let mut scale = None;
    if let Some((no, line)) = lines.next() {
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            let rest = trimmed.strip_prefix("scale ").ok_or_else(|| {
                err(no + 1, format!("unexpected trailing line `{trimmed}`"))
            })?;
            scale = Some(parse_ints(rest, no + 1, n, "scale")?);
        }
    }

    Ok(StandardNFoldProgram {
        n,
        r,
        s,
        t,
        d: if r == 0 {
            Matrix::zeros(0, t)
        } else {
            Matrix::from_rows(&d_rows)
        },
        a: if s == 0 {
            Matrix::zeros(0, t)
        } else {
            Matrix::from_rows(&a_rows)
        },
        b,
        lower,
        upper,
        weights,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_infinities() {
        let text = "nfold 2 1 1 2\n1 -1\n2 0\n0 1 1\n0 -inf 0 0\ninf 3 2 2\n1 0 -1 0\n";
        let p = parse_program(text).unwrap();
        assert_eq!(format_program(&p), text);
        assert_eq!(p.n, 2);
        assert_eq!(p.lower[1], Bound::NegInf);
        assert_eq!(p.upper[0], Bound::PosInf);
    }

    #[test]
    fn round_trip_with_scale() {
        let text = "nfold 3 1 0 1\n1\n12\n0 0 0\n1 1 1\n0 0 0\nscale 3 5 7\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.scale, Some(vec![3, 5, 7]));
        assert_eq!(format_program(&p), text);
    }

    #[test]
    fn reports_line_of_bad_token() {
        let text = "nfold 1 1 0 1\n1\nx\n0\n5\n2\n";
        let e = parse_program(text).unwrap_err();
        assert_eq!(e.line, 3);
    }
}
