//! Text formats for cost tables (`.ksf`) and VCSP instances (`.vcsp`).
//!
//! ```text
//! ksub 2 2 pos          vcsp 3 2 [pos|full]
//! 1 1 0                 constraint 2 1 3
//! 1 2 1                 1 1 0
//! 2 1 1/2               1 2 inf
//! # comment             end
//! ```
//!
//! Rows list labels then a value (integer, `p/q`, decimal or `inf`);
//! omitted rows are `+inf`. Variable indices in `constraint` lines are
//! 1-based. Printing emits finite rows in ascending cube-index order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::Error;
use crate::labeling::{Cube, Labeling};
use crate::table::{CostTable, DomainKind};
use crate::value::CostValue;
use crate::vcsp::{Constraint, VcspInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next line with content, as (1-based line number, tokens).
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }
}

fn parse_usize(line: usize, what: &str, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| perr(line, format!("expected {what}, found {tok:?}")))
}

fn parse_kind(line: usize, tok: &str) -> Result<DomainKind, ParseError> {
    match tok {
        "pos" => Ok(DomainKind::PositiveOnly),
        "full" => Ok(DomainKind::Full),
        _ => perr(line, format!("expected pos or full, found {tok:?}")),
    }
}

fn make_cube(line: usize, n: usize, k: u32, max_cells: u64) -> Result<Cube, ParseError> {
    Cube::with_limit(n, k, max_cells).or_else(|e| perr(line, e.to_string()))
}

/// Adds one row to `table`, rejecting malformed and repeated rows.
fn add_row(table: &mut CostTable, seen: &mut BTreeSet<usize>, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
    let n = table.n();
    if tokens.len() != n + 1 {
        return perr(line, format!("expected {} labels and a value, found {} fields", n, tokens.len()));
    }
    let mut labels = Vec::with_capacity(n);
    for t in &tokens[..n] {
        match t.parse::<u32>() {
            Ok(l) => labels.push(l),
            Err(_) => return perr(line, format!("expected a label, found {t:?}")),
        }
    }
    let value: CostValue = match tokens[n].parse() {
        Ok(v) => v,
        Err(e) => return perr(line, e.to_string()),
    };
    let x = Labeling::new(labels);
    let index = table.cube().encode(&x).or_else(|e| perr(line, e.to_string()))?;
    if !seen.insert(index) {
        return perr(line, format!("duplicate row for {x}"));
    }
    match table.set_index(index, value) {
        Ok(()) => Ok(()),
        Err(Error::KindViolation) => perr(line, format!("{x} has a zero label but the table kind is pos")),
        Err(e) => perr(line, e.to_string()),
    }
}

pub fn parse_ksf(text: &str, max_cells: u64) -> Result<CostTable, ParseError> {
    let mut lines = Lines::new(text);
    let Some((line, head)) = lines.next() else {
        return perr(1, "empty input, expected `ksub <n> <k> <pos|full>`");
    };
    if head.len() != 4 || head[0] != "ksub" {
        return perr(line, "expected header `ksub <n> <k> <pos|full>`");
    }
    let n = parse_usize(line, "n", head[1])?;
    let k = parse_usize(line, "k", head[2])?;
    let k = u32::try_from(k).or_else(|_| perr(line, "k is too large"))?;
    let kind = parse_kind(line, head[3])?;
    let mut table = CostTable::empty(make_cube(line, n, k, max_cells)?, kind);
    let mut seen = BTreeSet::new();
    while let Some((line, tokens)) = lines.next() {
        add_row(&mut table, &mut seen, line, &tokens)?;
    }
    Ok(table)
}

fn write_rows(out: &mut String, table: &CostTable) {
    let cube = table.cube();
    for (i, v) in table.entries() {
        for l in cube.digits(i) {
            let _ = write!(out, "{l} ");
        }
        let _ = writeln!(out, "{}", CostValue::Finite(v.clone()));
    }
}

pub fn print_ksf(table: &CostTable) -> String {
    let mut out = format!("ksub {} {} {}\n", table.n(), table.k(), table.kind().as_str());
    write_rows(&mut out, table);
    out
}

pub fn parse_vcsp(text: &str, max_cells: u64) -> Result<VcspInstance, ParseError> {
    let mut lines = Lines::new(text);
    let Some((line, head)) = lines.next() else {
        return perr(1, "empty input, expected `vcsp <n_vars> <k>`");
    };
    if !(3..=4).contains(&head.len()) || head[0] != "vcsp" {
        return perr(line, "expected header `vcsp <n_vars> <k> [pos|full]`");
    }
    let n_vars = parse_usize(line, "n_vars", head[1])?;
    let k = parse_usize(line, "k", head[2])?;
    let k = u32::try_from(k).or_else(|_| perr(line, "k is too large"))?;
    let kind = match head.get(3) {
        Some(t) => parse_kind(line, t)?,
        None => DomainKind::PositiveOnly,
    };
    let mut inst =
        VcspInstance::with_kind(n_vars, k, kind).or_else(|e| perr(line, e.to_string()))?.with_max_cells(max_cells);

    while let Some((line, tokens)) = lines.next() {
        if tokens[0] != "constraint" || tokens.len() < 2 {
            return perr(line, "expected `constraint <r> <i1> ... <ir>`");
        }
        let r = parse_usize(line, "arity", tokens[1])?;
        if tokens.len() != r + 2 {
            return perr(line, format!("constraint of arity {r} needs {r} variable indices"));
        }
        let mut scope = Vec::with_capacity(r);
        for t in &tokens[2..] {
            let v = parse_usize(line, "a variable index", t)?;
            if v == 0 || v > n_vars {
                return perr(line, format!("variable index {v} is out of range 1..={n_vars}"));
            }
            scope.push(v - 1);
        }
        let mut table = CostTable::empty(make_cube(line, r, k, max_cells)?, kind);
        let mut seen = BTreeSet::new();
        let start = line;
        loop {
            match lines.next() {
                Some((_, t)) if t == ["end"] => break,
                Some((line, t)) => add_row(&mut table, &mut seen, line, &t)?,
                None => return perr(start, "constraint is missing its `end` line"),
            }
        }
        let c = Constraint::new(table, scope).or_else(|e| perr(start, e.to_string()))?;
        inst.push(c).or_else(|e| perr(start, e.to_string()))?;
    }
    Ok(inst)
}

pub fn print_vcsp(inst: &VcspInstance) -> String {
    let mut out = format!("vcsp {} {}", inst.n_vars(), inst.k());
    if inst.kind() == DomainKind::Full {
        out.push_str(" full");
    }
    out.push('\n');
    for c in inst.constraints() {
        let _ = write!(out, "constraint {}", c.arity());
        for v in &c.scope {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
        write_rows(&mut out, &c.table);
        out.push_str("end\n");
    }
    out
}
