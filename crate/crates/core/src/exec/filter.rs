// Copyright 2026 The ESC Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Vectorized predicate evaluation over selection vectors.
//!
//! Atoms are evaluated column-at-a-time on a slice of row ids. NULL makes an
//! atom unknown, so each node can report both its TRUE rows and its FALSE
//! rows; NOT swaps the two and the filter keeps only TRUE rows.

use std::sync::Arc;

use super::ExecError;
use crate::catalog::ScalarUdf;
use crate::sql::{CmpOp, ColumnRef, Predicate};
use crate::storage::{Column, ColumnTable, DataType, Value};

pub const CHUNK_ROWS: usize = 4096;

/// Rows of a table that survive a filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowSelection {
    /// Every row of a table with this many rows.
    All(usize),
    /// Strictly increasing row ids.
    Rows(Vec<u32>),
}

impl RowSelection {
    pub fn len(&self) -> usize {
        match self {
            RowSelection::All(n) => *n,
            RowSelection::Rows(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn into_indices(self) -> Vec<u32> {
        match self {
            RowSelection::All(n) => (0..n as u32).collect(),
            RowSelection::Rows(r) => r,
        }
    }

    /// Calls `f` on consecutive chunks of at most [`CHUNK_ROWS`] row ids.
    pub fn for_each_chunk<E>(&self, mut f: impl FnMut(&[u32]) -> Result<(), E>) -> Result<(), E> {
        match self {
            RowSelection::All(n) => {
                let mut buf = Vec::with_capacity(CHUNK_ROWS);
                let mut start = 0;
                while start < *n {
                    let end = (start + CHUNK_ROWS).min(*n);
                    buf.clear();
                    buf.extend(start as u32..end as u32);
                    f(&buf)?;
                    start = end;
                }
                Ok(())
            }
            RowSelection::Rows(rows) => rows.chunks(CHUNK_ROWS).try_for_each(f),
        }
    }
}

/// A predicate resolved against one table's column positions.
#[derive(Debug, Clone)]
pub enum CompiledPredicate {
    Const(bool),
    Cmp {
        col: usize,
        op: CmpOp,
        value: i64,
    },
    Range {
        col: usize,
        low: i64,
        high: i64,
    },
    /// TEXT atom as a truth table over dictionary codes.
    Codes {
        col: usize,
        truth: Vec<bool>,
    },
    Columns {
        left: usize,
        right: usize,
        op: CmpOp,
        text: bool,
    },
    Udf {
        udf: Arc<ScalarUdf>,
        args: Vec<(usize, f64)>,
        op: CmpOp,
        value: f64,
    },
    And(Vec<CompiledPredicate>),
    Or(Vec<CompiledPredicate>),
    Not(Box<CompiledPredicate>),
}

fn column_index(table: &ColumnTable, c: &ColumnRef) -> Result<usize, ExecError> {
    table
        .column_index(&c.column)
        .ok_or_else(|| ExecError::UnknownColumn(format!("{}.{}", table.name(), c.column)))
}

fn raw(v: &Value) -> Option<i64> {
    match v {
        Value::Int(x) => Some(*x),
        Value::Decimal { units, .. } => Some(*units),
        Value::Date(d) => Some(*d as i64),
        Value::Text(_) | Value::Null => None,
    }
}

fn text_truth(col: &Column, keep: impl Fn(&str) -> bool) -> Vec<bool> {
    col.dictionary()
        .map(|d| d.strings().iter().map(|s| keep(s)).collect())
        .unwrap_or_default()
}

impl CompiledPredicate {
    /// Resolves columns by name; bindings are ignored since every predicate
    /// handed to the executor touches a single relation.
    pub fn compile(table: &ColumnTable, p: &Predicate) -> Result<Self, ExecError> {
        let mismatch = |what: &dyn std::fmt::Display| {
            ExecError::TypeMismatch(format!("{what} on {}", table.name()))
        };
        Ok(match p {
            Predicate::Const(b) => CompiledPredicate::Const(*b),
            Predicate::Compare { column, op, value } => {
                let col = column_index(table, column)?;
                let c = &table.columns()[col];
                match (c.data_type(), value) {
                    (DataType::Text, Value::Text(s)) => CompiledPredicate::Codes {
                        col,
                        truth: text_truth(c, |x| op.holds(x, s.as_str())),
                    },
                    (_, v) => CompiledPredicate::Cmp {
                        col,
                        op: *op,
                        value: raw(v).ok_or_else(|| mismatch(p))?,
                    },
                }
            }
            Predicate::Between { column, low, high } => {
                let col = column_index(table, column)?;
                let c = &table.columns()[col];
                match (low, high) {
                    (Value::Text(lo), Value::Text(hi)) => CompiledPredicate::Codes {
                        col,
                        truth: text_truth(c, |x| lo.as_str() <= x && x <= hi.as_str()),
                    },
                    _ => CompiledPredicate::Range {
                        col,
                        low: raw(low).ok_or_else(|| mismatch(p))?,
                        high: raw(high).ok_or_else(|| mismatch(p))?,
                    },
                }
            }
            Predicate::ColumnCompare { left, op, right } => {
                let l = column_index(table, left)?;
                let r = column_index(table, right)?;
                CompiledPredicate::Columns {
                    left: l,
                    right: r,
                    op: *op,
                    text: table.columns()[l].data_type() == DataType::Text,
                }
            }
            Predicate::Function {
                udf,
                args,
                op,
                value,
            } => CompiledPredicate::Udf {
                udf: udf.clone(),
                args: args
                    .iter()
                    .map(|a| {
                        let i = column_index(table, a)?;
                        Ok((i, 10f64.powi(table.columns()[i].data_type().scale() as i32)))
                    })
                    .collect::<Result<_, ExecError>>()?,
                op: *op,
                value: *value,
            },
            Predicate::And(ps) => CompiledPredicate::And(
                ps.iter()
                    .map(|q| Self::compile(table, q))
                    .collect::<Result<_, _>>()?,
            ),
            Predicate::Or(ps) => CompiledPredicate::Or(
                ps.iter()
                    .map(|q| Self::compile(table, q))
                    .collect::<Result<_, _>>()?,
            ),
            Predicate::Not(q) => CompiledPredicate::Not(Box::new(Self::compile(table, q)?)),
        })
    }

    /// Appends to `out` the rows of `rows` on which the predicate is `want`
    /// (TRUE or FALSE; unknown rows are never emitted).
    pub fn eval(
        &self,
        table: &ColumnTable,
        rows: &[u32],
        want: bool,
        out: &mut Vec<u32>,
    ) -> Result<(), ExecError> {
        let cols = table.columns();
        match self {
            CompiledPredicate::Const(b) => {
                if *b == want {
                    out.extend_from_slice(rows);
                }
            }
            CompiledPredicate::Cmp { col, op, value } => {
                let c = &cols[*col];
                let v = *value;
                let vals = c.values();
                match op {
                    CmpOp::Eq => scan(c, rows, want, out, |r| vals[r] == v),
                    CmpOp::NotEq => scan(c, rows, want, out, |r| vals[r] != v),
                    CmpOp::Lt => scan(c, rows, want, out, |r| vals[r] < v),
                    CmpOp::LtEq => scan(c, rows, want, out, |r| vals[r] <= v),
                    CmpOp::Gt => scan(c, rows, want, out, |r| vals[r] > v),
                    CmpOp::GtEq => scan(c, rows, want, out, |r| vals[r] >= v),
                }
            }
            CompiledPredicate::Range { col, low, high } => {
                let c = &cols[*col];
                let vals = c.values();
                scan(c, rows, want, out, |r| *low <= vals[r] && vals[r] <= *high)
            }
            CompiledPredicate::Codes { col, truth } => {
                let c = &cols[*col];
                let vals = c.values();
                scan(c, rows, want, out, |r| truth[vals[r] as usize])
            }
            CompiledPredicate::Columns {
                left,
                right,
                op,
                text,
            } => {
                let (l, r) = (&cols[*left], &cols[*right]);
                for &row in rows {
                    let i = row as usize;
                    if l.is_null(i) || r.is_null(i) {
                        continue;
                    }
                    let holds = if *text {
                        let (ld, rd) = (l.dictionary(), r.dictionary());
                        match (ld, rd) {
                            (Some(ld), Some(rd)) => op.holds(
                                ld.decode(l.values()[i] as u32),
                                rd.decode(r.values()[i] as u32),
                            ),
                            _ => false,
                        }
                    } else {
                        op.holds(l.values()[i], r.values()[i])
                    };
                    if holds == want {
                        out.push(row);
                    }
                }
            }
            CompiledPredicate::Udf {
                udf,
                args,
                op,
                value,
            } => {
                let mut buf = vec![0.0; args.len()];
                'rows: for &row in rows {
                    let i = row as usize;
                    for (slot, (col, div)) in buf.iter_mut().zip(args) {
                        let c = &cols[*col];
                        if c.is_null(i) {
                            continue 'rows;
                        }
                        *slot = c.values()[i] as f64 / div;
                    }
                    let result = udf.call(&buf).map_err(|message| ExecError::Udf {
                        function: udf.name().to_string(),
                        row: i,
                        message,
                    })?;
                    if result.is_nan() {
                        continue;
                    }
                    if op.holds(result, *value) == want {
                        out.push(row);
                    }
                }
            }
            CompiledPredicate::Not(inner) => inner.eval(table, rows, !want, out)?,
            // AND is TRUE when every part is TRUE, FALSE when any part is.
            // OR mirrors it.
            CompiledPredicate::And(ps) if want => sequential(ps, table, rows, true, out)?,
            CompiledPredicate::Or(ps) if !want => sequential(ps, table, rows, false, out)?,
            CompiledPredicate::And(ps) | CompiledPredicate::Or(ps) => {
                union(ps, table, rows, want, out)?
            }
        }
        Ok(())
    }
}

#[inline]
fn scan(c: &Column, rows: &[u32], want: bool, out: &mut Vec<u32>, holds: impl Fn(usize) -> bool) {
    match c.nulls() {
        None => out.extend(rows.iter().copied().filter(|&r| holds(r as usize) == want)),
        Some(mask) => out.extend(
            rows.iter()
                .copied()
                .filter(|&r| !mask[r as usize] && holds(r as usize) == want),
        ),
    }
}

/// Narrows `rows` through every part in turn.
fn sequential(
    ps: &[CompiledPredicate],
    table: &ColumnTable,
    rows: &[u32],
    want: bool,
    out: &mut Vec<u32>,
) -> Result<(), ExecError> {
    let mut current = rows.to_vec();
    let mut next = Vec::with_capacity(rows.len());
    for p in ps {
        next.clear();
        p.eval(table, &current, want, &mut next)?;
        std::mem::swap(&mut current, &mut next);
        if current.is_empty() {
            break;
        }
    }
    out.extend_from_slice(&current);
    Ok(())
}

/// Rows on which any part is `want`; parts only see rows not yet claimed.
fn union(
    ps: &[CompiledPredicate],
    table: &ColumnTable,
    rows: &[u32],
    want: bool,
    out: &mut Vec<u32>,
) -> Result<(), ExecError> {
    let mut remaining = rows.to_vec();
    let mut hits: Vec<u32> = Vec::new();
    let mut found = Vec::new();
    for p in ps {
        if remaining.is_empty() {
            break;
        }
        found.clear();
        p.eval(table, &remaining, want, &mut found)?;
        if found.is_empty() {
            continue;
        }
        hits = merge(&hits, &found);
        remaining = difference(&remaining, &found);
    }
    out.extend_from_slice(&hits);
    Ok(())
}

fn merge(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `a \ b` where `b` is a sorted subset of sorted `a`.
fn difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() - b.len());
    let mut j = 0;
    for &x in a {
        if j < b.len() && b[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    out
}

/// Rows of `selection` that satisfy `predicate`.
pub fn eval_predicate(
    table: &ColumnTable,
    predicate: &Predicate,
    selection: RowSelection,
) -> Result<RowSelection, ExecError> {
    if predicate.is_true() {
        return Ok(selection);
    }
    let compiled = CompiledPredicate::compile(table, predicate)?;
    let mut out = Vec::new();
    selection.for_each_chunk(|rows| compiled.eval(table, rows, true, &mut out))?;
    Ok(RowSelection::Rows(out))
}

/// Number of rows satisfying `predicate`; nothing is materialized beyond one
/// chunk of row ids at a time.
pub fn count_star(table: &ColumnTable, predicate: Option<&Predicate>) -> Result<u64, ExecError> {
    let Some(predicate) = predicate.filter(|p| !p.is_true()) else {
        return Ok(table.row_count() as u64);
    };
    let compiled = CompiledPredicate::compile(table, predicate)?;
    let mut count = 0u64;
    let mut out = Vec::with_capacity(CHUNK_ROWS);
    RowSelection::All(table.row_count()).for_each_chunk(|rows| {
        out.clear();
        compiled.eval(table, rows, true, &mut out)?;
        count += out.len() as u64;
        Ok::<_, ExecError>(())
    })?;
    Ok(count)
}
