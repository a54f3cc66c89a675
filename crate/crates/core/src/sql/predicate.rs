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

//! Bound predicates: column references resolved against the catalog and
//! constants converted to the storage representation of the column they
//! are compared with.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::ast::CmpOp;
use crate::catalog::ScalarUdf;
use crate::storage::{format_date, Value};

/// A column of a FROM-list binding (the table alias, or its name).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ColumnRef {
    pub binding: String,
    pub column: String,
}

impl ColumnRef {
    pub fn new(binding: impl Into<String>, column: impl Into<String>) -> Self {
        Self {
            binding: binding.into(),
            column: column.into(),
        }
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.binding, self.column)
    }
}

/// Boolean expression over column values. Comparison constants are stored
/// in the column's own representation (DECIMAL at the column scale, DATE as
/// days); they are never NULL.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Const(bool),
    Compare {
        column: ColumnRef,
        op: CmpOp,
        value: Value,
    },
    /// Inclusive on both ends.
    Between {
        column: ColumnRef,
        low: Value,
        high: Value,
    },
    ColumnCompare {
        left: ColumnRef,
        op: CmpOp,
        right: ColumnRef,
    },
    Function {
        udf: Arc<ScalarUdf>,
        args: Vec<ColumnRef>,
        op: CmpOp,
        value: f64,
    },
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    /// Conjunction that flattens nested ANDs and drops `TRUE` terms.
    pub fn and(parts: impl IntoIterator<Item = Predicate>) -> Predicate {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Predicate::Const(true) => {}
                Predicate::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Predicate::Const(true),
            1 => out.pop().expect("one element"),
            _ => Predicate::And(out),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Predicate::Const(true))
    }

    /// Top-level conjuncts, flattening nested ANDs.
    pub fn conjuncts(&self) -> Vec<&Predicate> {
        match self {
            Predicate::And(parts) => parts.iter().flat_map(|p| p.conjuncts()).collect(),
            other => vec![other],
        }
    }

    pub fn into_conjuncts(self) -> Vec<Predicate> {
        match self {
            Predicate::And(parts) => parts
                .into_iter()
                .flat_map(Predicate::into_conjuncts)
                .collect(),
            other => vec![other],
        }
    }

    /// Every column referenced, in first-seen order without duplicates.
    pub fn columns(&self) -> Vec<&ColumnRef> {
        let mut out: Vec<&ColumnRef> = Vec::new();
        self.visit_columns(&mut |c| {
            if !out.contains(&c) {
                out.push(c);
            }
        });
        out
    }

    pub fn bindings(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_columns(&mut |c| {
            out.insert(c.binding.as_str());
        });
        out
    }

    fn visit_columns<'a>(&'a self, f: &mut dyn FnMut(&'a ColumnRef)) {
        match self {
            Predicate::Const(_) => {}
            Predicate::Compare { column, .. } | Predicate::Between { column, .. } => f(column),
            Predicate::ColumnCompare { left, right, .. } => {
                f(left);
                f(right);
            }
            Predicate::Function { args, .. } => args.iter().for_each(f),
            Predicate::And(parts) | Predicate::Or(parts) => {
                parts.iter().for_each(|p| p.visit_columns(f))
            }
            Predicate::Not(p) => p.visit_columns(f),
        }
    }

    /// Number of leaf atoms (constants included).
    pub fn atom_count(&self) -> usize {
        match self {
            Predicate::And(parts) | Predicate::Or(parts) => {
                parts.iter().map(Predicate::atom_count).sum()
            }
            Predicate::Not(p) => p.atom_count(),
            _ => 1,
        }
    }

    /// Same predicate with every column re-bound to `binding`.
    pub fn rebind(&self, binding: &str) -> Predicate {
        let re = |c: &ColumnRef| ColumnRef::new(binding, c.column.clone());
        match self {
            Predicate::Const(b) => Predicate::Const(*b),
            Predicate::Compare { column, op, value } => Predicate::Compare {
                column: re(column),
                op: *op,
                value: value.clone(),
            },
            Predicate::Between { column, low, high } => Predicate::Between {
                column: re(column),
                low: low.clone(),
                high: high.clone(),
            },
            Predicate::ColumnCompare { left, op, right } => Predicate::ColumnCompare {
                left: re(left),
                op: *op,
                right: re(right),
            },
            Predicate::Function {
                udf,
                args,
                op,
                value,
            } => Predicate::Function {
                udf: udf.clone(),
                args: args.iter().map(re).collect(),
                op: *op,
                value: *value,
            },
            Predicate::And(parts) => {
                Predicate::And(parts.iter().map(|p| p.rebind(binding)).collect())
            }
            Predicate::Or(parts) => {
                Predicate::Or(parts.iter().map(|p| p.rebind(binding)).collect())
            }
            Predicate::Not(p) => Predicate::Not(Box::new(p.rebind(binding))),
        }
    }
}

/// Renders a value as a SQL literal that parses back to the same value.
pub fn sql_literal(v: &Value) -> String {
    match v {
        Value::Text(s) => format!("'{}'", s.replace('\'', "''")),
        Value::Date(d) => format!("DATE '{}'", format_date(*d)),
        other => other.to_string(),
    }
}

fn fmt_value(f: &mut fmt::Formatter<'_>, v: &Value) -> fmt::Result {
    f.write_str(&sql_literal(v))
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Const(true) => f.write_str("TRUE"),
            Predicate::Const(false) => f.write_str("FALSE"),
            Predicate::Compare { column, op, value } => {
                write!(f, "{column} {op} ")?;
                fmt_value(f, value)
            }
            Predicate::Between { column, low, high } => {
                write!(f, "{column} BETWEEN ")?;
                fmt_value(f, low)?;
                f.write_str(" AND ")?;
                fmt_value(f, high)
            }
            Predicate::ColumnCompare { left, op, right } => write!(f, "{left} {op} {right}"),
            Predicate::Function {
                udf,
                args,
                op,
                value,
            } => {
                write!(f, "{}(", udf.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ") {op} {value}")
            }
            Predicate::And(parts) | Predicate::Or(parts) => {
                let sep = if matches!(self, Predicate::And(_)) {
                    " AND "
                } else {
                    " OR "
                };
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    if matches!(p, Predicate::And(_) | Predicate::Or(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            Predicate::Not(p) => match **p {
                Predicate::And(_) | Predicate::Or(_) => write!(f, "NOT ({p})"),
                _ => write!(f, "NOT {p}"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(col: &str, v: i64) -> Predicate {
        Predicate::Compare {
            column: ColumnRef::new("r", col),
            op: CmpOp::Eq,
            value: Value::Int(v),
        }
    }

    #[test]
    fn and_flattens() {
        let p = Predicate::and([
            eq("b", 1),
            Predicate::Const(true),
            Predicate::And(vec![eq("c", 2), eq("d", 3)]),
        ]);
        assert_eq!(p.conjuncts().len(), 3);
        assert_eq!(Predicate::and([]), Predicate::Const(true));
        assert_eq!(Predicate::and([eq("b", 1)]), eq("b", 1));
    }

    #[test]
    fn columns_are_deduplicated() {
        let p = Predicate::Or(vec![eq("d", 1), eq("d", 2), eq("b", 3)]);
        let cols: Vec<_> = p.columns().into_iter().map(|c| c.column.clone()).collect();
        assert_eq!(cols, vec!["d", "b"]);
        assert_eq!(p.atom_count(), 3);
    }

    #[test]
    fn display() {
        let p = Predicate::And(vec![
            eq("b", 5),
            Predicate::Or(vec![eq("d", 3), eq("d", 4)]),
            Predicate::Not(Box::new(Predicate::Compare {
                column: ColumnRef::new("r", "s"),
                op: CmpOp::Eq,
                value: Value::Text("x".into()),
            })),
        ]);
        assert_eq!(
            p.to_string(),
            "r.b = 5 AND (r.d = 3 OR r.d = 4) AND NOT r.s = 'x'"
        );
    }
}
