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

//! Relational algebra trees produced by analysis and rewritten by the optimizer.

use std::fmt;

use serde::Serialize;

use super::predicate::{ColumnRef, Predicate};
use super::SqlError;
use crate::storage::{DataType, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AggregateKind {
    CountStar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputColumn {
    pub column: ColumnRef,
    pub data_type: DataType,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RaNode {
    Scan {
        table: String,
        binding: String,
        schema: Schema,
    },
    Select {
        input: Box<RaNode>,
        predicate: Predicate,
    },
    Project {
        input: Box<RaNode>,
        columns: Vec<ColumnRef>,
    },
    /// Inner equi-join; an empty `on` list is a cross product (only produced
    /// by analysis before the WHERE clause is split).
    HashJoin {
        left: Box<RaNode>,
        right: Box<RaNode>,
        on: Vec<(ColumnRef, ColumnRef)>,
    },
    Aggregate {
        input: Box<RaNode>,
        aggregate: AggregateKind,
    },
}

impl RaNode {
    /// Output schema, checked bottom-up: every referenced column must exist in
    /// the child's output and join keys must have matching kinds.
    pub fn schema(&self) -> Result<Vec<OutputColumn>, SqlError> {
        match self {
            RaNode::Scan {
                binding, schema, ..
            } => Ok(schema
                .iter()
                .map(|f| OutputColumn {
                    column: ColumnRef::new(binding.clone(), f.name.clone()),
                    data_type: f.data_type,
                })
                .collect()),
            RaNode::Select { input, predicate } => {
                let schema = input.schema()?;
                for c in predicate.columns() {
                    lookup(&schema, c)?;
                }
                Ok(schema)
            }
            RaNode::Project { input, columns } => {
                let schema = input.schema()?;
                columns
                    .iter()
                    .map(|c| {
                        Ok(OutputColumn {
                            column: c.clone(),
                            data_type: lookup(&schema, c)?,
                        })
                    })
                    .collect()
            }
            RaNode::HashJoin { left, right, on } => {
                let l = left.schema()?;
                let r = right.schema()?;
                for (lc, rc) in on {
                    let lt = lookup(&l, lc)?;
                    let rt = lookup(&r, rc)?;
                    if lt != rt {
                        return Err(SqlError::SchemaCheck(format!(
                            "join key {lc} ({lt}) does not match {rc} ({rt})"
                        )));
                    }
                }
                Ok(l.into_iter().chain(r).collect())
            }
            RaNode::Aggregate { input, aggregate } => {
                input.schema()?;
                match aggregate {
                    AggregateKind::CountStar => Ok(vec![OutputColumn {
                        column: ColumnRef::new("", "count"),
                        data_type: DataType::Int64,
                    }]),
                }
            }
        }
    }

    /// Scans in left-to-right order.
    pub fn scans(&self) -> Vec<&RaNode> {
        match self {
            RaNode::Scan { .. } => vec![self],
            RaNode::Select { input, .. }
            | RaNode::Project { input, .. }
            | RaNode::Aggregate { input, .. } => input.scans(),
            RaNode::HashJoin { left, right, .. } => {
                let mut v = left.scans();
                v.extend(right.scans());
                v
            }
        }
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match self {
            RaNode::Scan { table, binding, .. } if table == binding => {
                writeln!(f, "{pad}Scan {table}")
            }
            RaNode::Scan { table, binding, .. } => writeln!(f, "{pad}Scan {table} AS {binding}"),
            RaNode::Select { input, predicate } => {
                writeln!(f, "{pad}Select {predicate}")?;
                input.fmt_indented(f, depth + 1)
            }
            RaNode::Project { input, columns } => {
                let cols: Vec<String> = columns.iter().map(ToString::to_string).collect();
                writeln!(f, "{pad}Project {}", cols.join(", "))?;
                input.fmt_indented(f, depth + 1)
            }
            RaNode::HashJoin { left, right, on } => {
                let keys: Vec<String> = on.iter().map(|(l, r)| format!("{l} = {r}")).collect();
                if keys.is_empty() {
                    writeln!(f, "{pad}CrossJoin")?;
                } else {
                    writeln!(f, "{pad}HashJoin {}", keys.join(" AND "))?;
                }
                left.fmt_indented(f, depth + 1)?;
                right.fmt_indented(f, depth + 1)
            }
            RaNode::Aggregate { input, .. } => {
                writeln!(f, "{pad}Aggregate COUNT(*)")?;
                input.fmt_indented(f, depth + 1)
            }
        }
    }
}

impl fmt::Display for RaNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

fn lookup(schema: &[OutputColumn], column: &ColumnRef) -> Result<DataType, SqlError> {
    schema
        .iter()
        .find(|c| &c.column == column)
        .map(|c| c.data_type)
        .ok_or_else(|| SqlError::SchemaCheck(format!("column {column} not produced by child")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::Field;

    fn scan(name: &str) -> RaNode {
        RaNode::Scan {
            table: name.into(),
            binding: name.into(),
            schema: vec![
                Field::new("a", DataType::Int64),
                Field::new("b", DataType::Text),
            ],
        }
    }

    #[test]
    fn schema_flows_bottom_up() {
        let join = RaNode::HashJoin {
            left: Box::new(scan("r")),
            right: Box::new(scan("s")),
            on: vec![(ColumnRef::new("r", "a"), ColumnRef::new("s", "a"))],
        };
        assert_eq!(join.schema().unwrap().len(), 4);
        let project = RaNode::Project {
            input: Box::new(join.clone()),
            columns: vec![ColumnRef::new("s", "b")],
        };
        assert_eq!(project.schema().unwrap()[0].data_type, DataType::Text);
        let bad = RaNode::Project {
            input: Box::new(join),
            columns: vec![ColumnRef::new("t", "b")],
        };
        assert!(bad.schema().is_err());
    }

    #[test]
    fn join_key_kinds_must_match() {
        let join = RaNode::HashJoin {
            left: Box::new(scan("r")),
            right: Box::new(scan("s")),
            on: vec![(ColumnRef::new("r", "a"), ColumnRef::new("s", "b"))],
        };
        assert!(matches!(join.schema(), Err(SqlError::SchemaCheck(_))));
    }
}
