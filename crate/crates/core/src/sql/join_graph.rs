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

use std::collections::BTreeMap;

use serde::Serialize;

use super::ast::CmpOp;
use super::predicate::{ColumnRef, Predicate};
use super::ra::{AggregateKind, RaNode};
use super::SqlError;
use crate::storage::Schema;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphNode {
    pub binding: String,
    pub table: String,
    #[serde(skip)]
    pub schema: Schema,
}

/// Equi-join conjunct `left = right` between two different bindings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinEdge {
    pub left: ColumnRef,
    pub right: ColumnRef,
}

impl JoinEdge {
    pub fn touches(&self, binding: &str) -> bool {
        self.left.binding == binding || self.right.binding == binding
    }

    /// The endpoint on `binding`'s side, and the other one.
    pub fn oriented(&self, binding: &str) -> Option<(&ColumnRef, &ColumnRef)> {
        if self.left.binding == binding {
            Some((&self.left, &self.right))
        } else if self.right.binding == binding {
            Some((&self.right, &self.left))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryOutput {
    Columns(Vec<ColumnRef>),
    CountStar,
}

/// Tables as nodes, equi-join conjuncts as edges, and the conjunction of
/// single-table conjuncts for each binding.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<JoinEdge>,
    pub residuals: BTreeMap<String, Predicate>,
    pub output: QueryOutput,
}

impl JoinGraph {
    pub fn node(&self, binding: &str) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.binding == binding)
    }

    pub fn residual(&self, binding: &str) -> Option<&Predicate> {
        self.residuals.get(binding)
    }

    /// Columns of `binding` needed above its scan: join keys and output columns.
    pub fn needed_columns(&self, binding: &str) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut add = |c: &ColumnRef| {
            if c.binding == binding && !out.contains(&c.column) {
                out.push(c.column.clone());
            }
        };
        for e in &self.edges {
            add(&e.left);
            add(&e.right);
        }
        if let QueryOutput::Columns(cols) = &self.output {
            cols.iter().for_each(&mut add);
        }
        out
    }
}

/// Splits the WHERE clause of an analyzed tree into join edges and per-table
/// residual predicates. Every conjunct lands in exactly one place.
///
/// Constant conjuncts (e.g. a reversed BETWEEN folded to FALSE) are attached
/// to the first binding of the FROM list.
pub fn build_join_graph(ra: &RaNode) -> Result<JoinGraph, SqlError> {
    let (output, body) = match ra {
        RaNode::Aggregate {
            input,
            aggregate: AggregateKind::CountStar,
        } => (QueryOutput::CountStar, input.as_ref()),
        RaNode::Project { input, columns } => {
            (QueryOutput::Columns(columns.clone()), input.as_ref())
        }
        other => (
            QueryOutput::Columns(other.schema()?.into_iter().map(|c| c.column).collect()),
            other,
        ),
    };
    let (predicate, joins) = match body {
        RaNode::Select { input, predicate } => (Some(predicate), input.as_ref()),
        other => (None, other),
    };
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    collect_scans(joins, &mut nodes, &mut edges)?;

    let mut per_binding: BTreeMap<String, Vec<Predicate>> = BTreeMap::new();
    for conjunct in predicate
        .cloned()
        .map(Predicate::into_conjuncts)
        .unwrap_or_default()
    {
        let bindings: Vec<String> = conjunct.bindings().into_iter().map(String::from).collect();
        match bindings.len() {
            0 => per_binding
                .entry(nodes[0].binding.clone())
                .or_default()
                .push(conjunct),
            1 => per_binding
                .entry(bindings[0].clone())
                .or_default()
                .push(conjunct),
            _ => match conjunct {
                Predicate::ColumnCompare {
                    left,
                    op: CmpOp::Eq,
                    right,
                } if bindings.len() == 2 => edges.push(JoinEdge { left, right }),
                other => {
                    return Err(SqlError::UnsupportedPredicate {
                        predicate: other.to_string(),
                    })
                }
            },
        }
    }
    let residuals = per_binding
        .into_iter()
        .map(|(b, parts)| (b, Predicate::and(parts)))
        .filter(|(_, p)| !p.is_true())
        .collect();
    Ok(JoinGraph {
        nodes,
        edges,
        residuals,
        output,
    })
}

fn collect_scans(
    node: &RaNode,
    nodes: &mut Vec<GraphNode>,
    edges: &mut Vec<JoinEdge>,
) -> Result<(), SqlError> {
    match node {
        RaNode::Scan {
            table,
            binding,
            schema,
        } => {
            nodes.push(GraphNode {
                binding: binding.clone(),
                table: table.clone(),
                schema: schema.clone(),
            });
            Ok(())
        }
        RaNode::HashJoin { left, right, on } => {
            collect_scans(left, nodes, edges)?;
            collect_scans(right, nodes, edges)?;
            edges.extend(on.iter().map(|(l, r)| JoinEdge {
                left: l.clone(),
                right: r.clone(),
            }));
            Ok(())
        }
        other => Err(SqlError::SchemaCheck(format!(
            "expected scans and joins below the selection, found:\n{other}"
        ))),
    }
}
