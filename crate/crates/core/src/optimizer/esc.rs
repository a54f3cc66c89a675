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

use std::time::{Duration, Instant};

use super::{EscConfig, OptimizerError};
use crate::catalog::Catalog;
use crate::exec::{execute_count, select_rows};
use crate::sql::{AggregateKind, ColumnRef, GraphNode, Predicate, RaNode};
use crate::storage::{Field, TempTableHandle};

/// One executed sub-query and what the planner did with its result.
#[derive(Debug, Clone, PartialEq)]
pub struct EscDecision {
    pub table: String,
    pub binding: String,
    pub predicate: Predicate,
    pub row_count: u64,
    pub exact_count: u64,
    pub selectivity: f64,
    /// The thresholds allow push-down.
    pub qualified: bool,
    /// A temp table replaced the scan in the plan.
    pub pushed_down: bool,
    pub temp: Option<TempTableHandle>,
    pub subquery_time: Duration,
    pub materialize_time: Option<Duration>,
}

/// `COUNT(*)` over the selection of `node`, reading only the columns the
/// query needs from it plus the ones the predicate touches.
pub fn build_count_subquery(
    node: &GraphNode,
    predicate: &Predicate,
    needed_columns: &[String],
) -> Result<RaNode, OptimizerError> {
    if predicate.is_true() {
        return Err(OptimizerError::NoPredicate(node.binding.clone()));
    }
    let touched: Vec<&str> = predicate
        .columns()
        .iter()
        .map(|c| c.column.as_str())
        .collect();
    let columns = node
        .schema
        .iter()
        .filter(|f| needed_columns.contains(&f.name) || touched.contains(&f.name.as_str()))
        .map(|f| ColumnRef::new(node.binding.clone(), f.name.clone()))
        .collect();
    let scan = RaNode::Scan {
        table: node.table.clone(),
        binding: node.binding.clone(),
        schema: node.schema.clone(),
    };
    Ok(RaNode::Aggregate {
        input: Box::new(RaNode::Select {
            input: Box::new(RaNode::Project {
                input: Box::new(scan),
                columns,
            }),
            predicate: predicate.clone(),
        }),
        aggregate: AggregateKind::CountStar,
    })
}

/// Runs a count sub-query; the duration covers execution only.
pub fn compute_exact_selectivity(
    catalog: &Catalog,
    subquery: &RaNode,
) -> Result<(u64, Duration), OptimizerError> {
    let started = Instant::now();
    let count = execute_count(subquery, catalog).map_err(|source| OptimizerError::SubQuery {
        table: subquery
            .scans()
            .first()
            .map(|s| match s {
                RaNode::Scan { table, .. } => table.clone(),
                _ => String::new(),
            })
            .unwrap_or_default(),
        source,
    })?;
    Ok((count, started.elapsed()))
}

/// Both bounds are inclusive.
pub fn decide_pushdown(row_count: u64, exact_count: u64, config: &EscConfig) -> bool {
    row_count >= config.min_table_size
        && selectivity(exact_count, row_count) <= config.max_selectivity
}

pub(crate) fn selectivity(count: u64, row_count: u64) -> f64 {
    if row_count == 0 {
        0.0
    } else {
        count as f64 / row_count as f64
    }
}

/// Writes the rows of `node` passing `predicate`, restricted to
/// `needed_columns`, into a new temp table.
pub fn materialize_pushdown(
    catalog: &mut Catalog,
    node: &GraphNode,
    predicate: &Predicate,
    needed_columns: &[String],
) -> Result<(TempTableHandle, Duration), OptimizerError> {
    let started = Instant::now();
    let table = catalog
        .table(&node.table)
        .ok_or_else(|| crate::exec::ExecError::UnknownTable(node.table.clone()))?;
    let rows = select_rows(&table, Some(predicate))?.into_indices();
    let mut fields = Vec::new();
    let mut columns = Vec::new();
    for name in needed_columns {
        let col = table.column(name).ok_or_else(|| {
            crate::exec::ExecError::UnknownColumn(format!("{}.{name}", node.table))
        })?;
        fields.push(Field::new(name.clone(), col.data_type()));
        columns.push(col.gather(&rows));
    }
    let handle = catalog.materialize_temp(&fields, columns)?;
    Ok((handle, started.elapsed()))
}
