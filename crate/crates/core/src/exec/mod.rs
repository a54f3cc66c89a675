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

//! Columnar execution: filtered scans, COUNT(*), hash build and the fused
//! probe pipeline.

mod filter;
mod hash;
mod pipeline;

pub use self::filter::{count_star, eval_predicate, CompiledPredicate, RowSelection, CHUNK_ROWS};
pub use self::hash::{build_hash, HashTableIndex, Matches};
pub use self::pipeline::{
    probe_joins, select_rows, BuildSide, ExecStats, JoinStats, KeySource, OutputSpec, Projection,
};

use crate::catalog::Catalog;
use crate::sql::{AggregateKind, RaNode};
use crate::storage::StorageError;

#[derive(Debug, thiserror::Error)]
pub enum ExecError {
    #[error("unknown column {0}")]
    UnknownColumn(String),
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("join key type mismatch: {0}")]
    KeyTypeMismatch(String),
    #[error("function {function} failed at row {row}: {message}")]
    Udf {
        function: String,
        row: usize,
        message: String,
    },
    #[error("unsupported plan shape: {0}")]
    UnsupportedPlan(String),
    #[error(transparent)]
    Storage(#[from] StorageError),
}

/// Runs a single-table `COUNT(*)` tree: Aggregate over an optional Select
/// over an optional Project over a Scan.
pub fn execute_count(ra: &RaNode, catalog: &Catalog) -> Result<u64, ExecError> {
    let RaNode::Aggregate {
        input,
        aggregate: AggregateKind::CountStar,
    } = ra
    else {
        return Err(ExecError::UnsupportedPlan(format!(
            "expected COUNT(*) at the root:\n{ra}"
        )));
    };
    let (predicate, mut node) = match input.as_ref() {
        RaNode::Select { input, predicate } => (Some(predicate), input.as_ref()),
        other => (None, other),
    };
    if let RaNode::Project { input, .. } = node {
        node = input.as_ref();
    }
    let RaNode::Scan { table, .. } = node else {
        return Err(ExecError::UnsupportedPlan(format!(
            "expected a single scan:\n{ra}"
        )));
    };
    let t = catalog
        .table(table)
        .ok_or_else(|| ExecError::UnknownTable(table.clone()))?;
    count_star(&t, predicate)
}
