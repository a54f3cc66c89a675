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

//! Planning with exact selectivities: COUNT(*) sub-queries at optimization
//! time, threshold-based selection push-down into temp tables, and greedy
//! left-deep join ordering.

mod esc;
mod explain;
mod physical;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use self::esc::{
    build_count_subquery, compute_exact_selectivity, decide_pushdown, materialize_pushdown,
    EscDecision,
};
pub use self::physical::{
    choose_probe, execute_plan, order_builds, plan, BuildStep, PhysicalPlan, RelationRef, ScanStep,
};

use crate::catalog::{CatalogError, DEFAULT_BUCKETS, DEFAULT_GUESS};
use crate::exec::ExecError;
use crate::sql::SqlError;

/// How the baseline arm ranks build relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// Base row counts only.
    #[default]
    None,
    /// Row count times a histogram selectivity estimate.
    Histogram,
}

impl fmt::Display for EstimatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorMode::None => "none",
            EstimatorMode::Histogram => "histogram",
        })
    }
}

impl FromStr for EstimatorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(EstimatorMode::None),
            "histogram" => Ok(EstimatorMode::Histogram),
            other => Err(format!(
                "unknown estimator {other:?} (expected none or histogram)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscConfig {
    pub enabled: bool,
    /// Tables with fewer rows never get a sub-query.
    pub min_table_size: u64,
    /// Push down when `count / row_count <= max_selectivity`.
    pub max_selectivity: f64,
    /// Used only when `enabled` is false.
    pub estimator_mode: EstimatorMode,
    /// When false, sub-queries still run and are logged but the plan keeps
    /// the baseline shape.
    pub materialize: bool,
    pub default_guess: f64,
    pub histogram_buckets: usize,
}

impl Default for EscConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            min_table_size: 1000,
            max_selectivity: 0.2,
            estimator_mode: EstimatorMode::None,
            materialize: true,
            default_guess: DEFAULT_GUESS,
            histogram_buckets: DEFAULT_BUCKETS,
        }
    }
}

impl EscConfig {
    pub fn baseline() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn histogram() -> Self {
        Self {
            enabled: false,
            estimator_mode: EstimatorMode::Histogram,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        if !(0.0..=1.0).contains(&self.max_selectivity) {
            return Err(OptimizerError::InvalidConfig(format!(
                "max_selectivity must be within [0, 1], got {}",
                self.max_selectivity
            )));
        }
        if !(0.0..=1.0).contains(&self.default_guess) {
            return Err(OptimizerError::InvalidConfig(format!(
                "default_guess must be within [0, 1], got {}",
                self.default_guess
            )));
        }
        if self.histogram_buckets == 0 {
            return Err(OptimizerError::InvalidConfig(
                "histogram_buckets must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OptimizerError {
    #[error("no predicate on {0}")]
    NoPredicate(String),
    #[error("query needs a cartesian product: {0}")]
    CartesianProductRequired(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Sql(#[from] SqlError),
    #[error("sub-query on {table} failed: {source}")]
    SubQuery { table: String, source: ExecError },
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
