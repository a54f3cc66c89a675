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

//! Query sessions: parse, analyze, plan and execute one statement, dropping
//! every temp table the planner created before returning.

use std::time::{Duration, Instant};

use crate::catalog::Catalog;
use crate::exec::{ExecError, ExecStats};
use crate::optimizer::{execute_plan, plan, EscConfig, OptimizerError, PhysicalPlan};
use crate::sql::{analyze, parse, SqlError};
use crate::storage::ColumnTable;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("parse error: {0}")]
    Parse(SqlError),
    #[error("analysis error: {0}")]
    Analyze(SqlError),
    #[error("planning error: {0}")]
    Plan(#[from] OptimizerError),
    #[error("execution error: {0}")]
    Execute(#[from] ExecError),
}

#[derive(Debug)]
pub struct QueryResult {
    pub table: ColumnTable,
    pub plan: PhysicalPlan,
    pub stats: ExecStats,
    pub plan_time: Duration,
    pub exec_time: Duration,
}

impl QueryResult {
    /// Planning (sub-queries and materialization included) plus execution.
    pub fn total_time(&self) -> Duration {
        self.plan_time + self.exec_time
    }

    /// The single value of a `COUNT(*)` query, or the number of result rows.
    pub fn count(&self) -> u64 {
        if self.table.columns().len() == 1
            && self.table.columns()[0].name() == "count"
            && self.table.row_count() == 1
        {
            self.table.columns()[0].values()[0] as u64
        } else {
            self.table.row_count() as u64
        }
    }
}

#[derive(Debug)]
pub struct Engine {
    pub catalog: Catalog,
    pub config: EscConfig,
    pub workers: usize,
}

impl Engine {
    pub fn new(catalog: Catalog) -> Self {
        Self {
            catalog,
            config: EscConfig::default(),
            workers: 1,
        }
    }

    pub fn with_config(mut self, config: EscConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn plan_sql(&mut self, sql: &str, config: &EscConfig) -> Result<PhysicalPlan, EngineError> {
        let ast = parse(sql).map_err(EngineError::Parse)?;
        let ra = analyze(&ast, &self.catalog).map_err(EngineError::Analyze)?;
        Ok(plan(&ra, &mut self.catalog, config)?)
    }

    pub fn query(&mut self, sql: &str) -> Result<QueryResult, EngineError> {
        let config = self.config.clone();
        self.query_with(sql, &config)
    }

    pub fn query_with(
        &mut self,
        sql: &str,
        config: &EscConfig,
    ) -> Result<QueryResult, EngineError> {
        let started = Instant::now();
        let planned = self.plan_sql(sql, config);
        let plan_time = started.elapsed();
        let planned = match planned {
            Ok(p) => p,
            Err(e) => {
                self.catalog.drop_all_temps();
                return Err(e);
            }
        };
        let started = Instant::now();
        let executed = execute_plan(&planned, &self.catalog, self.workers);
        let exec_time = started.elapsed();
        self.catalog.drop_all_temps();
        let (table, stats) = executed?;
        Ok(QueryResult {
            table,
            plan: planned,
            stats,
            plan_time,
            exec_time,
        })
    }

    /// Plans without executing. Sub-queries still run when ESC is on.
    pub fn explain(&mut self, sql: &str) -> Result<PhysicalPlan, EngineError> {
        let config = self.config.clone();
        let planned = self.plan_sql(sql, &config);
        self.catalog.drop_all_temps();
        planned
    }
}
