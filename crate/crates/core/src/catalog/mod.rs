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

//! Table registry, statistics, histograms and scalar functions.

mod histogram;
mod stats;
mod udf;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use self::histogram::{
    estimate_selectivity, estimate_with_default, Bucket, EquiDepthHistogram, EstimateError,
    TableHistograms, DEFAULT_BUCKETS, DEFAULT_GUESS,
};
pub use self::stats::{collect_stats, ColumnStats, TableStats};
pub use self::udf::{ScalarUdf, UdfFn, UdfRegistry};

use crate::storage::{
    Column, ColumnTable, DataType, Field, StorageError, TableStore, TempTableHandle, Value,
};

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Storage(#[from] StorageError),
    #[error("function {0} already registered")]
    DuplicateFunction(String),
    #[error("unknown column {0}")]
    UnknownColumn(String),
    #[error("histograms are not supported on column {column} of type {data_type}")]
    UnsupportedColumnKind { column: String, data_type: DataType },
    #[error("histogram bucket count must be at least 1")]
    InvalidBucketCount,
}

#[derive(Debug, Default)]
pub struct Catalog {
    store: TableStore,
    udfs: UdfRegistry,
    histograms: BTreeMap<(String, usize), Arc<TableHistograms>>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create_table(
        &mut self,
        name: &str,
        schema: &[Field],
    ) -> Result<Arc<ColumnTable>, CatalogError> {
        Ok(self.store.create_table(name, schema)?)
    }

    /// Registers an already populated table.
    pub fn register_table(&mut self, table: ColumnTable) -> Result<Arc<ColumnTable>, CatalogError> {
        Ok(self.store.insert_table(table)?)
    }

    pub fn append_rows(&mut self, name: &str, rows: &[Vec<Value>]) -> Result<usize, CatalogError> {
        let n = self.store.append_rows(name, rows)?;
        self.invalidate(name);
        Ok(n)
    }

    pub fn append_text_rows<S: AsRef<str>>(
        &mut self,
        name: &str,
        rows: &[Vec<S>],
    ) -> Result<usize, CatalogError> {
        let n = self.store.append_text_rows(name, rows)?;
        self.invalidate(name);
        Ok(n)
    }

    fn invalidate(&mut self, name: &str) {
        let name = name.to_ascii_lowercase();
        self.histograms.retain(|(t, _), _| *t != name);
    }

    pub fn table(&self, name: &str) -> Option<Arc<ColumnTable>> {
        self.store.table(&name.to_ascii_lowercase())
    }

    pub fn table_names(&self) -> Vec<String> {
        self.store.table_names().map(String::from).collect()
    }

    pub fn stats(&self, name: &str) -> Option<TableStats> {
        self.table(name).map(|t| collect_stats(&t))
    }

    /// Histograms on every numeric column of `name`, built on first use and
    /// cached until the table changes.
    pub fn histograms(
        &mut self,
        name: &str,
        k: usize,
    ) -> Result<Arc<TableHistograms>, CatalogError> {
        let table = self
            .table(name)
            .ok_or_else(|| StorageError::UnknownTable(name.to_string()))?;
        let key = (table.name().to_string(), k);
        if let Some(h) = self.histograms.get(&key) {
            return Ok(h.clone());
        }
        let h = Arc::new(TableHistograms::build(&table, k)?);
        self.histograms.insert(key, h.clone());
        Ok(h)
    }

    pub fn register_udf<F>(&mut self, name: &str, arity: usize, func: F) -> Result<(), CatalogError>
    where
        F: Fn(&[f64]) -> Result<f64, String> + Send + Sync + 'static,
    {
        self.udfs.register(name, arity, func)
    }

    pub fn udf(&self, name: &str) -> Option<Arc<ScalarUdf>> {
        self.udfs.get(&name.to_ascii_lowercase())
    }

    pub fn materialize_temp(
        &mut self,
        schema: &[Field],
        columns: Vec<Column>,
    ) -> Result<TempTableHandle, CatalogError> {
        Ok(self.store.materialize_temp(schema, columns)?)
    }

    pub fn temp(&self, handle: &TempTableHandle) -> Result<Arc<ColumnTable>, CatalogError> {
        Ok(self.store.temp(handle)?)
    }

    pub fn drop_temp(&mut self, handle: &TempTableHandle) -> Result<(), CatalogError> {
        Ok(self.store.drop_temp(handle)?)
    }

    pub fn drop_all_temps(&mut self) -> usize {
        self.store.drop_all_temps()
    }

    pub fn live_temp_count(&self) -> usize {
        self.store.live_temp_count()
    }

    pub fn store(&self) -> &TableStore {
        &self.store
    }
}
