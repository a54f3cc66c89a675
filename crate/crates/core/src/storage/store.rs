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
use std::sync::Arc;

use serde::Serialize;

use super::column::Column;
use super::table::ColumnTable;
use super::types::{Field, Schema, Value};
use super::StorageError;

/// Reference to an optimizer-created temporary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TempTableHandle {
    pub id: u64,
    pub schema: Schema,
    pub row_count: usize,
}

impl TempTableHandle {
    /// Internal name of the temp table. `#` never appears in a SQL identifier,
    /// so it cannot collide with a base table.
    pub fn table_name(&self) -> String {
        format!("#temp{}", self.id)
    }
}

/// Registry of base tables and live temporary tables.
#[derive(Debug, Default)]
pub struct TableStore {
    tables: BTreeMap<String, Arc<ColumnTable>>,
    temps: BTreeMap<u64, Arc<ColumnTable>>,
    next_temp_id: u64,
}

impl TableStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create_table(
        &mut self,
        name: &str,
        schema: &[Field],
    ) -> Result<Arc<ColumnTable>, StorageError> {
        let name = normalize(name)?;
        if self.tables.contains_key(&name) {
            return Err(StorageError::DuplicateTable(name));
        }
        let table = Arc::new(ColumnTable::new(name.clone(), schema)?);
        self.tables.insert(name, table.clone());
        Ok(table)
    }

    /// Registers a fully built base table.
    pub fn insert_table(&mut self, table: ColumnTable) -> Result<Arc<ColumnTable>, StorageError> {
        let name = normalize(table.name())?;
        if self.tables.contains_key(&name) {
            return Err(StorageError::DuplicateTable(name));
        }
        let table = Arc::new(table);
        self.tables.insert(name, table.clone());
        Ok(table)
    }

    pub fn append_rows(&mut self, name: &str, rows: &[Vec<Value>]) -> Result<usize, StorageError> {
        let table = self
            .tables
            .get_mut(name)
            .ok_or_else(|| StorageError::UnknownTable(name.to_string()))?;
        Arc::make_mut(table).append_rows(rows)
    }

    pub fn append_text_rows<S: AsRef<str>>(
        &mut self,
        name: &str,
        rows: &[Vec<S>],
    ) -> Result<usize, StorageError> {
        let table = self
            .tables
            .get_mut(name)
            .ok_or_else(|| StorageError::UnknownTable(name.to_string()))?;
        Arc::make_mut(table).append_text_rows(rows)
    }

    pub fn table(&self, name: &str) -> Option<Arc<ColumnTable>> {
        self.tables.get(name).cloned()
    }

    pub fn table_names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    /// Registers computed columns as a new temporary table.
    pub fn materialize_temp(
        &mut self,
        schema: &[Field],
        columns: Vec<Column>,
    ) -> Result<TempTableHandle, StorageError> {
        if schema.len() != columns.len() {
            return Err(StorageError::InvalidColumn(format!(
                "schema has {} fields but {} columns were supplied",
                schema.len(),
                columns.len()
            )));
        }
        for (field, column) in schema.iter().zip(&columns) {
            if field.name != column.name() || field.data_type != column.data_type() {
                return Err(StorageError::InvalidColumn(format!(
                    "column {} does not match schema field {}:{}",
                    column.name(),
                    field.name,
                    field.data_type
                )));
            }
        }
        let id = self.next_temp_id;
        let table =
            ColumnTable::from_columns(format!("#temp{id}"), columns, true)?.mark_temporary();
        self.next_temp_id += 1;
        let handle = TempTableHandle {
            id,
            schema: schema.to_vec(),
            row_count: table.row_count(),
        };
        self.temps.insert(id, Arc::new(table));
        Ok(handle)
    }

    pub fn temp(&self, handle: &TempTableHandle) -> Result<Arc<ColumnTable>, StorageError> {
        self.temps
            .get(&handle.id)
            .cloned()
            .ok_or(StorageError::DeadHandle(handle.id))
    }

    pub fn drop_temp(&mut self, handle: &TempTableHandle) -> Result<(), StorageError> {
        self.temps
            .remove(&handle.id)
            .map(|_| ())
            .ok_or(StorageError::DeadHandle(handle.id))
    }

    /// Drops every live temp table; returns how many were dropped.
    pub fn drop_all_temps(&mut self) -> usize {
        let n = self.temps.len();
        self.temps.clear();
        n
    }

    pub fn live_temp_count(&self) -> usize {
        self.temps.len()
    }
}

/// Identifiers are case-insensitive and stored lower-case.
pub(crate) fn normalize(name: &str) -> Result<String, StorageError> {
    let valid = !name.is_empty()
        && name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(StorageError::InvalidName(name.to_string()));
    }
    Ok(name.to_ascii_lowercase())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::DataType;

    fn key_schema() -> Schema {
        vec![Field::new("o_orderkey", DataType::Int64)]
    }

    #[test]
    fn create_and_duplicate() {
        let mut store = TableStore::new();
        let t = store.create_table("orders", &key_schema()).unwrap();
        assert_eq!(t.row_count(), 0);
        assert!(matches!(
            store.create_table("ORDERS", &key_schema()),
            Err(StorageError::DuplicateTable(_))
        ));
        assert!(matches!(
            store.create_table("t", &[]),
            Err(StorageError::EmptySchema)
        ));
        assert!(matches!(
            store.create_table("#temp0", &key_schema()),
            Err(StorageError::InvalidName(_))
        ));
    }

    #[test]
    fn append_through_store() {
        let mut store = TableStore::new();
        store.create_table("orders", &key_schema()).unwrap();
        let n = store
            .append_rows(
                "orders",
                &[
                    vec![Value::Int(1)],
                    vec![Value::Int(2)],
                    vec![Value::Int(3)],
                ],
            )
            .unwrap();
        assert_eq!(n, 3);
        assert_eq!(store.table("orders").unwrap().row_count(), 3);
    }

    fn int_column(name: &str, n: i64) -> Column {
        Column::from_parts(name, DataType::Int64, (0..n).collect(), None, None).unwrap()
    }

    #[test]
    fn materialize_and_drop() {
        let mut store = TableStore::new();
        let schema: Schema = ["a", "b", "c"]
            .iter()
            .map(|n| Field::new(*n, DataType::Int64))
            .collect();
        let cols = vec![
            int_column("a", 100),
            int_column("b", 100),
            int_column("c", 100),
        ];
        let handle = store.materialize_temp(&schema, cols).unwrap();
        assert_eq!(handle.row_count, 100);
        let t = store.temp(&handle).unwrap();
        assert!(t.is_temporary());
        assert!(store.table(&handle.table_name()).is_none());
        store.drop_temp(&handle).unwrap();
        assert!(matches!(
            store.drop_temp(&handle),
            Err(StorageError::DeadHandle(_))
        ));
        assert_eq!(store.live_temp_count(), 0);

        let never = TempTableHandle {
            id: 999,
            schema: vec![],
            row_count: 0,
        };
        assert!(matches!(
            store.drop_temp(&never),
            Err(StorageError::DeadHandle(999))
        ));
    }

    #[test]
    fn empty_temp_is_scannable() {
        let mut store = TableStore::new();
        let schema = vec![Field::new("a", DataType::Int64)];
        let handle = store
            .materialize_temp(&schema, vec![int_column("a", 0)])
            .unwrap();
        assert_eq!(handle.row_count, 0);
        assert_eq!(store.temp(&handle).unwrap().row_count(), 0);
    }

    #[test]
    fn materialize_length_mismatch() {
        let mut store = TableStore::new();
        let schema: Schema = ["a", "b"]
            .iter()
            .map(|n| Field::new(*n, DataType::Int64))
            .collect();
        let err = store
            .materialize_temp(&schema, vec![int_column("a", 100), int_column("b", 99)])
            .unwrap_err();
        assert!(matches!(
            err,
            StorageError::LengthMismatch {
                expected: 100,
                found: 99
            }
        ));
        assert_eq!(store.live_temp_count(), 0);
    }
}
