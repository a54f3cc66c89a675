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

use std::collections::HashSet;

use super::column::Column;
use super::types::{DataType, Field, Schema, Value};
use super::StorageError;

/// An in-memory columnar relation. All columns always have `row_count` values.
#[derive(Debug, Clone)]
pub struct ColumnTable {
    name: String,
    columns: Vec<Column>,
    row_count: usize,
    is_temporary: bool,
}

impl ColumnTable {
    /// An empty table with the given schema.
    pub fn new(name: impl Into<String>, schema: &[Field]) -> Result<Self, StorageError> {
        if schema.is_empty() {
            return Err(StorageError::EmptySchema);
        }
        check_unique(schema.iter().map(|f| f.name.as_str()))?;
        Ok(Self {
            name: name.into(),
            columns: schema
                .iter()
                .map(|f| Column::new(f.name.clone(), f.data_type))
                .collect(),
            row_count: 0,
            is_temporary: false,
        })
    }

    /// Assembles a table from finished columns of equal length.
    pub fn from_columns(
        name: impl Into<String>,
        columns: Vec<Column>,
        is_temporary: bool,
    ) -> Result<Self, StorageError> {
        if columns.is_empty() {
            return Err(StorageError::EmptySchema);
        }
        check_unique(columns.iter().map(|c| c.name()))?;
        let row_count = columns[0].len();
        if let Some(bad) = columns.iter().find(|c| c.len() != row_count) {
            return Err(StorageError::LengthMismatch {
                expected: row_count,
                found: bad.len(),
            });
        }
        Ok(Self {
            name: name.into(),
            columns,
            row_count,
            is_temporary,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn is_temporary(&self) -> bool {
        self.is_temporary
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn schema(&self) -> Schema {
        self.columns
            .iter()
            .map(|c| Field::new(c.name(), c.data_type()))
            .collect()
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name() == name)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name() == name)
    }

    /// Appends a batch atomically: either every row is stored or none is.
    pub fn append_rows(&mut self, rows: &[Vec<Value>]) -> Result<usize, StorageError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(StorageError::ArityMismatch {
                    row: i,
                    expected: self.columns.len(),
                    found: row.len(),
                });
            }
            for (col, value) in self.columns.iter().zip(row) {
                col.check_value(value)?;
            }
        }
        for row in rows {
            for (col, value) in self.columns.iter_mut().zip(row) {
                col.push_checked(value);
            }
        }
        self.row_count += rows.len();
        Ok(self.row_count)
    }

    /// Parses text fields per column kind, then appends. Errors carry the
    /// zero-based index of the offending row within `rows`.
    pub fn append_text_rows<S: AsRef<str>>(
        &mut self,
        rows: &[Vec<S>],
    ) -> Result<usize, StorageError> {
        let kinds: Vec<DataType> = self.columns.iter().map(|c| c.data_type()).collect();
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != kinds.len() {
                return Err(StorageError::ArityMismatch {
                    row: i,
                    expected: kinds.len(),
                    found: row.len(),
                });
            }
            let values = row
                .iter()
                .zip(&kinds)
                .map(|(raw, &ty)| Value::parse(ty, raw.as_ref()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| StorageError::AtRow {
                    row: i,
                    source: Box::new(e),
                })?;
            parsed.push(values);
        }
        self.append_rows(&parsed)
    }

    pub fn row(&self, index: usize) -> Vec<Value> {
        self.columns.iter().map(|c| c.value(index)).collect()
    }

    /// Renders all rows as RFC-4180 CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer
            .write_record(self.columns.iter().map(|c| c.name()))
            .expect("in-memory write");
        for i in 0..self.row_count {
            let record: Vec<String> = self
                .columns
                .iter()
                .map(|c| match c.value(i) {
                    Value::Null => "\\N".to_string(),
                    v => v.to_string(),
                })
                .collect();
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush to vec")).expect("utf-8 csv")
    }

    pub(crate) fn mark_temporary(mut self) -> Self {
        self.is_temporary = true;
        self
    }
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>) -> Result<(), StorageError> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(StorageError::DuplicateColumn(name.to_string()));
        }
    }
    Ok(())
}
