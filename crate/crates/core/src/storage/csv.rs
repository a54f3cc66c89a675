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

//! CSV ingestion: comma delimiter, RFC-4180 quoting, `\N` for NULL and
//! `YYYY-MM-DD` dates.

use std::io::Read;
use std::path::Path;

use super::table::ColumnTable;
use super::types::{Field, Value};
use super::StorageError;

#[derive(Debug, Clone, Copy, Default)]
pub struct CsvOptions {
    pub has_header: bool,
}

/// Reads CSV records into a new table named `name`. Row numbers in errors are
/// 1-based data rows (the header line, if any, is not counted).
pub fn read_csv<R: Read>(
    name: &str,
    schema: &[Field],
    reader: R,
    options: CsvOptions,
) -> Result<ColumnTable, StorageError> {
    let mut table = ColumnTable::new(name, schema)?;
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .from_reader(reader);
    let mut batch: Vec<Vec<Value>> = Vec::with_capacity(4096);
    for (i, record) in csv_reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| StorageError::Csv {
            row,
            message: e.to_string(),
        })?;
        if record.len() != schema.len() {
            return Err(StorageError::AtRow {
                row,
                source: Box::new(StorageError::ArityMismatch {
                    row,
                    expected: schema.len(),
                    found: record.len(),
                }),
            });
        }
        let values = record
            .iter()
            .zip(schema)
            .map(|(raw, field)| Value::parse(field.data_type, raw))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| StorageError::AtRow {
                row,
                source: Box::new(e),
            })?;
        batch.push(values);
        if batch.len() == batch.capacity() {
            table.append_rows(&batch)?;
            batch.clear();
        }
    }
    table.append_rows(&batch)?;
    Ok(table)
}

pub fn read_csv_file(
    name: &str,
    schema: &[Field],
    path: &Path,
    options: CsvOptions,
) -> Result<ColumnTable, StorageError> {
    let file = std::fs::File::open(path)
        .map_err(|e| StorageError::Io(format!("{}: {e}", path.display())))?;
    read_csv(name, schema, std::io::BufReader::new(file), options)
}
