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

//! Columnar in-memory tables, dictionary-encoded text and the registry that
//! tracks base tables and optimizer-created temporary tables.

mod column;
mod csv;
mod store;
mod table;
mod types;

pub use self::column::{Column, Dictionary};
pub use self::csv::{read_csv, read_csv_file, CsvOptions};
pub use self::store::{TableStore, TempTableHandle};
pub use self::table::ColumnTable;
pub use self::types::{
    date_from_ymd, format_date, format_decimal, parse_date, parse_decimal, parse_schema,
    rescale_exact, ymd_from_days, DataType, Field, Schema, Value,
};

#[derive(Debug, thiserror::Error)]
pub enum StorageError {
    #[error("table {0} already exists")]
    DuplicateTable(String),
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("table schema must have at least one column")]
    EmptySchema,
    #[error("duplicate column {0}")]
    DuplicateColumn(String),
    #[error("invalid identifier {0:?}")]
    InvalidName(String),
    #[error("row {row}: expected {expected} values, found {found}")]
    ArityMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("column {column} of type {expected} cannot store {found:?}")]
    TypeMismatch {
        column: String,
        expected: DataType,
        found: Value,
    },
    #[error("cannot parse {value:?} as {data_type}")]
    Unparseable { value: String, data_type: DataType },
    #[error("row {row}: {source}")]
    AtRow {
        row: usize,
        #[source]
        source: Box<StorageError>,
    },
    #[error("column lengths differ: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("temp table handle {0} is not live")]
    DeadHandle(u64),
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("unknown column type {0:?}")]
    UnknownType(String),
    #[error("invalid schema entry {0:?}, expected name:type")]
    InvalidSchemaSpec(String),
    #[error("csv row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}
