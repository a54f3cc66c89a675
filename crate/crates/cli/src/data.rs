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

//! Getting tables into a catalog: CSV files with schema specs, or the
//! benchmark generators.

use std::path::{Path, PathBuf};

use esc_bench::gen::{generate, GenSpec};
use esc_core::catalog::Catalog;
use esc_core::storage::{parse_schema, read_csv_file, ColumnTable, CsvOptions, Schema};

use crate::args::{CsvArgs, DataArgs, DataSet};
use crate::CliError;

/// `PATH` or `NAME=PATH`.
pub fn split_load_spec(spec: &str) -> Result<(String, PathBuf), CliError> {
    let (name, path) = match spec.split_once('=') {
        Some((name, path)) => (name.trim().to_ascii_lowercase(), PathBuf::from(path)),
        None => {
            let path = PathBuf::from(spec);
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| {
                    CliError::Usage(format!("cannot derive a table name from {spec:?}"))
                })?
                .to_ascii_lowercase();
            (stem, path)
        }
    };
    if name.is_empty() || path.as_os_str().is_empty() {
        return Err(CliError::Usage(format!(
            "bad load spec {spec:?}, expected PATH or NAME=PATH"
        )));
    }
    Ok((name, path))
}

fn schema_for(name: &str, path: &Path, csv: &CsvArgs) -> Result<Schema, CliError> {
    for entry in &csv.schemas {
        let (table, spec) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad schema {entry:?}, expected NAME=SPEC")))?;
        if table.trim().eq_ignore_ascii_case(name) {
            return parse_schema(spec)
                .map_err(|e| CliError::Usage(format!("schema for {name}: {e}")));
        }
    }
    let sidecar = path.with_extension("schema");
    let spec = std::fs::read_to_string(&sidecar).map_err(|_| {
        CliError::Usage(format!(
            "no schema for table {name}: pass --schema {name}=col:type,... or create {}",
            sidecar.display()
        ))
    })?;
    parse_schema(spec.trim()).map_err(|e| CliError::Runtime(format!("{}: {e}", sidecar.display())))
}

/// Loads one CSV and registers it; returns the registered row count.
pub fn load_csv(
    catalog: &mut Catalog,
    spec: &str,
    csv: &CsvArgs,
) -> Result<(String, usize), CliError> {
    let (name, path) = split_load_spec(spec)?;
    let schema = schema_for(&name, &path, csv)?;
    let options = CsvOptions {
        has_header: !csv.no_header,
    };
    let table = read_csv_file(&name, &schema, &path, options)
        .map_err(|e| CliError::Runtime(format!("loading {}: {e}", path.display())))?;
    let rows = table.row_count();
    catalog
        .register_table(table)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((name, rows))
}

pub fn gen_spec(set: DataSet, scale: f64, seed: u64) -> GenSpec {
    match set {
        DataSet::Tpch => GenSpec::tpch(scale, seed),
        DataSet::Ssb => GenSpec::ssb(scale, seed),
    }
}

pub fn generate_tables(spec: &GenSpec) -> Result<Vec<ColumnTable>, CliError> {
    generate(spec).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Builds the catalog for a query command. Progress goes to stderr so stdout
/// holds only results.
pub fn build_catalog(data: &DataArgs, scale: f64, seed: u64) -> Result<Catalog, CliError> {
    let mut catalog = Catalog::new();
    if let Some(set) = data.data {
        for table in generate_tables(&gen_spec(set, scale, seed))? {
            catalog
                .register_table(table)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    for spec in &data.loads {
        let (name, rows) = load_csv(&mut catalog, spec, &data.csv)?;
        eprintln!("{name}: {rows} rows");
    }
    Ok(catalog)
}

pub fn schema_line(table: &ColumnTable) -> String {
    table
        .schema()
        .iter()
        .map(|f| {
            format!(
                "{}:{}",
                f.name,
                f.data_type.to_string().to_ascii_lowercase()
            )
        })
        .collect::<Vec<_>>()
        .join(",")
}
