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

use serde::Serialize;

use crate::storage::{ColumnTable, DataType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnStats {
    pub name: String,
    pub data_type: DataType,
    /// Raw storage min/max; absent for TEXT and for columns with no values.
    pub min: Option<i64>,
    pub max: Option<i64>,
    pub distinct: usize,
    pub null_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableStats {
    pub row_count: usize,
    pub columns: Vec<ColumnStats>,
}

impl TableStats {
    pub fn column(&self, name: &str) -> Option<&ColumnStats> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Exact statistics; desk-scale tables fit in memory so nothing is sampled.
pub fn collect_stats(table: &ColumnTable) -> TableStats {
    let columns = table
        .columns()
        .iter()
        .map(|col| {
            let mut distinct = HashSet::new();
            let (mut min, mut max) = (None::<i64>, None::<i64>);
            for (row, &v) in col.values().iter().enumerate() {
                if col.is_null(row) {
                    continue;
                }
                distinct.insert(v);
                if col.data_type().is_numeric() {
                    min = Some(min.map_or(v, |m| m.min(v)));
                    max = Some(max.map_or(v, |m| m.max(v)));
                }
            }
            ColumnStats {
                name: col.name().to_string(),
                data_type: col.data_type(),
                min,
                max,
                distinct: distinct.len(),
                null_count: col.null_count(),
            }
        })
        .collect();
    TableStats {
        row_count: table.row_count(),
        columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::{Field, Value};

    #[test]
    fn exact_counts() {
        let mut t = ColumnTable::new(
            "orders",
            &[
                Field::new("k", DataType::Int64),
                Field::new("n", DataType::Int64),
                Field::new("s", DataType::Text),
            ],
        )
        .unwrap();
        let rows: Vec<Vec<Value>> = (0..7500)
            .map(|i| {
                vec![
                    Value::Int(i),
                    Value::Null,
                    Value::Text(format!("{}", i % 3)),
                ]
            })
            .collect();
        t.append_rows(&rows).unwrap();
        let stats = collect_stats(&t);
        assert_eq!(stats.row_count, 7500);
        let k = stats.column("k").unwrap();
        assert_eq!((k.min, k.max, k.distinct), (Some(0), Some(7499), 7500));
        let n = stats.column("n").unwrap();
        assert_eq!((n.distinct, n.min, n.null_count), (0, None, 7500));
        let s = stats.column("s").unwrap();
        assert_eq!((s.distinct, s.min), (3, None));
    }

    #[test]
    fn empty_table() {
        let t = ColumnTable::new("e", &[Field::new("k", DataType::Int64)]).unwrap();
        let stats = collect_stats(&t);
        assert_eq!(stats.row_count, 0);
        assert_eq!(stats.columns[0].min, None);
        assert_eq!(stats.columns[0].max, None);
    }
}
