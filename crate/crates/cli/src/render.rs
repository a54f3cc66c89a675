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

use esc_core::storage::{ColumnTable, Value};
use esc_core::QueryResult;
use serde_json::{json, Value as Json};

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn table_text(table: &ColumnTable) -> String {
    let header: Vec<String> = table
        .columns()
        .iter()
        .map(|c| c.name().to_string())
        .collect();
    let rows: Vec<Vec<String>> = (0..table.row_count())
        .map(|i| table.row(i).iter().map(Value::to_string).collect())
        .collect();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join(" | ").trim_end())
    };
    let mut out = line(&header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("{}\n", rule.join("-+-")));
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

pub fn result_text(result: &QueryResult, explain: bool) -> String {
    let mut out = String::new();
    if explain {
        out.push_str(&result.plan.explain_text());
        out.push('\n');
    }
    out.push_str(&table_text(&result.table));
    let n = result.table.row_count();
    out.push_str(&format!(
        "({n} row{}) plan {:.3} ms, exec {:.3} ms\n",
        if n == 1 { "" } else { "s" },
        ms(result.plan_time),
        ms(result.exec_time)
    ));
    out
}

fn value_json(v: Value) -> Json {
    match v {
        Value::Null => Json::Null,
        Value::Int(i) => json!(i),
        other => json!(other.to_string()),
    }
}

pub fn result_json(result: &QueryResult, explain: bool) -> Json {
    let table = &result.table;
    let columns: Vec<&str> = table.columns().iter().map(|c| c.name()).collect();
    let rows: Vec<Json> = (0..table.row_count())
        .map(|i| Json::Array(table.row(i).into_iter().map(value_json).collect()))
        .collect();
    let mut out = json!({
        "columns": columns,
        "rows": rows,
        "row_count": table.row_count(),
        "plan_ms": ms(result.plan_time),
        "exec_ms": ms(result.exec_time),
    });
    if explain {
        out["explain"] = result.plan.explain_json();
    }
    out
}
