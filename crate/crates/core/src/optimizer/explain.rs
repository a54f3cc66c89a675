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

use std::fmt::Write;

use serde_json::{json, Value as Json};

use super::{PhysicalPlan, RelationRef, ScanStep};
use crate::sql::QueryOutput;

fn relation_label(scan: &ScanStep) -> String {
    let name = match &scan.relation {
        RelationRef::Base(t) => t.clone(),
        RelationRef::Temp(_) => format!("temp({})", scan.table),
    };
    if scan.binding == scan.table {
        name
    } else {
        format!("{name} AS {}", scan.binding)
    }
}

fn scan_line(kind: &str, scan: &ScanStep) -> String {
    let mut s = format!("{kind} {} rows={}", relation_label(scan), scan.input_rows);
    if let Some(p) = &scan.predicate {
        write!(s, " filter={p}").unwrap();
    }
    s
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl PhysicalPlan {
    /// One `ESC` line per sub-query, then the plan tree.
    pub fn explain_text(&self) -> String {
        let mut out = String::new();
        for d in &self.decisions {
            writeln!(
                out,
                "ESC table={} count={} sel={:.6} pushdown={} time_ms={:.3}",
                d.table,
                d.exact_count,
                d.selectivity,
                d.pushed_down,
                ms(d.subquery_time)
            )
            .unwrap();
        }
        match &self.output {
            QueryOutput::CountStar => out.push_str("Aggregate COUNT(*)\n"),
            QueryOutput::Columns(cols) => {
                let names: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
                writeln!(out, "Project {}", names.join(", ")).unwrap();
            }
        }
        let depth = self.builds.len();
        for (i, b) in self.builds.iter().enumerate().rev() {
            let keys: Vec<String> = b.keys.iter().map(|(o, n)| format!("{o} = {n}")).collect();
            writeln!(
                out,
                "{}HashJoin {}",
                "  ".repeat(depth - i),
                keys.join(" AND ")
            )
            .unwrap();
        }
        writeln!(
            out,
            "{}{}",
            "  ".repeat(depth + 1),
            scan_line("Probe", &self.probe)
        )
        .unwrap();
        for (i, b) in self.builds.iter().enumerate() {
            writeln!(
                out,
                "{}{}",
                "  ".repeat(depth - i + 1),
                scan_line("Build", &b.scan)
            )
            .unwrap();
        }
        out
    }

    pub fn explain_json(&self) -> Json {
        let scan = |s: &ScanStep| {
            json!({
                "binding": s.binding,
                "table": s.table,
                "relation": match &s.relation {
                    RelationRef::Base(t) => t.clone(),
                    RelationRef::Temp(_) => format!("temp({})", s.table),
                },
                "filter": s.predicate.as_ref().map(|p| p.to_string()),
                "input_rows": s.input_rows,
                "effective": s.effective,
            })
        };
        json!({
            "decisions": self.decisions.iter().map(|d| json!({
                "table": d.table,
                "binding": d.binding,
                "predicate": d.predicate.to_string(),
                "row_count": d.row_count,
                "count": d.exact_count,
                "sel": d.selectivity,
                "qualified": d.qualified,
                "pushdown": d.pushed_down,
                "time_ms": ms(d.subquery_time),
                "materialize_ms": d.materialize_time.map(ms),
            })).collect::<Vec<_>>(),
            "probe": scan(&self.probe),
            "builds": self.builds.iter().map(|b| {
                let mut v = scan(&b.scan);
                v["keys"] = json!(b.keys.iter().map(|(o, n)| [o.to_string(), n.to_string()]).collect::<Vec<_>>());
                v
            }).collect::<Vec<_>>(),
            "build_card_sum": self.build_card_sum(),
        })
    }
}
