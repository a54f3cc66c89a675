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

//! Benchmark reports: JSON per the documented schema plus an aligned text
//! table.

use std::fmt::{self, Write};

use serde::Serialize;

use crate::gen::Benchmark;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Baseline,
    Esc,
    Histogram,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::Baseline => "baseline",
            Arm::Esc => "esc",
            Arm::Histogram => "histogram",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecInfo {
    pub benchmark: Benchmark,
    pub scale: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub query: String,
    pub arm: Arm,
    pub scale: f64,
    /// Median planning plus execution time; includes `overhead_ms`.
    pub time_ms: f64,
    pub plan_ms: f64,
    /// Median time spent in count sub-queries and their materialization.
    pub overhead_ms: f64,
    pub build_card_sum: u64,
    pub build_order: Vec<String>,
    pub result_count: u64,
    /// Baseline median time over this arm's; absent on baseline rows.
    pub speedup: Option<f64>,
    pub decisions: Vec<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub suite: String,
    pub spec: SpecInfo,
    pub rows: Vec<ReportRow>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, query: &str, arm: Arm) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.query == query && r.arm == arm)
    }

    pub fn rows_for(&self, arm: Arm) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.arm == arm)
    }

    /// Distinct query names in report order.
    pub fn queries(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.query.as_str()) {
                out.push(&r.query);
            }
        }
        out
    }

    /// Largest over smallest ESC overhead in the report.
    pub fn overhead_ratio(&self) -> Option<f64> {
        let overheads: Vec<f64> = self.rows_for(Arm::Esc).map(|r| r.overhead_ms).collect();
        let max = overheads.iter().copied().reduce(f64::max)?;
        let min = overheads.iter().copied().reduce(f64::min)?;
        (min > 0.0).then(|| max / min)
    }

    pub fn text_table(&self) -> String {
        let mut out = format!(
            "suite {} ({} scale {} seed {})\n",
            self.suite, self.spec.benchmark, self.spec.scale, self.spec.seed
        );
        let header = [
            "query",
            "arm",
            "scale",
            "time_ms",
            "overhead_ms",
            "build_card_sum",
            "count",
            "speedup",
        ];
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.query.clone(),
                    r.arm.to_string(),
                    r.scale.to_string(),
                    format!("{:.3}", r.time_ms),
                    format!("{:.3}", r.overhead_ms),
                    r.build_card_sum.to_string(),
                    r.result_count.to_string(),
                    r.speedup.map_or("-".to_string(), |s| format!("{s:.2}x")),
                ]
            })
            .collect();
        out.push_str(&align(&header, &body));
        if self.suite == "overhead-scale" {
            out.push_str("\noverhead (ms) by scale\n");
            out.push_str(&self.scale_grid());
        }
        if let Some(ratio) = self
            .overhead_ratio()
            .filter(|_| self.suite == "overhead-selectivity")
        {
            writeln!(out, "\noverhead max/min ratio {ratio:.2}").unwrap();
        }
        out
    }

    /// Scales down, build tables across, ESC overhead in each cell.
    fn scale_grid(&self) -> String {
        let mut scales: Vec<f64> = Vec::new();
        for r in self.rows_for(Arm::Esc) {
            if !scales.contains(&r.scale) {
                scales.push(r.scale);
            }
        }
        let tables = self.queries();
        let mut header = vec!["scale"];
        header.extend(tables.iter().copied());
        let body: Vec<Vec<String>> = scales
            .iter()
            .map(|&s| {
                let mut line = vec![s.to_string()];
                for t in &tables {
                    let cell = self
                        .rows_for(Arm::Esc)
                        .find(|r| r.scale == s && r.query == *t)
                        .map_or("-".to_string(), |r| format!("{:.3}", r.overhead_ms));
                    line.push(cell);
                }
                line
            })
            .collect();
        align(&header, &body)
    }
}

fn align(header: &[&str], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for line in body {
        for (w, cell) in widths.iter_mut().zip(line) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut emit = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 0 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    emit(header.to_vec());
    for line in body {
        emit(line.iter().map(String::as_str).collect());
    }
    out
}
