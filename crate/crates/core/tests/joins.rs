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

mod common;

use common::{catalog_with, predicate, sample_table, Expr};
use esc_core::optimizer::EscConfig;
use esc_core::storage::{ColumnTable, Value};
use esc_core::Engine;
use proptest::prelude::*;

struct Rel {
    rows: Vec<Vec<Value>>,
    keep: Vec<bool>,
}

impl Rel {
    fn new(t: &ColumnTable, e: &Expr) -> Self {
        Rel {
            rows: (0..t.row_count()).map(|r| t.row(r)).collect(),
            keep: (0..t.row_count())
                .map(|r| e.eval(t, r) == Some(true))
                .collect(),
        }
    }

    fn live(&self) -> impl Iterator<Item = &Vec<Value>> {
        self.rows
            .iter()
            .zip(&self.keep)
            .filter(|(_, k)| **k)
            .map(|(r, _)| r)
    }
}

// Column positions in the sample tables.
const K: usize = 0;
const A: usize = 1;
const B: usize = 2;
const S: usize = 4;
const N: usize = 5;

fn eq(a: &Value, b: &Value) -> bool {
    !matches!(a, Value::Null) && a == b
}

/// r.a = s.k AND s.s = t.s, output (r.k, s.b, t.n).
fn nested_loop(r: &Rel, s: &Rel, t: &Rel) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    for rr in r.live() {
        for sr in s.live().filter(|sr| eq(&rr[A], &sr[K])) {
            for tr in t.live().filter(|tr| eq(&sr[S], &tr[S])) {
                out.push(vec![rr[K].clone(), sr[B].clone(), tr[N].clone()]);
            }
        }
    }
    out.sort_by_key(|row| format!("{row:?}"));
    out
}

fn sorted_rows(t: &ColumnTable) -> Vec<Vec<Value>> {
    let mut rows: Vec<Vec<Value>> = (0..t.row_count()).map(|i| t.row(i)).collect();
    rows.sort_by_key(|row| format!("{row:?}"));
    rows
}

fn configs() -> Vec<EscConfig> {
    vec![
        EscConfig::baseline(),
        EscConfig::histogram(),
        EscConfig {
            min_table_size: 100,
            max_selectivity: 0.6,
            ..EscConfig::default()
        },
        EscConfig {
            min_table_size: 0,
            max_selectivity: 1.0,
            ..EscConfig::default()
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn three_way_join_matches_nested_loop(pr in predicate(), ps in predicate(), pt in predicate()) {
        let (r, s, t) = (sample_table("r", 9000, 11), sample_table("s", 400, 12), sample_table("t", 60, 13));
        let expected = nested_loop(&Rel::new(&r, &pr), &Rel::new(&s, &ps), &Rel::new(&t, &pt));
        let mut engine = Engine::new(catalog_with(vec![r, s, t]));
        let sql = format!(
            "SELECT r.k, s.b, t.n FROM r, s, t WHERE r.a = s.k AND s.s = t.s AND {} AND {} AND {}",
            pr.sql("r"), ps.sql("s"), pt.sql("t")
        );
        let count_sql = sql.replacen("r.k, s.b, t.n", "COUNT(*)", 1);
        for config in configs() {
            for workers in [1, 3] {
                engine.workers = workers;
                let res = engine.query_with(&sql, &config).unwrap();
                prop_assert_eq!(sorted_rows(&res.table), expected.clone(), "{:?} workers={}", config, workers);
                prop_assert_eq!(res.stats.output_rows, expected.len() as u64);
                let count = engine.query_with(&count_sql, &config).unwrap();
                prop_assert_eq!(count.count(), expected.len() as u64);
                prop_assert_eq!(engine.catalog.live_temp_count(), 0);
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let mut engine = Engine::new(catalog_with(vec![
        sample_table("r", 60_000, 3),
        sample_table("s", 1000, 4),
    ]));
    let sql = "SELECT r.k, r.b, s.s FROM r, s WHERE r.a = s.k AND s.b < 5000 AND r.n > 20";
    engine.workers = 1;
    let one = engine.query(sql).unwrap();
    engine.workers = 8;
    let eight = engine.query(sql).unwrap();
    assert!(one.table.row_count() > 1000);
    assert_eq!(sorted_rows(&one.table), sorted_rows(&eight.table));
    assert_eq!(one.stats.output_rows, eight.stats.output_rows);
    assert_eq!(
        eight.stats.joins.last().unwrap().probe_output_rows,
        eight.stats.output_rows
    );
}

#[test]
fn empty_build_gives_empty_result() {
    let mut engine = Engine::new(catalog_with(vec![
        sample_table("r", 5000, 3),
        sample_table("s", 2000, 4),
    ]));
    let res = engine
        .query("SELECT COUNT(*) FROM r, s WHERE r.a = s.k AND s.a < 0")
        .unwrap();
    assert_eq!(res.count(), 0);
    assert_eq!(res.plan.decisions[0].exact_count, 0);
    assert!(res.plan.decisions[0].pushed_down);
    assert_eq!(res.stats.joins[0].probe_output_rows, 0);
}

#[test]
fn unique_key_join_keeps_probe_cardinality() {
    let mut engine = Engine::new(catalog_with(vec![
        sample_table("r", 5000, 3),
        sample_table("s", 1000, 4),
    ]));
    // Every r.a is in 0..1000 and s.k is unique over 0..1000.
    let res = engine
        .query("SELECT COUNT(*) FROM r, s WHERE r.a = s.k AND r.n < 50")
        .unwrap();
    let probe_pass = engine
        .query("SELECT COUNT(*) FROM r WHERE r.n < 50")
        .unwrap();
    assert_eq!(res.count(), probe_pass.count());
}
