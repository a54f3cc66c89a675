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

use std::sync::OnceLock;

use common::{catalog_with, predicate, sample_table, Expr};
use esc_core::catalog::Catalog;
use esc_core::exec::{count_star, eval_predicate, RowSelection};
use esc_core::optimizer::{build_count_subquery, compute_exact_selectivity};
use esc_core::sql::{analyze, build_join_graph, parse, Predicate};
use proptest::prelude::*;

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| catalog_with(vec![sample_table("r", 20_000, 7)]))
}

fn bind(e: &Expr) -> Predicate {
    let sql = format!("SELECT COUNT(*) FROM r WHERE {}", e.sql("r"));
    let ra = analyze(&parse(&sql).unwrap(), catalog()).unwrap_or_else(|err| panic!("{sql}: {err}"));
    build_join_graph(&ra)
        .unwrap()
        .residual("r")
        .cloned()
        .unwrap_or(Predicate::Const(true))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn count_subquery_matches_row_oracle(e in predicate()) {
        let c = catalog();
        let table = c.table("r").unwrap();
        let p = bind(&e);
        let expected = e.oracle_count(&table);
        if p.is_true() {
            prop_assert_eq!(expected, table.row_count() as u64);
            return Ok(());
        }
        let ra = analyze(&parse(&format!("SELECT COUNT(*) FROM r WHERE {}", e.sql("r"))).unwrap(), c).unwrap();
        let graph = build_join_graph(&ra).unwrap();
        let sub = build_count_subquery(&graph.nodes[0], &p, &[]).unwrap();
        let (count, _) = compute_exact_selectivity(c, &sub).unwrap();
        prop_assert_eq!(count, expected, "{}", e.sql("r"));
        prop_assert_eq!(count_star(&table, Some(&p)).unwrap(), expected);
    }

    #[test]
    fn fused_filter_equals_sequential_filters(e1 in predicate(), e2 in predicate()) {
        let table = catalog().table("r").unwrap();
        let (p1, p2) = (bind(&e1), bind(&e2));
        let all = RowSelection::All(table.row_count());
        let fused = eval_predicate(&table, &Predicate::and([p1.clone(), p2.clone()]), all.clone()).unwrap();
        let staged = eval_predicate(&table, &p2, eval_predicate(&table, &p1, all).unwrap()).unwrap();
        prop_assert_eq!(fused.into_indices(), staged.into_indices());
    }
}

#[test]
fn selection_indices_match_oracle_rows() {
    let table = catalog().table("r").unwrap();
    let e = Expr::Or(
        Box::new(Expr::Cmp(
            "n",
            esc_core::sql::CmpOp::Lt,
            common::Lit::Int(10),
        )),
        Box::new(Expr::Not(Box::new(Expr::Cmp(
            "t",
            esc_core::sql::CmpOp::Eq,
            common::Lit::Text("tin".into()),
        )))),
    );
    let got = eval_predicate(&table, &bind(&e), RowSelection::All(table.row_count()))
        .unwrap()
        .into_indices();
    let want: Vec<u32> = (0..table.row_count())
        .filter(|&r| e.eval(&table, r) == Some(true))
        .map(|r| r as u32)
        .collect();
    assert_eq!(got, want);
}

#[test]
fn trivial_predicates() {
    let table = catalog().table("r").unwrap();
    let all = RowSelection::All(table.row_count());
    assert_eq!(
        eval_predicate(&table, &Predicate::Const(true), all.clone()).unwrap(),
        all
    );
    assert!(eval_predicate(&table, &Predicate::Const(false), all)
        .unwrap()
        .is_empty());
    assert_eq!(count_star(&table, None).unwrap(), 20_000);
    let empty = sample_table("e", 0, 1);
    assert_eq!(
        count_star(&empty, Some(&bind(&Expr::Udf(esc_core::sql::CmpOp::Gt, 5)))).unwrap(),
        0
    );
}
