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

use esc_bench::suites::{overhead_scale, run_suite, Suite, SuiteOptions, OVERHEAD_SCALES};
use esc_bench::Arm;

fn quick() -> SuiteOptions {
    SuiteOptions {
        reps: 1,
        ..SuiteOptions::default()
    }
}

#[test]
fn overhead_scale_fills_the_grid() {
    let report = overhead_scale(&OVERHEAD_SCALES, &quick()).unwrap();
    let esc: Vec<_> = report.rows_for(Arm::Esc).collect();
    assert_eq!(esc.len(), 9);
    for r in &esc {
        let base = report
            .rows_for(Arm::Baseline)
            .find(|b| b.query == r.query && b.scale == r.scale)
            .unwrap();
        assert_eq!(
            r.build_order, base.build_order,
            "{} at {}",
            r.query, r.scale
        );
        assert_eq!(r.build_card_sum, base.build_card_sum);
        assert_eq!(r.result_count, base.result_count);
        assert_eq!(r.decisions.len(), 1, "{} at {}", r.query, r.scale);
        assert_eq!(r.decisions[0]["pushdown"], false);
        assert!(r.overhead_ms > 0.0);
    }
    let text = report.text_table();
    assert!(text.contains("overhead (ms) by scale"));
}

#[test]
fn selectivity_points_cover_the_key_domain() {
    let report = run_suite(
        Suite::OverheadSelectivity,
        &SuiteOptions {
            scale: Some(0.01),
            ..quick()
        },
    )
    .unwrap();
    let esc: Vec<_> = report.rows_for(Arm::Esc).collect();
    let labels: Vec<&str> = esc.iter().map(|r| r.query.as_str()).collect();
    assert_eq!(labels, ["0.001%", "0.01%", "0.1%", "1%", "10%", "100%"]);
    let counts: Vec<u64> = esc
        .iter()
        .map(|r| r.decisions[0]["count"].as_u64().unwrap())
        .collect();
    // 15,000 orders: 0.001% rounds up to one key.
    assert_eq!(counts, [1, 2, 15, 150, 1500, 15000]);
}

#[test]
fn tpch4_report_shape() {
    let report = run_suite(Suite::Tpch4, &quick()).unwrap();
    assert_eq!(report.queries(), ["q1", "q2", "q3", "q4"]);
    assert_eq!(report.rows.len(), 8);
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["suite"], "tpch4");
    assert_eq!(json["spec"]["scale"], 0.01);
    assert_eq!(json["rows"].as_array().unwrap().len(), 8);
    for r in report.rows_for(Arm::Esc) {
        assert!(r.speedup.is_some());
        assert!(!r.decisions.is_empty());
        assert!(r.time_ms >= r.overhead_ms);
    }
}

#[test]
fn attribute_variants_add_one_column_each() {
    let report = run_suite(Suite::OverheadAttrs, &quick()).unwrap();
    let preds: Vec<String> = report
        .rows_for(Arm::Esc)
        .map(|r| r.decisions[0]["predicate"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(preds.len(), 4);
    assert!(preds[2].contains("o_orderstatus = '"), "{}", preds[2]);
    assert!(preds[3].contains("o_totalprice = "), "{}", preds[3]);
}

#[test]
fn zero_reps_is_rejected() {
    let err = run_suite(
        Suite::Tpch4,
        &SuiteOptions {
            reps: 0,
            ..SuiteOptions::default()
        },
    )
    .unwrap_err();
    assert!(err.to_string().contains("reps"));
}
