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

//! Acceptance criteria for the engine, optimizer and benchmark harness.
//! Every criterion prints one PASS/FAIL line; the test fails if any does.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write;

use esc_bench::gen::{generate, GenSpec};
use esc_bench::queries::{BenchQuery, SSB, SSB_MOST_SELECTIVE, TPCH4};
use esc_bench::suites::{load, run_suite, Suite, SuiteOptions};
use esc_bench::{Arm, BenchReport};
use esc_core::catalog::Catalog;
use esc_core::optimizer::{
    build_count_subquery, compute_exact_selectivity, decide_pushdown, EscConfig,
};
use esc_core::sql::{analyze, build_join_graph, parse, sql_literal, CmpOp};
use esc_core::storage::{ColumnTable, Value};
use esc_core::Engine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;
const EXACTNESS_PREDICATES: usize = 200;
const EXACTNESS_MAX_ROWS: usize = 100_000;
const TPCH4_STRICTLY_SMALLER: usize = 3;
const TPCH4_FASTER: usize = 3;
const MIN_SPEEDUP: f64 = 1.0;
const SELECTIVITY_POINTS: usize = 6;
const MAX_OVERHEAD_RATIO: f64 = 3.0;
const ATTRIBUTE_VARIANTS: usize = 4;
const THRESHOLDS: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.5];
const WORKERS: [usize; 2] = [1, 8];

struct Verdict {
    criterion: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(criterion: u8, name: &'static str, failures: Vec<String>, summary: String) -> Verdict {
    let pass = failures.is_empty();
    let detail = if pass { summary } else { failures.join("; ") };
    Verdict {
        criterion,
        name,
        pass,
        detail,
    }
}

#[test]
fn acceptance() {
    let tpch = run_suite(
        Suite::Tpch4,
        &SuiteOptions {
            histogram_arm: true,
            ..SuiteOptions::default()
        },
    )
    .expect("tpch4 suite");
    let ssb = run_suite(Suite::Ssb, &SuiteOptions::default()).expect("ssb suite");

    let verdicts = vec![
        exactness(),
        result_equivalence(&tpch, &ssb),
        plan_dominance(&tpch, &ssb),
        speedup_direction(&tpch, &ssb),
        overhead_flatness(),
        conjunction_monotonicity(),
        policy_properties(),
        determinism(),
        estimator_contrast(&tpch),
    ];
    // Written to the raw handle so the lines survive output capture.
    let mut err = std::io::stderr();
    for v in &verdicts {
        writeln!(
            err,
            "criterion {} {}: {} ({})",
            v.criterion,
            v.name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        )
        .unwrap();
    }
    let failed: Vec<u8> = verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| v.criterion)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

// ---------------------------------------------------------------- 1

/// Reference predicate evaluated row by row over decoded values.
#[derive(Debug, Clone)]
enum Pred {
    Cmp(usize, CmpOp, Value),
    Between(usize, Value, Value),
    /// `mix(x, y) op k` with `mix(x, y) = x - 2y`.
    Udf(usize, usize, CmpOp, i64),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    Not(Box<Pred>),
}

struct Decoded {
    name: String,
    columns: Vec<(String, Vec<Value>)>,
    numeric: Vec<usize>,
}

impl Decoded {
    fn new(t: &ColumnTable) -> Self {
        let columns: Vec<(String, Vec<Value>)> = t
            .columns()
            .iter()
            .map(|c| {
                (
                    c.name().to_string(),
                    (0..t.row_count()).map(|r| c.value(r)).collect(),
                )
            })
            .collect();
        let numeric = t
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.data_type().is_numeric())
            .map(|(i, _)| i)
            .collect();
        Self {
            name: t.name().to_string(),
            columns,
            numeric,
        }
    }

    fn rows(&self) -> usize {
        self.columns[0].1.len()
    }
}

fn value_order(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        (Value::Decimal { units: x, .. }, Value::Decimal { units: y, .. }) => x.cmp(y),
        (Value::Date(x), Value::Date(y)) => x.cmp(y),
        (Value::Text(x), Value::Text(y)) => x.as_str().cmp(y.as_str()),
        _ => panic!("incomparable {a:?} and {b:?}"),
    }
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Int(x) => *x as f64,
        Value::Decimal { units, scale } => *units as f64 / 10f64.powi(*scale as i32),
        Value::Date(d) => *d as f64,
        other => panic!("not numeric: {other:?}"),
    }
}

fn mix(x: f64, y: f64) -> f64 {
    x - 2.0 * y
}

impl Pred {
    fn eval(&self, t: &Decoded, row: usize) -> bool {
        match self {
            Pred::Cmp(c, op, lit) => {
                op.holds(value_order(&t.columns[*c].1[row], lit), Ordering::Equal)
            }
            Pred::Between(c, lo, hi) => {
                let v = &t.columns[*c].1[row];
                value_order(v, lo).is_ge() && value_order(v, hi).is_le()
            }
            Pred::Udf(x, y, op, k) => {
                let r = mix(as_f64(&t.columns[*x].1[row]), as_f64(&t.columns[*y].1[row]));
                op.holds(r, *k as f64)
            }
            Pred::And(ps) => ps.iter().all(|p| p.eval(t, row)),
            Pred::Or(ps) => ps.iter().any(|p| p.eval(t, row)),
            Pred::Not(p) => !p.eval(t, row),
        }
    }

    fn sql(&self, t: &Decoded) -> String {
        let name = |c: &usize| &t.columns[*c].0;
        match self {
            Pred::Cmp(c, op, lit) => format!("{} {} {}", name(c), op.symbol(), sql_literal(lit)),
            Pred::Between(c, lo, hi) => format!(
                "{} BETWEEN {} AND {}",
                name(c),
                sql_literal(lo),
                sql_literal(hi)
            ),
            Pred::Udf(x, y, op, k) => format!("mix({}, {}) {} {k}", name(x), name(y), op.symbol()),
            Pred::And(ps) => format!(
                "({})",
                ps.iter()
                    .map(|p| p.sql(t))
                    .collect::<Vec<_>>()
                    .join(" AND ")
            ),
            Pred::Or(ps) => format!(
                "({})",
                ps.iter().map(|p| p.sql(t)).collect::<Vec<_>>().join(" OR ")
            ),
            Pred::Not(p) => format!("NOT ({})", p.sql(t)),
        }
    }
}

const OPS: [CmpOp; 6] = [
    CmpOp::Eq,
    CmpOp::NotEq,
    CmpOp::Lt,
    CmpOp::LtEq,
    CmpOp::Gt,
    CmpOp::GtEq,
];

/// A value near one that occurs in column `c`.
fn literal(t: &Decoded, c: usize, rng: &mut ChaCha8Rng) -> Value {
    let v = t.columns[c].1[rng.random_range(0..t.rows())].clone();
    match v {
        Value::Int(x) => Value::Int(x + rng.random_range(-3..=3)),
        Value::Date(d) => Value::Date(d + rng.random_range(-30..=30)),
        Value::Decimal { units, scale } => Value::Decimal {
            units: units + rng.random_range(-500..=500),
            scale,
        },
        Value::Text(s) if rng.random_bool(0.1) => Value::Text(format!("{s}~")),
        other => other,
    }
}

fn random_pred(t: &Decoded, depth: u32, rng: &mut ChaCha8Rng) -> Pred {
    let pick = if depth == 0 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..6)
    };
    match pick {
        0 => {
            let c = rng.random_range(0..t.columns.len());
            let op = if rng.random_bool(0.4) {
                CmpOp::Eq
            } else {
                OPS[rng.random_range(0..OPS.len())]
            };
            Pred::Cmp(c, op, literal(t, c, rng))
        }
        1 => {
            let c = rng.random_range(0..t.columns.len());
            let (a, b) = (literal(t, c, rng), literal(t, c, rng));
            match value_order(&a, &b) {
                Ordering::Greater => Pred::Between(c, b, a),
                _ => Pred::Between(c, a, b),
            }
        }
        2 => {
            let x = t.numeric[rng.random_range(0..t.numeric.len())];
            let y = t.numeric[rng.random_range(0..t.numeric.len())];
            let row = rng.random_range(0..t.rows());
            let k = mix(as_f64(&t.columns[x].1[row]), as_f64(&t.columns[y].1[row])).round() as i64;
            Pred::Udf(x, y, OPS[rng.random_range(0..OPS.len())], k)
        }
        3 => Pred::And(
            (0..rng.random_range(2..=3))
                .map(|_| random_pred(t, depth - 1, rng))
                .collect(),
        ),
        4 => Pred::Or(
            (0..rng.random_range(2..=3))
                .map(|_| random_pred(t, depth - 1, rng))
                .collect(),
        ),
        _ => Pred::Not(Box::new(random_pred(t, depth - 1, rng))),
    }
}

fn exactness() -> Verdict {
    let mut catalog = Catalog::new();
    let mut tables = Vec::new();
    for t in generate(&GenSpec::tpch(0.01, SEED)).unwrap() {
        if t.name() == "lineitem" || t.name() == "orders" {
            assert!(t.row_count() <= EXACTNESS_MAX_ROWS);
            tables.push(Decoded::new(&t));
        }
        catalog.register_table(t).unwrap();
    }
    catalog
        .register_udf("mix", 2, |a| Ok(mix(a[0], a[1])))
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut atoms = [0usize; 3];
    for i in 0..EXACTNESS_PREDICATES {
        let t = &tables[i % tables.len()];
        let pred = random_pred(t, rng.random_range(0..=3), &mut rng);
        count_atoms(&pred, &mut atoms);
        let sql = format!("SELECT COUNT(*) FROM {} WHERE {}", t.name, pred.sql(t));
        let expected = (0..t.rows()).filter(|&r| pred.eval(t, r)).count() as u64;
        let ra = analyze(&parse(&sql).unwrap(), &catalog).unwrap();
        let graph = build_join_graph(&ra).unwrap();
        let node = &graph.nodes[0];
        let found = match graph.residual(&node.binding) {
            Some(p) => {
                let sub = build_count_subquery(node, p, &[]).unwrap();
                compute_exact_selectivity(&catalog, &sub).unwrap().0
            }
            None => compute_exact_selectivity(&catalog, &ra).unwrap().0,
        };
        if found != expected {
            failures.push(format!("{sql}: engine {found}, oracle {expected}"));
        }
    }
    verdict(
        1,
        "exactness",
        failures,
        format!(
            "{EXACTNESS_PREDICATES}/{EXACTNESS_PREDICATES} counts equal the oracle; atoms cmp/between/udf = {}/{}/{}",
            atoms[0], atoms[1], atoms[2]
        ),
    )
}

fn count_atoms(p: &Pred, atoms: &mut [usize; 3]) {
    match p {
        Pred::Cmp(..) => atoms[0] += 1,
        Pred::Between(..) => atoms[1] += 1,
        Pred::Udf(..) => atoms[2] += 1,
        Pred::And(ps) | Pred::Or(ps) => ps.iter().for_each(|p| count_atoms(p, atoms)),
        Pred::Not(p) => count_atoms(p, atoms),
    }
}

// ---------------------------------------------------------------- 2, 3, 4, 9

fn pairs(report: &BenchReport) -> Vec<(&str, &esc_bench::ReportRow, &esc_bench::ReportRow)> {
    report
        .queries()
        .into_iter()
        .map(|q| {
            (
                q,
                report.row(q, Arm::Baseline).unwrap(),
                report.row(q, Arm::Esc).unwrap(),
            )
        })
        .collect()
}

fn result_equivalence(tpch: &BenchReport, ssb: &BenchReport) -> Verdict {
    let mut failures = Vec::new();
    let mut n = 0;
    for report in [tpch, ssb] {
        for q in report.queries() {
            let base = report.row(q, Arm::Baseline).unwrap().result_count;
            for r in report.rows.iter().filter(|r| r.query == q) {
                n += 1;
                if r.result_count != base {
                    failures.push(format!(
                        "{q} {}: {} vs baseline {base}",
                        r.arm, r.result_count
                    ));
                }
            }
        }
    }
    let queries = tpch.queries().len() + ssb.queries().len();
    assert_eq!(queries, TPCH4.len() + SSB.len());
    verdict(
        2,
        "result equivalence",
        failures,
        format!("{queries} queries, {n} arm runs agree"),
    )
}

fn plan_dominance(tpch: &BenchReport, ssb: &BenchReport) -> Verdict {
    let mut failures = Vec::new();
    for report in [tpch, ssb] {
        for (q, base, esc) in pairs(report) {
            if esc.build_card_sum > base.build_card_sum {
                failures.push(format!(
                    "{q}: esc {} > baseline {}",
                    esc.build_card_sum, base.build_card_sum
                ));
            }
        }
    }
    let strictly = pairs(tpch)
        .iter()
        .filter(|(_, b, e)| e.build_card_sum < b.build_card_sum)
        .count();
    if strictly < TPCH4_STRICTLY_SMALLER {
        failures.push(format!(
            "only {strictly} tpch4 queries strictly smaller (need {TPCH4_STRICTLY_SMALLER})"
        ));
    }
    let sums: Vec<String> = pairs(tpch)
        .iter()
        .map(|(q, b, e)| format!("{q} {}->{}", b.build_card_sum, e.build_card_sum))
        .collect();
    verdict(
        3,
        "plan dominance",
        failures,
        format!(
            "esc <= baseline everywhere; tpch4 strictly smaller {strictly}/4: {}",
            sums.join(", ")
        ),
    )
}

fn speedup_direction(tpch: &BenchReport, ssb: &BenchReport) -> Verdict {
    let mut failures = Vec::new();
    let speedups: Vec<(String, f64)> = pairs(tpch)
        .iter()
        .map(|(q, _, e)| (q.to_string(), e.speedup.unwrap()))
        .collect();
    let faster = speedups.iter().filter(|(_, s)| *s >= MIN_SPEEDUP).count();
    if faster < TPCH4_FASTER {
        failures.push(format!(
            "tpch4 speedup >= {MIN_SPEEDUP} on {faster}/4 (need {TPCH4_FASTER})"
        ));
    }
    let flight = ssb
        .row(SSB_MOST_SELECTIVE, Arm::Esc)
        .unwrap()
        .speedup
        .unwrap();
    if flight < MIN_SPEEDUP {
        failures.push(format!("ssb {SSB_MOST_SELECTIVE} speedup {flight:.2}"));
    }
    let listed: Vec<String> = speedups
        .iter()
        .map(|(q, s)| format!("{q} {s:.2}x"))
        .collect();
    verdict(
        4,
        "speedup direction",
        failures,
        format!(
            "tpch4 {}; ssb {SSB_MOST_SELECTIVE} {flight:.2}x",
            listed.join(", ")
        ),
    )
}

fn estimator_contrast(tpch: &BenchReport) -> Verdict {
    let mut hits = Vec::new();
    for q in tpch.queries() {
        let esc = tpch.row(q, Arm::Esc).unwrap();
        let hist = tpch.row(q, Arm::Histogram).unwrap();
        if hist.build_order != esc.build_order && hist.build_card_sum >= esc.build_card_sum {
            hits.push(format!(
                "{q} histogram {:?} sum {} vs esc {:?} sum {}",
                hist.build_order, hist.build_card_sum, esc.build_order, esc.build_card_sum
            ));
        }
    }
    let failures = if hits.is_empty() {
        vec!["histogram arm never picks a different, no-better order".to_string()]
    } else {
        Vec::new()
    };
    verdict(9, "estimator contrast", failures, hits.join("; "))
}

// ---------------------------------------------------------------- 5, 6

fn overhead_flatness() -> Verdict {
    let report = run_suite(Suite::OverheadSelectivity, &SuiteOptions::default())
        .expect("overhead-selectivity");
    let mut failures = Vec::new();
    let esc: Vec<_> = report.rows_for(Arm::Esc).collect();
    if esc.len() != SELECTIVITY_POINTS {
        failures.push(format!("{} selectivity points", esc.len()));
    }
    let ratio = report.overhead_ratio().unwrap_or(f64::INFINITY);
    if ratio > MAX_OVERHEAD_RATIO {
        failures.push(format!(
            "overhead max/min {ratio:.2} > {MAX_OVERHEAD_RATIO}"
        ));
    }
    let counts: Vec<u64> = esc
        .iter()
        .map(|r| r.decisions[0]["count"].as_u64().unwrap())
        .collect();
    let orders = esc.last().unwrap().decisions[0]["row_count"]
        .as_u64()
        .unwrap();
    if counts[0] < 1 || *counts.last().unwrap() != orders {
        failures.push(format!("sub-query counts {counts:?} with {orders} orders"));
    }
    let cells: Vec<String> = esc
        .iter()
        .map(|r| format!("{} {:.3}ms", r.query, r.overhead_ms))
        .collect();
    verdict(
        5,
        "overhead flatness",
        failures,
        format!(
            "max/min {ratio:.2} <= {MAX_OVERHEAD_RATIO}: {}",
            cells.join(", ")
        ),
    )
}

fn conjunction_monotonicity() -> Verdict {
    let report = run_suite(Suite::OverheadAttrs, &SuiteOptions::default()).expect("overhead-attrs");
    let esc: Vec<_> = report.rows_for(Arm::Esc).collect();
    let counts: Vec<u64> = esc.iter().map(|r| r.result_count).collect();
    let exact: Vec<u64> = esc
        .iter()
        .map(|r| r.decisions[0]["count"].as_u64().unwrap())
        .collect();
    let mut failures = Vec::new();
    if counts.len() != ATTRIBUTE_VARIANTS {
        failures.push(format!("{} variants", counts.len()));
    }
    for series in [&counts, &exact] {
        if series.contains(&0) {
            failures.push(format!("zero count in {series:?}"));
        }
        if series.windows(2).any(|w| w[1] > w[0]) {
            failures.push(format!("increasing counts {series:?}"));
        }
    }
    verdict(
        6,
        "conjunction monotonicity",
        failures,
        format!("result counts {counts:?}, orders matches {exact:?}"),
    )
}

// ---------------------------------------------------------------- 7

fn pushed(
    engine: &mut Engine,
    queries: &[BenchQuery],
    max_selectivity: f64,
) -> BTreeSet<(String, String)> {
    engine.config = EscConfig {
        max_selectivity,
        ..EscConfig::default()
    };
    let mut out = BTreeSet::new();
    for q in queries {
        let plan = engine.explain(q.sql).unwrap();
        for d in plan.decisions.iter().filter(|d| d.pushed_down) {
            out.insert((q.name.to_string(), d.binding.clone()));
        }
    }
    out
}

fn policy_properties() -> Verdict {
    let mut failures = Vec::new();
    let min = EscConfig::default().min_table_size;

    // Threshold monotonicity, on the rule itself and on real plans.
    for rows in [0u64, 999, 1000, 5000, 100_000] {
        for count in [0, 1, rows / 20, rows / 5, rows / 2, rows] {
            let decided: Vec<bool> = THRESHOLDS
                .iter()
                .map(|&s| {
                    decide_pushdown(
                        rows,
                        count,
                        &EscConfig {
                            max_selectivity: s,
                            ..EscConfig::default()
                        },
                    )
                })
                .collect();
            if decided.windows(2).any(|w| w[0] && !w[1]) {
                failures.push(format!(
                    "decide_pushdown({rows}, {count}) not monotone: {decided:?}"
                ));
            }
        }
    }
    let mut sizes = Vec::new();
    let mut small_filtered = 0;
    for (spec, queries) in [
        (GenSpec::tpch(0.01, SEED), &TPCH4[..]),
        (GenSpec::ssb(0.1, SEED), &SSB[..]),
    ] {
        let mut engine = load(&spec, 1).unwrap();
        let sets: Vec<_> = THRESHOLDS
            .iter()
            .map(|&s| pushed(&mut engine, queries, s))
            .collect();
        for (i, w) in sets.windows(2).enumerate() {
            if !w[0].is_subset(&w[1]) {
                failures.push(format!(
                    "pushed set at {} not within set at {}",
                    THRESHOLDS[i],
                    THRESHOLDS[i + 1]
                ));
            }
        }
        sizes.extend(sets.iter().map(|s| s.len()));

        engine.config = EscConfig::default();
        for q in queries {
            let plan = engine.explain(q.sql).unwrap();
            for d in &plan.decisions {
                if d.row_count < min {
                    failures.push(format!(
                        "{}: sub-query on {} with {} rows",
                        q.name, d.table, d.row_count
                    ));
                }
            }
            for b in &plan.builds {
                if b.scan.predicate.is_some() && b.scan.input_rows < min {
                    small_filtered += 1;
                    if plan.decisions.iter().any(|d| d.binding == b.scan.binding) {
                        failures.push(format!(
                            "{}: decision for small table {}",
                            q.name, b.scan.table
                        ));
                    }
                }
            }
        }
    }
    if small_filtered == 0 {
        failures.push("no filtered table below min_table_size was exercised".into());
    }
    verdict(
        7,
        "policy properties",
        failures,
        format!(
            "pushed sets nested over {THRESHOLDS:?} (sizes {sizes:?}); {small_filtered} filtered small tables issued no sub-query"
        ),
    )
}

// ---------------------------------------------------------------- 8

fn csv_dump(spec: &GenSpec) -> Vec<(String, String)> {
    generate(spec)
        .unwrap()
        .iter()
        .map(|t| (t.name().to_string(), t.to_csv()))
        .collect()
}

/// EXPLAIN with sub-query durations blanked; everything else must match.
fn stable_explain(text: &str) -> String {
    text.lines()
        .map(|l| match l.split_once(" time_ms=") {
            Some((head, _)) => format!("{head} time_ms=*"),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn sorted_rows(t: &ColumnTable) -> Vec<String> {
    let mut rows: Vec<String> = (0..t.row_count())
        .map(|r| {
            t.row(r)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    rows.sort_unstable();
    rows
}

fn determinism() -> Verdict {
    let mut failures = Vec::new();
    let mut bytes = 0;
    for spec in [GenSpec::tpch(0.01, SEED), GenSpec::ssb(0.01, SEED)] {
        let (a, b) = (csv_dump(&spec), csv_dump(&spec));
        bytes += a.iter().map(|(_, c)| c.len()).sum::<usize>();
        if a != b {
            failures.push(format!("{} CSV differs between runs", spec.benchmark));
        }
    }
    if csv_dump(&GenSpec::tpch(0.001, SEED)) == csv_dump(&GenSpec::tpch(0.001, SEED + 1)) {
        failures.push("seed has no effect".into());
    }

    let spec = GenSpec::tpch(0.01, SEED);
    let mut first = load(&spec, 1).unwrap();
    let mut second = load(&spec, 1).unwrap();
    for q in &TPCH4 {
        let a = stable_explain(&first.explain(q.sql).unwrap().explain_text());
        let b = stable_explain(&second.explain(q.sql).unwrap().explain_text());
        if a != b {
            failures.push(format!("{} EXPLAIN differs:\n{a}\n---\n{b}", q.name));
        }
    }

    let sql = "SELECT l_orderkey, l_linenumber, o_orderdate, p_size FROM lineitem, orders, part \
               WHERE l_orderkey = o_orderkey AND l_partkey = p_partkey \
               AND p_size <= 10 AND o_orderdate < DATE '1996-01-01'";
    let outputs: Vec<Vec<String>> = WORKERS
        .iter()
        .map(|&w| {
            first.workers = w;
            sorted_rows(&first.query(sql).unwrap().table)
        })
        .collect();
    if outputs[0] != outputs[1] {
        failures.push(format!(
            "workers {} and {} give {} vs {} rows",
            WORKERS[0],
            WORKERS[1],
            outputs[0].len(),
            outputs[1].len()
        ));
    }
    verdict(
        8,
        "determinism",
        failures,
        format!(
            "{bytes} CSV bytes identical, {} EXPLAIN plans identical, {} result rows equal for workers {WORKERS:?}",
            TPCH4.len(),
            outputs[0].len()
        ),
    )
}
