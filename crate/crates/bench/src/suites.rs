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

//! Timing and plan-quality suites. Every query runs once per arm to warm
//! caches, then `reps` more times with the arms interleaved; medians are
//! reported.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use esc_core::catalog::{Catalog, CatalogError};
use esc_core::optimizer::EscConfig;
use esc_core::sql::sql_literal;
use esc_core::storage::Value;
use esc_core::{Engine, EngineError, QueryResult};

use crate::gen::{generate, Benchmark, GenError, GenSpec};
use crate::queries::{lineitem_join, BenchQuery, OVERHEAD_TABLES, SSB, TPCH4};
use crate::report::{Arm, BenchReport, ReportRow, SpecInfo};

pub const OVERHEAD_SCALES: [f64; 3] = [0.001, 0.01, 0.05];
/// 0.001% to 100% of the orders key domain.
pub const SELECTIVITY_FRACTIONS: [f64; 6] = [0.00001, 0.0001, 0.001, 0.01, 0.1, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    OverheadScale,
    OverheadSelectivity,
    OverheadAttrs,
    Tpch4,
    Ssb,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::OverheadScale,
        Suite::OverheadSelectivity,
        Suite::OverheadAttrs,
        Suite::Tpch4,
        Suite::Ssb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OverheadScale => "overhead-scale",
            Suite::OverheadSelectivity => "overhead-selectivity",
            Suite::OverheadAttrs => "overhead-attrs",
            Suite::Tpch4 => "tpch4",
            Suite::Ssb => "ssb",
        }
    }

    pub fn benchmark(self) -> Benchmark {
        match self {
            Suite::Ssb => Benchmark::SsbSubset,
            _ => Benchmark::TpchSubset,
        }
    }

    /// Scale used when none is given. overhead-scale sweeps
    /// [`OVERHEAD_SCALES`] and reports the largest.
    pub fn default_scale(self) -> f64 {
        match self {
            Suite::OverheadScale => 0.05,
            Suite::OverheadSelectivity => 0.05,
            Suite::OverheadAttrs | Suite::Tpch4 => 0.01,
            // Below 0.1 the fixed-size date dimension pushes lineorder under
            // 95% of all rows.
            Suite::Ssb => 0.1,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| BenchError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("unknown suite {0:?}; valid suites: overhead-scale, overhead-selectivity, overhead-attrs, tpch4, ssb")]
    UnknownSuite(String),
    #[error("invalid bench option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{query}: {source}")]
    Query {
        query: String,
        #[source]
        source: EngineError,
    },
    #[error("{query}: {arm} counted {found} rows but baseline counted {expected}")]
    ArmsDisagree {
        query: String,
        arm: Arm,
        expected: u64,
        found: u64,
    },
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Overrides [`Suite::default_scale`]; ignored by overhead-scale.
    pub scale: Option<f64>,
    pub seed: u64,
    /// Timed repetitions after the discarded warm-up run.
    pub reps: usize,
    pub workers: usize,
    /// Adds a histogram-estimator arm to the plan-quality suites.
    pub histogram_arm: bool,
    /// Thresholds for the ESC arm. The overhead suites force
    /// `materialize = false` and `min_table_size = 0`.
    pub esc: EscConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            scale: None,
            seed: 7,
            reps: 5,
            workers: 1,
            histogram_arm: false,
            esc: EscConfig::default(),
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<BenchReport, BenchError> {
    if opts.reps == 0 {
        return Err(BenchError::InvalidOption("reps must be at least 1".into()));
    }
    match suite {
        Suite::OverheadScale => overhead_scale(&OVERHEAD_SCALES, opts),
        Suite::OverheadSelectivity => overhead_selectivity(&SELECTIVITY_FRACTIONS, opts),
        Suite::OverheadAttrs => overhead_attributes(opts),
        Suite::Tpch4 | Suite::Ssb => plan_quality(suite, opts),
    }
}

/// Generates the tables for `spec` into a fresh engine.
pub fn load(spec: &GenSpec, workers: usize) -> Result<Engine, BenchError> {
    let mut catalog = Catalog::new();
    for table in generate(spec)? {
        catalog.register_table(table)?;
    }
    Ok(Engine::new(catalog).with_workers(workers))
}

fn spec_for(suite: Suite, opts: &SuiteOptions) -> GenSpec {
    let scale = opts.scale.unwrap_or_else(|| suite.default_scale());
    match suite.benchmark() {
        Benchmark::TpchSubset => GenSpec::tpch(scale, opts.seed),
        Benchmark::SsbSubset => GenSpec::ssb(scale, opts.seed),
    }
}

fn info(spec: &GenSpec) -> SpecInfo {
    SpecInfo {
        benchmark: spec.benchmark,
        scale: spec.scale,
        seed: spec.seed,
    }
}

/// ESC with the plan held at the baseline shape so only the sub-query cost
/// differs; every filtered build table issues its sub-query.
fn overhead_config(opts: &SuiteOptions) -> EscConfig {
    EscConfig {
        enabled: true,
        materialize: false,
        min_table_size: 0,
        ..opts.esc.clone()
    }
}

pub fn overhead_scale(scales: &[f64], opts: &SuiteOptions) -> Result<BenchReport, BenchError> {
    let arms = [
        (Arm::Baseline, EscConfig::baseline()),
        (Arm::Esc, overhead_config(opts)),
    ];
    let mut rows = Vec::new();
    let mut last = None;
    for &scale in scales {
        let spec = GenSpec::tpch(scale, opts.seed);
        let mut engine = load(&spec, opts.workers)?;
        for (table, conditions) in OVERHEAD_TABLES {
            rows.extend(measure(
                &mut engine,
                table,
                &lineitem_join(table, conditions),
                scale,
                &arms,
                opts.reps,
            )?);
        }
        last = Some(spec);
    }
    let spec = last.ok_or_else(|| BenchError::InvalidOption("no scales given".into()))?;
    Ok(BenchReport {
        suite: Suite::OverheadScale.name().into(),
        spec: info(&spec),
        rows,
    })
}

/// Label used for a selectivity fraction, e.g. `0.001%`.
pub fn fraction_label(fraction: f64) -> String {
    format!("{}%", (fraction * 1e8).round() / 1e6)
}

pub fn overhead_selectivity(
    fractions: &[f64],
    opts: &SuiteOptions,
) -> Result<BenchReport, BenchError> {
    let spec = spec_for(Suite::OverheadSelectivity, opts);
    let mut engine = load(&spec, opts.workers)?;
    let mut keys: Vec<i64> = engine
        .catalog
        .table("orders")
        .and_then(|t| t.column("o_orderkey").map(|c| c.values().to_vec()))
        .unwrap_or_default();
    keys.sort_unstable();
    keys.dedup();
    if keys.is_empty() {
        return Err(BenchError::InvalidOption("orders has no keys".into()));
    }
    let arms = [
        (Arm::Baseline, EscConfig::baseline()),
        (Arm::Esc, overhead_config(opts)),
    ];
    let mut rows = Vec::new();
    for &fraction in fractions {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(BenchError::InvalidOption(format!(
                "fraction {fraction} outside (0, 1]"
            )));
        }
        // At least one key even when the fraction rounds to nothing.
        let wanted = ((fraction * keys.len() as f64).round() as usize).clamp(1, keys.len());
        let u = keys[wanted - 1] + 1;
        let sql = lineitem_join(
            "orders",
            &format!("l_orderkey = o_orderkey AND o_orderkey < {u}"),
        );
        rows.extend(measure(
            &mut engine,
            &fraction_label(fraction),
            &sql,
            spec.scale,
            &arms,
            opts.reps,
        )?);
    }
    Ok(BenchReport {
        suite: Suite::OverheadSelectivity.name().into(),
        spec: info(&spec),
        rows,
    })
}

/// Columns added one at a time; the TEXT and DECIMAL ones come third and
/// fourth.
pub const ATTRIBUTE_COLUMNS: [&str; 4] =
    ["o_custkey", "o_orderdate", "o_orderstatus", "o_totalprice"];

pub fn overhead_attributes(opts: &SuiteOptions) -> Result<BenchReport, BenchError> {
    let spec = spec_for(Suite::OverheadAttrs, opts);
    let mut engine = load(&spec, opts.workers)?;
    let orders = engine
        .catalog
        .table("orders")
        .ok_or_else(|| BenchError::InvalidOption("orders is missing".into()))?;
    // Constants come from one existing order, so every variant matches it.
    let row = orders.row_count() / 2;
    let mut conditions = vec!["l_orderkey = o_orderkey".to_string()];
    let arms = [
        (Arm::Baseline, EscConfig::baseline()),
        (Arm::Esc, overhead_config(opts)),
    ];
    let mut rows = Vec::new();
    for (i, column) in ATTRIBUTE_COLUMNS.iter().enumerate() {
        let value = orders
            .column(column)
            .map(|c| c.value(row))
            .ok_or_else(|| BenchError::InvalidOption(format!("orders.{column} is missing")))?;
        if value == Value::Null {
            return Err(BenchError::InvalidOption(format!(
                "orders.{column} is NULL in row {row}"
            )));
        }
        conditions.push(format!("{column} = {}", sql_literal(&value)));
        let sql = lineitem_join("orders", &conditions.join(" AND "));
        let label = format!("{} attr", i + 1);
        rows.extend(measure(
            &mut engine,
            &label,
            &sql,
            spec.scale,
            &arms,
            opts.reps,
        )?);
    }
    Ok(BenchReport {
        suite: Suite::OverheadAttrs.name().into(),
        spec: info(&spec),
        rows,
    })
}

pub fn plan_quality(suite: Suite, opts: &SuiteOptions) -> Result<BenchReport, BenchError> {
    let queries: &[BenchQuery] = match suite {
        Suite::Tpch4 => &TPCH4,
        Suite::Ssb => &SSB,
        other => {
            return Err(BenchError::InvalidOption(format!(
                "{other} is not a plan-quality suite"
            )))
        }
    };
    let spec = spec_for(suite, opts);
    let mut engine = load(&spec, opts.workers)?;
    let mut arms = vec![
        (Arm::Baseline, EscConfig::baseline()),
        (
            Arm::Esc,
            EscConfig {
                enabled: true,
                materialize: true,
                ..opts.esc.clone()
            },
        ),
    ];
    if opts.histogram_arm {
        arms.push((Arm::Histogram, EscConfig::histogram()));
    }
    let mut rows = Vec::new();
    for q in queries {
        rows.extend(measure(
            &mut engine,
            q.name,
            q.sql,
            spec.scale,
            &arms,
            opts.reps,
        )?);
    }
    Ok(BenchReport {
        suite: suite.name().into(),
        spec: info(&spec),
        rows,
    })
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

#[derive(Default)]
struct Samples {
    total: Vec<f64>,
    plan: Vec<f64>,
    overhead: Vec<f64>,
}

/// Runs `sql` under every arm and returns one row per arm. The first arm is
/// the reference for counts and speedups.
fn measure(
    engine: &mut Engine,
    query: &str,
    sql: &str,
    scale: f64,
    arms: &[(Arm, EscConfig)],
    reps: usize,
) -> Result<Vec<ReportRow>, BenchError> {
    let mut run = |cfg: &EscConfig| -> Result<QueryResult, BenchError> {
        engine
            .query_with(sql, cfg)
            .map_err(|source| BenchError::Query {
                query: query.to_string(),
                source,
            })
    };
    let mut last: Vec<QueryResult> = arms
        .iter()
        .map(|(_, cfg)| run(cfg))
        .collect::<Result<_, _>>()?;
    let mut samples: Vec<Samples> = arms.iter().map(|_| Samples::default()).collect();
    for _ in 0..reps {
        for (i, (_, cfg)) in arms.iter().enumerate() {
            let r = run(cfg)?;
            samples[i].total.push(ms(r.total_time()));
            samples[i].plan.push(ms(r.plan_time));
            samples[i].overhead.push(ms(r.plan.subquery_time()));
            last[i] = r;
        }
    }
    let expected = last[0].count();
    for ((arm, _), r) in arms.iter().zip(&last).skip(1) {
        if r.count() != expected {
            return Err(BenchError::ArmsDisagree {
                query: query.to_string(),
                arm: *arm,
                expected,
                found: r.count(),
            });
        }
    }
    let reference = median(samples[0].total.clone());
    let rows = arms
        .iter()
        .zip(last)
        .zip(samples)
        .enumerate()
        .map(|(i, (((arm, _), r), s))| {
            let time_ms = median(s.total);
            let decisions = match r.plan.explain_json()["decisions"].take() {
                serde_json::Value::Array(items) => items,
                _ => Vec::new(),
            };
            ReportRow {
                query: query.to_string(),
                arm: *arm,
                scale,
                time_ms,
                plan_ms: median(s.plan),
                overhead_ms: median(s.overhead),
                build_card_sum: r.plan.build_card_sum(),
                build_order: r.plan.build_order().iter().map(|b| b.to_string()).collect(),
                result_count: r.count(),
                speedup: (i > 0 && time_ms > 0.0).then(|| reference / time_ms),
                decisions,
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        let err = "tpch5".parse::<Suite>().unwrap_err();
        assert!(err.to_string().contains("overhead-selectivity"));
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn labels() {
        assert_eq!(fraction_label(0.00001), "0.001%");
        assert_eq!(fraction_label(1.0), "100%");
    }
}
