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

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use super::esc::{
    build_count_subquery, compute_exact_selectivity, decide_pushdown, materialize_pushdown,
    selectivity,
};
use super::{EscConfig, EscDecision, EstimatorMode, OptimizerError};
use crate::catalog::{estimate_with_default, Catalog};
use crate::exec::{
    build_hash, probe_joins, BuildSide, ExecError, ExecStats, KeySource, OutputSpec, Projection,
};
use crate::sql::{build_join_graph, ColumnRef, JoinGraph, Predicate, QueryOutput, RaNode};
use crate::storage::{ColumnTable, TempTableHandle};

#[derive(Debug, Clone, PartialEq)]
pub enum RelationRef {
    Base(String),
    Temp(TempTableHandle),
}

/// One relation as scanned by the plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanStep {
    pub binding: String,
    pub table: String,
    pub relation: RelationRef,
    /// Fused filter; `None` for pushed-down temps.
    pub predicate: Option<Predicate>,
    /// Rows read by the scan (base or temp row count).
    pub input_rows: u64,
    /// Cardinality the ordering used.
    pub effective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildStep {
    pub scan: ScanStep,
    /// `(outer, build)` pairs; the outer column belongs to the probe or to an
    /// earlier build.
    pub keys: Vec<(ColumnRef, ColumnRef)>,
}

/// Left-deep plan: one probe pipeline through hash tables built in order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalPlan {
    pub probe: ScanStep,
    pub builds: Vec<BuildStep>,
    pub output: QueryOutput,
    pub decisions: Vec<EscDecision>,
}

impl PhysicalPlan {
    /// Sum of the rows read to build hash tables.
    pub fn build_card_sum(&self) -> u64 {
        self.builds.iter().map(|b| b.scan.input_rows).sum()
    }

    pub fn build_order(&self) -> Vec<&str> {
        self.builds
            .iter()
            .map(|b| b.scan.binding.as_str())
            .collect()
    }

    pub fn temps(&self) -> impl Iterator<Item = &TempTableHandle> {
        self.decisions.iter().filter_map(|d| d.temp.as_ref())
    }

    pub fn subquery_time(&self) -> std::time::Duration {
        self.decisions
            .iter()
            .map(|d| d.subquery_time + d.materialize_time.unwrap_or_default())
            .sum()
    }
}

/// The binding over the largest table; ties go to the smaller table name,
/// then binding.
pub fn choose_probe(graph: &JoinGraph, row_counts: &BTreeMap<String, u64>) -> String {
    graph
        .nodes
        .iter()
        .max_by(|a, b| {
            row_counts[&a.binding]
                .cmp(&row_counts[&b.binding])
                .then_with(|| b.table.cmp(&a.table))
                .then_with(|| b.binding.cmp(&a.binding))
        })
        .map(|n| n.binding.clone())
        .expect("join graph has at least one node")
}

/// Greedy order: repeatedly take the smallest relation joined to what is
/// already in the pipeline.
pub fn order_builds(
    graph: &JoinGraph,
    probe: &str,
    effective: &BTreeMap<String, f64>,
) -> Result<Vec<String>, OptimizerError> {
    let mut joined: BTreeSet<&str> = BTreeSet::from([probe]);
    let mut order = Vec::new();
    while joined.len() < graph.nodes.len() {
        let next = graph
            .nodes
            .iter()
            .filter(|n| !joined.contains(n.binding.as_str()))
            .filter(|n| {
                graph.edges.iter().any(|e| {
                    e.oriented(&n.binding)
                        .is_some_and(|(_, other)| joined.contains(other.binding.as_str()))
                })
            })
            .min_by(|a, b| {
                effective[&a.binding]
                    .total_cmp(&effective[&b.binding])
                    .then_with(|| a.table.cmp(&b.table))
                    .then_with(|| a.binding.cmp(&b.binding))
            });
        let Some(next) = next else {
            let rest: Vec<&str> = graph
                .nodes
                .iter()
                .map(|n| n.binding.as_str())
                .filter(|b| !joined.contains(b))
                .collect();
            return Err(OptimizerError::CartesianProductRequired(format!(
                "no join predicate connects {} to {}",
                rest.join(", "),
                joined.iter().copied().collect::<Vec<_>>().join(", ")
            )));
        };
        joined.insert(&next.binding);
        order.push(next.binding.clone());
    }
    Ok(order)
}

/// Plans an analyzed query. With ESC enabled this runs the count sub-queries
/// and may leave temp tables in the catalog; they are listed in the plan's
/// decisions and must be dropped once the plan has run.
pub fn plan(
    ra: &RaNode,
    catalog: &mut Catalog,
    config: &EscConfig,
) -> Result<PhysicalPlan, OptimizerError> {
    config.validate()?;
    let graph = build_join_graph(ra)?;
    let mut row_counts = BTreeMap::new();
    for n in &graph.nodes {
        let t = catalog
            .table(&n.table)
            .ok_or_else(|| ExecError::UnknownTable(n.table.clone()))?;
        row_counts.insert(n.binding.clone(), t.row_count() as u64);
    }
    let base: BTreeMap<String, f64> = row_counts
        .iter()
        .map(|(b, &n)| (b.clone(), n as f64))
        .collect();
    let probe = choose_probe(&graph, &row_counts);
    // Fail before running any sub-query.
    order_builds(&graph, &probe, &base)?;

    let mut decisions = Vec::new();
    let mut effective = base.clone();
    if config.enabled {
        for node in graph.nodes.iter().filter(|n| n.binding != probe) {
            let Some(predicate) = graph.residual(&node.binding) else {
                continue;
            };
            let rows = row_counts[&node.binding];
            if rows < config.min_table_size {
                continue;
            }
            let needed = graph.needed_columns(&node.binding);
            let sub = build_count_subquery(node, predicate, &needed)?;
            let (count, subquery_time) = compute_exact_selectivity(catalog, &sub)?;
            let qualified = decide_pushdown(rows, count, config);
            let mut decision = EscDecision {
                table: node.table.clone(),
                binding: node.binding.clone(),
                predicate: predicate.clone(),
                row_count: rows,
                exact_count: count,
                selectivity: selectivity(count, rows),
                qualified,
                pushed_down: false,
                temp: None,
                subquery_time,
                materialize_time: None,
            };
            if qualified && config.materialize {
                let (handle, t) = match materialize_pushdown(catalog, node, predicate, &needed) {
                    Ok(done) => done,
                    Err(e) => {
                        drop_temps(catalog, &decisions);
                        return Err(e);
                    }
                };
                decision.pushed_down = true;
                decision.temp = Some(handle);
                decision.materialize_time = Some(t);
                effective.insert(node.binding.clone(), count as f64);
            }
            decisions.push(decision);
        }
    } else if config.estimator_mode == EstimatorMode::Histogram {
        for node in graph.nodes.iter().filter(|n| n.binding != probe) {
            if let Some(p) = graph.residual(&node.binding) {
                let hists = catalog.histograms(&node.table, config.histogram_buckets)?;
                let s = estimate_with_default(&hists, p, config.default_guess);
                effective.insert(node.binding.clone(), row_counts[&node.binding] as f64 * s);
            }
        }
    }

    let order = order_builds(&graph, &probe, &effective)?;
    let scan = |binding: &str| -> ScanStep {
        let node = graph.node(binding).expect("binding from graph");
        let pushed = decisions
            .iter()
            .find(|d| d.binding == binding && d.pushed_down);
        match pushed {
            Some(d) => ScanStep {
                binding: binding.to_string(),
                table: node.table.clone(),
                relation: RelationRef::Temp(d.temp.clone().expect("pushed down with temp")),
                predicate: None,
                input_rows: d.exact_count,
                effective: effective[binding],
            },
            None => ScanStep {
                binding: binding.to_string(),
                table: node.table.clone(),
                relation: RelationRef::Base(node.table.clone()),
                predicate: graph.residual(binding).cloned(),
                input_rows: row_counts[binding],
                effective: effective[binding],
            },
        }
    };
    let mut joined = vec![probe.clone()];
    let mut builds = Vec::new();
    for b in &order {
        let keys = graph
            .edges
            .iter()
            .filter_map(|e| e.oriented(b))
            .filter(|(_, outer)| joined.contains(&outer.binding))
            .map(|(inner, outer)| (outer.clone(), inner.clone()))
            .collect();
        builds.push(BuildStep {
            scan: scan(b),
            keys,
        });
        joined.push(b.clone());
    }
    Ok(PhysicalPlan {
        probe: scan(&probe),
        builds,
        output: graph.output.clone(),
        decisions,
    })
}

fn drop_temps(catalog: &mut Catalog, decisions: &[EscDecision]) {
    for h in decisions.iter().filter_map(|d| d.temp.as_ref()) {
        let _ = catalog.drop_temp(h);
    }
}

fn resolve(catalog: &Catalog, scan: &ScanStep) -> Result<Arc<ColumnTable>, ExecError> {
    match &scan.relation {
        RelationRef::Base(name) => catalog
            .table(name)
            .ok_or_else(|| ExecError::UnknownTable(name.clone())),
        RelationRef::Temp(h) => catalog
            .temp(h)
            .map_err(|_| ExecError::UnknownTable(h.table_name())),
    }
}

/// Builds every hash table in plan order, then runs the probe pipeline.
pub fn execute_plan(
    plan: &PhysicalPlan,
    catalog: &Catalog,
    workers: usize,
) -> Result<(ColumnTable, ExecStats), ExecError> {
    let started = Instant::now();
    let probe = resolve(catalog, &plan.probe)?;
    let mut tables: Vec<(String, Arc<ColumnTable>)> =
        vec![(plan.probe.binding.clone(), probe.clone())];
    let mut builds = Vec::with_capacity(plan.builds.len());
    for step in &plan.builds {
        let table = resolve(catalog, &step.scan)?;
        let key_names: Vec<&str> = step.keys.iter().map(|(_, b)| b.column.as_str()).collect();
        let index = build_hash(&table, &key_names, step.scan.predicate.as_ref())?;
        let sources = step
            .keys
            .iter()
            .map(|(outer, inner)| {
                let rel = tables
                    .iter()
                    .position(|(b, _)| *b == outer.binding)
                    .ok_or_else(|| ExecError::UnknownColumn(outer.to_string()))?;
                KeySource::new(rel, &tables[rel].1, &outer.column, &table, &inner.column)
            })
            .collect::<Result<_, _>>()?;
        tables.push((step.scan.binding.clone(), table.clone()));
        builds.push(BuildSide {
            table,
            index,
            sources,
        });
    }
    let build_time = started.elapsed();
    let projection = match &plan.output {
        QueryOutput::CountStar => Projection::CountStar,
        QueryOutput::Columns(cols) => {
            let ambiguous =
                |c: &ColumnRef| cols.iter().filter(|o| o.column == c.column).count() > 1;
            Projection::Columns(
                cols.iter()
                    .map(|c| {
                        let rel = tables
                            .iter()
                            .position(|(b, _)| *b == c.binding)
                            .ok_or_else(|| ExecError::UnknownColumn(c.to_string()))?;
                        let column = tables[rel]
                            .1
                            .column_index(&c.column)
                            .ok_or_else(|| ExecError::UnknownColumn(c.to_string()))?;
                        let name = if ambiguous(c) {
                            c.to_string()
                        } else {
                            c.column.clone()
                        };
                        Ok(OutputSpec {
                            relation: rel,
                            column,
                            name,
                        })
                    })
                    .collect::<Result<_, ExecError>>()?,
            )
        }
    };
    let (result, mut stats) = probe_joins(
        &probe,
        plan.probe.predicate.as_ref(),
        &builds,
        &projection,
        workers,
    )?;
    stats.build_time = build_time;
    Ok((result, stats))
}
