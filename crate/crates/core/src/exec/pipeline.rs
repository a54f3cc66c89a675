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

//! Fused probe pipeline: filter the probe relation and chase every hash
//! table in order, one chunk at a time, without materializing intermediate
//! join results.

use std::sync::Arc;
use std::time::{Duration, Instant};

use bitvec::vec::BitVec;
use serde::Serialize;

use super::filter::{CompiledPredicate, RowSelection, CHUNK_ROWS};
use super::hash::{HashTableIndex, Matches};
use super::ExecError;
use crate::sql::Predicate;
use crate::storage::{Column, ColumnTable, DataType};

/// Where a probe-side key value comes from: relation 0 is the probe, `i + 1`
/// the i-th build.
#[derive(Debug, Clone)]
pub struct KeySource {
    pub relation: usize,
    pub column: usize,
    /// TEXT keys with different dictionaries: probe-side code -> build-side
    /// code, or -1 when the string is absent from the build dictionary.
    pub translate: Option<Arc<Vec<i64>>>,
}

impl KeySource {
    /// Checks that `from.from_column` can be matched against
    /// `build.build_column` and prepares the code translation if needed.
    pub fn new(
        relation: usize,
        from: &ColumnTable,
        from_column: &str,
        build: &ColumnTable,
        build_column: &str,
    ) -> Result<Self, ExecError> {
        let unknown =
            |t: &ColumnTable, c: &str| ExecError::UnknownColumn(format!("{}.{c}", t.name()));
        let column = from
            .column_index(from_column)
            .ok_or_else(|| unknown(from, from_column))?;
        let src = &from.columns()[column];
        let dst = build
            .column(build_column)
            .ok_or_else(|| unknown(build, build_column))?;
        let compatible = match (src.data_type(), dst.data_type()) {
            (DataType::Decimal { scale: a, .. }, DataType::Decimal { scale: b, .. }) => a == b,
            (a, b) => a == b,
        };
        if !compatible {
            return Err(ExecError::KeyTypeMismatch(format!(
                "{}.{from_column} ({}) = {}.{build_column} ({})",
                from.name(),
                src.data_type(),
                build.name(),
                dst.data_type()
            )));
        }
        let translate = match (src.dictionary(), dst.dictionary()) {
            (Some(a), Some(b)) if !Arc::ptr_eq(a, b) => Some(Arc::new(
                a.strings()
                    .iter()
                    .map(|s| b.code_of(s).map_or(-1, i64::from))
                    .collect(),
            )),
            _ => None,
        };
        Ok(Self {
            relation,
            column,
            translate,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BuildSide {
    pub table: Arc<ColumnTable>,
    pub index: HashTableIndex,
    /// One source per key column of `index`, in the same order.
    pub sources: Vec<KeySource>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub relation: usize,
    pub column: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    CountStar,
    Columns(Vec<OutputSpec>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JoinStats {
    pub table: String,
    pub build_input_rows: u64,
    pub hash_entries: u64,
    pub probe_output_rows: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExecStats {
    pub probe_input_rows: u64,
    pub probe_selected_rows: u64,
    pub joins: Vec<JoinStats>,
    pub output_rows: u64,
    pub rows_materialized: u64,
    pub build_time: Duration,
    pub probe_time: Duration,
}

#[derive(Default)]
struct Fragment {
    selected: u64,
    per_join: Vec<u64>,
    count: u64,
    rows: Vec<Vec<u32>>,
}

struct Pipeline<'a> {
    probe: &'a ColumnTable,
    predicate: Option<CompiledPredicate>,
    builds: &'a [BuildSide],
    keep_rows: bool,
}

impl Pipeline<'_> {
    fn table(&self, relation: usize) -> &ColumnTable {
        if relation == 0 {
            self.probe
        } else {
            &self.builds[relation - 1].table
        }
    }

    fn run(&self, range: std::ops::Range<usize>) -> Result<Fragment, ExecError> {
        let mut frag = Fragment {
            per_join: vec![0; self.builds.len()],
            rows: vec![
                Vec::new();
                if self.keep_rows {
                    self.builds.len() + 1
                } else {
                    0
                }
            ],
            ..Fragment::default()
        };
        let mut chunk = Vec::with_capacity(CHUNK_ROWS);
        let mut start = range.start;
        while start < range.end {
            let end = (start + CHUNK_ROWS).min(range.end);
            chunk.clear();
            chunk.extend(start as u32..end as u32);
            let selected = match &self.predicate {
                None => chunk.clone(),
                Some(p) => {
                    let mut out = Vec::with_capacity(chunk.len());
                    p.eval(self.probe, &chunk, true, &mut out)?;
                    out
                }
            };
            frag.selected += selected.len() as u64;
            self.join_chunk(selected, &mut frag);
            start = end;
        }
        Ok(frag)
    }

    fn join_chunk(&self, selected: Vec<u32>, frag: &mut Fragment) {
        let mut tuples: Vec<Vec<u32>> = vec![selected];
        let mut key = Vec::new();
        for (j, build) in self.builds.iter().enumerate() {
            let count_only = !self.keep_rows && j + 1 == self.builds.len();
            let mut next: Vec<Vec<u32>> = vec![Vec::new(); if count_only { 0 } else { j + 2 }];
            let mut produced = 0u64;
            let readers: Vec<KeyReader> = build
                .sources
                .iter()
                .map(|src| KeyReader::new(self.table(src.relation), src))
                .collect();
            let mut emit = |t: usize, matches: Matches| {
                if count_only {
                    produced += matches.count() as u64;
                    return;
                }
                for m in matches {
                    for (r, rel) in tuples.iter().enumerate() {
                        next[r].push(rel[t]);
                    }
                    next[j + 1].push(m);
                    produced += 1;
                }
            };
            if let [reader] = readers.as_slice() {
                for (t, &row) in tuples[reader.relation].iter().enumerate() {
                    if let Some(k) = reader.read(row as usize) {
                        emit(t, build.index.lookup_one(k));
                    }
                }
            } else {
                // `t` indexes a different relation column per reader.
                #[allow(clippy::needless_range_loop)]
                'tuples: for t in 0..tuples[0].len() {
                    key.clear();
                    for reader in &readers {
                        match reader.read(tuples[reader.relation][t] as usize) {
                            Some(v) => key.push(v),
                            None => continue 'tuples,
                        }
                    }
                    emit(t, build.index.lookup(&key));
                }
            }
            frag.per_join[j] += produced;
            if count_only {
                frag.count += produced;
                return;
            }
            tuples = next;
            if tuples[0].is_empty() {
                // Later joins see no input; their counters stay at zero.
                return;
            }
        }
        frag.count += tuples[0].len() as u64;
        if self.keep_rows {
            for (dst, src) in frag.rows.iter_mut().zip(tuples) {
                dst.extend(src);
            }
        }
    }
}

/// A key column resolved once per chunk and join.
struct KeyReader<'a> {
    relation: usize,
    values: &'a [i64],
    nulls: Option<&'a BitVec>,
    translate: Option<&'a [i64]>,
}

impl<'a> KeyReader<'a> {
    fn new(table: &'a ColumnTable, src: &'a KeySource) -> Self {
        let col = &table.columns()[src.column];
        Self {
            relation: src.relation,
            values: col.values(),
            nulls: col.nulls(),
            translate: src.translate.as_deref().map(Vec::as_slice),
        }
    }

    /// None for NULL and for TEXT values missing from the build dictionary.
    #[inline]
    fn read(&self, row: usize) -> Option<i64> {
        if self.nulls.is_some_and(|n| n[row]) {
            return None;
        }
        let v = self.values[row];
        match self.translate {
            Some(map) => {
                let code = map[v as usize];
                (code >= 0).then_some(code)
            }
            None => Some(v),
        }
    }
}

/// Runs the probe pipeline over `probe` split into `workers` contiguous
/// partitions. Fragments are concatenated in partition order.
pub fn probe_joins(
    probe: &ColumnTable,
    predicate: Option<&Predicate>,
    builds: &[BuildSide],
    projection: &Projection,
    workers: usize,
) -> Result<(ColumnTable, ExecStats), ExecError> {
    let started = Instant::now();
    let pipeline = Pipeline {
        probe,
        predicate: predicate
            .filter(|p| !p.is_true())
            .map(|p| CompiledPredicate::compile(probe, p))
            .transpose()?,
        builds,
        keep_rows: matches!(projection, Projection::Columns(_)),
    };
    if let Projection::Columns(cols) = projection {
        for c in cols {
            if c.relation > builds.len() || c.column >= pipeline.table(c.relation).columns().len() {
                return Err(ExecError::UnknownColumn(c.name.clone()));
            }
        }
    }
    let n = probe.row_count();
    let parts = partitions(n, workers.max(1));
    let fragments: Vec<Fragment> = if parts.len() <= 1 {
        vec![pipeline.run(0..n)?]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = parts
                .iter()
                .map(|r| s.spawn(|| pipeline.run(r.clone())))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("probe worker panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?
    };

    let mut stats = ExecStats {
        probe_input_rows: n as u64,
        joins: builds
            .iter()
            .map(|b| JoinStats {
                table: b.table.name().to_string(),
                build_input_rows: b.table.row_count() as u64,
                hash_entries: b.index.len() as u64,
                probe_output_rows: 0,
            })
            .collect(),
        ..ExecStats::default()
    };
    for f in &fragments {
        stats.probe_selected_rows += f.selected;
        stats.output_rows += f.count;
        for (j, out) in stats.joins.iter_mut().zip(&f.per_join) {
            j.probe_output_rows += out;
        }
    }
    if builds.is_empty() {
        stats.output_rows = stats.probe_selected_rows;
    }

    let result = match projection {
        Projection::CountStar => {
            let col = Column::from_parts(
                "count",
                DataType::Int64,
                vec![stats.output_rows as i64],
                None,
                None,
            )?;
            ColumnTable::from_columns("result", vec![col], true)?
        }
        Projection::Columns(cols) => {
            let rows: Vec<Vec<u32>> = (0..=builds.len())
                .map(|r| {
                    fragments
                        .iter()
                        .flat_map(|f| f.rows[r].iter().copied())
                        .collect()
                })
                .collect();
            let columns = cols
                .iter()
                .map(|c| {
                    pipeline.table(c.relation).columns()[c.column]
                        .gather(&rows[c.relation])
                        .renamed(c.name.clone())
                })
                .collect();
            stats.rows_materialized = stats.output_rows;
            ColumnTable::from_columns("result", columns, true)?
        }
    };
    stats.probe_time = started.elapsed();
    Ok((result, stats))
}

fn partitions(n: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let chunks = n.div_ceil(CHUNK_ROWS).max(1);
    let workers = workers.min(chunks);
    let per = chunks.div_ceil(workers) * CHUNK_ROWS;
    (0..workers)
        .map(|w| (w * per).min(n)..((w + 1) * per).min(n))
        .filter(|r| !r.is_empty())
        .collect()
}

/// Rows of `table` passing `predicate`, as a selection.
pub fn select_rows(
    table: &ColumnTable,
    predicate: Option<&Predicate>,
) -> Result<RowSelection, ExecError> {
    match predicate {
        None => Ok(RowSelection::All(table.row_count())),
        Some(p) => super::eval_predicate(table, p, RowSelection::All(table.row_count())),
    }
}
