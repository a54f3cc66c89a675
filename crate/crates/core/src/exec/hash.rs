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

//! Open-addressing hash index over (possibly composite) integer keys.
//! Each slot holds one distinct key; duplicate keys chain through `next`.

use super::filter::{CompiledPredicate, RowSelection};
use super::ExecError;
use crate::sql::Predicate;
use crate::storage::ColumnTable;

const EMPTY: u32 = u32::MAX;
const MAX_LOAD: f64 = 0.7;
/// Small tables still get this many slots so that most misses stop at the
/// first probe.
const MIN_SLOTS: usize = 1024;

#[derive(Debug, Clone)]
pub struct HashTableIndex {
    key_columns: Vec<usize>,
    mask: usize,
    /// Slot -> group id.
    slots: Vec<u32>,
    /// Group keys, `key_columns.len()` values per group.
    group_keys: Vec<i64>,
    group_head: Vec<u32>,
    /// Entry -> next entry of the same key.
    next: Vec<u32>,
    /// Entry -> build row id.
    rows: Vec<u32>,
}

#[inline]
pub(crate) fn hash_key(key: &[i64]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &k in key {
        h = (h ^ k as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h.wrapping_mul(0x94d0_49bb_1331_11eb) ^ (h >> 29)
}

impl HashTableIndex {
    fn with_capacity(key_columns: Vec<usize>, rows: usize) -> Self {
        let slots = ((rows as f64 / MAX_LOAD).ceil() as usize + 1)
            .next_power_of_two()
            .max(MIN_SLOTS);
        Self {
            key_columns,
            mask: slots - 1,
            slots: vec![EMPTY; slots],
            group_keys: Vec::new(),
            group_head: Vec::new(),
            next: Vec::with_capacity(rows),
            rows: Vec::with_capacity(rows),
        }
    }

    fn key_of(&self, group: u32) -> &[i64] {
        let w = self.key_columns.len();
        &self.group_keys[group as usize * w..(group as usize + 1) * w]
    }

    fn insert(&mut self, key: &[i64], row: u32) {
        let mut slot = hash_key(key) as usize & self.mask;
        loop {
            let g = self.slots[slot];
            if g == EMPTY {
                let group = self.group_head.len() as u32;
                self.slots[slot] = group;
                self.group_keys.extend_from_slice(key);
                self.group_head.push(EMPTY);
                self.push_entry(group, row);
                return;
            }
            if self.key_of(g) == key {
                self.push_entry(g, row);
                return;
            }
            slot = (slot + 1) & self.mask;
        }
    }

    fn push_entry(&mut self, group: u32, row: u32) {
        let entry = self.rows.len() as u32;
        self.rows.push(row);
        self.next.push(self.group_head[group as usize]);
        self.group_head[group as usize] = entry;
    }

    /// Build rows whose key equals `key`.
    #[inline]
    pub fn lookup<'a>(&'a self, key: &[i64]) -> Matches<'a> {
        let mut slot = hash_key(key) as usize & self.mask;
        loop {
            let g = self.slots[slot];
            if g == EMPTY {
                return Matches {
                    index: self,
                    entry: EMPTY,
                };
            }
            if self.key_of(g) == key {
                return Matches {
                    index: self,
                    entry: self.group_head[g as usize],
                };
            }
            slot = (slot + 1) & self.mask;
        }
    }

    /// Single-column variant of [`lookup`](Self::lookup).
    #[inline]
    pub fn lookup_one(&self, key: i64) -> Matches<'_> {
        debug_assert_eq!(self.key_columns.len(), 1);
        let mut slot = hash_key(&[key]) as usize & self.mask;
        loop {
            let g = self.slots[slot];
            if g == EMPTY {
                return Matches {
                    index: self,
                    entry: EMPTY,
                };
            }
            if self.group_keys[g as usize] == key {
                return Matches {
                    index: self,
                    entry: self.group_head[g as usize],
                };
            }
            slot = (slot + 1) & self.mask;
        }
    }

    /// Number of inserted build rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn distinct_keys(&self) -> usize {
        self.group_head.len()
    }

    pub fn key_columns(&self) -> &[usize] {
        &self.key_columns
    }
}

pub struct Matches<'a> {
    index: &'a HashTableIndex,
    entry: u32,
}

impl Iterator for Matches<'_> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.entry == EMPTY {
            return None;
        }
        let e = self.entry as usize;
        self.entry = self.index.next[e];
        Some(self.index.rows[e])
    }
}

/// Indexes the rows of `table` that pass `residual` on `key_columns`. Rows
/// with a NULL in any key column are left out since they never join.
pub fn build_hash(
    table: &ColumnTable,
    key_columns: &[&str],
    residual: Option<&Predicate>,
) -> Result<HashTableIndex, ExecError> {
    let keys: Vec<usize> = key_columns
        .iter()
        .map(|k| {
            table
                .column_index(k)
                .ok_or_else(|| ExecError::UnknownColumn(format!("{}.{k}", table.name())))
        })
        .collect::<Result<_, _>>()?;
    let selection = match residual.filter(|p| !p.is_true()) {
        None => RowSelection::All(table.row_count()),
        Some(p) => {
            let compiled = CompiledPredicate::compile(table, p)?;
            let mut out = Vec::new();
            RowSelection::All(table.row_count())
                .for_each_chunk(|rows| compiled.eval(table, rows, true, &mut out))?;
            RowSelection::Rows(out)
        }
    };
    let mut index = HashTableIndex::with_capacity(keys.clone(), selection.len());
    let cols: Vec<_> = keys.iter().map(|&k| &table.columns()[k]).collect();
    let mut key = vec![0i64; keys.len()];
    selection.for_each_chunk(|rows| {
        'rows: for &row in rows {
            for (slot, c) in key.iter_mut().zip(&cols) {
                if c.is_null(row as usize) {
                    continue 'rows;
                }
                *slot = c.values()[row as usize];
            }
            index.insert(&key, row);
        }
        Ok::<_, ExecError>(())
    })?;
    Ok(index)
}
