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

//! Equi-depth histograms and the independence-based selectivity estimator
//! used by the histogram planning arm.

use std::collections::BTreeMap;

use serde::Serialize;

use super::CatalogError;
use crate::sql::{CmpOp, ColumnRef, Predicate};
use crate::storage::{ColumnTable, DataType, Value};

pub const DEFAULT_BUCKETS: usize = 64;
pub const DEFAULT_GUESS: f64 = 0.1;

/// Values in `[lower, upper]` (inclusive, raw storage units).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bucket {
    pub lower: i64,
    pub upper: i64,
    pub count: u64,
    pub distinct: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquiDepthHistogram {
    pub column: String,
    pub data_type: DataType,
    pub buckets: Vec<Bucket>,
    pub row_count: u64,
    pub null_count: u64,
}

impl EquiDepthHistogram {
    /// Builds at most `k` buckets over the non-NULL values. A run of equal
    /// values never straddles two buckets, so heavy hitters can leave fewer
    /// than `k` buckets.
    pub fn build(table: &ColumnTable, column: &str, k: usize) -> Result<Self, CatalogError> {
        let col = table
            .column(column)
            .ok_or_else(|| CatalogError::UnknownColumn(format!("{}.{column}", table.name())))?;
        if col.data_type() == DataType::Text {
            return Err(CatalogError::UnsupportedColumnKind {
                column: column.to_string(),
                data_type: col.data_type(),
            });
        }
        if k == 0 {
            return Err(CatalogError::InvalidBucketCount);
        }
        let mut values: Vec<i64> = col
            .values()
            .iter()
            .enumerate()
            .filter(|(row, _)| !col.is_null(*row))
            .map(|(_, &v)| v)
            .collect();
        values.sort_unstable();
        let n = values.len() as u64;
        let mut buckets: Vec<Bucket> = Vec::new();
        let mut open: Option<Bucket> = None;
        let mut cumulative = 0u64;
        let mut closed = 0u64;
        let mut i = 0;
        while i < values.len() {
            let v = values[i];
            let run = values[i..].iter().take_while(|&&x| x == v).count() as u64;
            i += run as usize;
            cumulative += run;
            let b = open.get_or_insert(Bucket {
                lower: v,
                upper: v,
                count: 0,
                distinct: 0,
            });
            b.upper = v;
            b.count += run;
            b.distinct += 1;
            // Close once the running total reaches the next depth boundary.
            if cumulative * k as u64 >= (closed + 1) * n {
                buckets.push(open.take().expect("bucket is open"));
                closed = cumulative * k as u64 / n;
            }
        }
        buckets.extend(open);
        Ok(Self {
            column: column.to_string(),
            data_type: col.data_type(),
            buckets,
            row_count: table.row_count() as u64,
            null_count: col.null_count() as u64,
        })
    }

    fn non_null(&self) -> u64 {
        self.row_count - self.null_count
    }

    /// Fraction of all rows equal to `v`: uniform over the distinct values of
    /// the bucket holding `v`.
    pub fn equality(&self, v: i64) -> f64 {
        if self.row_count == 0 {
            return 0.0;
        }
        self.buckets
            .iter()
            .find(|b| b.lower <= v && v <= b.upper)
            .map_or(0.0, |b| {
                b.count as f64 / b.distinct as f64 / self.row_count as f64
            })
    }

    /// Fraction of all rows in `[lo, hi]`, assuming values spread uniformly
    /// over each bucket's integer range.
    pub fn range(&self, lo: i64, hi: i64) -> f64 {
        if self.row_count == 0 || lo > hi {
            return 0.0;
        }
        let mut rows = 0.0;
        for b in &self.buckets {
            let from = lo.max(b.lower);
            let to = hi.min(b.upper);
            if from > to {
                continue;
            }
            let width = (b.upper as i128 - b.lower as i128 + 1) as f64;
            let overlap = (to as i128 - from as i128 + 1) as f64;
            rows += b.count as f64 * overlap / width;
        }
        rows / self.row_count as f64
    }

    pub fn compare(&self, op: CmpOp, v: i64) -> f64 {
        let non_null = if self.row_count == 0 {
            0.0
        } else {
            self.non_null() as f64 / self.row_count as f64
        };
        match op {
            CmpOp::Eq => self.equality(v),
            CmpOp::NotEq => (non_null - self.equality(v)).max(0.0),
            CmpOp::Lt => v.checked_sub(1).map_or(0.0, |hi| self.range(i64::MIN, hi)),
            CmpOp::LtEq => self.range(i64::MIN, v),
            CmpOp::Gt => v.checked_add(1).map_or(0.0, |lo| self.range(lo, i64::MAX)),
            CmpOp::GtEq => self.range(v, i64::MAX),
        }
    }
}

/// Histograms for the columns of one table, keyed by column name.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TableHistograms {
    pub columns: BTreeMap<String, EquiDepthHistogram>,
}

impl TableHistograms {
    /// Histograms on every numeric and DATE column.
    pub fn build(table: &ColumnTable, k: usize) -> Result<Self, CatalogError> {
        let mut columns = BTreeMap::new();
        for col in table
            .columns()
            .iter()
            .filter(|c| c.data_type().is_numeric())
        {
            columns.insert(
                col.name().to_string(),
                EquiDepthHistogram::build(table, col.name(), k)?,
            );
        }
        Ok(Self { columns })
    }

    fn get(&self, c: &ColumnRef) -> Result<&EquiDepthHistogram, EstimateError> {
        self.columns
            .get(&c.column)
            .ok_or_else(|| EstimateError::MissingHistogram(c.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimateError {
    #[error("no estimate for {0}")]
    Inestimable(String),
    #[error("no histogram on {0}")]
    MissingHistogram(String),
}

/// Independence-based estimate: per-atom histogram lookups, conjunctions
/// multiplied, disjunctions combined by inclusion-exclusion.
pub fn estimate_selectivity(
    hists: &TableHistograms,
    predicate: &Predicate,
) -> Result<f64, EstimateError> {
    estimate(hists, predicate, None)
}

/// Like [`estimate_selectivity`] but substitutes `guess` for every atom that
/// has no estimate (functions, TEXT columns, column-to-column comparisons).
pub fn estimate_with_default(hists: &TableHistograms, predicate: &Predicate, guess: f64) -> f64 {
    estimate(hists, predicate, Some(guess)).expect("fallback covers every atom")
}

fn estimate(
    hists: &TableHistograms,
    p: &Predicate,
    guess: Option<f64>,
) -> Result<f64, EstimateError> {
    let fallback = |err: EstimateError| guess.ok_or(err);
    let s = match p {
        Predicate::Const(b) => f64::from(u8::from(*b)),
        Predicate::Compare { column, op, value } => match (raw(value), hists.get(column)) {
            (Some(v), Ok(h)) => h.compare(*op, v),
            (None, _) => fallback(EstimateError::Inestimable(p.to_string()))?,
            (_, Err(e)) => fallback(e)?,
        },
        Predicate::Between { column, low, high } => {
            match (raw(low), raw(high), hists.get(column)) {
                (Some(lo), Some(hi), Ok(h)) => h.range(lo, hi),
                (_, _, Err(e)) => fallback(e)?,
                _ => fallback(EstimateError::Inestimable(p.to_string()))?,
            }
        }
        Predicate::ColumnCompare { .. } | Predicate::Function { .. } => {
            fallback(EstimateError::Inestimable(p.to_string()))?
        }
        Predicate::And(parts) => {
            let mut acc = 1.0;
            for part in parts {
                acc *= estimate(hists, part, guess)?;
            }
            acc
        }
        Predicate::Or(parts) => {
            let mut none = 1.0;
            for part in parts {
                none *= 1.0 - estimate(hists, part, guess)?;
            }
            1.0 - none
        }
        Predicate::Not(inner) => 1.0 - estimate(hists, inner, guess)?,
    };
    Ok(s.clamp(0.0, 1.0))
}

fn raw(v: &Value) -> Option<i64> {
    match v {
        Value::Int(x) => Some(*x),
        Value::Decimal { units, .. } => Some(*units),
        Value::Date(d) => Some(*d as i64),
        Value::Text(_) | Value::Null => None,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::ScalarUdf;
    use crate::storage::Field;

    fn table(values: impl IntoIterator<Item = Value>) -> ColumnTable {
        let mut t = ColumnTable::new("t", &[Field::new("a", DataType::Int64)]).unwrap();
        let rows: Vec<Vec<Value>> = values.into_iter().map(|v| vec![v]).collect();
        t.append_rows(&rows).unwrap();
        t
    }

    fn uniform() -> ColumnTable {
        table((1..=1000).map(Value::Int))
    }

    #[test]
    fn uniform_ten_buckets() {
        let h = EquiDepthHistogram::build(&uniform(), "a", 10).unwrap();
        assert_eq!(h.buckets.len(), 10);
        assert!(h.buckets.iter().all(|b| b.count == 100));
        assert!(h.buckets.windows(2).all(|w| w[0].upper <= w[1].lower));
        assert_eq!(h.buckets.iter().map(|b| b.count).sum::<u64>(), 1000);
    }

    #[test]
    fn one_bucket() {
        let h = EquiDepthHistogram::build(&uniform(), "a", 1).unwrap();
        assert_eq!(
            h.buckets,
            vec![Bucket {
                lower: 1,
                upper: 1000,
                count: 1000,
                distinct: 1000
            }]
        );
    }

    #[test]
    fn constant_column_single_bucket() {
        let h =
            EquiDepthHistogram::build(&table((0..500).map(|_| Value::Int(7))), "a", 10).unwrap();
        assert_eq!(h.buckets.len(), 1);
        assert_eq!(
            (h.buckets[0].lower, h.buckets[0].upper, h.buckets[0].count),
            (7, 7, 500)
        );
    }

    #[test]
    fn nulls_excluded_from_buckets() {
        let h =
            EquiDepthHistogram::build(&table([Value::Int(1), Value::Null, Value::Int(2)]), "a", 4)
                .unwrap();
        assert_eq!(
            h.buckets.iter().map(|b| b.count).sum::<u64>(),
            h.row_count - h.null_count
        );
    }

    #[test]
    fn text_column_rejected() {
        let mut t = ColumnTable::new("t", &[Field::new("s", DataType::Text)]).unwrap();
        t.append_rows(&[vec![Value::Text("x".into())]]).unwrap();
        assert!(matches!(
            EquiDepthHistogram::build(&t, "s", 4),
            Err(CatalogError::UnsupportedColumnKind { .. })
        ));
        assert!(matches!(
            EquiDepthHistogram::build(&uniform(), "a", 0),
            Err(CatalogError::InvalidBucketCount)
        ));
    }

    fn cmp(col: &str, op: CmpOp, v: i64) -> Predicate {
        Predicate::Compare {
            column: ColumnRef::new("t", col),
            op,
            value: Value::Int(v),
        }
    }

    #[test]
    fn equality_on_uniform_domain() {
        let hists = TableHistograms::build(&uniform(), DEFAULT_BUCKETS).unwrap();
        let s = estimate_selectivity(&hists, &cmp("a", CmpOp::Eq, 500)).unwrap();
        assert!((s - 0.001).abs() < 1e-12, "{s}");
        let s = estimate_selectivity(&hists, &cmp("a", CmpOp::Lt, 101)).unwrap();
        assert!((s - 0.1).abs() < 1e-9, "{s}");
        assert_eq!(
            estimate_selectivity(&hists, &cmp("a", CmpOp::Eq, 5000)).unwrap(),
            0.0
        );
    }

    #[test]
    fn independence_product_and_inclusion_exclusion() {
        let mut t = ColumnTable::new(
            "t",
            &[
                Field::new("a", DataType::Int64),
                Field::new("b", DataType::Int64),
            ],
        )
        .unwrap();
        let rows: Vec<Vec<Value>> = (0..1000)
            .map(|i| vec![Value::Int(i % 10), Value::Int(i / 100)])
            .collect();
        t.append_rows(&rows).unwrap();
        let hists = TableHistograms::build(&t, DEFAULT_BUCKETS).unwrap();
        let a = cmp("a", CmpOp::Eq, 3);
        let b = cmp("b", CmpOp::Eq, 4);
        let both =
            estimate_selectivity(&hists, &Predicate::And(vec![a.clone(), b.clone()])).unwrap();
        assert!((both - 0.01).abs() < 1e-12, "{both}");
        let either = estimate_selectivity(&hists, &Predicate::Or(vec![a, b])).unwrap();
        assert!((either - 0.19).abs() < 1e-12, "{either}");
    }

    #[test]
    fn udf_is_inestimable_and_falls_back() {
        let hists = TableHistograms::build(&uniform(), DEFAULT_BUCKETS).unwrap();
        let udf = Predicate::Function {
            udf: Arc::new(ScalarUdf::new("udf", 1, Arc::new(|a: &[f64]| Ok(a[0])))),
            args: vec![ColumnRef::new("t", "a")],
            op: CmpOp::Gt,
            value: 3.0,
        };
        assert!(matches!(
            estimate_selectivity(&hists, &udf),
            Err(EstimateError::Inestimable(_))
        ));
        assert_eq!(estimate_with_default(&hists, &udf, DEFAULT_GUESS), 0.1);
        let mixed = Predicate::And(vec![cmp("a", CmpOp::LtEq, 500), udf]);
        assert!((estimate_with_default(&hists, &mixed, DEFAULT_GUESS) - 0.05).abs() < 1e-9);
    }
}
