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

//! Seeded data and a row-at-a-time reference evaluator that shares no code
//! with the executor: it walks `ColumnTable::row` values and applies SQL
//! three-valued logic directly.

#![allow(dead_code)]

use esc_core::catalog::Catalog;
use esc_core::sql::CmpOp;
use esc_core::storage::{date_from_ymd, format_date, ColumnTable, DataType, Field, Value};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WORDS: &[&str] = &[
    "AIR", "FOB", "MAIL", "RAIL", "REG AIR", "SHIP", "TRUCK", "bronze", "copper", "nickel",
    "steel", "tin",
];

/// Columns: k (unique), a 0..1000, b DECIMAL(15,2) in [0, 10000), d DATE in
/// 1992..1998, s TEXT, n nullable INT, t nullable TEXT.
pub fn sample_table(name: &str, rows: usize, seed: u64) -> ColumnTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = date_from_ymd(1992, 1, 1);
    let mut t = ColumnTable::new(
        name,
        &[
            Field::new("k", DataType::Int64),
            Field::new("a", DataType::Int64),
            Field::new(
                "b",
                DataType::Decimal {
                    precision: 15,
                    scale: 2,
                },
            ),
            Field::new("d", DataType::Date),
            Field::new("s", DataType::Text),
            Field::new("n", DataType::Int64),
            Field::new("t", DataType::Text),
        ],
    )
    .unwrap();
    let data: Vec<Vec<Value>> = (0..rows)
        .map(|i| {
            let n = if rng.random_bool(0.1) {
                Value::Null
            } else {
                Value::Int(rng.random_range(0..100))
            };
            let tt = if rng.random_bool(0.2) {
                Value::Null
            } else {
                Value::Text(WORDS[rng.random_range(0..WORDS.len())].to_string())
            };
            vec![
                Value::Int(i as i64),
                Value::Int(rng.random_range(0..1000)),
                Value::Decimal {
                    units: rng.random_range(0..1_000_000),
                    scale: 2,
                },
                Value::Date(start + rng.random_range(0..2557)),
                Value::Text(WORDS[rng.random_range(0..WORDS.len())].to_string()),
                n,
                tt,
            ]
        })
        .collect();
    t.append_rows(&data).unwrap();
    t
}

pub fn catalog_with(tables: Vec<ColumnTable>) -> Catalog {
    let mut c = Catalog::new();
    for t in tables {
        c.register_table(t).unwrap();
    }
    c.register_udf("udf", 2, |a| Ok(a[0] + a[1])).unwrap();
    c
}

/// Literals in SQL terms; decimals are held in thousandths so they usually
/// carry more digits than the column scale.
#[derive(Debug, Clone)]
pub enum Lit {
    Int(i64),
    Milli(i64),
    Date(i32),
    Text(String),
}

impl Lit {
    fn sql(&self) -> String {
        match self {
            Lit::Int(v) => v.to_string(),
            Lit::Milli(m) => {
                let sign = if *m < 0 { "-" } else { "" };
                format!("{sign}{}.{:03}", m.abs() / 1000, m.abs() % 1000)
            }
            Lit::Date(d) => format!("DATE '{}'", format_date(*d)),
            Lit::Text(s) => format!("'{}'", s.replace('\'', "''")),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Expr {
    Cmp(&'static str, CmpOp, Lit),
    Between(&'static str, Lit, Lit),
    Udf(CmpOp, i64),
    ColCmp(CmpOp),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn sql(&self, binding: &str) -> String {
        match self {
            Expr::Cmp(c, op, l) => format!("{binding}.{c} {} {}", op.symbol(), l.sql()),
            Expr::Between(c, lo, hi) => {
                format!("({binding}.{c} BETWEEN {} AND {})", lo.sql(), hi.sql())
            }
            Expr::Udf(op, k) => format!("udf({binding}.a, {binding}.b) {} {k}", op.symbol()),
            Expr::ColCmp(op) => format!("{binding}.a {} {binding}.n", op.symbol()),
            Expr::And(l, r) => format!("({} AND {})", l.sql(binding), r.sql(binding)),
            Expr::Or(l, r) => format!("({} OR {})", l.sql(binding), r.sql(binding)),
            Expr::Not(e) => format!("NOT ({})", e.sql(binding)),
        }
    }

    /// `None` is SQL UNKNOWN.
    pub fn eval(&self, t: &ColumnTable, row: usize) -> Option<bool> {
        let value = |c: &str| t.column(c).unwrap().value(row);
        match self {
            Expr::Cmp(c, op, l) => {
                cmp(&value(c), l).map(|o| op.holds(o, std::cmp::Ordering::Equal))
            }
            // A reversed literal range is folded to FALSE at analysis time,
            // even for NULL rows.
            Expr::Between(_, lo, hi) if lit_order(lo, hi).is_gt() => Some(false),
            Expr::Between(c, lo, hi) => {
                let v = value(c);
                Some(cmp(&v, lo)?.is_ge() && cmp(&v, hi)?.is_le())
            }
            Expr::Udf(op, k) => {
                let (Value::Int(a), Value::Decimal { units, .. }) = (value("a"), value("b")) else {
                    return None;
                };
                Some(op.holds(a as f64 + units as f64 / 100.0, *k as f64))
            }
            Expr::ColCmp(op) => match (value("a"), value("n")) {
                (Value::Int(a), Value::Int(n)) => Some(op.holds(a, n)),
                _ => None,
            },
            Expr::And(l, r) => match (l.eval(t, row), r.eval(t, row)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Expr::Or(l, r) => match (l.eval(t, row), r.eval(t, row)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Expr::Not(e) => e.eval(t, row).map(|b| !b),
        }
    }

    pub fn oracle_count(&self, t: &ColumnTable) -> u64 {
        (0..t.row_count())
            .filter(|&r| self.eval(t, r) == Some(true))
            .count() as u64
    }
}

fn lit_order(a: &Lit, b: &Lit) -> std::cmp::Ordering {
    match (a, b) {
        (Lit::Int(x), Lit::Int(y)) | (Lit::Milli(x), Lit::Milli(y)) => x.cmp(y),
        (Lit::Date(x), Lit::Date(y)) => x.cmp(y),
        (Lit::Text(x), Lit::Text(y)) => x.cmp(y),
        _ => std::cmp::Ordering::Equal,
    }
}

fn cmp(v: &Value, l: &Lit) -> Option<std::cmp::Ordering> {
    Some(match (v, l) {
        (Value::Int(a), Lit::Int(b)) => a.cmp(b),
        (Value::Decimal { units, scale: 2 }, Lit::Milli(m)) => {
            (*units as i128 * 10).cmp(&(*m as i128))
        }
        (Value::Date(a), Lit::Date(b)) => a.cmp(b),
        (Value::Text(a), Lit::Text(b)) => a.as_str().cmp(b.as_str()),
        _ => return None,
    })
}

fn op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Eq),
        Just(CmpOp::NotEq),
        Just(CmpOp::Lt),
        Just(CmpOp::LtEq),
        Just(CmpOp::Gt),
        Just(CmpOp::GtEq),
    ]
}

fn lit_for(col: &'static str) -> BoxedStrategy<Lit> {
    let start = date_from_ymd(1992, 1, 1);
    match col {
        "a" | "k" | "n" => (-50i64..1050).prop_map(Lit::Int).boxed(),
        "b" => prop_oneof![
            (-1000i64..10_001_000).prop_map(Lit::Milli),
            (0i64..100_000).prop_map(|u| Lit::Milli(u * 100)),
        ]
        .boxed(),
        "d" => (start - 30..start + 2600).prop_map(Lit::Date).boxed(),
        _ => prop_oneof![
            proptest::sample::select(WORDS).prop_map(|w| Lit::Text(w.to_string())),
            Just(Lit::Text("MISSING".into())),
            Just(Lit::Text("c".into())),
        ]
        .boxed(),
    }
}

fn atom() -> impl Strategy<Value = Expr> {
    let col = proptest::sample::select(vec!["a", "b", "d", "s", "n", "t"]);
    prop_oneof![
        4 => (col.clone(), op()).prop_flat_map(|(c, o)| lit_for(c).prop_map(move |l| Expr::Cmp(c, o, l))),
        2 => col.prop_flat_map(|c| (lit_for(c), lit_for(c)).prop_map(move |(lo, hi)| Expr::Between(c, lo, hi))),
        1 => (op(), -10i64..11_000).prop_map(|(o, k)| Expr::Udf(o, k)),
        1 => op().prop_map(Expr::ColCmp),
    ]
}

pub fn predicate() -> impl Strategy<Value = Expr> {
    atom().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::And(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::Or(Box::new(l), Box::new(r))),
            inner.prop_map(|e| Expr::Not(Box::new(e))),
        ]
    })
}
