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

//! Seeded generators for a TPC-H-like subset (lineitem, orders, part,
//! supplier) and an SSB-like star schema (lineorder and four dimensions).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use esc_core::storage::{
    date_from_ymd, ymd_from_days, Column, ColumnTable, DataType, Dictionary, StorageError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    TpchSubset,
    SsbSubset,
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Benchmark::TpchSubset => "tpch_subset",
            Benchmark::SsbSubset => "ssb_subset",
        })
    }
}

impl FromStr for Benchmark {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tpch" | "tpch_subset" => Ok(Benchmark::TpchSubset),
            "ssb" | "ssb_subset" => Ok(Benchmark::SsbSubset),
            other => Err(format!(
                "unknown benchmark {other:?} (expected tpch or ssb)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    pub benchmark: Benchmark,
    /// Fraction of the scale-factor-1 row counts.
    pub scale: f64,
    pub seed: u64,
    /// Zipf exponent for fact-table part keys; 0 draws them uniformly.
    #[serde(skip)]
    pub zipf: f64,
    /// Ties prices, statuses and containers to dates and sizes.
    #[serde(skip)]
    pub correlated: bool,
}

impl GenSpec {
    pub fn tpch(scale: f64, seed: u64) -> Self {
        Self {
            benchmark: Benchmark::TpchSubset,
            scale,
            seed,
            zipf: 0.0,
            correlated: true,
        }
    }

    pub fn ssb(scale: f64, seed: u64) -> Self {
        Self {
            benchmark: Benchmark::SsbSubset,
            ..Self::tpch(scale, seed)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("scale {scale} leaves table {table} without rows")]
    ScaleTooSmall { scale: f64, table: &'static str },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Storage(#[from] StorageError),
}

pub fn generate(spec: &GenSpec) -> Result<Vec<ColumnTable>, GenError> {
    if !(spec.scale.is_finite() && spec.scale > 0.0) {
        return Err(GenError::InvalidParameter(format!(
            "scale must be positive, got {}",
            spec.scale
        )));
    }
    if !(spec.zipf.is_finite() && spec.zipf >= 0.0) {
        return Err(GenError::InvalidParameter(format!(
            "zipf must be non-negative, got {}",
            spec.zipf
        )));
    }
    match spec.benchmark {
        Benchmark::TpchSubset => tpch(spec),
        Benchmark::SsbSubset => ssb(spec),
    }
}

fn rows(spec: &GenSpec, base: f64, table: &'static str) -> Result<usize, GenError> {
    let n = (base * spec.scale).round();
    if n < 1.0 {
        return Err(GenError::ScaleTooSmall {
            scale: spec.scale,
            table,
        });
    }
    Ok(n as usize)
}

/// One independent stream per table so tables do not depend on each other's
/// draw counts.
fn rng(spec: &GenSpec, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(spec.seed);
    r.set_stream(stream);
    r
}

fn int(name: &str, values: Vec<i64>) -> Column {
    Column::from_parts(name, DataType::Int64, values, None, None).expect("no dictionary, no nulls")
}

fn decimal(name: &str, units: Vec<i64>) -> Column {
    let ty = DataType::Decimal {
        precision: 15,
        scale: 2,
    };
    Column::from_parts(name, ty, units, None, None).expect("no dictionary, no nulls")
}

fn date(name: &str, days: Vec<i32>) -> Column {
    let values = days.into_iter().map(i64::from).collect();
    Column::from_parts(name, DataType::Date, values, None, None).expect("no dictionary, no nulls")
}

/// TEXT column from per-row strings, dictionary codes assigned in order of
/// first appearance.
fn text<S: AsRef<str>>(name: &str, values: impl IntoIterator<Item = S>) -> Column {
    let mut dict = Dictionary::new();
    let codes = values
        .into_iter()
        .map(|s| dict.encode(s.as_ref()) as i64)
        .collect();
    Column::from_parts(name, DataType::Text, codes, None, Some(Arc::new(dict)))
        .expect("codes from dictionary")
}

fn table(name: &str, columns: Vec<Column>) -> Result<ColumnTable, GenError> {
    Ok(ColumnTable::from_columns(name, columns, false)?)
}

/// Samples 1..=n, Zipf-skewed towards small keys when `s > 0`.
struct KeyDist {
    n: usize,
    zipf: Option<Zipf<f64>>,
}

impl KeyDist {
    fn new(n: usize, s: f64) -> Self {
        let zipf = (s > 0.0).then(|| Zipf::new(n as f64, s).expect("n >= 1 and s > 0"));
        Self { n, zipf }
    }

    fn sample(&self, r: &mut ChaCha8Rng) -> i64 {
        match &self.zipf {
            Some(z) => z.sample(r) as i64,
            None => r.random_range(1..=self.n as i64),
        }
    }
}

pub const TPCH_START: (i32, u32, u32) = (1992, 1, 1);
pub const TPCH_END: (i32, u32, u32) = (1998, 8, 2);
/// Lines shipped on or before this day are returned or accepted; orders
/// whose lines all shipped by then are finished.
pub const TPCH_CURRENT: (i32, u32, u32) = (1995, 6, 17);

const PRIORITIES: &[&str] = &["1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"];
const SHIP_MODES: &[&str] = &["AIR", "FOB", "MAIL", "RAIL", "REG AIR", "SHIP", "TRUCK"];
const CONTAINER_SIZES: &[&str] = &["SM", "MED", "LG", "JUMBO", "WRAP"];
const CONTAINER_KINDS: &[&str] = &["CASE", "BOX", "BAG", "JAR", "PKG", "PACK", "CAN", "DRUM"];
const TYPE_WORDS: &[&str] = &["STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO"];
const TYPE_METALS: &[&str] = &["TIN", "NICKEL", "BRASS", "STEEL", "COPPER"];

fn retail_price_units(partkey: i64) -> i64 {
    90_000 + (partkey / 10) % 20_001 + 100 * (partkey % 1000)
}

fn tpch(spec: &GenSpec) -> Result<Vec<ColumnTable>, GenError> {
    let n_supp = rows(spec, 10_000.0, "supplier")?;
    let n_part = rows(spec, 200_000.0, "part")?;
    let n_orders = rows(spec, 1_500_000.0, "orders")?;
    let n_cust = rows(spec, 150_000.0, "customer")?;

    let mut r = rng(spec, 1);
    let supplier = table(
        "supplier",
        vec![
            int("s_suppkey", (1..=n_supp as i64).collect()),
            text("s_name", (1..=n_supp).map(|k| format!("Supplier#{k:09}"))),
            int(
                "s_nationkey",
                (0..n_supp).map(|_| r.random_range(0..25)).collect(),
            ),
            decimal(
                "s_acctbal",
                (0..n_supp)
                    .map(|_| r.random_range(-99_999..=999_999))
                    .collect(),
            ),
        ],
    )?;

    let mut r = rng(spec, 2);
    let sizes: Vec<i64> = (0..n_part).map(|_| r.random_range(1..=50)).collect();
    let containers: Vec<String> = sizes
        .iter()
        .map(|&size| {
            let class = if spec.correlated {
                match size {
                    1..=10 => 0,
                    11..=25 => 1,
                    26..=40 => 2,
                    _ => 3 + r.random_range(0..2),
                }
            } else {
                r.random_range(0..CONTAINER_SIZES.len())
            };
            let kind = CONTAINER_KINDS[r.random_range(0..CONTAINER_KINDS.len())];
            format!("{} {kind}", CONTAINER_SIZES[class])
        })
        .collect();
    let part = table(
        "part",
        vec![
            int("p_partkey", (1..=n_part as i64).collect()),
            text(
                "p_brand",
                (0..n_part)
                    .map(|_| format!("Brand#{}{}", r.random_range(1..=5), r.random_range(1..=5))),
            ),
            text(
                "p_type",
                (0..n_part).map(|_| {
                    format!(
                        "{} {}",
                        TYPE_WORDS[r.random_range(0..TYPE_WORDS.len())],
                        TYPE_METALS[r.random_range(0..TYPE_METALS.len())]
                    )
                }),
            ),
            int("p_size", sizes),
            text("p_container", containers),
            decimal(
                "p_retailprice",
                (1..=n_part as i64).map(retail_price_units).collect(),
            ),
        ],
    )?;

    let start = date_from_ymd(TPCH_START.0, TPCH_START.1, TPCH_START.2);
    let end = date_from_ymd(TPCH_END.0, TPCH_END.1, TPCH_END.2);
    let current = date_from_ymd(TPCH_CURRENT.0, TPCH_CURRENT.1, TPCH_CURRENT.2);
    let span = (end - start) as f64;

    let mut r = rng(spec, 3);
    let order_dates: Vec<i32> = (0..n_orders)
        .map(|_| r.random_range(start..=end - 151))
        .collect();
    let line_counts: Vec<usize> = (0..n_orders).map(|_| r.random_range(1..=7)).collect();
    // Statuses follow TPC-H: F when every line shipped by the current date,
    // O when none did, P otherwise. Ship dates are drawn here so lineitem
    // can reuse them.
    let mut ship_dates: Vec<Vec<i32>> = Vec::with_capacity(n_orders);
    let mut statuses = Vec::with_capacity(n_orders);
    for (&od, &lines) in order_dates.iter().zip(&line_counts) {
        let ships: Vec<i32> = (0..lines).map(|_| od + r.random_range(1..=121)).collect();
        let shipped = ships.iter().filter(|&&d| d <= current).count();
        statuses.push(if !spec.correlated {
            ["F", "O", "P"][r.random_range(0..3)]
        } else if shipped == lines {
            "F"
        } else if shipped == 0 {
            "O"
        } else {
            "P"
        });
        ship_dates.push(ships);
    }
    let prices: Vec<i64> = order_dates
        .iter()
        .map(|&od| {
            if spec.correlated {
                let f = (od - start) as f64 / span;
                (85_000.0 + f * 40_000_000.0) as i64 + r.random_range(0..15_000_000)
            } else {
                r.random_range(85_000..55_000_000)
            }
        })
        .collect();
    let orders = table(
        "orders",
        vec![
            int("o_orderkey", (1..=n_orders as i64).collect()),
            int(
                "o_custkey",
                (0..n_orders)
                    .map(|_| r.random_range(1..=n_cust as i64))
                    .collect(),
            ),
            text("o_orderstatus", statuses),
            decimal("o_totalprice", prices),
            date("o_orderdate", order_dates.clone()),
            text(
                "o_orderpriority",
                (0..n_orders).map(|_| PRIORITIES[r.random_range(0..PRIORITIES.len())]),
            ),
        ],
    )?;

    let mut r = rng(spec, 4);
    let parts = KeyDist::new(n_part, spec.zipf);
    let total: usize = line_counts.iter().sum();
    let mut l_orderkey = Vec::with_capacity(total);
    let mut l_partkey = Vec::with_capacity(total);
    let mut l_suppkey = Vec::with_capacity(total);
    let mut l_linenumber = Vec::with_capacity(total);
    let mut l_quantity = Vec::with_capacity(total);
    let mut l_price = Vec::with_capacity(total);
    let mut l_discount = Vec::with_capacity(total);
    let mut l_shipdate = Vec::with_capacity(total);
    let mut l_returnflag = Vec::with_capacity(total);
    let mut l_shipmode = Vec::with_capacity(total);
    for (o, ships) in ship_dates.iter().enumerate() {
        for (line, &ship) in ships.iter().enumerate() {
            let pk = parts.sample(&mut r);
            let qty = r.random_range(1..=50);
            l_orderkey.push(o as i64 + 1);
            l_partkey.push(pk);
            // TPC-H spreads each part over four suppliers.
            let slot = r.random_range(0..4) as i64;
            l_suppkey.push(
                (pk + slot * (n_supp as i64 / 4 + (pk - 1) / n_supp as i64)) % n_supp as i64 + 1,
            );
            l_linenumber.push(line as i64 + 1);
            l_quantity.push(qty);
            l_price.push(qty * retail_price_units(pk));
            l_discount.push(r.random_range(0..=10));
            l_shipdate.push(ship);
            l_returnflag.push(if ship <= current {
                if r.random_bool(0.5) {
                    "R"
                } else {
                    "A"
                }
            } else {
                "N"
            });
            l_shipmode.push(SHIP_MODES[r.random_range(0..SHIP_MODES.len())]);
        }
    }
    let lineitem = table(
        "lineitem",
        vec![
            int("l_orderkey", l_orderkey),
            int("l_partkey", l_partkey),
            int("l_suppkey", l_suppkey),
            int("l_linenumber", l_linenumber),
            int("l_quantity", l_quantity),
            decimal("l_extendedprice", l_price),
            decimal("l_discount", l_discount),
            date("l_shipdate", l_shipdate),
            text("l_returnflag", l_returnflag),
            text("l_shipmode", l_shipmode),
        ],
    )?;
    Ok(vec![lineitem, orders, part, supplier])
}

const REGIONS: &[&str] = &["AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"];
/// Nation name and region index, five nations per region.
const NATIONS: &[(&str, usize)] = &[
    ("ALGERIA", 0),
    ("ETHIOPIA", 0),
    ("KENYA", 0),
    ("MOROCCO", 0),
    ("MOZAMBIQUE", 0),
    ("ARGENTINA", 1),
    ("BRAZIL", 1),
    ("CANADA", 1),
    ("PERU", 1),
    ("UNITED STATES", 1),
    ("CHINA", 2),
    ("INDIA", 2),
    ("INDONESIA", 2),
    ("JAPAN", 2),
    ("VIETNAM", 2),
    ("FRANCE", 3),
    ("GERMANY", 3),
    ("ROMANIA", 3),
    ("RUSSIA", 3),
    ("UNITED KINGDOM", 3),
    ("EGYPT", 4),
    ("IRAN", 4),
    ("IRAQ", 4),
    ("JORDAN", 4),
    ("SAUDI ARABIA", 4),
];
const MONTHS: &[&str] = &[
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

/// SSB city: first nine letters of the nation, padded, plus a digit.
fn city(nation: &str, digit: usize) -> String {
    format!("{:<9.9}{digit}", nation)
}

/// Nation, region and city columns for a customer or supplier dimension.
fn geography(prefix: &str, n: usize, r: &mut ChaCha8Rng) -> [Column; 3] {
    let picks: Vec<(usize, usize)> = (0..n)
        .map(|_| (r.random_range(0..NATIONS.len()), r.random_range(0..10)))
        .collect();
    [
        text(
            &format!("{prefix}_city"),
            picks.iter().map(|&(na, d)| city(NATIONS[na].0, d)),
        ),
        text(
            &format!("{prefix}_nation"),
            picks.iter().map(|&(na, _)| NATIONS[na].0),
        ),
        text(
            &format!("{prefix}_region"),
            picks.iter().map(|&(na, _)| REGIONS[NATIONS[na].1]),
        ),
    ]
}

pub const SSB_DATE_TABLE: &str = "ddate";

fn ssb(spec: &GenSpec) -> Result<Vec<ColumnTable>, GenError> {
    let n_lines = rows(spec, 6_000_000.0, "lineorder")?;
    let n_cust = rows(spec, 30_000.0, "customer")?;
    let n_supp = rows(spec, 2_000.0, "supplier")?;
    let n_part = rows(spec, 200_000.0, "part")?;

    // Seven calendar years, independent of scale.
    let first = date_from_ymd(1992, 1, 1);
    let last = date_from_ymd(1998, 12, 31);
    let days: Vec<i32> = (first..=last).collect();
    let ymd: Vec<(i32, u32, u32)> = days.iter().map(|&d| ymd_from_days(d)).collect();
    let datekeys: Vec<i64> = ymd
        .iter()
        .map(|&(y, m, d)| (y as i64) * 10_000 + m as i64 * 100 + d as i64)
        .collect();
    let ddate = table(
        SSB_DATE_TABLE,
        vec![
            int("d_datekey", datekeys.clone()),
            date("d_date", days.clone()),
            int("d_year", ymd.iter().map(|&(y, _, _)| y as i64).collect()),
            int(
                "d_yearmonthnum",
                ymd.iter()
                    .map(|&(y, m, _)| y as i64 * 100 + m as i64)
                    .collect(),
            ),
            text(
                "d_yearmonth",
                ymd.iter()
                    .map(|&(y, m, _)| format!("{}{y}", &MONTHS[m as usize - 1][..3])),
            ),
            text(
                "d_month",
                ymd.iter().map(|&(_, m, _)| MONTHS[m as usize - 1]),
            ),
            int(
                "d_weeknuminyear",
                days.iter()
                    .zip(&ymd)
                    .map(|(&d, &(y, _, _))| ((d - date_from_ymd(y, 1, 1)) / 7 + 1) as i64)
                    .collect(),
            ),
        ],
    )?;

    let mut r = rng(spec, 11);
    let [c_city, c_nation, c_region] = geography("c", n_cust, &mut r);
    let customer = table(
        "customer",
        vec![
            int("c_custkey", (1..=n_cust as i64).collect()),
            c_city,
            c_nation,
            c_region,
        ],
    )?;

    let mut r = rng(spec, 12);
    let [s_city, s_nation, s_region] = geography("s", n_supp, &mut r);
    let supplier = table(
        "supplier",
        vec![
            int("s_suppkey", (1..=n_supp as i64).collect()),
            s_city,
            s_nation,
            s_region,
        ],
    )?;

    let mut r = rng(spec, 13);
    let mfgr: Vec<usize> = (0..n_part).map(|_| r.random_range(1..=5)).collect();
    let category: Vec<usize> = (0..n_part).map(|_| r.random_range(1..=5)).collect();
    let brand: Vec<usize> = (0..n_part).map(|_| r.random_range(1..=40)).collect();
    let part = table(
        "part",
        vec![
            int("p_partkey", (1..=n_part as i64).collect()),
            text("p_mfgr", mfgr.iter().map(|m| format!("MFGR#{m}"))),
            text(
                "p_category",
                mfgr.iter()
                    .zip(&category)
                    .map(|(m, c)| format!("MFGR#{m}{c}")),
            ),
            text(
                "p_brand1",
                mfgr.iter()
                    .zip(&category)
                    .zip(&brand)
                    .map(|((m, c), b)| format!("MFGR#{m}{c}{b}")),
            ),
            int(
                "p_size",
                (0..n_part).map(|_| r.random_range(1..=50)).collect(),
            ),
        ],
    )?;

    let mut r = rng(spec, 14);
    let parts = KeyDist::new(n_part, spec.zipf);
    let mut lo_orderkey = Vec::with_capacity(n_lines);
    let mut lo_linenumber = Vec::with_capacity(n_lines);
    let mut order = 0i64;
    let mut line = 0i64;
    let mut lines_in_order = 0i64;
    for _ in 0..n_lines {
        if line == lines_in_order {
            order += 1;
            line = 0;
            lines_in_order = r.random_range(1..=7);
        }
        line += 1;
        lo_orderkey.push(order);
        lo_linenumber.push(line);
    }
    let quantities: Vec<i64> = (0..n_lines).map(|_| r.random_range(1..=50)).collect();
    let lineorder = table(
        "lineorder",
        vec![
            int("lo_orderkey", lo_orderkey),
            int("lo_linenumber", lo_linenumber),
            int(
                "lo_custkey",
                (0..n_lines)
                    .map(|_| r.random_range(1..=n_cust as i64))
                    .collect(),
            ),
            int(
                "lo_partkey",
                (0..n_lines).map(|_| parts.sample(&mut r)).collect(),
            ),
            int(
                "lo_suppkey",
                (0..n_lines)
                    .map(|_| r.random_range(1..=n_supp as i64))
                    .collect(),
            ),
            int(
                "lo_orderdate",
                (0..n_lines)
                    .map(|_| datekeys[r.random_range(0..datekeys.len())])
                    .collect(),
            ),
            int("lo_quantity", quantities.clone()),
            int(
                "lo_discount",
                (0..n_lines).map(|_| r.random_range(0..=10)).collect(),
            ),
            decimal(
                "lo_revenue",
                quantities
                    .iter()
                    .map(|q| q * r.random_range(90_000..200_000))
                    .collect(),
            ),
        ],
    )?;
    Ok(vec![lineorder, ddate, customer, supplier, part])
}
