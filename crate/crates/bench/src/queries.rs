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

//! Query templates for the plan-quality and overhead suites.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchQuery {
    pub name: &'static str,
    pub sql: &'static str,
}

/// Four 3-table joins with one selection per table. The generator ties order
/// prices and statuses to dates and part containers to sizes, so per-column
/// estimates multiply into the wrong plan.
pub const TPCH4: [BenchQuery; 4] = [
    BenchQuery {
        name: "q1",
        sql: "SELECT COUNT(*) FROM lineitem, orders, part \
              WHERE l_orderkey = o_orderkey AND l_partkey = p_partkey \
              AND o_orderdate < DATE '1993-01-01' AND o_totalprice > 190000.00 AND p_size <= 10",
    },
    BenchQuery {
        name: "q2",
        sql: "SELECT COUNT(*) FROM lineitem, orders, supplier \
              WHERE l_orderkey = o_orderkey AND l_suppkey = s_suppkey \
              AND o_orderstatus = 'P' AND o_orderpriority = '1-URGENT' AND s_nationkey < 20",
    },
    BenchQuery {
        name: "q3",
        sql: "SELECT COUNT(*) FROM lineitem, part, supplier \
              WHERE l_partkey = p_partkey AND l_suppkey = s_suppkey \
              AND p_size <= 3 AND p_container = 'SM BOX' AND s_acctbal > 0.00",
    },
    BenchQuery {
        name: "q4",
        sql: "SELECT COUNT(*) FROM lineitem, orders, part \
              WHERE l_orderkey = o_orderkey AND l_partkey = p_partkey \
              AND o_orderstatus = 'F' AND o_orderdate > DATE '1995-03-15' \
              AND p_container = 'LG CASE' AND p_size > 30",
    },
];

/// SSB flights 2 to 4 with their aggregates reduced to COUNT(*).
pub const SSB: [BenchQuery; 10] = [
    BenchQuery {
        name: "q2.1",
        sql: "SELECT COUNT(*) FROM lineorder, ddate, part, supplier \
              WHERE lo_orderdate = d_datekey AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey \
              AND p_category = 'MFGR#12' AND s_region = 'AMERICA'",
    },
    BenchQuery {
        name: "q2.2",
        sql: "SELECT COUNT(*) FROM lineorder, ddate, part, supplier \
              WHERE lo_orderdate = d_datekey AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey \
              AND p_brand1 BETWEEN 'MFGR#2221' AND 'MFGR#2228' AND s_region = 'ASIA'",
    },
    BenchQuery {
        name: "q2.3",
        sql: "SELECT COUNT(*) FROM lineorder, ddate, part, supplier \
              WHERE lo_orderdate = d_datekey AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey \
              AND p_brand1 = 'MFGR#2239' AND s_region = 'EUROPE'",
    },
    BenchQuery {
        name: "q3.1",
        sql: "SELECT COUNT(*) FROM customer, lineorder, supplier, ddate \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey \
              AND c_region = 'ASIA' AND s_region = 'ASIA' AND d_year >= 1992 AND d_year <= 1997",
    },
    BenchQuery {
        name: "q3.2",
        sql: "SELECT COUNT(*) FROM customer, lineorder, supplier, ddate \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey \
              AND c_nation = 'UNITED STATES' AND s_nation = 'UNITED STATES' \
              AND d_year >= 1992 AND d_year <= 1997",
    },
    BenchQuery {
        name: "q3.3",
        sql: "SELECT COUNT(*) FROM customer, lineorder, supplier, ddate \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey \
              AND (c_city = 'UNITED KI1' OR c_city = 'UNITED KI5') \
              AND (s_city = 'UNITED KI1' OR s_city = 'UNITED KI5') \
              AND d_year >= 1992 AND d_year <= 1997",
    },
    BenchQuery {
        name: "q3.4",
        sql: "SELECT COUNT(*) FROM customer, lineorder, supplier, ddate \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey \
              AND (c_city = 'UNITED KI1' OR c_city = 'UNITED KI5') \
              AND (s_city = 'UNITED KI1' OR s_city = 'UNITED KI5') \
              AND d_yearmonth = 'Dec1997'",
    },
    BenchQuery {
        name: "q4.1",
        sql: "SELECT COUNT(*) FROM ddate, customer, supplier, part, lineorder \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_partkey = p_partkey \
              AND lo_orderdate = d_datekey AND c_region = 'AMERICA' AND s_region = 'AMERICA' \
              AND (p_mfgr = 'MFGR#1' OR p_mfgr = 'MFGR#2')",
    },
    BenchQuery {
        name: "q4.2",
        sql: "SELECT COUNT(*) FROM ddate, customer, supplier, part, lineorder \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_partkey = p_partkey \
              AND lo_orderdate = d_datekey AND c_region = 'AMERICA' AND s_region = 'AMERICA' \
              AND (d_year = 1997 OR d_year = 1998) AND (p_mfgr = 'MFGR#1' OR p_mfgr = 'MFGR#2')",
    },
    BenchQuery {
        name: "q4.3",
        sql: "SELECT COUNT(*) FROM ddate, customer, supplier, part, lineorder \
              WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_partkey = p_partkey \
              AND lo_orderdate = d_datekey AND c_region = 'AMERICA' AND s_nation = 'UNITED STATES' \
              AND (d_year = 1997 OR d_year = 1998) AND p_category = 'MFGR#14'",
    },
];

/// The highly selective flight singled out in the speedup check.
pub const SSB_MOST_SELECTIVE: &str = "q4.3";

/// Build tables of the overhead-by-scale template, each with one equality
/// predicate.
pub const OVERHEAD_TABLES: [(&str, &str); 3] = [
    (
        "orders",
        "l_orderkey = o_orderkey AND o_orderpriority = '1-URGENT'",
    ),
    ("part", "l_partkey = p_partkey AND p_size = 7"),
    ("supplier", "l_suppkey = s_suppkey AND s_nationkey = 7"),
];

/// `SELECT COUNT(*) FROM lineitem, <table> WHERE <conditions>`.
pub fn lineitem_join(table: &str, conditions: &str) -> String {
    format!("SELECT COUNT(*) FROM lineitem, {table} WHERE {conditions}")
}
