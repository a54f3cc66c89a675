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

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use esc_core::optimizer::{EscConfig, EstimatorMode};

#[derive(Debug, Parser)]
#[command(
    name = "escdb",
    version,
    about = "In-memory columnar SQL engine with exact selectivity computation during planning"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    None,
    Histogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Run count sub-queries during planning and push selective filters down.
    #[arg(long, value_enum, default_value = "on", global = true)]
    pub esc: Toggle,
    /// Tables with fewer rows never get a count sub-query.
    #[arg(long, value_name = "N", default_value_t = 1000, global = true)]
    pub min_table_size: u64,
    /// Push a filter down when count / rows is at most this value.
    #[arg(long, value_name = "F", default_value_t = 0.2, global = true)]
    pub max_selectivity: f64,
    /// Build-side ranking when ESC is off.
    #[arg(long, value_enum, default_value = "none", global = true)]
    pub estimator: Estimator,
    /// Probe-side worker threads.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub workers: u64,
    /// Print the plan (ESC decisions first) before the result.
    #[arg(long, global = true)]
    pub explain: bool,
    /// Generator seed [default: 7].
    #[arg(long, value_name = "N", global = true)]
    pub seed: Option<u64>,
    /// Generator scale factor [default: 0.01, or the suite's own scale for bench].
    #[arg(long, value_name = "F", global = true)]
    pub scale: Option<f64>,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub output: Output,
}

impl GlobalArgs {
    pub fn esc_config(&self) -> EscConfig {
        EscConfig {
            enabled: self.esc == Toggle::On,
            min_table_size: self.min_table_size,
            max_selectivity: self.max_selectivity,
            estimator_mode: match self.estimator {
                Estimator::None => EstimatorMode::None,
                Estimator::Histogram => EstimatorMode::Histogram,
            },
            ..EscConfig::default()
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(7)
    }

    pub fn scale(&self) -> f64 {
        self.scale.unwrap_or(0.01)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataSet {
    Tpch,
    Ssb,
}

/// Tables for query commands: generated, loaded from CSV, or both.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Generate this benchmark's tables (uses --scale and --seed).
    #[arg(long, value_enum)]
    pub data: Option<DataSet>,
    /// CSV to load, as PATH or NAME=PATH. Repeatable.
    #[arg(long = "load", value_name = "SPEC")]
    pub loads: Vec<String>,
    #[command(flatten)]
    pub csv: CsvArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CsvArgs {
    /// Schema for a loaded table as NAME=col:type,col:type. Without it the
    /// schema is read from a `.schema` file next to the CSV.
    #[arg(long = "schema", value_name = "NAME=SPEC")]
    pub schemas: Vec<String>,
    /// CSV files have no header line.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load CSV files and print their row counts.
    Load {
        /// PATH or NAME=PATH; the table name defaults to the file stem.
        #[arg(required = true, value_name = "SPEC")]
        files: Vec<String>,
        #[command(flatten)]
        csv: CsvArgs,
    },
    /// Run one SQL statement.
    Sql {
        query: String,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Run every statement of a .sql file, stopping at the first error.
    Run {
        file: PathBuf,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Read statements from stdin, one per `;`. Backslash commands: \q,
    /// \tables, \esc on|off, \explain on|off, \load SPEC [NAME=SCHEMA].
    Repl {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Write generated tables as CSV plus `.schema` files.
    Gen {
        #[arg(value_enum)]
        benchmark: DataSet,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out_dir: PathBuf,
        /// Zipf exponent for fact-table part keys [default: 0, uniform].
        #[arg(long, value_name = "S")]
        zipf: Option<f64>,
        /// Draw prices, statuses and containers independently of dates and sizes.
        #[arg(long)]
        uncorrelated: bool,
    },
    /// Run a benchmark suite: overhead-scale, overhead-selectivity,
    /// overhead-attrs, tpch4 or ssb. `--estimator histogram` adds a
    /// histogram arm; `--esc` is ignored since every suite compares arms.
    Bench {
        suite: String,
        /// Report JSON path [default: <suite>.json].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Timed repetitions per arm after one warm-up.
        #[arg(long, value_name = "N", default_value_t = 5)]
        reps: usize,
    },
}
