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

//! `escdb`: load tables, run SQL with ESC on or off, explain plans and run
//! the benchmark suites.
//!
//! Exit codes: 0 on success, 1 on runtime errors, 2 on usage errors.

mod args;
mod data;
mod render;
mod script;

use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use esc_bench::suites::{run_suite, Suite, SuiteOptions};
use esc_core::optimizer::EscConfig;
use esc_core::{Engine, EngineError};

use args::{Cli, Command, CsvArgs, DataArgs, DataSet, GlobalArgs, Output};
use script::Splitter;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let global = cli.global;
    let config = global.esc_config();
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.command {
        Command::Load { files, csv } => cmd_load(&files, &csv),
        Command::Sql { query, data } => {
            let mut engine = engine(&global, config, &data)?;
            execute(&mut engine, &query, &global)
        }
        Command::Run { file, data } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", file.display())))?;
            let mut engine = engine(&global, config, &data)?;
            for (i, stmt) in script::split_statements(&text).iter().enumerate() {
                execute(&mut engine, stmt, &global).map_err(|e| {
                    CliError::Runtime(format!("statement {}: {}", i + 1, e.message()))
                })?;
            }
            Ok(())
        }
        Command::Repl { data } => {
            let engine = engine(&global, config, &data)?;
            repl(engine, &global, &data.csv)
        }
        Command::Gen {
            benchmark,
            out_dir,
            zipf,
            uncorrelated,
        } => cmd_gen(&global, benchmark, out_dir, zipf, uncorrelated),
        Command::Bench { suite, out, reps } => cmd_bench(&global, config, &suite, out, reps),
    }
}

fn engine(global: &GlobalArgs, config: EscConfig, data: &DataArgs) -> Result<Engine, CliError> {
    let catalog = data::build_catalog(data, global.scale(), global.seed())?;
    Ok(Engine::new(catalog)
        .with_config(config)
        .with_workers(global.workers as usize))
}

fn execute(engine: &mut Engine, sql: &str, global: &GlobalArgs) -> Result<(), CliError> {
    let result = engine.query(sql)?;
    let mut stdout = io::stdout().lock();
    match global.output {
        Output::Text => {
            stdout.write_all(render::result_text(&result, global.explain).as_bytes())?
        }
        Output::Json => writeln!(stdout, "{}", render::result_json(&result, global.explain))?,
    }
    Ok(())
}

fn cmd_load(files: &[String], csv: &CsvArgs) -> Result<(), CliError> {
    let mut catalog = esc_core::catalog::Catalog::new();
    for spec in files {
        let (name, rows) = data::load_csv(&mut catalog, spec, csv)?;
        println!("{name}: {rows} rows");
    }
    Ok(())
}

fn cmd_gen(
    global: &GlobalArgs,
    set: DataSet,
    out_dir: PathBuf,
    zipf: Option<f64>,
    uncorrelated: bool,
) -> Result<(), CliError> {
    let mut spec = data::gen_spec(set, global.scale(), global.seed());
    if let Some(z) = zipf {
        spec.zipf = z;
    }
    spec.correlated = !uncorrelated;
    let tables = data::generate_tables(&spec)?;
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", out_dir.display())))?;
    for table in &tables {
        let path = out_dir.join(format!("{}.csv", table.name()));
        fs::write(&path, table.to_csv())
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let schema = path.with_extension("schema");
        fs::write(&schema, data::schema_line(table) + "\n")
            .map_err(|e| CliError::Runtime(format!("{}: {e}", schema.display())))?;
        println!(
            "{}: {} rows -> {}",
            table.name(),
            table.row_count(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_bench(
    global: &GlobalArgs,
    config: EscConfig,
    suite: &str,
    out: Option<PathBuf>,
    reps: usize,
) -> Result<(), CliError> {
    let suite: Suite = suite.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        CliError::Usage(format!(
            "unknown suite {suite:?}; valid suites: {}",
            names.join(", ")
        ))
    })?;
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let opts = SuiteOptions {
        scale: global.scale,
        seed: global.seed(),
        reps,
        workers: global.workers as usize,
        histogram_arm: config.estimator_mode == esc_core::optimizer::EstimatorMode::Histogram,
        esc: EscConfig {
            enabled: true,
            ..config
        },
    };
    let report = run_suite(suite, &opts).map_err(|e| CliError::Runtime(e.to_string()))?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}.json", suite.name())));
    let json = report.to_json();
    fs::write(&path, format!("{json}\n"))
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    match global.output {
        Output::Text => {
            print!("{}", report.text_table());
            println!("report written to {}", path.display());
        }
        Output::Json => println!("{json}"),
    }
    Ok(())
}

fn repl(mut engine: Engine, global: &GlobalArgs, csv: &CsvArgs) -> Result<(), CliError> {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut explain = global.explain;
    let mut splitter = Splitter::default();
    let mut failures = 0usize;
    let prompt = |continuing: bool| {
        if interactive {
            eprint!("{}", if continuing { "   ...> " } else { "escdb> " });
            let _ = io::stderr().flush();
        }
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let line = line?;
        let trimmed = line.trim();
        if splitter.is_empty() && trimmed.starts_with('\\') {
            match meta(trimmed, &mut engine, &mut explain, csv) {
                Ok(true) => return finish(failures),
                Ok(false) => {}
                Err(e) => {
                    failures += 1;
                    eprintln!("error: {}", e.message());
                }
            }
            prompt(false);
            continue;
        }
        for stmt in splitter.push(&format!("{line}\n")) {
            let g = GlobalArgs {
                explain,
                ..global.clone()
            };
            if let Err(e) = execute(&mut engine, &stmt, &g) {
                failures += 1;
                eprintln!("error: {}", e.message());
            }
        }
        prompt(!splitter.is_empty());
    }
    if let Some(stmt) = splitter.finish() {
        let g = GlobalArgs {
            explain,
            ..global.clone()
        };
        if let Err(e) = execute(&mut engine, &stmt, &g) {
            failures += 1;
            eprintln!("error: {}", e.message());
        }
    }
    finish(failures)
}

fn finish(failures: usize) -> Result<(), CliError> {
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("{failures} statement(s) failed")))
    }
}

/// Handles a backslash command; `Ok(true)` means quit.
fn meta(
    line: &str,
    engine: &mut Engine,
    explain: &mut bool,
    csv: &CsvArgs,
) -> Result<bool, CliError> {
    let mut words = line.split_whitespace();
    let cmd = words.next().unwrap_or_default();
    let arg = words.next();
    let on_off = |arg: Option<&str>| match arg {
        Some("on") => Ok(true),
        Some("off") => Ok(false),
        _ => Err(CliError::Usage(format!("{cmd} expects on or off"))),
    };
    match cmd {
        "\\q" | "\\quit" => return Ok(true),
        "\\tables" => {
            for name in engine.catalog.table_names() {
                let rows = engine.catalog.table(&name).map_or(0, |t| t.row_count());
                println!("{name}: {rows} rows");
            }
        }
        "\\esc" => engine.config.enabled = on_off(arg)?,
        "\\explain" => *explain = on_off(arg)?,
        "\\load" => {
            let spec =
                arg.ok_or_else(|| CliError::Usage("\\load expects PATH or NAME=PATH".into()))?;
            let mut csv = csv.clone();
            csv.schemas.extend(words.map(str::to_string));
            let (name, rows) = data::load_csv(&mut engine.catalog, spec, &csv)?;
            println!("{name}: {rows} rows");
        }
        other => return Err(CliError::Usage(format!("unknown command {other}"))),
    }
    Ok(false)
}
