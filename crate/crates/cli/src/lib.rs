// Copyright 2026 The mapsin Authors
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

//! Command-line driver: `generate`, `load`, `query`, `explain` and `bench`.
//!
//! Results go to stdout as TSV, statistics as JSON. Exit codes are fixed:
//! 0 success, 1 I/O failure, 2 usage or input error, 3 verification failure.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mapsin_core::datagen::{generate, GenConfig, GenError};
use mapsin_core::engine::{format_tsv, run_query, Engine, EngineError, EngineStats};
use mapsin_core::executor::ExecConfig;
use mapsin_core::planner::{plan, PlanMode};
use mapsin_core::rdf::{LoadStats, RdfConfig, RdfError, TableStats, Term, TripleStore};
use mapsin_core::sparql::{parse_query, BasicGraphPattern, MappingMultiset, SparqlError};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Name of the file a persisted store always contains.
const STORE_MARKER: &str = "MANIFEST";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io failure: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<RdfError> for CliError {
    fn from(e: RdfError) -> Self {
        match e {
            RdfError::InvalidTerm(_) => CliError::Usage(e.to_string()),
            other => CliError::Io(other.to_string()),
        }
    }
}

impl From<SparqlError> for CliError {
    fn from(e: SparqlError) -> Self {
        CliError::Usage(format!("query: {e}"))
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::InvalidConfig(m) => CliError::Usage(m),
            GenError::Io(e) => e.into(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Parser)]
#[command(
    name = "mapsin",
    version,
    about = "SPARQL basic graph patterns over a sorted column-family store"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic N-Triples dataset.
    Generate(GenerateArgs),
    /// Load N-Triples into a store directory.
    Load(LoadArgs),
    /// Run a query and print TSV results.
    Query(QueryArgs),
    /// Print the execution plan of a query without running it.
    Explain(ExplainArgs),
    /// Run a directory of queries across engines and report JSON lines.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub entities: usize,
    #[arg(long, default_value_t = 4)]
    pub classes: usize,
    #[arg(long, default_value_t = 1)]
    pub min_attributes: usize,
    #[arg(long, default_value_t = 4)]
    pub max_attributes: usize,
    #[arg(long, default_value_t = 0)]
    pub min_links: usize,
    #[arg(long, default_value_t = 2)]
    pub max_links: usize,
    /// Probability that an entity belongs to the first class.
    #[arg(long, default_value_t = 0.5)]
    pub class_skew: f64,
    /// Distinct literal values per attribute.
    #[arg(long, default_value_t = 16)]
    pub attribute_values: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StoreArg {
    /// Store directory.
    #[arg(long, env = "MAPSIN_STORE")]
    pub store: PathBuf,
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    /// N-Triples file, or `-` for stdin.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub store: StoreArg,
    /// Maximum region size in bytes. Only used when creating a store.
    #[arg(long, env = "MAPSIN_REGION_SIZE", default_value_t = 64 * 1024)]
    pub region_size: u64,
    /// Predicate IRI whose triples get compound keys in the object-keyed
    /// table. Only used when creating a store.
    #[arg(long, env = "MAPSIN_CLASS_PREDICATE", default_value = "rdf:type")]
    pub class_predicate: String,
    /// Keep every class member in a single row per class.
    #[arg(long)]
    pub plain_class_keys: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct QuerySource {
    /// File holding the query, or `-` for stdin.
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Query text given inline.
    #[arg(long)]
    pub sparql: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    #[arg(long, env = "MAPSIN_WORKERS")]
    pub workers: Option<usize>,
    /// Spill a stage's output to temporary files above this many mappings.
    #[arg(long)]
    pub spill_threshold: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub store: StoreArg,
    #[command(flatten)]
    pub source: QuerySource,
    #[arg(long, default_value = "mapsin")]
    pub engine: Engine,
    /// cascade, multiway-basic, multiway or auto.
    #[arg(long, default_value = "auto")]
    pub mode: PlanMode,
    /// Print the plan instead of running the query.
    #[arg(long)]
    pub explain: bool,
    /// Print a JSON statistics line to stderr after the results.
    #[arg(long)]
    pub stats: bool,
    #[command(flatten)]
    pub exec: ExecArgs,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    /// Store whose routing settings apply. Defaults are used without one.
    #[arg(long, env = "MAPSIN_STORE")]
    pub store: Option<PathBuf>,
    #[command(flatten)]
    pub source: QuerySource,
    #[arg(long, default_value = "auto")]
    pub mode: PlanMode,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub store: StoreArg,
    /// Directory of `.rq` files, run in file-name order.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "mapsin,reduce")]
    pub engines: Vec<Engine>,
    /// Plan modes run for the mapsin engine.
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    pub modes: Vec<PlanMode>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    #[command(flatten)]
    pub exec: ExecArgs,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Load(a) => cmd_load(&a, out, err),
        Command::Query(a) => cmd_query(&a, out, err),
        Command::Explain(a) => cmd_explain(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    }
}

fn io_context(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let config = GenConfig {
        seed: a.seed,
        entities: a.entities,
        classes: a.classes,
        attributes: (a.min_attributes, a.max_attributes),
        links: (a.min_links, a.max_links),
        class_skew: a.class_skew,
        attribute_values: a.attribute_values,
    };
    // Validate before touching the file system.
    config.validate()?;
    let file = File::create(&a.out).map_err(|e| io_context(&a.out, e))?;
    let mut w = BufWriter::new(file);
    let summary = generate(&config, &mut w)?;
    w.flush().map_err(|e| io_context(&a.out, e))?;
    serde_json::to_writer(&mut *out, &summary)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct LoadReport<'a> {
    store: String,
    class_predicate: String,
    compound_class_keys: bool,
    max_region_size: u64,
    load: &'a LoadStats,
    tables: Vec<TableStats>,
}

fn store_exists(dir: &Path) -> bool {
    dir.join(STORE_MARKER).is_file()
}

fn open_store(dir: &Path) -> Result<TripleStore> {
    if !store_exists(dir) {
        return Err(CliError::Io(format!("{}: no store found", dir.display())));
    }
    Ok(TripleStore::open(dir)?)
}

pub fn cmd_load(a: &LoadArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let dir = &a.store.store;
    let mut store = if store_exists(dir) {
        TripleStore::open(dir)?
    } else {
        TripleStore::new(RdfConfig {
            class_predicate: Term::new_iri(&a.class_predicate)?,
            compound_class_keys: !a.plain_class_keys,
            max_region_size: a.region_size,
        })?
    };
    let stats = if a.input.as_os_str() == "-" {
        store.load_ntriples(io::stdin().lock())?
    } else {
        let file = File::open(&a.input).map_err(|e| io_context(&a.input, e))?;
        store.load_ntriples(BufReader::new(file))?
    };
    for p in &stats.parse_errors {
        writeln!(err, "warning: line {}: {}", p.line, p.message)?;
    }
    fs::create_dir_all(dir).map_err(|e| io_context(dir, e))?;
    store.persist(dir)?;
    let config = store.config();
    let report = LoadReport {
        store: dir.display().to_string(),
        class_predicate: config.class_predicate.lexical().to_string(),
        compound_class_keys: config.compound_class_keys,
        max_region_size: config.max_region_size,
        load: &stats,
        tables: store.table_stats()?,
    };
    serde_json::to_writer(&mut *out, &report)?;
    writeln!(out)?;
    Ok(())
}

fn read_query(source: &QuerySource) -> Result<BasicGraphPattern> {
    let text = match (&source.query, &source.sparql) {
        (_, Some(text)) => text.clone(),
        (Some(path), None) if path.as_os_str() == "-" => io::read_to_string(io::stdin())?,
        (Some(path), None) => fs::read_to_string(path).map_err(|e| io_context(path, e))?,
        (None, None) => return Err(CliError::Usage("a query is required".into())),
    };
    Ok(parse_query(&text)?)
}

fn exec_config(a: &ExecArgs) -> Result<ExecConfig> {
    let mut config = ExecConfig::default();
    if let Some(w) = a.workers {
        if w == 0 {
            return Err(CliError::Usage("workers must be positive".into()));
        }
        config.workers = w;
    }
    config.spill_threshold = a.spill_threshold;
    Ok(config)
}

#[derive(Debug, Serialize)]
struct QueryReport<'a> {
    engine: Engine,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<PlanMode>,
    results: usize,
    stats: &'a EngineStats,
}

pub fn cmd_query(a: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let bgp = read_query(&a.source)?;
    let config = exec_config(&a.exec)?;
    let store = open_store(&a.store.store)?;
    if a.explain {
        write!(
            out,
            "{}",
            plan(&bgp, a.mode, store.router()).explain(store.router())
        )?;
        return Ok(());
    }
    let outcome = run_query(&store, &bgp, a.engine, a.mode, config)?;
    write!(out, "{}", format_tsv(&bgp, &outcome.results))?;
    if a.stats {
        let report = QueryReport {
            engine: a.engine,
            mode: (a.engine == Engine::Mapsin).then_some(a.mode),
            results: outcome.results.len(),
            stats: &outcome.stats,
        };
        serde_json::to_writer(&mut *err, &report)?;
        writeln!(err)?;
    }
    Ok(())
}

pub fn cmd_explain(a: &ExplainArgs, out: &mut dyn Write) -> Result<()> {
    let bgp = read_query(&a.source)?;
    let store = match &a.store {
        Some(dir) => open_store(dir)?,
        None => TripleStore::new(RdfConfig::default())?,
    };
    write!(
        out,
        "{}",
        plan(&bgp, a.mode, store.router()).explain(store.router())
    )?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct BenchLine {
    pub round: usize,
    pub query: String,
    pub engine: Engine,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<PlanMode>,
    pub results: usize,
    pub stats: EngineStats,
    pub elapsed_ms: f64,
}

/// One engine's answer to one query, before verification.
pub struct BenchRun {
    pub label: String,
    pub line: BenchLine,
    pub results: MappingMultiset,
}

/// Checks that every run of a query returned the same number of results
/// and the same multiset.
pub fn verify_runs(query: &str, runs: &[BenchRun]) -> Result<()> {
    let Some(first) = runs.first() else {
        return Ok(());
    };
    for r in &runs[1..] {
        if r.results.len() != first.results.len() {
            return Err(CliError::Verification(format!(
                "{query}: {} returned {} results, {} returned {}",
                first.label,
                first.results.len(),
                r.label,
                r.results.len()
            )));
        }
        if !r.results.multiset_eq(&first.results) {
            return Err(CliError::Verification(format!(
                "{query}: {} and {} returned different results of equal size {}",
                first.label,
                r.label,
                r.results.len()
            )));
        }
    }
    Ok(())
}

fn query_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_context(dir, e))?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "rq") && p.is_file());
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("{}: no .rq files", dir.display())));
    }
    Ok(files)
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if a.repeat == 0 {
        return Err(CliError::Usage("repeat must be positive".into()));
    }
    if a.engines.is_empty() || a.modes.is_empty() {
        return Err(CliError::Usage(
            "at least one engine and one mode are required".into(),
        ));
    }
    let config = exec_config(&a.exec)?;
    // Every query must parse before anything runs.
    let mut queries = Vec::new();
    for path in query_files(&a.queries)? {
        let text = fs::read_to_string(&path).map_err(|e| io_context(&path, e))?;
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let bgp = parse_query(&text).map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
        queries.push((name, bgp));
    }
    let store = open_store(&a.store.store)?;

    let mut variants: Vec<(Engine, Option<PlanMode>)> = Vec::new();
    for &engine in &a.engines {
        if engine == Engine::Mapsin {
            variants.extend(a.modes.iter().map(|&m| (engine, Some(m))));
        } else {
            variants.push((engine, None));
        }
    }

    for round in 1..=a.repeat {
        for (name, bgp) in &queries {
            let mut runs = Vec::with_capacity(variants.len());
            for &(engine, mode) in &variants {
                let started = Instant::now();
                let outcome =
                    run_query(&store, bgp, engine, mode.unwrap_or(PlanMode::Auto), config)?;
                let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
                let label = match mode {
                    Some(m) => format!("{engine}/{m}"),
                    None => engine.to_string(),
                };
                runs.push(BenchRun {
                    label,
                    line: BenchLine {
                        round,
                        query: name.clone(),
                        engine,
                        mode,
                        results: outcome.results.len(),
                        stats: outcome.stats,
                        elapsed_ms,
                    },
                    results: outcome.results,
                });
            }
            if let Err(e) = verify_runs(name, &runs) {
                for r in &runs {
                    writeln!(
                        err,
                        "mismatch: {} {} -> {} results",
                        name,
                        r.label,
                        r.results.len()
                    )?;
                }
                return Err(e);
            }
            for r in &runs {
                serde_json::to_writer(&mut *out, &r.line)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
