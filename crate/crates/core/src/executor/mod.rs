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

//! Runs execution plans as a chain of map-only stages over a triple store.
//!
//! The first stage reads one partition per region with a scan. Each later
//! stage maps every input mapping independently: it substitutes the mapping
//! into the next pattern(s), fetches the compatible mappings from the store
//! and emits the merged results. Partitions of a stage are spread over
//! worker threads; a stage's output partitions become the next stage's input
//! partitions through a [`Handoff`] buffer.

mod handoff;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::kvstore::MeterSnapshot;
use crate::planner::{ExecutionPlan, Stage};
use crate::rdf::{RdfError, RowSide, TripleStore};
use crate::sparql::{MappingMultiset, SolutionMapping, SparqlError, TriplePattern, Variable};

use handoff::Handoff;

#[derive(Debug, thiserror::Error)]
pub enum ExecError {
    #[error(transparent)]
    Store(#[from] RdfError),
    #[error(transparent)]
    Sparql(#[from] SparqlError),
    #[error("stage hand-off failed: {0}")]
    Handoff(#[from] std::io::Error),
    #[error("join variable {0} is not bound in the input mapping")]
    UnboundJoinVariable(String),
    #[error("worker thread panicked")]
    WorkerPanicked,
}

pub type Result<T, E = ExecError> = std::result::Result<T, E>;

/// Counters for one execution. Store-side counters are deltas of the store
/// meter taken around the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExecStats {
    pub stages_run: u64,
    pub map_invocations: u64,
    pub get_requests: u64,
    pub rows_scanned: u64,
    pub cells_fetched: u64,
    pub bytes_fetched: u64,
    /// Output size of each stage, in stage order.
    pub intermediate_mappings: Vec<u64>,
    /// Join lookups whose substituted pattern had to be answered by a scan.
    pub scan_lookups: u64,
    pub cartesian_stages: u64,
    pub spilled_partitions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecConfig {
    pub workers: usize,
    /// Spill a stage's output to temp files when it exceeds this many
    /// mappings. `None` never spills.
    pub spill_threshold: Option<usize>,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            spill_threshold: None,
        }
    }
}

/// Input of one map task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagePartition {
    pub partition_id: usize,
    pub mappings: MappingMultiset,
}

pub struct Executor<'a> {
    store: &'a TripleStore,
    config: ExecConfig,
    map_invocations: AtomicU64,
    scan_lookups: AtomicU64,
}

impl<'a> Executor<'a> {
    pub fn new(store: &'a TripleStore, config: ExecConfig) -> Executor<'a> {
        Executor {
            store,
            config,
            map_invocations: AtomicU64::new(0),
            scan_lookups: AtomicU64::new(0),
        }
    }

    fn lookup(&self, p: &TriplePattern) -> Result<MappingMultiset> {
        if !self.store.resolve_pattern(p).is_get() {
            self.scan_lookups.fetch_add(1, Ordering::Relaxed);
        }
        Ok(self.store.lookup(p)?)
    }

    /// Two-way join of `mu` with `p`. Without a shared variable the raw
    /// pattern is looked up and every result is merged (cartesian product).
    pub fn map_mapsin(&self, mu: &SolutionMapping, p: &TriplePattern) -> Result<MappingMultiset> {
        self.map_invocations.fetch_add(1, Ordering::Relaxed);
        let shares = p.variables().iter().any(|v| mu.contains(v));
        let target = if shares { p.substitute(mu) } else { p.clone() };
        let results = self.lookup(&target)?;
        Ok(results.iter().filter_map(|r| mu.merge(r).ok()).collect())
    }

    /// Multiway join issuing one lookup per pattern, stopping at the first
    /// pattern without results.
    pub fn map_multiway(
        &self,
        mu: &SolutionMapping,
        patterns: &[TriplePattern],
    ) -> Result<MappingMultiset> {
        self.map_invocations.fetch_add(1, Ordering::Relaxed);
        let mut acc = vec![mu.clone()];
        for p in patterns {
            let results = self.lookup(&p.substitute(mu))?;
            if results.is_empty() {
                return Ok(MappingMultiset::new());
            }
            // Patterns of the group may share variables besides the join
            // variable, so merges are checked.
            let mut next = Vec::with_capacity(acc.len() * results.len());
            for left in &acc {
                next.extend(results.iter().filter_map(|r| left.merge(r).ok()));
            }
            acc = next;
            if acc.is_empty() {
                return Ok(MappingMultiset::new());
            }
        }
        Ok(acc.into())
    }

    /// Multiway join reading the shared row once.
    pub fn map_multiway_optimized(
        &self,
        mu: &SolutionMapping,
        patterns: &[TriplePattern],
        join_var: &Variable,
        side: RowSide,
    ) -> Result<MappingMultiset> {
        self.map_invocations.fetch_add(1, Ordering::Relaxed);
        let row = mu
            .get(join_var)
            .ok_or_else(|| ExecError::UnboundJoinVariable(join_var.to_string()))?;
        let substituted: Vec<_> = patterns.iter().map(|p| p.substitute(mu)).collect();
        let results = self.store.multi_column_lookup(side, row, &substituted)?;
        Ok(results.iter().filter_map(|r| mu.merge(r).ok()).collect())
    }

    /// First stage: one partition per region of the table `p` routes to.
    pub fn stage_initial_scan(&self, p: &TriplePattern) -> Result<Vec<StagePartition>> {
        Ok(self
            .store
            .scan_partitions(p)?
            .into_iter()
            .enumerate()
            .map(|(partition_id, mappings)| StagePartition {
                partition_id,
                mappings,
            })
            .collect())
    }

    fn run_partition(&self, stage: &Stage, input: &MappingMultiset) -> Result<MappingMultiset> {
        let mut out = MappingMultiset::new();
        for mu in input {
            let produced = match stage {
                Stage::MapsinJoin { pattern, .. } => self.map_mapsin(mu, pattern)?,
                Stage::MultiwayJoin {
                    patterns,
                    join_var,
                    optimized: Some(side),
                } => self.map_multiway_optimized(mu, patterns, join_var, *side)?,
                Stage::MultiwayJoin { patterns, .. } => self.map_multiway(mu, patterns)?,
                Stage::SinglePattern(_) | Stage::InitialScan(_) => {
                    unreachable!("scan stages have no map input")
                }
            };
            out.extend(produced);
        }
        Ok(out)
    }

    /// Runs one join stage over all partitions. Workers take partitions
    /// round-robin; output keeps partition order.
    fn run_stage(
        &self,
        stage: &Stage,
        inputs: Vec<MappingMultiset>,
    ) -> Result<Vec<MappingMultiset>> {
        let workers = self.config.workers.max(1).min(inputs.len().max(1));
        if workers == 1 {
            return inputs
                .iter()
                .map(|p| self.run_partition(stage, p))
                .collect();
        }
        let mut slots: Vec<Option<Result<MappingMultiset>>> =
            (0..inputs.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let inputs = &inputs;
                    scope.spawn(move || {
                        (w..inputs.len())
                            .step_by(workers)
                            .map(|i| (i, self.run_partition(stage, &inputs[i])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                match h.join() {
                    Ok(results) => {
                        for (i, r) in results {
                            slots[i] = Some(r);
                        }
                    }
                    Err(_) => return Err(ExecError::WorkerPanicked),
                }
            }
            Ok(())
        })?;
        slots
            .into_iter()
            .map(|s| s.unwrap_or(Err(ExecError::WorkerPanicked)))
            .collect()
    }

    /// Runs every stage and projects the final mappings onto the query's
    /// SELECT variables.
    pub fn execute(&self, plan: &ExecutionPlan) -> Result<(MappingMultiset, ExecStats)> {
        let meter = self.store.kv().meter();
        let before: MeterSnapshot = meter.snapshot();
        self.map_invocations.store(0, Ordering::Relaxed);
        self.scan_lookups.store(0, Ordering::Relaxed);
        let mut stats = ExecStats::default();

        let mut stages = plan.stages.iter();
        let first = match stages.next() {
            Some(Stage::SinglePattern(p)) | Some(Stage::InitialScan(p)) => p,
            _ => unreachable!("plans start with a scan stage"),
        };
        let initial: Vec<MappingMultiset> = self
            .stage_initial_scan(first)?
            .into_iter()
            .map(|p| p.mappings)
            .collect();
        stats.stages_run = 1;
        stats
            .intermediate_mappings
            .push(initial.iter().map(|p| p.len() as u64).sum());
        let mut handoff = Handoff::new(initial, self.config.spill_threshold)?;

        for stage in stages {
            stats.spilled_partitions += handoff.spilled() as u64;
            let inputs = handoff.into_partitions()?;
            let outputs = self.run_stage(stage, inputs)?;
            stats.stages_run += 1;
            if matches!(
                stage,
                Stage::MapsinJoin {
                    cartesian: true,
                    ..
                }
            ) {
                stats.cartesian_stages += 1;
            }
            stats
                .intermediate_mappings
                .push(outputs.iter().map(|p| p.len() as u64).sum());
            handoff = Handoff::new(outputs, self.config.spill_threshold)?;
        }
        stats.spilled_partitions += handoff.spilled() as u64;
        let results: MappingMultiset = handoff
            .into_partitions()?
            .into_iter()
            .flatten()
            .map(|m| plan.bgp.project(&m))
            .collect();

        let delta = meter.snapshot() - before;
        stats.map_invocations = self.map_invocations.load(Ordering::Relaxed);
        stats.scan_lookups = self.scan_lookups.load(Ordering::Relaxed);
        stats.get_requests = delta.gets;
        stats.rows_scanned = delta.rows_scanned;
        stats.cells_fetched = delta.cells_returned;
        stats.bytes_fetched = delta.bytes_returned;
        Ok((results, stats))
    }
}
