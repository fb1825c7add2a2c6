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

//! One entry point for running a query with any engine, plus result
//! formatting shared by the command line and the Python bindings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::baseline::{execute_reduce_side, oracle_evaluate, ShuffleStats};
use crate::executor::{ExecConfig, ExecError, ExecStats, Executor};
use crate::planner::{plan, PlanMode};
use crate::rdf::{RdfError, TripleStore};
use crate::sparql::{BasicGraphPattern, MappingMultiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Mapsin,
    Reduce,
    Oracle,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Mapsin => "mapsin",
            Engine::Reduce => "reduce",
            Engine::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown engine `{0}` (expected mapsin, reduce or oracle)")]
pub struct UnknownEngine(pub String);

impl FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mapsin" => Ok(Engine::Mapsin),
            "reduce" => Ok(Engine::Reduce),
            "oracle" => Ok(Engine::Oracle),
            other => Err(UnknownEngine(other.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Store(#[from] RdfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum EngineStats {
    Mapsin(ExecStats),
    Reduce(ShuffleStats),
    Oracle {},
}

#[derive(Debug, Clone)]
pub struct QueryOutcome {
    pub results: MappingMultiset,
    pub stats: EngineStats,
}

/// Runs `bgp` on `store`. `mode` only matters for [`Engine::Mapsin`].
pub fn run_query(
    store: &TripleStore,
    bgp: &BasicGraphPattern,
    engine: Engine,
    mode: PlanMode,
    config: ExecConfig,
) -> Result<QueryOutcome, EngineError> {
    Ok(match engine {
        Engine::Mapsin => {
            let p = plan(bgp, mode, store.router());
            let (results, stats) = Executor::new(store, config).execute(&p)?;
            QueryOutcome {
                results,
                stats: EngineStats::Mapsin(stats),
            }
        }
        Engine::Reduce => {
            let (results, stats) = execute_reduce_side(store, bgp)?;
            QueryOutcome {
                results,
                stats: EngineStats::Reduce(stats),
            }
        }
        Engine::Oracle => QueryOutcome {
            results: oracle_evaluate(bgp, &store.triples()?),
            stats: EngineStats::Oracle {},
        },
    })
}

/// Results as TSV: a header of projected variables, then one row per
/// mapping in sorted order. Unbound cells are empty.
pub fn format_tsv(bgp: &BasicGraphPattern, results: &MappingMultiset) -> String {
    let vars = bgp.projected_variables();
    let header: Vec<String> = vars.iter().map(ToString::to_string).collect();
    let mut rows: Vec<String> = results
        .iter()
        .map(|m| {
            vars.iter()
                .map(|v| m.get(v).map(ToString::to_string).unwrap_or_default())
                .collect::<Vec<_>>()
                .join("\t")
        })
        .collect();
    rows.sort();
    let mut out = header.join("\t");
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{RdfConfig, Term, Triple};
    use crate::sparql::parse_query;

    #[test]
    fn engines_agree_and_tsv_is_sorted() {
        let mut store = TripleStore::new(RdfConfig::default()).unwrap();
        for (s, o) in [("b", "2"), ("a", "1"), ("a", "3")] {
            store
                .store_triple(&Triple::new(Term::iri(s), Term::iri("p"), Term::literal(o)).unwrap())
                .unwrap();
        }
        let q = parse_query("SELECT ?x ?v WHERE { ?x p ?v }").unwrap();
        let mut outputs = Vec::new();
        for engine in [Engine::Mapsin, Engine::Reduce, Engine::Oracle] {
            let out = run_query(&store, &q, engine, PlanMode::Auto, ExecConfig::default()).unwrap();
            outputs.push(format_tsv(&q, &out.results));
        }
        assert_eq!(outputs[0], "?x\t?v\n<a>\t\"1\"\n<a>\t\"3\"\n<b>\t\"2\"\n");
        assert!(outputs.iter().all(|o| *o == outputs[0]));
        assert_eq!("reduce".parse::<Engine>().unwrap(), Engine::Reduce);
        assert!("pig".parse::<Engine>().is_err());
    }
}
