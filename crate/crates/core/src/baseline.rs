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

//! Reference engines: a metered reduce-side (repartition) join and an
//! exhaustive nested-loop evaluator.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::planner::{connect, reorder};
use crate::rdf::{RdfError, Term, Triple, TripleStore};
use crate::sparql::{
    BasicGraphPattern, MappingMultiset, PatternTerm, SolutionMapping, TriplePattern, Variable,
};

/// Data movement of one or more repartition joins.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ShuffleStats {
    pub records_shuffled: u64,
    pub bytes_shuffled: u64,
    pub reduce_groups: u64,
}

impl Add for ShuffleStats {
    type Output = ShuffleStats;

    fn add(self, rhs: ShuffleStats) -> ShuffleStats {
        ShuffleStats {
            records_shuffled: self.records_shuffled + rhs.records_shuffled,
            bytes_shuffled: self.bytes_shuffled + rhs.bytes_shuffled,
            reduce_groups: self.reduce_groups + rhs.reduce_groups,
        }
    }
}

impl AddAssign for ShuffleStats {
    fn add_assign(&mut self, rhs: ShuffleStats) {
        *self = *self + rhs;
    }
}

/// Bytes a mapping occupies on the wire: variable names plus encoded terms.
fn record_bytes(m: &SolutionMapping) -> u64 {
    m.iter()
        .map(|(v, t)| (v.name().len() + t.encode().len()) as u64)
        .sum()
}

/// Repartition join: both inputs are keyed on `join_vars` and shuffled in
/// full; each reduce group merges its compatible left/right pairs. With no
/// join variables everything lands in one group (cartesian product).
pub fn reduce_side_join(
    left: &MappingMultiset,
    right: &MappingMultiset,
    join_vars: &[Variable],
) -> (MappingMultiset, ShuffleStats) {
    type Key = Vec<Option<Term>>;
    let key =
        |m: &SolutionMapping| -> Key { join_vars.iter().map(|v| m.get(v).cloned()).collect() };
    let mut groups: BTreeMap<Key, (Vec<&SolutionMapping>, Vec<&SolutionMapping>)> = BTreeMap::new();
    let mut stats = ShuffleStats::default();
    for m in left {
        stats.records_shuffled += 1;
        stats.bytes_shuffled += record_bytes(m);
        groups.entry(key(m)).or_default().0.push(m);
    }
    for m in right {
        stats.records_shuffled += 1;
        stats.bytes_shuffled += record_bytes(m);
        groups.entry(key(m)).or_default().1.push(m);
    }
    stats.reduce_groups = groups.len() as u64;
    let mut out = MappingMultiset::new();
    for (ls, rs) in groups.values() {
        for l in ls {
            for r in rs {
                if let Ok(m) = l.merge(r) {
                    out.push(m);
                }
            }
        }
    }
    (out, stats)
}

/// Evaluates `bgp` as a left-deep chain of repartition joins in planner
/// order, fetching each pattern's mappings from the store.
pub fn execute_reduce_side(
    store: &TripleStore,
    bgp: &BasicGraphPattern,
) -> Result<(MappingMultiset, ShuffleStats), RdfError> {
    let ordered = connect(reorder(bgp));
    let mut acc = store.lookup(&ordered[0])?;
    let mut bound: BTreeSet<Variable> = ordered[0].variables().into_iter().collect();
    let mut total = ShuffleStats::default();
    for p in &ordered[1..] {
        let right = store.lookup(p)?;
        let join_vars: Vec<Variable> = p
            .variables()
            .into_iter()
            .filter(|v| bound.contains(v))
            .collect();
        let (joined, stats) = reduce_side_join(&acc, &right, &join_vars);
        total += stats;
        acc = joined;
        bound.extend(p.variables());
    }
    Ok((acc.iter().map(|m| bgp.project(m)).collect(), total))
}

/// Bindings produced by matching one pattern slot against one term.
fn bind(slot: &PatternTerm, term: &Term, into: &mut BTreeMap<Variable, Term>) -> bool {
    match slot {
        PatternTerm::Term(t) => t == term,
        PatternTerm::Var(v) => match into.get(v) {
            Some(existing) => existing == term,
            None => {
                into.insert(v.clone(), term.clone());
                true
            }
        },
    }
}

fn match_pattern(p: &TriplePattern, t: &Triple) -> Option<BTreeMap<Variable, Term>> {
    let mut m = BTreeMap::new();
    (bind(&p.subject, &t.subject, &mut m)
        && bind(&p.predicate, &t.predicate, &mut m)
        && bind(&p.object, &t.object, &mut m))
    .then_some(m)
}

/// Ground truth by exhaustive nested loops over `triples`, in query order,
/// with no indexes. Self-contained: it shares no matching or merging code
/// with the engines it checks.
pub fn oracle_evaluate(bgp: &BasicGraphPattern, triples: &[Triple]) -> MappingMultiset {
    let mut acc: Vec<BTreeMap<Variable, Term>> = vec![BTreeMap::new()];
    for p in bgp.patterns() {
        let mut next = Vec::new();
        for partial in &acc {
            for t in triples {
                let Some(found) = match_pattern(p, t) else {
                    continue;
                };
                let agrees = found
                    .iter()
                    .all(|(v, term)| partial.get(v).is_none_or(|x| x == term));
                if agrees {
                    let mut merged = partial.clone();
                    merged.extend(found);
                    next.push(merged);
                }
            }
        }
        acc = next;
    }
    let vars = bgp.projected_variables();
    acc.into_iter()
        .map(|full| {
            let pairs = vars.iter().filter_map(|v| {
                full.get(v)
                    .or_else(|| bgp.fixed().iter().find(|(f, _)| f == v).map(|(_, t)| t))
                    .map(|t| (v.clone(), t.clone()))
            });
            SolutionMapping::from_pairs(pairs).expect("one binding per variable")
        })
        .collect()
}
