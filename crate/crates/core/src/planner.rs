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

//! Turns a basic graph pattern into a staged plan.
//!
//! Patterns are ordered by variable counting (fewer variables first, then
//! bound subject before bound object before bound predicate), pulled into a
//! connected order, and cut into runs that share a join variable. The first
//! pattern is answered by a scan; every later pattern is joined in a map-only
//! stage, either one at a time or as a multiway group.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::rdf::{Router, RowSide, Term};
use crate::sparql::{BasicGraphPattern, SolutionMapping, TriplePattern, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanMode {
    /// One two-way join stage per pattern.
    Cascade,
    /// Multiway stages issuing one GET per pattern.
    MultiwayBasic,
    /// Multiway stages, using a single multi-column GET where the group
    /// shares one row.
    Multiway,
    /// Same plan as [`PlanMode::Multiway`].
    Auto,
}

impl PlanMode {
    pub fn name(self) -> &'static str {
        match self {
            PlanMode::Cascade => "cascade",
            PlanMode::MultiwayBasic => "multiway-basic",
            PlanMode::Multiway => "multiway",
            PlanMode::Auto => "auto",
        }
    }

    fn uses_multiway(self) -> bool {
        self != PlanMode::Cascade
    }

    fn optimizes(self) -> bool {
        matches!(self, PlanMode::Multiway | PlanMode::Auto)
    }
}

impl fmt::Display for PlanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown plan mode `{0}` (expected cascade, multiway, multiway-basic or auto)")]
pub struct UnknownMode(pub String);

impl FromStr for PlanMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cascade" => Ok(PlanMode::Cascade),
            "multiway-basic" => Ok(PlanMode::MultiwayBasic),
            "multiway" => Ok(PlanMode::Multiway),
            "auto" => Ok(PlanMode::Auto),
            other => Err(UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    /// The whole query is one pattern, answered by a scan alone.
    SinglePattern(TriplePattern),
    /// Partitioned scan producing the first mappings.
    InitialScan(TriplePattern),
    /// Two-way join of each input mapping with one pattern. `cartesian` is
    /// set when the pattern shares no variable with earlier stages.
    MapsinJoin {
        pattern: TriplePattern,
        cartesian: bool,
    },
    /// Join of each input mapping with several patterns sharing `join_var`.
    /// `optimized` names the side of the shared row read by one GET.
    MultiwayJoin {
        patterns: Vec<TriplePattern>,
        join_var: Variable,
        optimized: Option<RowSide>,
    },
}

impl Stage {
    pub fn patterns(&self) -> Vec<&TriplePattern> {
        match self {
            Stage::SinglePattern(p)
            | Stage::InitialScan(p)
            | Stage::MapsinJoin { pattern: p, .. } => vec![p],
            Stage::MultiwayJoin { patterns, .. } => patterns.iter().collect(),
        }
    }
}

/// A run of consecutive patterns sharing `join_var`. Groups of one pattern
/// have no join variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarGroup {
    pub patterns: Vec<TriplePattern>,
    pub join_var: Option<Variable>,
    /// Set when `join_var` sits on the same side of every member and each
    /// member has a constant, non-class predicate.
    pub optimized: Option<RowSide>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionPlan {
    pub bgp: BasicGraphPattern,
    pub mode: PlanMode,
    pub stages: Vec<Stage>,
    pub warnings: Vec<String>,
}

fn position_class(p: &TriplePattern) -> u8 {
    if p.subject.is_bound() {
        0
    } else if p.object.is_bound() {
        1
    } else if p.predicate.is_bound() {
        2
    } else {
        3
    }
}

/// Variable-counting order: fewer variable positions first, then subject
/// bound, object bound, predicate bound only, nothing bound. Stable.
pub fn reorder(bgp: &BasicGraphPattern) -> Vec<TriplePattern> {
    let mut patterns = bgp.patterns().to_vec();
    patterns.sort_by_key(|p| (p.variable_positions(), position_class(p)));
    patterns
}

/// Moves each pattern as early as it can go while still sharing a variable
/// with an earlier one. Among candidates the variable-counting order is kept.
pub fn connect(ordered: Vec<TriplePattern>) -> Vec<TriplePattern> {
    let mut remaining = ordered;
    let mut out = Vec::with_capacity(remaining.len());
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    while !remaining.is_empty() {
        let idx = if out.is_empty() {
            0
        } else {
            remaining
                .iter()
                .position(|p| p.variables().iter().any(|v| bound.contains(v)))
                .unwrap_or(0)
        };
        let p = remaining.remove(idx);
        bound.extend(p.variables());
        out.push(p);
    }
    out
}

fn star_side(
    patterns: &[TriplePattern],
    var: &Variable,
    bound_before: &BTreeSet<Variable>,
    router: &Router,
) -> Option<RowSide> {
    if patterns.is_empty() {
        return None;
    }
    let constant_predicate = |p: &TriplePattern| p.predicate.as_term().is_some();
    let all_subject = patterns
        .iter()
        .all(|p| p.subject.as_var() == Some(var) && constant_predicate(p));
    if all_subject {
        return Some(RowSide::Subject);
    }
    // On the object side every member must stay a plain T_ops row read: the
    // subject must remain unbound and the predicate must not be the class
    // predicate.
    let all_object = patterns.iter().all(|p| {
        p.object.as_var() == Some(var)
            && p.predicate
                .as_term()
                .is_some_and(|t| !router.is_class_predicate(t))
            && p.subject
                .as_var()
                .is_some_and(|s| s != var && !bound_before.contains(s))
    });
    all_object.then_some(RowSide::Object)
}

fn common_vars(patterns: &[TriplePattern]) -> Vec<Variable> {
    let mut iter = patterns.iter();
    let Some(first) = iter.next() else {
        return Vec::new();
    };
    let mut common = first.variables();
    for p in iter {
        common.retain(|v| p.has_variable(v));
    }
    common
}

/// Cuts the order into maximal runs of consecutive patterns that share one
/// variable.
pub fn detect_star(ordered: &[TriplePattern], router: &Router) -> Vec<StarGroup> {
    let mut groups = Vec::new();
    let mut start = 0;
    let mut bound: BTreeSet<Variable> = BTreeSet::new();
    while start < ordered.len() {
        let mut end = start + 1;
        while end < ordered.len() && !common_vars(&ordered[start..=end]).is_empty() {
            end += 1;
        }
        let members = ordered[start..end].to_vec();
        let join_var = if members.len() > 1 {
            common_vars(&members).into_iter().next()
        } else {
            None
        };
        let optimized = join_var
            .as_ref()
            .and_then(|v| star_side(&members, v, &bound, router));
        for p in &members {
            bound.extend(p.variables());
        }
        groups.push(StarGroup {
            patterns: members,
            join_var,
            optimized,
        });
        start = end;
    }
    groups
}

fn shares_variable(p: &TriplePattern, bound: &BTreeSet<Variable>) -> bool {
    p.variables().iter().any(|v| bound.contains(v))
}

/// Builds the staged plan for `bgp`.
pub fn plan(bgp: &BasicGraphPattern, mode: PlanMode, router: &Router) -> ExecutionPlan {
    let ordered = connect(reorder(bgp));
    let mut warnings = Vec::new();
    if ordered.len() == 1 {
        return ExecutionPlan {
            bgp: bgp.clone(),
            mode,
            stages: vec![Stage::SinglePattern(ordered[0].clone())],
            warnings,
        };
    }

    let mut stages = vec![Stage::InitialScan(ordered[0].clone())];
    let mut bound: BTreeSet<Variable> = ordered[0].variables().into_iter().collect();
    let mut push_single =
        |p: &TriplePattern, bound: &mut BTreeSet<Variable>, stages: &mut Vec<Stage>| {
            let cartesian = !shares_variable(p, bound);
            if cartesian {
                warnings.push(format!(
                    "pattern `{p}` shares no variable with earlier patterns; cartesian product"
                ));
            }
            stages.push(Stage::MapsinJoin {
                pattern: p.clone(),
                cartesian,
            });
            bound.extend(p.variables());
        };

    if !mode.uses_multiway() {
        for p in &ordered[1..] {
            push_single(p, &mut bound, &mut stages);
        }
    } else {
        let groups = detect_star(&ordered, router);
        for (i, group) in groups.iter().enumerate() {
            let mut members: &[TriplePattern] = &group.patterns;
            if i == 0 {
                members = &members[1..];
            }
            if let Some(var) = &group.join_var {
                // The join variable has to be bound before the multiway stage;
                // otherwise the first member binds it with a two-way join.
                if !bound.contains(var) && !members.is_empty() {
                    push_single(&members[0], &mut bound, &mut stages);
                    members = &members[1..];
                }
                if members.len() >= 2 {
                    let optimized = if mode.optimizes() {
                        star_side(members, var, &bound, router)
                    } else {
                        None
                    };
                    stages.push(Stage::MultiwayJoin {
                        patterns: members.to_vec(),
                        join_var: var.clone(),
                        optimized,
                    });
                    for p in members {
                        bound.extend(p.variables());
                    }
                    continue;
                }
            }
            for p in members {
                push_single(p, &mut bound, &mut stages);
            }
        }
    }
    ExecutionPlan {
        bgp: bgp.clone(),
        mode,
        stages,
        warnings,
    }
}

/// Routing description for `p` once the variables in `bound` carry values.
fn describe_access(p: &TriplePattern, bound: &BTreeSet<Variable>, router: &Router) -> String {
    let mut placeholder = SolutionMapping::new();
    for v in p.variables() {
        if bound.contains(&v) {
            let term = Term::iri(&format!("?{}", v.name()));
            placeholder.insert(v, term).expect("fresh variable");
        }
    }
    let mut text = router.route(&p.substitute(&placeholder)).to_string();
    for v in p.variables() {
        text = text.replace(&format!("<?{}>", v.name()), &format!("?{}", v.name()));
    }
    text
}

impl ExecutionPlan {
    /// Stable, human-readable plan listing.
    pub fn explain(&self, router: &Router) -> String {
        let mut out = format!("plan mode={} stages={}\n", self.mode, self.stages.len());
        let mut bound: BTreeSet<Variable> = BTreeSet::new();
        for (i, stage) in self.stages.iter().enumerate() {
            let n = i + 1;
            match stage {
                Stage::SinglePattern(p) => {
                    out += &format!(
                        "  {n}. single-pattern ({p}) via {}\n",
                        describe_access(p, &bound, router)
                    );
                }
                Stage::InitialScan(p) => {
                    out += &format!(
                        "  {n}. initial-scan ({p}) via {}\n",
                        describe_access(p, &bound, router)
                    );
                }
                Stage::MapsinJoin { pattern, cartesian } => {
                    let flag = if *cartesian { " [cartesian]" } else { "" };
                    out += &format!(
                        "  {n}. mapsin-join ({pattern}) via {}{flag}\n",
                        describe_access(pattern, &bound, router)
                    );
                }
                Stage::MultiwayJoin {
                    patterns,
                    join_var,
                    optimized,
                } => {
                    let flag = match optimized {
                        Some(RowSide::Subject) => "optimized, one GET on T_spo row",
                        Some(RowSide::Object) => "optimized, one GET on T_ops row",
                        None => "one GET per pattern",
                    };
                    out += &format!("  {n}. multiway-join on {join_var} [{flag}]\n");
                    for p in patterns {
                        out +=
                            &format!("       ({p}) via {}\n", describe_access(p, &bound, router));
                    }
                }
            }
            for p in stage.patterns() {
                bound.extend(p.variables());
            }
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out
    }

    pub fn pattern_count(&self) -> usize {
        self.stages.iter().map(|s| s.patterns().len()).sum()
    }
}
