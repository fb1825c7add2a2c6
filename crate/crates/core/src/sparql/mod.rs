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

//! Basic graph patterns, solution mappings and the query parser.

mod mapping;
mod parser;

use std::fmt;
use std::sync::Arc;

use crate::rdf::{Term, Triple};

pub use mapping::{MappingMultiset, SolutionMapping};
pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SparqlError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
    #[error("incompatible mappings: ?{0} is bound to different terms")]
    IncompatibleMappings(String),
    #[error("a basic graph pattern needs at least one triple pattern")]
    EmptyPattern,
    #[error("projected variable ?{0} does not occur in the pattern")]
    UnknownProjection(String),
}

/// A query variable, stored without its `?`/`$` sigil.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Variable {
        Variable(Arc::from(name.trim_start_matches(['?', '$'])))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Term(Term),
    Var(Variable),
}

impl PatternTerm {
    pub fn var(name: &str) -> PatternTerm {
        PatternTerm::Var(Variable::new(name))
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(_) => None,
        }
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, PatternTerm::Term(_))
    }

    fn substitute(&self, mapping: &SolutionMapping) -> PatternTerm {
        match self {
            PatternTerm::Var(v) => match mapping.get(v) {
                Some(t) => PatternTerm::Term(t.clone()),
                None => self.clone(),
            },
            t => t.clone(),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => t.fmt(f),
            PatternTerm::Var(v) => v.fmt(f),
        }
    }
}

/// Triple position, used by the planner and the multi-column lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> TriplePattern {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn slots(&self) -> [(Position, &PatternTerm); 3] {
        [
            (Position::Subject, &self.subject),
            (Position::Predicate, &self.predicate),
            (Position::Object, &self.object),
        ]
    }

    pub fn slot(&self, pos: Position) -> &PatternTerm {
        match pos {
            Position::Subject => &self.subject,
            Position::Predicate => &self.predicate,
            Position::Object => &self.object,
        }
    }

    /// Distinct variables in subject, predicate, object order: dom(p).
    pub fn variables(&self) -> Vec<Variable> {
        let mut vars: Vec<Variable> = Vec::with_capacity(3);
        for (_, t) in self.slots() {
            if let PatternTerm::Var(v) = t {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars
    }

    /// Number of positions holding a variable.
    pub fn variable_positions(&self) -> usize {
        self.slots().iter().filter(|(_, t)| !t.is_bound()).count()
    }

    pub fn has_variable(&self, var: &Variable) -> bool {
        self.slots().iter().any(|(_, t)| t.as_var() == Some(var))
    }

    pub fn positions_of(&self, var: &Variable) -> Vec<Position> {
        self.slots()
            .iter()
            .filter(|(_, t)| t.as_var() == Some(var))
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        self.variable_positions() == 0
    }

    /// Replaces every variable bound in `mapping` by its binding.
    pub fn substitute(&self, mapping: &SolutionMapping) -> TriplePattern {
        TriplePattern {
            subject: self.subject.substitute(mapping),
            predicate: self.predicate.substitute(mapping),
            object: self.object.substitute(mapping),
        }
    }

    /// The mapping over dom(self) that turns this pattern into `triple`, if any.
    pub fn match_triple(&self, triple: &Triple) -> Option<SolutionMapping> {
        let mut mapping = SolutionMapping::new();
        for ((_, slot), value) in
            self.slots()
                .into_iter()
                .zip([&triple.subject, &triple.predicate, &triple.object])
        {
            match slot {
                PatternTerm::Term(t) => {
                    if t != value {
                        return None;
                    }
                }
                PatternTerm::Var(v) => {
                    if mapping.insert(v.clone(), value.clone()).is_err() {
                        return None;
                    }
                }
            }
        }
        Some(mapping)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    All,
    Vars(Vec<Variable>),
}

/// A conjunction of triple patterns plus the SELECT projection.
///
/// Equality FILTERs are folded into the patterns at parse time; the folded
/// variable keeps its constant in `fixed` so it can still be projected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicGraphPattern {
    patterns: Vec<TriplePattern>,
    projection: Projection,
    fixed: Vec<(Variable, Term)>,
}

impl BasicGraphPattern {
    pub fn new(
        patterns: Vec<TriplePattern>,
        projection: Projection,
    ) -> Result<BasicGraphPattern, SparqlError> {
        BasicGraphPattern::with_fixed(patterns, projection, Vec::new())
    }

    pub fn with_fixed(
        patterns: Vec<TriplePattern>,
        projection: Projection,
        fixed: Vec<(Variable, Term)>,
    ) -> Result<BasicGraphPattern, SparqlError> {
        if patterns.is_empty() {
            return Err(SparqlError::EmptyPattern);
        }
        let bgp = BasicGraphPattern {
            patterns,
            projection,
            fixed,
        };
        if let Projection::Vars(vars) = &bgp.projection {
            let known = bgp.variables();
            for v in vars {
                if !known.contains(v) && !bgp.fixed.iter().any(|(f, _)| f == v) {
                    return Err(SparqlError::UnknownProjection(v.name().to_string()));
                }
            }
        }
        Ok(bgp)
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn fixed(&self) -> &[(Variable, Term)] {
        &self.fixed
    }

    /// Union of the pattern domains in order of first appearance.
    pub fn variables(&self) -> Vec<Variable> {
        let mut vars = Vec::new();
        for p in &self.patterns {
            for v in p.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        vars
    }

    /// Output columns, resolving `SELECT *`.
    pub fn projected_variables(&self) -> Vec<Variable> {
        match &self.projection {
            Projection::Vars(v) => v.clone(),
            Projection::All => {
                let mut vars = self.variables();
                for (v, _) in &self.fixed {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
                vars
            }
        }
    }

    /// Restricts a full-domain result mapping to the output columns.
    pub fn project(&self, mapping: &SolutionMapping) -> SolutionMapping {
        let vars = self.projected_variables();
        let mut out = mapping.project(&vars);
        for (v, t) in &self.fixed {
            if vars.contains(v) {
                // `v` was folded away, so it cannot already be bound.
                let _ = out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// Same patterns and projection with a different pattern order.
    pub fn with_patterns(&self, patterns: Vec<TriplePattern>) -> BasicGraphPattern {
        BasicGraphPattern {
            patterns,
            projection: self.projection.clone(),
            fixed: self.fixed.clone(),
        }
    }
}

impl fmt::Display for BasicGraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT")?;
        match &self.projection {
            Projection::All => f.write_str(" *")?,
            Projection::Vars(vars) => {
                for v in vars {
                    write!(f, " {v}")?;
                }
            }
        }
        f.write_str(" WHERE {\n")?;
        for p in &self.patterns {
            writeln!(f, "  {p} .")?;
        }
        for (v, t) in &self.fixed {
            writeln!(f, "  FILTER({v} = {t})")?;
        }
        f.write_str("}\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> PatternTerm {
        PatternTerm::Term(Term::iri(s))
    }

    #[test]
    fn substitute_shared_variable() {
        let p = TriplePattern::new(
            PatternTerm::var("article"),
            iri("author"),
            PatternTerm::var("author"),
        );
        let mut mu = SolutionMapping::new();
        mu.insert(Variable::new("article"), Term::iri("Article1"))
            .unwrap();
        let sub = p.substitute(&mu);
        assert_eq!(
            sub,
            TriplePattern::new(iri("Article1"), iri("author"), PatternTerm::var("author"))
        );
        assert_eq!(sub.variables(), vec![Variable::new("author")]);
        assert_eq!(p.substitute(&SolutionMapping::new()), p);
    }

    #[test]
    fn substitute_everything_grounds_the_pattern() {
        let p = TriplePattern::new(
            PatternTerm::var("s"),
            PatternTerm::var("p"),
            PatternTerm::var("o"),
        );
        let mu = SolutionMapping::from_pairs([
            (Variable::new("s"), Term::iri("a")),
            (Variable::new("p"), Term::iri("b")),
            (Variable::new("o"), Term::literal("c")),
        ])
        .unwrap();
        assert!(p.substitute(&mu).is_ground());
    }

    #[test]
    fn match_respects_repeated_variables() {
        let p = TriplePattern::new(PatternTerm::var("x"), iri("knows"), PatternTerm::var("x"));
        let selfloop = Triple::new(Term::iri("a"), Term::iri("knows"), Term::iri("a")).unwrap();
        let other = Triple::new(Term::iri("a"), Term::iri("knows"), Term::iri("b")).unwrap();
        assert_eq!(p.match_triple(&selfloop).unwrap().len(), 1);
        assert!(p.match_triple(&other).is_none());
        assert_eq!(p.variable_positions(), 2);
        assert_eq!(p.variables().len(), 1);
    }

    #[test]
    fn projection_must_be_known() {
        let p = TriplePattern::new(PatternTerm::var("x"), iri("p"), PatternTerm::var("y"));
        assert_eq!(
            BasicGraphPattern::new(vec![p.clone()], Projection::Vars(vec![Variable::new("z")])),
            Err(SparqlError::UnknownProjection("z".into()))
        );
        assert_eq!(
            BasicGraphPattern::new(vec![], Projection::All),
            Err(SparqlError::EmptyPattern)
        );
        let bgp = BasicGraphPattern::new(vec![p], Projection::All).unwrap();
        assert_eq!(
            bgp.projected_variables(),
            vec![Variable::new("x"), Variable::new("y")]
        );
    }

    #[test]
    fn sigils_are_stripped() {
        assert_eq!(Variable::new("?x"), Variable::new("$x"));
        assert_ne!(Variable::new("x"), Variable::new("X"));
    }
}
