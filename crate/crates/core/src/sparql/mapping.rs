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

use std::collections::HashMap;
use std::fmt;

use super::{SparqlError, Variable};
use crate::rdf::Term;

/// A partial function from variables to terms, kept sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SolutionMapping {
    bindings: Vec<(Variable, Term)>,
}

impl SolutionMapping {
    pub fn new() -> SolutionMapping {
        SolutionMapping::default()
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Variable, Term)>,
    ) -> Result<SolutionMapping, SparqlError> {
        let mut m = SolutionMapping::new();
        for (v, t) in pairs {
            m.insert(v, t)?;
        }
        Ok(m)
    }

    /// Binds `var`. Rebinding to the same term is a no-op; rebinding to a
    /// different term is an error and leaves the mapping unchanged.
    pub fn insert(&mut self, var: Variable, term: Term) -> Result<(), SparqlError> {
        match self.bindings.binary_search_by(|(v, _)| v.cmp(&var)) {
            Ok(i) if self.bindings[i].1 == term => Ok(()),
            Ok(_) => Err(SparqlError::IncompatibleMappings(var.name().to_string())),
            Err(i) => {
                self.bindings.insert(i, (var, term));
                Ok(())
            }
        }
    }

    pub fn get(&self, var: &Variable) -> Option<&Term> {
        self.bindings
            .binary_search_by(|(v, _)| v.cmp(var))
            .ok()
            .map(|i| &self.bindings[i].1)
    }

    pub fn get_by_name(&self, name: &str) -> Option<&Term> {
        self.get(&Variable::new(name))
    }

    pub fn contains(&self, var: &Variable) -> bool {
        self.get(var).is_some()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.bindings.iter().map(|(v, _)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.bindings.iter().map(|(v, t)| (v, t))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// True iff both mappings agree on every shared variable.
    pub fn compatible(&self, other: &SolutionMapping) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.bindings.len() && j < other.bindings.len() {
            let (a, b) = (&self.bindings[i], &other.bindings[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a.1 != b.1 {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        true
    }

    /// Set-union of two compatible mappings.
    pub fn merge(&self, other: &SolutionMapping) -> Result<SolutionMapping, SparqlError> {
        let mut out = Vec::with_capacity(self.bindings.len() + other.bindings.len());
        let (mut i, mut j) = (0, 0);
        while i < self.bindings.len() && j < other.bindings.len() {
            let (a, b) = (&self.bindings[i], &other.bindings[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a.1 != b.1 {
                        return Err(SparqlError::IncompatibleMappings(a.0.name().to_string()));
                    }
                    out.push(a.clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.bindings[i..]);
        out.extend_from_slice(&other.bindings[j..]);
        Ok(SolutionMapping { bindings: out })
    }

    /// Keeps only the listed variables.
    pub fn project(&self, vars: &[Variable]) -> SolutionMapping {
        SolutionMapping {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for SolutionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={t}")?;
        }
        f.write_str("]")
    }
}

/// Ordered bag of mappings. Equality via [`MappingMultiset::multiset_eq`]
/// ignores order but respects multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MappingMultiset {
    mappings: Vec<SolutionMapping>,
}

impl MappingMultiset {
    pub fn new() -> MappingMultiset {
        MappingMultiset::default()
    }

    pub fn push(&mut self, m: SolutionMapping) {
        self.mappings.push(m);
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = SolutionMapping>) {
        self.mappings.extend(other);
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SolutionMapping> {
        self.mappings.iter()
    }

    pub fn as_slice(&self) -> &[SolutionMapping] {
        &self.mappings
    }

    pub fn into_vec(self) -> Vec<SolutionMapping> {
        self.mappings
    }

    pub fn counts(&self) -> HashMap<&SolutionMapping, usize> {
        let mut counts = HashMap::with_capacity(self.mappings.len());
        for m in &self.mappings {
            *counts.entry(m).or_insert(0) += 1;
        }
        counts
    }

    pub fn multiset_eq(&self, other: &MappingMultiset) -> bool {
        self.len() == other.len() && self.counts() == other.counts()
    }

    /// A copy in canonical (sorted) order.
    pub fn sorted(&self) -> MappingMultiset {
        let mut mappings = self.mappings.clone();
        mappings.sort();
        MappingMultiset { mappings }
    }
}

impl FromIterator<SolutionMapping> for MappingMultiset {
    fn from_iter<I: IntoIterator<Item = SolutionMapping>>(iter: I) -> Self {
        MappingMultiset {
            mappings: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for MappingMultiset {
    type Item = SolutionMapping;
    type IntoIter = std::vec::IntoIter<SolutionMapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.mappings.into_iter()
    }
}

impl<'a> IntoIterator for &'a MappingMultiset {
    type Item = &'a SolutionMapping;
    type IntoIter = std::slice::Iter<'a, SolutionMapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.mappings.iter()
    }
}

impl From<Vec<SolutionMapping>> for MappingMultiset {
    fn from(mappings: Vec<SolutionMapping>) -> Self {
        MappingMultiset { mappings }
    }
}
