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

//! Maps a triple pattern to the table, access method and push-down filter
//! that answer it.

use std::fmt;

use super::Term;
use crate::kvstore::FilterSpec;
use crate::sparql::{PatternTerm, TriplePattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    Spo,
    Ops,
}

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::Spo => "T_spo",
            TableId::Ops => "T_ops",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Access {
    /// Read a single row.
    Get { row: Vec<u8> },
    /// Read the whole table.
    Scan,
    /// Read every compound row `prefix ..` of one class.
    ClassRangeScan { prefix: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AccessPlan {
    pub table: TableId,
    pub access: Access,
    pub filter: FilterSpec,
    /// A `T_ops` get that must also read the compound class rows of its
    /// object, because the predicate is unknown.
    pub include_class_rows: bool,
}

impl AccessPlan {
    pub fn is_get(&self) -> bool {
        matches!(self.access, Access::Get { .. })
    }

    /// `[start, end)` row range covering everything this plan reads.
    pub fn row_range(&self) -> (Vec<u8>, Option<Vec<u8>>) {
        match &self.access {
            Access::Get { row } => {
                let mut end = row.clone();
                end.push(if self.include_class_rows { 0x01 } else { 0x00 });
                (row.clone(), Some(end))
            }
            Access::Scan => (Vec::new(), None),
            Access::ClassRangeScan { prefix } => (prefix.clone(), Some(class_range_end(prefix))),
        }
    }
}

/// End of the compound-row range for a prefix ending in 0x00.
pub(crate) fn class_range_end(prefix: &[u8]) -> Vec<u8> {
    let mut end = prefix.to_vec();
    if let Some(last) = end.last_mut() {
        *last += 1;
    }
    end
}

fn show_bytes(bytes: &[u8]) -> String {
    match Term::decode(bytes) {
        Ok(t) => t.to_string(),
        Err(_) => format!("x{}", hex::encode(bytes)),
    }
}

impl fmt::Display for AccessPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.table)?;
        match &self.access {
            Access::Get { row } => write!(f, "get row={}", show_bytes(row))?,
            Access::Scan => f.write_str("scan")?,
            Access::ClassRangeScan { prefix } => write!(
                f,
                "class-range-scan prefix={}|",
                show_bytes(&prefix[..prefix.len() - 1])
            )?,
        }
        match &self.filter {
            FilterSpec::None => f.write_str(" filter=none")?,
            FilterSpec::ColumnEquals(c) => write!(f, " filter=column({})", show_bytes(c))?,
            FilterSpec::ValueEquals(v) => write!(f, " filter=value({})", show_bytes(v))?,
            FilterSpec::ColumnAndValueEquals { column, value } => write!(
                f,
                " filter=column+value({}, {})",
                show_bytes(column),
                show_bytes(value)
            )?,
        }
        if self.include_class_rows {
            f.write_str(" +class-rows")?;
        }
        Ok(())
    }
}

/// Routing policy for one store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Router {
    class_predicate: Term,
    compound_class_keys: bool,
}

impl Router {
    pub fn new(class_predicate: Term, compound_class_keys: bool) -> Router {
        Router {
            class_predicate,
            compound_class_keys,
        }
    }

    pub fn class_predicate(&self) -> &Term {
        &self.class_predicate
    }

    pub fn compound_class_keys(&self) -> bool {
        self.compound_class_keys
    }

    /// True iff triples with predicate `p` get a compound `T_ops` row.
    pub fn is_class_predicate(&self, p: &Term) -> bool {
        self.compound_class_keys && *p == self.class_predicate
    }

    pub fn route(&self, pattern: &TriplePattern) -> AccessPlan {
        let bound = |t: &PatternTerm| t.as_term().map(Term::encode);
        let (s, p, o) = (
            bound(&pattern.subject),
            bound(&pattern.predicate),
            bound(&pattern.object),
        );
        let plan = |table, access, filter| AccessPlan {
            table,
            access,
            filter,
            include_class_rows: false,
        };
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => plan(
                TableId::Spo,
                Access::Get { row: s },
                FilterSpec::ColumnAndValueEquals {
                    column: p,
                    value: o,
                },
            ),
            (None, Some(p), Some(o)) => {
                if pattern
                    .predicate
                    .as_term()
                    .is_some_and(|t| self.is_class_predicate(t))
                {
                    let mut prefix = o;
                    prefix.push(0x00);
                    plan(
                        TableId::Ops,
                        Access::ClassRangeScan { prefix },
                        FilterSpec::ColumnEquals(p),
                    )
                } else {
                    plan(
                        TableId::Ops,
                        Access::Get { row: o },
                        FilterSpec::ColumnEquals(p),
                    )
                }
            }
            (Some(s), None, Some(o)) => plan(
                TableId::Spo,
                Access::Get { row: s },
                FilterSpec::ValueEquals(o),
            ),
            (Some(s), Some(p), None) => plan(
                TableId::Spo,
                Access::Get { row: s },
                FilterSpec::ColumnEquals(p),
            ),
            (None, None, Some(o)) => AccessPlan {
                table: TableId::Ops,
                access: Access::Get { row: o },
                filter: FilterSpec::None,
                include_class_rows: self.compound_class_keys,
            },
            (None, Some(p), None) => plan(TableId::Spo, Access::Scan, FilterSpec::ColumnEquals(p)),
            (Some(s), None, None) => plan(TableId::Spo, Access::Get { row: s }, FilterSpec::None),
            (None, None, None) => plan(TableId::Spo, Access::Scan, FilterSpec::None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kvstore::FilterKind;

    fn router() -> Router {
        Router::new(Term::iri("rdf:type"), true)
    }

    fn pat(s: &str, p: &str, o: &str) -> TriplePattern {
        let t = |x: &str| match x.strip_prefix('?') {
            Some(v) => PatternTerm::var(v),
            None => PatternTerm::Term(Term::iri(x)),
        };
        TriplePattern::new(t(s), t(p), t(o))
    }

    #[test]
    fn author_alex_uses_ops_get() {
        let plan = router().route(&pat("?article", "author", "Alex"));
        assert_eq!(plan.table, TableId::Ops);
        assert_eq!(
            plan.access,
            Access::Get {
                row: Term::iri("Alex").encode()
            }
        );
        assert_eq!(
            plan.filter,
            FilterSpec::ColumnEquals(Term::iri("author").encode())
        );
        assert_eq!(
            plan.to_string(),
            "T_ops get row=<Alex> filter=column(<author>)"
        );
    }

    #[test]
    fn class_pattern_is_range_scan() {
        let plan = router().route(&pat("?x", "rdf:type", "ub:Student"));
        let mut prefix = Term::iri("ub:Student").encode();
        prefix.push(0);
        assert_eq!(
            plan.access,
            Access::ClassRangeScan {
                prefix: prefix.clone()
            }
        );
        assert_eq!(plan.table, TableId::Ops);
        let (start, end) = plan.row_range();
        assert_eq!(start, prefix);
        assert_eq!(end.unwrap().last(), Some(&1));
        // Without compound keys the class is an ordinary object row.
        let plain =
            Router::new(Term::iri("rdf:type"), false).route(&pat("?x", "rdf:type", "ub:Student"));
        assert!(plain.is_get());
        // A fully bound class triple reads the subject row.
        assert_eq!(
            router()
                .route(&pat("Alex", "rdf:type", "foaf:Person"))
                .table,
            TableId::Spo
        );
    }

    #[test]
    fn all_shapes() {
        let r = router();
        let cases = [
            (
                pat("s", "p", "o"),
                TableId::Spo,
                true,
                FilterKind::ColumnAndValue,
            ),
            (pat("?s", "p", "o"), TableId::Ops, true, FilterKind::Column),
            (pat("s", "?p", "o"), TableId::Spo, true, FilterKind::Value),
            (pat("s", "p", "?o"), TableId::Spo, true, FilterKind::Column),
            (pat("?s", "?p", "o"), TableId::Ops, true, FilterKind::None),
            (
                pat("?s", "p", "?o"),
                TableId::Spo,
                false,
                FilterKind::Column,
            ),
            (pat("s", "?p", "?o"), TableId::Spo, true, FilterKind::None),
            (pat("?s", "?p", "?o"), TableId::Spo, false, FilterKind::None),
        ];
        for (p, table, get, kind) in cases {
            let plan = r.route(&p);
            assert_eq!(
                (plan.table, plan.is_get(), plan.filter.kind()),
                (table, get, kind),
                "{p}"
            );
        }
    }

    #[test]
    fn get_range_is_exactly_one_row() {
        let plan = router().route(&pat("s", "p", "?o"));
        let (start, end) = plan.row_range();
        let end = end.unwrap();
        assert_eq!(end.len(), start.len() + 1);
        assert_eq!(end.last(), Some(&0));
    }
}
