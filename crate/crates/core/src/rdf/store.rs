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

use std::io::BufRead;
use std::path::Path;

use serde::Serialize;

use super::routing::class_range_end;
use super::{parse_line, Access, AccessPlan, RdfError, Result, Router, TableId, Term, Triple};
use crate::kvstore::{FilterSpec, KvStore, RowResult, StoreConfig, DEFAULT_FAMILY};
use crate::sparql::{MappingMultiset, SolutionMapping, TriplePattern};

pub const DEFAULT_CLASS_PREDICATE: &str = "rdf:type";

const META_CLASS_PREDICATE: &str = "rdf.class_predicate";
const META_COMPOUND: &str = "rdf.compound_class_keys";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdfConfig {
    pub class_predicate: Term,
    /// Key class-assignment triples by `enc(o) 0x00 enc(s)` in `T_ops`.
    /// Turning this off reproduces the single fat row per class.
    pub compound_class_keys: bool,
    pub max_region_size: u64,
}

impl Default for RdfConfig {
    fn default() -> Self {
        RdfConfig {
            class_predicate: Term::iri(DEFAULT_CLASS_PREDICATE),
            compound_class_keys: true,
            max_region_size: StoreConfig::default().max_region_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadStats {
    pub lines: usize,
    pub triples_read: usize,
    pub triples_stored: usize,
    pub duplicates: usize,
    pub parse_errors: Vec<ParseError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableStats {
    pub table: String,
    pub cells: usize,
    pub rows: usize,
    pub regions: usize,
    pub largest_region_bytes: u64,
}

/// Which position of the patterns holds the shared row term in a
/// multi-column lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RowSide {
    Subject,
    Object,
}

/// Triple store over the two-table schema.
pub struct TripleStore {
    kv: KvStore,
    router: Router,
    writable: bool,
}

impl std::fmt::Debug for TripleStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TripleStore")
            .field("router", &self.router)
            .field("writable", &self.writable)
            .finish_non_exhaustive()
    }
}

impl TripleStore {
    pub fn new(config: RdfConfig) -> Result<TripleStore> {
        let mut kv = KvStore::new(StoreConfig {
            max_region_size: config.max_region_size,
        });
        Self::init(&mut kv, &config)?;
        Ok(TripleStore {
            kv,
            router: Router::new(config.class_predicate, config.compound_class_keys),
            writable: true,
        })
    }

    fn init(kv: &mut KvStore, config: &RdfConfig) -> Result<()> {
        for table in [TableId::Spo, TableId::Ops] {
            if !kv.has_table(table.name()) {
                kv.create_table(table.name())?;
            }
        }
        kv.set_metadata(META_CLASS_PREDICATE, config.class_predicate.lexical());
        kv.set_metadata(
            META_COMPOUND,
            if config.compound_class_keys {
                "true"
            } else {
                "false"
            },
        );
        Ok(())
    }

    /// Opens a persisted store. An empty directory yields an empty store with
    /// default settings.
    pub fn open(dir: impl AsRef<Path>) -> Result<TripleStore> {
        let mut kv = KvStore::open(dir)?;
        let class_predicate = match kv.metadata(META_CLASS_PREDICATE) {
            Some(p) => Term::new_iri(p)?,
            None => Term::iri(DEFAULT_CLASS_PREDICATE),
        };
        let compound_class_keys = kv.metadata(META_COMPOUND) != Some("false");
        let config = RdfConfig {
            class_predicate,
            compound_class_keys,
            max_region_size: kv.config().max_region_size,
        };
        Self::init(&mut kv, &config)?;
        Ok(TripleStore {
            kv,
            router: Router::new(config.class_predicate, config.compound_class_keys),
            writable: true,
        })
    }

    pub fn persist(&self, dir: impl AsRef<Path>) -> Result<()> {
        Ok(self.kv.persist(dir)?)
    }

    pub fn kv(&self) -> &KvStore {
        &self.kv
    }

    pub fn router(&self) -> &Router {
        &self.router
    }

    pub fn config(&self) -> RdfConfig {
        RdfConfig {
            class_predicate: self.router.class_predicate().clone(),
            compound_class_keys: self.router.compound_class_keys(),
            max_region_size: self.kv.config().max_region_size,
        }
    }

    /// Ends the load phase. Later writes fail with [`RdfError::NotWritable`].
    pub fn seal(&mut self) {
        self.writable = false;
    }

    /// Stores a triple and returns whether it was new.
    pub fn store_triple(&mut self, t: &Triple) -> Result<bool> {
        if !self.writable {
            return Err(RdfError::NotWritable);
        }
        let (s, p, o) = (t.subject.encode(), t.predicate.encode(), t.object.encode());
        if self.kv.contains_value(TableId::Spo.name(), &s, &p, &o)? {
            return Ok(false);
        }
        self.kv
            .put(TableId::Spo.name(), &s, DEFAULT_FAMILY, &p, &o)?;
        let ops_row = if self.router.is_class_predicate(&t.predicate) {
            let mut row = o.clone();
            row.push(0x00);
            row.extend_from_slice(&s);
            row
        } else {
            o
        };
        self.kv
            .put(TableId::Ops.name(), &ops_row, DEFAULT_FAMILY, &p, &s)?;
        Ok(true)
    }

    /// Loads N-Triples. Malformed lines are reported in the stats and skipped.
    pub fn load_ntriples(&mut self, mut input: impl BufRead) -> Result<LoadStats> {
        let mut stats = LoadStats::default();
        let mut buf = Vec::new();
        loop {
            buf.clear();
            if input.read_until(b'\n', &mut buf)? == 0 {
                break;
            }
            stats.lines += 1;
            let parsed = std::str::from_utf8(&buf)
                .map_err(|_| "line is not valid UTF-8".to_string())
                .and_then(parse_line);
            match parsed {
                Ok(None) => {}
                Ok(Some(t)) => {
                    stats.triples_read += 1;
                    if self.store_triple(&t)? {
                        stats.triples_stored += 1;
                    } else {
                        stats.duplicates += 1;
                    }
                }
                Err(message) => stats.parse_errors.push(ParseError {
                    line: stats.lines,
                    message,
                }),
            }
        }
        self.kv.split_check(TableId::Spo.name())?;
        self.kv.split_check(TableId::Ops.name())?;
        Ok(stats)
    }

    pub fn triple_count(&self) -> Result<usize> {
        Ok(self.kv.cell_count(TableId::Spo.name())?)
    }

    pub fn table_stats(&self) -> Result<Vec<TableStats>> {
        [TableId::Spo, TableId::Ops]
            .into_iter()
            .map(|t| {
                let regions = self.kv.regions(t.name())?;
                Ok(TableStats {
                    table: t.name().to_string(),
                    cells: self.kv.cell_count(t.name())?,
                    rows: self.kv.row_count(t.name())?,
                    regions: regions.len(),
                    largest_region_bytes: regions.iter().map(|r| r.size).max().unwrap_or(0),
                })
            })
            .collect()
    }

    /// Every stored triple, decoded from `T_spo` in key order.
    pub fn triples(&self) -> Result<Vec<Triple>> {
        self.decode_rows(TableId::Spo, self.kv.dump(TableId::Spo.name())?)
    }

    /// Every stored triple, decoded from `T_ops` in key order.
    pub fn ops_triples(&self) -> Result<Vec<Triple>> {
        self.decode_rows(TableId::Ops, self.kv.dump(TableId::Ops.name())?)
    }

    fn decode_rows(
        &self,
        table: TableId,
        rows: impl IntoIterator<Item = RowResult>,
    ) -> Result<Vec<Triple>> {
        let mut out = Vec::new();
        for row in rows {
            decode_row(table, &row, &mut out)?;
        }
        Ok(out)
    }

    pub fn resolve_pattern(&self, p: &TriplePattern) -> AccessPlan {
        self.router.route(p)
    }

    fn read(&self, plan: &AccessPlan) -> Result<Vec<RowResult>> {
        let table = plan.table.name();
        let mut rows = Vec::new();
        match &plan.access {
            Access::Get { row } => {
                let r = self.kv.get(table, row, &plan.filter)?;
                if !r.is_empty() {
                    rows.push(r);
                }
                if plan.include_class_rows {
                    let mut start = row.clone();
                    start.push(0x00);
                    let end = class_range_end(&start);
                    rows.extend(self.kv.scan(table, &start, Some(&end), &plan.filter)?);
                }
            }
            Access::Scan | Access::ClassRangeScan { .. } => {
                let (start, end) = plan.row_range();
                rows.extend(self.kv.scan(table, &start, end.as_deref(), &plan.filter)?);
            }
        }
        Ok(rows)
    }

    /// All mappings for `p`, binding exactly the variables of `p`.
    pub fn lookup(&self, p: &TriplePattern) -> Result<MappingMultiset> {
        let plan = self.router.route(p);
        let rows = self.read(&plan)?;
        let mut triples = Vec::new();
        for row in &rows {
            decode_row(plan.table, row, &mut triples)?;
        }
        Ok(triples.iter().filter_map(|t| p.match_triple(t)).collect())
    }

    /// Answers several patterns that share one bound row term with a single
    /// GET, joining the per-pattern matches client-side.
    pub fn multi_column_lookup(
        &self,
        side: RowSide,
        row_term: &Term,
        patterns: &[TriplePattern],
    ) -> Result<MappingMultiset> {
        let table = match side {
            RowSide::Subject => TableId::Spo,
            RowSide::Object => TableId::Ops,
        };
        let row = row_term.encode();
        let mut filters = Vec::with_capacity(patterns.len());
        for p in patterns {
            let slot = match side {
                RowSide::Subject => &p.subject,
                RowSide::Object => &p.object,
            };
            if slot.as_term() != Some(row_term) {
                return Err(RdfError::PreconditionViolation(format!(
                    "pattern `{p}` does not have {row_term} in {side:?} position"
                )));
            }
            let plan = self.router.route(p);
            if plan.table != table
                || plan.include_class_rows
                || plan.access != (Access::Get { row: row.clone() })
            {
                return Err(RdfError::PreconditionViolation(format!(
                    "pattern `{p}` cannot be answered from the shared row"
                )));
            }
            filters.push(plan.filter);
        }
        if patterns.is_empty() {
            return Ok(MappingMultiset::new());
        }
        let result = self.kv.get_multi(table.name(), &row, &filters)?;
        let mut triples = Vec::new();
        decode_row(table, &result, &mut triples)?;

        let mut acc = vec![SolutionMapping::new()];
        for (p, filter) in patterns.iter().zip(&filters) {
            let matches: Vec<SolutionMapping> = triples
                .iter()
                .filter(|t| cell_passes(table, filter, t))
                .filter_map(|t| p.match_triple(t))
                .collect();
            let mut next = Vec::new();
            for left in &acc {
                for right in &matches {
                    if let Ok(m) = left.merge(right) {
                        next.push(m);
                    }
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        Ok(acc.into())
    }

    /// Mappings for `p` split into one partition per region of the table it
    /// routes to. Only scans are issued, never GETs.
    pub fn scan_partitions(&self, p: &TriplePattern) -> Result<Vec<MappingMultiset>> {
        let plan = self.router.route(p);
        let (start, end) = plan.row_range();
        let streams = self.kv.partitioned_scan_range(
            plan.table.name(),
            &start,
            end.as_deref(),
            &plan.filter,
        )?;
        let mut out = Vec::with_capacity(streams.len());
        for (_, stream) in streams {
            let mut triples = Vec::new();
            for row in stream {
                decode_row(plan.table, &row, &mut triples)?;
            }
            out.push(triples.iter().filter_map(|t| p.match_triple(t)).collect());
        }
        Ok(out)
    }
}

/// Re-applies a push-down filter to a decoded triple.
fn cell_passes(table: TableId, filter: &FilterSpec, t: &Triple) -> bool {
    let column = t.predicate.encode();
    let value = match table {
        TableId::Spo => t.object.encode(),
        TableId::Ops => t.subject.encode(),
    };
    filter.matches(&column, &value)
}

fn decode_row(table: TableId, row: &RowResult, out: &mut Vec<Triple>) -> Result<()> {
    let key_term = match table {
        TableId::Spo => Term::decode(&row.row)?,
        // Compound rows carry the subject after a 0x00; the object comes first.
        TableId::Ops => match row.row.iter().position(|&b| b == 0) {
            Some(i) => Term::decode(&row.row[..i])?,
            None => Term::decode(&row.row)?,
        },
    };
    for cell in &row.cells {
        let predicate = Term::decode(&cell.column)?;
        let value = Term::decode(&cell.value)?;
        out.push(match table {
            TableId::Spo => Triple {
                subject: key_term.clone(),
                predicate,
                object: value,
            },
            TableId::Ops => Triple {
                subject: value,
                predicate,
                object: key_term.clone(),
            },
        });
    }
    Ok(())
}
