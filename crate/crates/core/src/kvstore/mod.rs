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

//! Embedded sorted-map store modelled on Bigtable.
//!
//! A store holds named tables. Each table maps a row key to the columns of
//! its single column family, and each column keeps every version ever written
//! under a store-global logical timestamp. Rows are kept in lexicographic byte
//! order and tables are sharded into contiguous row-range [`Region`]s that
//! split at a size-weighted middle row once they exceed the configured
//! maximum size.
//!
//! All reads go through [`Meter`], so callers can attribute GET requests,
//! scanned rows and returned cells to a piece of work by diffing snapshots.

mod filter;
mod meter;
mod persist;

use std::collections::BTreeMap;
use std::ops::Bound;
use std::path::PathBuf;
use std::sync::Arc;

pub use filter::{FilterKind, FilterSpec};
pub use meter::{Meter, MeterSnapshot};
pub use persist::CellKey;

/// The only column family a table carries.
pub const DEFAULT_FAMILY: &str = "p";

/// Region size limit used when nothing else is configured.
pub const DEFAULT_MAX_REGION_SIZE: u64 = 64 * 1024;

#[derive(Debug, thiserror::Error)]
pub enum KvError {
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("table `{0}` already exists")]
    TableExists(String),
    #[error("invalid table name `{0}`")]
    InvalidTableName(String),
    #[error("unknown column family `{family}` in table `{table}`")]
    UnknownFamily { table: String, family: String },
    #[error("row key must be non-empty")]
    EmptyRow,
    #[error("column qualifier must not contain a 0x00 byte")]
    InvalidColumn,
    #[error("inverted range: start row sorts after end row")]
    InvertedRange,
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt store file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

pub type Result<T, E = KvError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreConfig {
    pub max_region_size: u64,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            max_region_size: DEFAULT_MAX_REGION_SIZE,
        }
    }
}

/// One cell version as returned by a read.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub family: Arc<str>,
    pub column: Vec<u8>,
    pub timestamp: u64,
    pub value: Vec<u8>,
}

/// All cell versions of one row that survived the read filter, ordered by
/// (family, column, descending timestamp).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RowResult {
    pub row: Vec<u8>,
    pub cells: Vec<Cell>,
}

impl RowResult {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// A contiguous row range `[start_row, end_row)` of a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub table: String,
    pub start_row: Vec<u8>,
    /// `None` means unbounded.
    pub end_row: Option<Vec<u8>>,
    pub size: u64,
}

impl Region {
    pub fn contains(&self, row: &[u8]) -> bool {
        row >= self.start_row.as_slice() && self.end_row.as_deref().is_none_or(|end| row < end)
    }
}

/// Bytes one cell occupies in the on-disk record layout.
pub(crate) fn cell_size(row: usize, family: usize, column: usize, value: usize) -> u64 {
    (4 + row + 1 + family + 1 + column + 1 + 8 + 4 + value) as u64
}

#[derive(Debug, Clone)]
struct Version {
    timestamp: u64,
    value: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
struct Row {
    /// Versions per column, ascending by timestamp.
    columns: BTreeMap<Vec<u8>, Vec<Version>>,
    size: u64,
}

#[derive(Debug, Clone)]
struct Table {
    name: String,
    family: Arc<str>,
    rows: BTreeMap<Vec<u8>, Row>,
    /// Region start row -> accumulated size. The first region starts at the
    /// empty key, each region ends where the next begins.
    regions: BTreeMap<Vec<u8>, u64>,
}

impl Table {
    fn new(name: &str) -> Self {
        let mut regions = BTreeMap::new();
        regions.insert(Vec::new(), 0);
        Table {
            name: name.to_string(),
            family: Arc::from(DEFAULT_FAMILY),
            rows: BTreeMap::new(),
            regions,
        }
    }

    fn region_start_of(&self, row: &[u8]) -> Vec<u8> {
        self.regions
            .range::<[u8], _>((Bound::Unbounded, Bound::Included(row)))
            .next_back()
            .map(|(start, _)| start.clone())
            .expect("first region starts at the empty key")
    }

    fn region_end(&self, start: &[u8]) -> Option<Vec<u8>> {
        self.regions
            .range::<[u8], _>((Bound::Excluded(start), Bound::Unbounded))
            .next()
            .map(|(k, _)| k.clone())
    }

    fn rows_in<'a>(
        &'a self,
        start: &'a [u8],
        end: Option<&'a [u8]>,
    ) -> std::collections::btree_map::Range<'a, Vec<u8>, Row> {
        let upper = match end {
            Some(e) => Bound::Excluded(e),
            None => Bound::Unbounded,
        };
        self.rows.range::<[u8], _>((Bound::Included(start), upper))
    }

    fn region_list(&self) -> Vec<Region> {
        let starts: Vec<&Vec<u8>> = self.regions.keys().collect();
        starts
            .iter()
            .enumerate()
            .map(|(i, start)| Region {
                table: self.name.clone(),
                start_row: (*start).clone(),
                end_row: starts.get(i + 1).map(|e| (*e).clone()),
                size: self.regions[*start],
            })
            .collect()
    }

    fn recompute_region_sizes(&mut self) {
        let list = self.region_list();
        for region in list {
            let size = self
                .rows_in(&region.start_row, region.end_row.as_deref())
                .map(|(_, r)| r.size)
                .sum();
            self.regions.insert(region.start_row, size);
        }
    }

    /// Splits the region starting at `start` until every resulting region is
    /// within `max` or holds a single row.
    fn split_region(&mut self, start: Vec<u8>, max: u64) {
        let mut pending = vec![start];
        while let Some(start) = pending.pop() {
            if self.regions[&start] <= max {
                continue;
            }
            let end = self.region_end(&start);
            let rows: Vec<(Vec<u8>, u64)> = self
                .rows_in(&start, end.as_deref())
                .map(|(k, r)| (k.clone(), r.size))
                .collect();
            if rows.len() < 2 {
                continue;
            }
            let total: u64 = rows.iter().map(|(_, s)| s).sum();
            // Row boundary whose prefix size is closest to half the region.
            let mut best = 1;
            let mut best_gap = u64::MAX;
            let mut prefix = 0u64;
            for (k, (_, size)) in rows.iter().enumerate().take(rows.len() - 1) {
                prefix += size;
                let gap = (2 * prefix).abs_diff(total);
                if gap < best_gap {
                    best_gap = gap;
                    best = k + 1;
                }
            }
            let left: u64 = rows[..best].iter().map(|(_, s)| s).sum();
            let split_key = rows[best].0.clone();
            self.regions.insert(start.clone(), left);
            self.regions.insert(split_key.clone(), total - left);
            pending.push(start);
            pending.push(split_key);
        }
    }
}

/// Embedded multi-table store. Writes require `&mut self`; any number of
/// readers may share `&self` concurrently.
#[derive(Debug)]
pub struct KvStore {
    config: StoreConfig,
    tables: BTreeMap<String, Table>,
    clock: u64,
    metadata: BTreeMap<String, String>,
    meter: Meter,
}

impl Default for KvStore {
    fn default() -> Self {
        Self::new(StoreConfig::default())
    }
}

impl KvStore {
    pub fn new(config: StoreConfig) -> Self {
        KvStore {
            config,
            tables: BTreeMap::new(),
            clock: 0,
            metadata: BTreeMap::new(),
            meter: Meter::default(),
        }
    }

    pub fn config(&self) -> StoreConfig {
        self.config
    }

    pub fn meter(&self) -> &Meter {
        &self.meter
    }

    pub fn table_names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    pub fn has_table(&self, table: &str) -> bool {
        self.tables.contains_key(table)
    }

    /// Free-form string metadata persisted alongside the tables.
    pub fn metadata(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(String::as_str)
    }

    pub fn set_metadata(&mut self, key: &str, value: &str) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    pub fn create_table(&mut self, name: &str) -> Result<()> {
        if name.is_empty()
            || name
                .chars()
                .any(|c| c.is_whitespace() || c == '/' || c == '\\')
        {
            return Err(KvError::InvalidTableName(name.to_string()));
        }
        if self.tables.contains_key(name) {
            return Err(KvError::TableExists(name.to_string()));
        }
        self.tables.insert(name.to_string(), Table::new(name));
        Ok(())
    }

    fn table(&self, name: &str) -> Result<&Table> {
        self.tables
            .get(name)
            .ok_or_else(|| KvError::UnknownTable(name.to_string()))
    }

    fn table_mut(&mut self, name: &str) -> Result<&mut Table> {
        self.tables
            .get_mut(name)
            .ok_or_else(|| KvError::UnknownTable(name.to_string()))
    }

    /// Writes a new cell version and returns its timestamp.
    pub fn put(
        &mut self,
        table: &str,
        row: &[u8],
        family: &str,
        column: &[u8],
        value: &[u8],
    ) -> Result<u64> {
        if row.is_empty() {
            return Err(KvError::EmptyRow);
        }
        if column.contains(&0) {
            return Err(KvError::InvalidColumn);
        }
        let max = self.config.max_region_size;
        let timestamp = self.clock + 1;
        let t = self.table_mut(table)?;
        if &*t.family != family {
            return Err(KvError::UnknownFamily {
                table: table.to_string(),
                family: family.to_string(),
            });
        }
        let size = cell_size(row.len(), t.family.len(), column.len(), value.len());
        let entry = t.rows.entry(row.to_vec()).or_default();
        entry
            .columns
            .entry(column.to_vec())
            .or_default()
            .push(Version {
                timestamp,
                value: value.to_vec(),
            });
        entry.size += size;
        let start = t.region_start_of(row);
        let region_size = t.regions.get_mut(&start).expect("region exists");
        *region_size += size;
        if *region_size > max {
            t.split_region(start, max);
        }
        self.clock = timestamp;
        Ok(timestamp)
    }

    /// Reads one row, keeping only the cells `filter` accepts. Counts as one GET.
    pub fn get(&self, table: &str, row: &[u8], filter: &FilterSpec) -> Result<RowResult> {
        let t = self.table(table)?;
        self.meter.record_get();
        let result = t
            .rows
            .get(row)
            .map(|r| build_row(&t.family, row, r, |c, v| filter.matches(c, v)))
            .unwrap_or_else(|| RowResult {
                row: row.to_vec(),
                cells: Vec::new(),
            });
        self.record_returned(&result);
        Ok(result)
    }

    /// Reads one row keeping cells accepted by at least one of `filters`.
    /// Counts as a single GET regardless of how many filters are given.
    pub fn get_multi(&self, table: &str, row: &[u8], filters: &[FilterSpec]) -> Result<RowResult> {
        let t = self.table(table)?;
        self.meter.record_get();
        let result = t
            .rows
            .get(row)
            .map(|r| build_row(&t.family, row, r, |c, v| filter::any_matches(filters, c, v)))
            .unwrap_or_else(|| RowResult {
                row: row.to_vec(),
                cells: Vec::new(),
            });
        self.record_returned(&result);
        Ok(result)
    }

    /// Unmetered existence check for one exact cell value.
    pub fn contains_value(
        &self,
        table: &str,
        row: &[u8],
        column: &[u8],
        value: &[u8],
    ) -> Result<bool> {
        let t = self.table(table)?;
        Ok(t.rows
            .get(row)
            .and_then(|r| r.columns.get(column))
            .is_some_and(|versions| versions.iter().any(|v| v.value == value)))
    }

    fn record_returned(&self, result: &RowResult) {
        if !result.cells.is_empty() {
            let bytes = result
                .cells
                .iter()
                .map(|c| {
                    cell_size(
                        result.row.len(),
                        c.family.len(),
                        c.column.len(),
                        c.value.len(),
                    )
                })
                .sum();
            self.meter.record_cells(result.cells.len() as u64, bytes);
        }
    }

    /// Rows in `[start_row, end_row)` in key order. Rows with no cell passing
    /// the filter are skipped but still count as scanned.
    pub fn scan(
        &self,
        table: &str,
        start_row: &[u8],
        end_row: Option<&[u8]>,
        filter: &FilterSpec,
    ) -> Result<Scanner<'_>> {
        if let Some(end) = end_row {
            if start_row > end {
                return Err(KvError::InvertedRange);
            }
        }
        let t = self.table(table)?;
        Ok(Scanner::new(
            t,
            start_row,
            end_row,
            filter.clone(),
            Some(&self.meter),
        ))
    }

    /// Every row of the table without metering. Used for dumps and persistence.
    pub fn dump(&self, table: &str) -> Result<Scanner<'_>> {
        let t = self.table(table)?;
        Ok(Scanner::new(t, &[], None, FilterSpec::None, None))
    }

    /// One stream per region, in region order.
    pub fn partitioned_scan(
        &self,
        table: &str,
        filter: &FilterSpec,
    ) -> Result<Vec<(usize, Scanner<'_>)>> {
        self.partitioned_scan_range(table, &[], None, filter)
    }

    /// Like [`KvStore::partitioned_scan`] but restricted to `[start_row, end_row)`.
    /// Regions outside the range still get an (empty) stream.
    pub fn partitioned_scan_range(
        &self,
        table: &str,
        start_row: &[u8],
        end_row: Option<&[u8]>,
        filter: &FilterSpec,
    ) -> Result<Vec<(usize, Scanner<'_>)>> {
        if let Some(end) = end_row {
            if start_row > end {
                return Err(KvError::InvertedRange);
            }
        }
        let t = self.table(table)?;
        let regions = t.region_list();
        let mut out = Vec::with_capacity(regions.len());
        for (id, region) in regions.iter().enumerate() {
            let lo = std::cmp::max(region.start_row.as_slice(), start_row);
            let hi = match (region.end_row.as_deref(), end_row) {
                (Some(a), Some(b)) => Some(std::cmp::min(a, b)),
                (Some(a), None) => Some(a),
                (None, b) => b,
            };
            // Clamp so the range is well-formed even when it misses the region.
            let hi = hi.map(|h| std::cmp::max(h, lo));
            out.push((
                id,
                Scanner::new(t, lo, hi, filter.clone(), Some(&self.meter)),
            ));
        }
        Ok(out)
    }

    pub fn regions(&self, table: &str) -> Result<Vec<Region>> {
        Ok(self.table(table)?.region_list())
    }

    /// Splits every oversized multi-row region and returns the resulting
    /// region list. Idempotent.
    pub fn split_check(&mut self, table: &str) -> Result<Vec<Region>> {
        let max = self.config.max_region_size;
        let t = self.table_mut(table)?;
        let starts: Vec<Vec<u8>> = t.regions.keys().cloned().collect();
        for start in starts {
            t.split_region(start, max);
        }
        Ok(t.region_list())
    }

    /// Total number of cell versions in a table.
    pub fn cell_count(&self, table: &str) -> Result<usize> {
        Ok(self
            .table(table)?
            .rows
            .values()
            .flat_map(|r| r.columns.values())
            .map(Vec::len)
            .sum())
    }

    pub fn row_count(&self, table: &str) -> Result<usize> {
        Ok(self.table(table)?.rows.len())
    }
}

fn build_row(
    family: &Arc<str>,
    key: &[u8],
    row: &Row,
    mut keep: impl FnMut(&[u8], &[u8]) -> bool,
) -> RowResult {
    let mut cells = Vec::new();
    for (column, versions) in &row.columns {
        for v in versions.iter().rev() {
            if keep(column, &v.value) {
                cells.push(Cell {
                    family: family.clone(),
                    column: column.clone(),
                    timestamp: v.timestamp,
                    value: v.value.clone(),
                });
            }
        }
    }
    RowResult {
        row: key.to_vec(),
        cells,
    }
}

/// Ordered stream of rows from one table.
pub struct Scanner<'a> {
    family: Arc<str>,
    rows: std::collections::btree_map::Range<'a, Vec<u8>, Row>,
    filter: FilterSpec,
    meter: Option<&'a Meter>,
}

impl<'a> Scanner<'a> {
    fn new(
        table: &'a Table,
        start: &[u8],
        end: Option<&[u8]>,
        filter: FilterSpec,
        meter: Option<&'a Meter>,
    ) -> Self {
        let upper = match end {
            Some(e) => Bound::Excluded(e),
            None => Bound::Unbounded,
        };
        Scanner {
            family: table.family.clone(),
            rows: table.rows.range::<[u8], _>((Bound::Included(start), upper)),
            filter,
            meter,
        }
    }
}

impl Iterator for Scanner<'_> {
    type Item = RowResult;

    fn next(&mut self) -> Option<RowResult> {
        for (key, row) in self.rows.by_ref() {
            if let Some(m) = self.meter {
                m.record_row_scanned();
            }
            let result = build_row(&self.family, key, row, |c, v| self.filter.matches(c, v));
            if result.cells.is_empty() {
                continue;
            }
            if let Some(m) = self.meter {
                let bytes = result
                    .cells
                    .iter()
                    .map(|c| cell_size(key.len(), c.family.len(), c.column.len(), c.value.len()))
                    .sum();
                m.record_cells(result.cells.len() as u64, bytes);
            }
            return Some(result);
        }
        None
    }
}
