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

//! On-disk layout.
//!
//! Each table is written to `<table>.tbl` as a sorted run of records:
//!
//! ```text
//! [u32 key length][key][u32 value length][value]   (repeated, ascending key order)
//! [u64 CRC-64/XZ over every record byte]
//! ```
//!
//! where `key = row 0x00 family 0x00 column 0x00 (u64::MAX - timestamp)`, so
//! newer versions of a cell sort first. All integers are big-endian.
//!
//! A `MANIFEST` file lists the tables, their region boundaries, the logical
//! clock and store metadata as newline-delimited records.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{KvError, KvStore, Result, Row, StoreConfig, Table, Version};

const MANIFEST: &str = "MANIFEST";
const MAGIC: &str = "mapsin-kv 1";

/// Start row and exclusive end row (`None` for the last region).
type RegionBounds = (Vec<u8>, Option<Vec<u8>>);
const CRC64: crc::Crc<u64> = crc::Crc::<u64>::new(&crc::CRC_64_XZ);

/// Full address of one cell version.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub table: String,
    pub row: Vec<u8>,
    pub family: String,
    pub column: Vec<u8>,
    pub timestamp: u64,
}

impl CellKey {
    /// Record key bytes (the table is implied by the file).
    pub fn encode(&self) -> Vec<u8> {
        let mut out =
            Vec::with_capacity(self.row.len() + self.family.len() + self.column.len() + 11);
        out.extend_from_slice(&self.row);
        out.push(0);
        out.extend_from_slice(self.family.as_bytes());
        out.push(0);
        out.extend_from_slice(&self.column);
        out.push(0);
        out.extend_from_slice(&(u64::MAX - self.timestamp).to_be_bytes());
        out
    }

    /// Parses a record key from the right: family and column never contain
    /// 0x00, the row may.
    pub fn decode(table: &str, key: &[u8]) -> Option<CellKey> {
        if key.len() < 8 + 3 {
            return None;
        }
        let (head, ts) = key.split_at(key.len() - 8);
        let timestamp = u64::MAX - u64::from_be_bytes(ts.try_into().ok()?);
        let head = head.strip_suffix(&[0])?;
        let col_sep = head.iter().rposition(|&b| b == 0)?;
        let column = head[col_sep + 1..].to_vec();
        let head = &head[..col_sep];
        let fam_sep = head.iter().rposition(|&b| b == 0)?;
        let family = String::from_utf8(head[fam_sep + 1..].to_vec()).ok()?;
        let row = head[..fam_sep].to_vec();
        if row.is_empty() {
            return None;
        }
        Some(CellKey {
            table: table.to_string(),
            row,
            family,
            column,
            timestamp,
        })
    }
}

fn corrupt(path: &Path, reason: impl Into<String>) -> KvError {
    KvError::Corrupt {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn table_file(dir: &Path, table: &str) -> PathBuf {
    dir.join(format!("{table}.tbl"))
}

fn hex_key(key: &[u8]) -> String {
    format!("x{}", hex::encode(key))
}

fn parse_hex_key(s: &str) -> Option<Vec<u8>> {
    hex::decode(s.strip_prefix('x')?).ok()
}

impl KvStore {
    /// Writes every table and the manifest into `dir`, creating it if needed.
    pub fn persist(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        for table in self.tables.values() {
            write_table(&table_file(dir, &table.name), table)?;
        }
        let mut manifest = String::new();
        manifest.push_str(MAGIC);
        manifest.push('\n');
        manifest.push_str(&format!("clock {}\n", self.clock));
        manifest.push_str(&format!(
            "max_region_size {}\n",
            self.config.max_region_size
        ));
        for (k, v) in &self.metadata {
            manifest.push_str(&format!(
                "meta {} {}\n",
                hex_key(k.as_bytes()),
                hex_key(v.as_bytes())
            ));
        }
        for table in self.tables.values() {
            manifest.push_str(&format!("table {} {}\n", table.name, table.family));
            for region in table.region_list() {
                let end = region.end_row.as_deref().map_or("*".to_string(), hex_key);
                manifest.push_str(&format!(
                    "region {} {} {}\n",
                    table.name,
                    hex_key(&region.start_row),
                    end
                ));
            }
        }
        fs::write(dir.join(MANIFEST), manifest)?;
        Ok(())
    }

    /// Opens a store previously written by [`KvStore::persist`]. A directory
    /// without a manifest yields an empty store with the default config.
    pub fn open(dir: impl AsRef<Path>) -> Result<KvStore> {
        let dir = dir.as_ref();
        let manifest_path = dir.join(MANIFEST);
        if !manifest_path.exists() {
            if !dir.is_dir() {
                return Err(KvError::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{} is not a directory", dir.display()),
                )));
            }
            return Ok(KvStore::default());
        }
        let text = fs::read_to_string(&manifest_path)?;
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(corrupt(&manifest_path, "bad manifest header"));
        }
        let mut store = KvStore::default();
        let mut boundaries: BTreeMap<String, Vec<RegionBounds>> = BTreeMap::new();
        let mut families: BTreeMap<String, String> = BTreeMap::new();
        for (n, line) in lines.enumerate() {
            let bad = || {
                corrupt(
                    &manifest_path,
                    format!("malformed record on line {}", n + 2),
                )
            };
            let fields: Vec<&str> = line.split(' ').collect();
            match fields.as_slice() {
                ["clock", v] => store.clock = v.parse().map_err(|_| bad())?,
                ["max_region_size", v] => {
                    store.config = StoreConfig {
                        max_region_size: v.parse().map_err(|_| bad())?,
                    }
                }
                ["meta", k, v] => {
                    let k =
                        String::from_utf8(parse_hex_key(k).ok_or_else(bad)?).map_err(|_| bad())?;
                    let v =
                        String::from_utf8(parse_hex_key(v).ok_or_else(bad)?).map_err(|_| bad())?;
                    store.metadata.insert(k, v);
                }
                ["table", name, family] => {
                    families.insert(name.to_string(), family.to_string());
                }
                ["region", name, start, end] => {
                    let start = parse_hex_key(start).ok_or_else(bad)?;
                    let end = if *end == "*" {
                        None
                    } else {
                        Some(parse_hex_key(end).ok_or_else(bad)?)
                    };
                    boundaries
                        .entry(name.to_string())
                        .or_default()
                        .push((start, end));
                }
                [""] => {}
                _ => return Err(bad()),
            }
        }
        for (name, family) in families {
            let mut table = Table::new(&name);
            if *table.family != family {
                return Err(corrupt(
                    &manifest_path,
                    format!("unsupported family `{family}`"),
                ));
            }
            read_table(&table_file(dir, &name), &mut table)?;
            let regions = boundaries.remove(&name).unwrap_or_default();
            table.regions.clear();
            let mut expected_start: Vec<u8> = Vec::new();
            let mut open_ended = false;
            for (start, end) in regions {
                if open_ended || start != expected_start {
                    return Err(corrupt(&manifest_path, format!("region gap in `{name}`")));
                }
                table.regions.insert(start, 0);
                match end {
                    Some(e) => expected_start = e,
                    None => open_ended = true,
                }
            }
            if !open_ended {
                return Err(corrupt(
                    &manifest_path,
                    format!("regions of `{name}` do not cover the key space"),
                ));
            }
            table.recompute_region_sizes();
            store.tables.insert(name, table);
        }
        if let Some(name) = boundaries.keys().next() {
            return Err(corrupt(
                &manifest_path,
                format!("regions for unknown table `{name}`"),
            ));
        }
        Ok(store)
    }
}

fn write_table(path: &Path, table: &Table) -> Result<()> {
    let mut records: Vec<(Vec<u8>, &[u8])> = Vec::new();
    for (row, r) in &table.rows {
        for (column, versions) in &r.columns {
            for v in versions {
                let key = CellKey {
                    table: table.name.clone(),
                    row: row.clone(),
                    family: table.family.to_string(),
                    column: column.clone(),
                    timestamp: v.timestamp,
                };
                records.push((key.encode(), &v.value));
            }
        }
    }
    records.sort_by(|a, b| a.0.cmp(&b.0));
    let mut digest = CRC64.digest();
    let mut out = BufWriter::new(fs::File::create(path)?);
    for (key, value) in &records {
        for chunk in [
            &(key.len() as u32).to_be_bytes()[..],
            key,
            &(value.len() as u32).to_be_bytes()[..],
            value,
        ] {
            digest.update(chunk);
            out.write_all(chunk)?;
        }
    }
    out.write_all(&digest.finalize().to_be_bytes())?;
    out.flush()?;
    Ok(())
}

fn read_table(path: &Path, table: &mut Table) -> Result<()> {
    let bytes = fs::read(path)?;
    if bytes.len() < 8 {
        return Err(corrupt(path, "file shorter than checksum trailer"));
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_be_bytes(trailer.try_into().expect("8 bytes"));
    if CRC64.checksum(body) != stored {
        return Err(corrupt(path, "checksum mismatch"));
    }
    let mut rest = body;
    let mut take = |n: usize| -> Result<&[u8]> {
        if rest.len() < n {
            return Err(corrupt(path, "truncated record"));
        }
        let (head, tail) = rest.split_at(n);
        rest = tail;
        Ok(head)
    };
    let mut prev_key: Option<Vec<u8>> = None;
    let mut consumed = 0usize;
    while consumed < body.len() {
        let klen = u32::from_be_bytes(take(4)?.try_into().expect("4 bytes")) as usize;
        let key = take(klen)?.to_vec();
        let vlen = u32::from_be_bytes(take(4)?.try_into().expect("4 bytes")) as usize;
        let value = take(vlen)?.to_vec();
        if prev_key.as_ref().is_some_and(|p| *p >= key) {
            return Err(corrupt(path, "records out of order"));
        }
        let cell =
            CellKey::decode(&table.name, &key).ok_or_else(|| corrupt(path, "malformed key"))?;
        if cell.family != *table.family {
            return Err(corrupt(path, "cell outside the table's column family"));
        }
        let size = super::cell_size(
            cell.row.len(),
            cell.family.len(),
            cell.column.len(),
            value.len(),
        );
        let row: &mut Row = table.rows.entry(cell.row).or_default();
        row.size += size;
        row.columns.entry(cell.column).or_default().push(Version {
            timestamp: cell.timestamp,
            value,
        });
        consumed += 8 + klen + vlen;
        prev_key = Some(key);
    }
    for row in table.rows.values_mut() {
        for versions in row.columns.values_mut() {
            versions.sort_by_key(|v| v.timestamp);
        }
    }
    Ok(())
}
