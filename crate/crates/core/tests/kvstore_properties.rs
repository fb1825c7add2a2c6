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

use mapsin_core::kvstore::{FilterSpec, KvStore, RowResult, StoreConfig, DEFAULT_FAMILY};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Put {
    row: Vec<u8>,
    column: Vec<u8>,
    value: Vec<u8>,
}

fn arb_put() -> impl Strategy<Value = Put> {
    (
        proptest::collection::vec(
            prop_oneof![Just(b'a'), Just(b'b'), Just(b'c'), Just(0u8)],
            1..4,
        ),
        proptest::collection::vec(prop_oneof![Just(b'x'), Just(b'y')], 1..3),
        proptest::collection::vec(any::<u8>(), 0..60),
    )
        .prop_map(|(row, column, value)| Put { row, column, value })
}

fn load(puts: &[Put], max_region_size: u64) -> KvStore {
    let mut kv = KvStore::new(StoreConfig { max_region_size });
    kv.create_table("t").unwrap();
    for p in puts {
        kv.put("t", &p.row, DEFAULT_FAMILY, &p.column, &p.value)
            .unwrap();
    }
    kv
}

fn full_scan(kv: &KvStore, filter: &FilterSpec) -> Vec<RowResult> {
    kv.scan("t", &[], None, filter).unwrap().collect()
}

fn arb_filter() -> impl Strategy<Value = FilterSpec> {
    prop_oneof![
        Just(FilterSpec::None),
        Just(FilterSpec::ColumnEquals(b"x".to_vec())),
        Just(FilterSpec::ColumnEquals(b"xy".to_vec())),
        proptest::collection::vec(any::<u8>(), 0..2).prop_map(FilterSpec::ValueEquals),
        Just(FilterSpec::ColumnAndValueEquals {
            column: b"y".to_vec(),
            value: Vec::new()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partitions_concatenate_to_full_scan(puts in proptest::collection::vec(arb_put(), 0..120), filter in arb_filter()) {
        let kv = load(&puts, 400);
        let concatenated: Vec<RowResult> = kv
            .partitioned_scan("t", &filter)
            .unwrap()
            .into_iter()
            .flat_map(|(_, s)| s)
            .collect();
        prop_assert_eq!(concatenated, full_scan(&kv, &filter));
    }

    #[test]
    fn regions_cover_key_space_and_respect_size(puts in proptest::collection::vec(arb_put(), 0..150), max in 100u64..600) {
        let mut kv = load(&puts, max);
        kv.split_check("t").unwrap();
        let regions = kv.regions("t").unwrap();
        prop_assert!(regions[0].start_row.is_empty());
        prop_assert!(regions.last().unwrap().end_row.is_none());
        for pair in regions.windows(2) {
            prop_assert_eq!(pair[0].end_row.as_ref(), Some(&pair[1].start_row));
            prop_assert!(pair[0].start_row < pair[1].start_row);
        }
        for r in &regions {
            let rows = kv.scan("t", &r.start_row, r.end_row.as_deref(), &FilterSpec::None).unwrap().count();
            prop_assert!(r.size <= max || rows == 1, "region of {} bytes with {} rows", r.size, rows);
        }
    }

    #[test]
    fn server_filter_equals_client_filter(puts in proptest::collection::vec(arb_put(), 1..60), filter in arb_filter()) {
        let kv = load(&puts, 1 << 20);
        for p in &puts {
            let server = kv.get("t", &p.row, &filter).unwrap();
            let mut client = kv.get("t", &p.row, &FilterSpec::None).unwrap();
            client.cells.retain(|c| filter.matches(&c.column, &c.value));
            prop_assert_eq!(server, client);
        }
    }

    #[test]
    fn every_version_is_kept_with_increasing_timestamps(puts in proptest::collection::vec(arb_put(), 1..60)) {
        let kv = load(&puts, 1 << 20);
        for p in &puts {
            let row = kv.get("t", &p.row, &FilterSpec::ColumnEquals(p.column.clone())).unwrap();
            let written = puts.iter().filter(|q| q.row == p.row && q.column == p.column).count();
            prop_assert_eq!(row.cells.len(), written);
            for pair in row.cells.windows(2) {
                prop_assert!(pair[0].timestamp > pair[1].timestamp);
            }
            prop_assert!(row.cells.iter().any(|c| c.value == p.value));
        }
    }

    #[test]
    fn persist_open_is_identity(puts in proptest::collection::vec(arb_put(), 0..80), filter in arb_filter()) {
        let kv = load(&puts, 300);
        let dir = tempfile::tempdir().unwrap();
        kv.persist(dir.path()).unwrap();
        let back = KvStore::open(dir.path()).unwrap();
        prop_assert_eq!(back.regions("t").unwrap(), kv.regions("t").unwrap());
        prop_assert_eq!(full_scan(&back, &filter), full_scan(&kv, &filter));
        for p in &puts {
            prop_assert_eq!(back.get("t", &p.row, &filter).unwrap(), kv.get("t", &p.row, &filter).unwrap());
        }
    }
}

#[test]
fn open_rejects_truncated_table_file() {
    let kv = load(
        &[Put {
            row: b"r".to_vec(),
            column: b"c".to_vec(),
            value: b"v".to_vec(),
        }],
        1 << 20,
    );
    let dir = tempfile::tempdir().unwrap();
    kv.persist(dir.path()).unwrap();
    let file = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "tbl"))
        .unwrap();
    let bytes = std::fs::read(&file).unwrap();
    std::fs::write(&file, &bytes[..bytes.len() - 3]).unwrap();
    assert!(KvStore::open(dir.path()).is_err());
}
