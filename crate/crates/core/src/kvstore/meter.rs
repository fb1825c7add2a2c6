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

use std::ops::Sub;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

/// Read-side counters maintained by the store itself.
#[derive(Debug, Default)]
pub struct Meter {
    gets: AtomicU64,
    rows_scanned: AtomicU64,
    cells_returned: AtomicU64,
    bytes_returned: AtomicU64,
}

/// Point-in-time copy of a [`Meter`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeterSnapshot {
    pub gets: u64,
    pub rows_scanned: u64,
    pub cells_returned: u64,
    pub bytes_returned: u64,
}

impl Meter {
    pub fn snapshot(&self) -> MeterSnapshot {
        MeterSnapshot {
            gets: self.gets.load(Ordering::SeqCst),
            rows_scanned: self.rows_scanned.load(Ordering::SeqCst),
            cells_returned: self.cells_returned.load(Ordering::SeqCst),
            bytes_returned: self.bytes_returned.load(Ordering::SeqCst),
        }
    }

    pub(crate) fn record_get(&self) {
        self.gets.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_row_scanned(&self) {
        self.rows_scanned.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn record_cells(&self, cells: u64, bytes: u64) {
        self.cells_returned.fetch_add(cells, Ordering::Relaxed);
        self.bytes_returned.fetch_add(bytes, Ordering::Relaxed);
    }
}

impl Sub for MeterSnapshot {
    type Output = MeterSnapshot;

    fn sub(self, rhs: Self) -> Self::Output {
        MeterSnapshot {
            gets: self.gets - rhs.gets,
            rows_scanned: self.rows_scanned - rhs.rows_scanned,
            cells_returned: self.cells_returned - rhs.cells_returned,
            bytes_returned: self.bytes_returned - rhs.bytes_returned,
        }
    }
}
