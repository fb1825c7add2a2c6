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

//! Server-side cell filters.

use serde::{Deserialize, Serialize};

/// Predicate applied to every cell of a row before it leaves the store.
///
/// Each variant carries exactly the operands its kind needs, so a column
/// filter can never be built without a column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum FilterSpec {
    #[default]
    None,
    ColumnEquals(Vec<u8>),
    ValueEquals(Vec<u8>),
    ColumnAndValueEquals {
        column: Vec<u8>,
        value: Vec<u8>,
    },
}

/// Discriminant of a [`FilterSpec`], used where only the shape matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterKind {
    None,
    Column,
    Value,
    ColumnAndValue,
}

impl FilterSpec {
    pub fn kind(&self) -> FilterKind {
        match self {
            FilterSpec::None => FilterKind::None,
            FilterSpec::ColumnEquals(_) => FilterKind::Column,
            FilterSpec::ValueEquals(_) => FilterKind::Value,
            FilterSpec::ColumnAndValueEquals { .. } => FilterKind::ColumnAndValue,
        }
    }

    pub fn column(&self) -> Option<&[u8]> {
        match self {
            FilterSpec::ColumnEquals(c) | FilterSpec::ColumnAndValueEquals { column: c, .. } => {
                Some(c)
            }
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&[u8]> {
        match self {
            FilterSpec::ValueEquals(v) | FilterSpec::ColumnAndValueEquals { value: v, .. } => {
                Some(v)
            }
            _ => None,
        }
    }

    #[inline]
    pub fn matches(&self, column: &[u8], value: &[u8]) -> bool {
        match self {
            FilterSpec::None => true,
            FilterSpec::ColumnEquals(c) => c.as_slice() == column,
            FilterSpec::ValueEquals(v) => v.as_slice() == value,
            FilterSpec::ColumnAndValueEquals {
                column: c,
                value: v,
            } => c.as_slice() == column && v.as_slice() == value,
        }
    }
}

/// True when any filter in `filters` accepts the cell (a disjunctive filter list).
pub(crate) fn any_matches(filters: &[FilterSpec], column: &[u8], value: &[u8]) -> bool {
    filters.iter().any(|f| f.matches(column, value))
}
