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

//! RDF layer over the sorted-map store.
//!
//! Triples live in two tables. `T_spo` is keyed by subject with the predicate
//! as column and the object as value; `T_ops` is keyed by object with the
//! subject as value. Triples whose predicate is the configured class
//! predicate are keyed in `T_ops` by the compound row `enc(o) 0x00 enc(s)`, so
//! the members of a large class spread over many small rows.

mod ntriples;
mod routing;
mod store;
mod term;

pub use ntriples::{format_triple, parse_line, write_ntriples};
pub use routing::{Access, AccessPlan, Router, TableId};
pub use store::{
    LoadStats, ParseError, RdfConfig, RowSide, TableStats, TripleStore, DEFAULT_CLASS_PREDICATE,
};
pub use term::{Term, TermKind, Triple};

use crate::kvstore::KvError;

#[derive(Debug, thiserror::Error)]
pub enum RdfError {
    #[error(transparent)]
    Kv(#[from] KvError),
    #[error("malformed term encoding: {0}")]
    MalformedEncoding(String),
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("store is not writable")]
    NotWritable,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = RdfError> = std::result::Result<T, E>;
