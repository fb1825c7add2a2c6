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

//! SPARQL basic graph pattern evaluation over an embedded Bigtable-style
//! store using map-side index nested loop joins.
//!
//! Layers, bottom up: [`kvstore`] (sorted tables with regions and metering),
//! [`rdf`] (two-table triple schema and pattern routing), [`sparql`] (query
//! model and parser), [`planner`], [`executor`], and the reference engines in
//! [`baseline`]. [`datagen`] produces synthetic input and [`engine`] ties the
//! engines together behind one call.

pub mod baseline;
pub mod datagen;
pub mod engine;
pub mod executor;
pub mod kvstore;
pub mod planner;
pub mod rdf;
pub mod sparql;
