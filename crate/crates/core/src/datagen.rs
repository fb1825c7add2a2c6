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

//! Deterministic synthetic data in the N-Triples subset the loader reads.
//!
//! Each entity gets one class assignment, a number of attribute triples with
//! literal objects and a number of link triples pointing at other entities.
//! Attribute `a` of an entity uses predicate `attr{a}` and link `l` uses
//! `link{l}`, so no entity emits the same triple twice.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rdf::{format_triple, Term, Triple, DEFAULT_CLASS_PREDICATE};

pub const NAMESPACE: &str = "http://example.org/";

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("io failure: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub entities: usize,
    pub classes: usize,
    /// Inclusive range of attribute triples per entity.
    pub attributes: (usize, usize),
    /// Inclusive range of link triples per entity.
    pub links: (usize, usize),
    /// Probability that an entity belongs to the first class; otherwise the
    /// class is uniform over all classes.
    pub class_skew: f64,
    /// Number of distinct literal values per attribute.
    pub attribute_values: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            entities: 100,
            classes: 4,
            attributes: (1, 4),
            links: (0, 2),
            class_skew: 0.5,
            attribute_values: 16,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidConfig(m.to_string()));
        if self.entities == 0 {
            return bad("entities must be positive");
        }
        if self.classes == 0 {
            return bad("classes must be positive");
        }
        if self.attribute_values == 0 {
            return bad("attribute_values must be positive");
        }
        if self.attributes.0 > self.attributes.1 || self.links.0 > self.links.1 {
            return bad("count ranges must have min <= max");
        }
        if !(self.class_skew > 0.0 && self.class_skew <= 1.0) {
            return bad("class_skew must lie in (0, 1]");
        }
        Ok(())
    }

    /// Smallest and largest possible triple count.
    pub fn triple_count_bounds(&self) -> (usize, usize) {
        (
            self.entities * (1 + self.attributes.0 + self.links.0),
            self.entities * (1 + self.attributes.1 + self.links.1),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenSummary {
    pub triples: usize,
    pub class_triples: usize,
    pub attribute_triples: usize,
    pub link_triples: usize,
}

pub fn entity_iri(i: usize) -> String {
    format!("{NAMESPACE}entity{i}")
}

pub fn class_iri(c: usize) -> String {
    format!("{NAMESPACE}Class{c}")
}

pub fn attribute_iri(a: usize) -> String {
    format!("{NAMESPACE}attr{a}")
}

pub fn link_iri(l: usize) -> String {
    format!("{NAMESPACE}link{l}")
}

pub fn attribute_value(v: usize) -> String {
    format!("v{v}")
}

/// Generates the triples in emission order.
pub fn generate_triples(config: &GenConfig) -> Result<(Vec<Triple>, GenSummary), GenError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let class_pred = Term::iri(DEFAULT_CLASS_PREDICATE);
    let mut triples = Vec::new();
    let mut summary = GenSummary::default();
    let triple = |s: &str, p: &str, o: Term| {
        Triple::new(Term::iri(s), Term::iri(p), o).expect("generated IRIs")
    };
    for i in 0..config.entities {
        let subject = entity_iri(i);
        let class = if rng.gen_bool(config.class_skew) {
            0
        } else {
            rng.gen_range(0..config.classes)
        };
        triples.push(
            Triple::new(
                Term::iri(&subject),
                class_pred.clone(),
                Term::iri(&class_iri(class)),
            )
            .expect("generated IRIs"),
        );
        summary.class_triples += 1;
        let attrs = rng.gen_range(config.attributes.0..=config.attributes.1);
        for a in 0..attrs {
            let value = rng.gen_range(0..config.attribute_values);
            triples.push(triple(
                &subject,
                &attribute_iri(a),
                Term::literal(&attribute_value(value)),
            ));
            summary.attribute_triples += 1;
        }
        let links = rng.gen_range(config.links.0..=config.links.1);
        for l in 0..links {
            let target = rng.gen_range(0..config.entities);
            triples.push(triple(
                &subject,
                &link_iri(l),
                Term::iri(&entity_iri(target)),
            ));
            summary.link_triples += 1;
        }
    }
    summary.triples = triples.len();
    Ok((triples, summary))
}

/// Writes the generated data as N-Triples.
pub fn generate(config: &GenConfig, out: &mut impl Write) -> Result<GenSummary, GenError> {
    let (triples, summary) = generate_triples(config)?;
    for t in &triples {
        writeln!(out, "{}", format_triple(t))?;
    }
    Ok(summary)
}
