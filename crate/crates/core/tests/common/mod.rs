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

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use mapsin_core::datagen::{generate_triples, GenConfig};
use mapsin_core::rdf::{RdfConfig, Term, Triple, TripleStore};
use mapsin_core::sparql::{
    BasicGraphPattern, MappingMultiset, PatternTerm, Projection, TriplePattern, Variable,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Canonical, engine-independent form of a result multiset.
pub type Canon = Vec<Vec<(String, String)>>;

pub fn canon(results: &MappingMultiset) -> Canon {
    let mut rows: Canon = results
        .iter()
        .map(|m| {
            m.iter()
                .map(|(v, t)| (v.name().to_string(), t.to_string()))
                .collect()
        })
        .collect();
    rows.sort();
    rows
}

pub fn article_triples() -> Vec<Triple> {
    let t = |s: &str, p: &str, o: Term| Triple::new(Term::iri(s), Term::iri(p), o).unwrap();
    vec![
        t("Article1", "title", Term::literal("PigSPARQL")),
        t("Article1", "year", Term::literal("2011")),
        t("Article1", "author", Term::iri("Alex")),
        t("Article1", "author", Term::iri("Martin")),
        t("Article2", "title", Term::literal("RDFPath")),
        t("Article2", "year", Term::literal("2011")),
        t("Article2", "author", Term::iri("Martin")),
        t("Article2", "author", Term::iri("Alex")),
        t("Article2", "cite", Term::iri("Article1")),
    ]
}

pub fn store_with(triples: &[Triple], config: RdfConfig) -> TripleStore {
    let mut store = TripleStore::new(config).unwrap();
    for t in triples {
        store.store_triple(t).unwrap();
    }
    store
}

pub const ARTICLE_QUERY: &str = "SELECT * WHERE {\n  ?article title ?title .\n  ?article author ?author .\n  ?article year ?year\n}";

/// Nested-loop evaluation written independently of the library: matches
/// pattern slots directly and joins partial solutions held as maps.
/// Returns `None` once any intermediate result exceeds `budget`.
pub fn brute_force(bgp: &BasicGraphPattern, triples: &[Triple], budget: usize) -> Option<Canon> {
    fn slot(p: &PatternTerm, t: &Term, row: &mut BTreeMap<String, Term>) -> bool {
        match p {
            PatternTerm::Term(c) => c == t,
            PatternTerm::Var(v) => match row.get(v.name()) {
                Some(bound) => bound == t,
                None => {
                    row.insert(v.name().to_string(), t.clone());
                    true
                }
            },
        }
    }
    let mut rows: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for p in bgp.patterns() {
        let mut next = Vec::new();
        for row in &rows {
            for t in triples {
                let mut r = row.clone();
                if slot(&p.subject, &t.subject, &mut r)
                    && slot(&p.predicate, &t.predicate, &mut r)
                    && slot(&p.object, &t.object, &mut r)
                {
                    next.push(r);
                }
            }
            if next.len() > budget {
                return None;
            }
        }
        rows = next;
    }
    let vars = bgp.projected_variables();
    let mut out: Canon = rows
        .into_iter()
        .map(|r| {
            let mut cols: Vec<(String, String)> = vars
                .iter()
                .filter_map(|v| {
                    r.get(v.name())
                        .map(|t| (v.name().to_string(), t.to_string()))
                })
                .collect();
            for (v, t) in bgp.fixed() {
                if vars.contains(v) {
                    cols.push((v.name().to_string(), t.to_string()));
                }
            }
            cols.sort();
            cols
        })
        .collect();
    out.sort();
    Some(out)
}

/// Generator settings for the random suite: `index` picks one of a spread
/// of sizes between roughly 1k and 10k triples.
pub fn suite_config(index: usize) -> GenConfig {
    GenConfig {
        seed: 1000 + index as u64,
        entities: 250 + index * 210,
        classes: 3 + index % 4,
        attributes: (1, 4),
        links: (0, 2),
        class_skew: 0.4,
        attribute_values: 40,
    }
}

/// Random connected BGP of 1..=5 patterns drawn from a walk over the data,
/// so most queries have answers. Some constants are swapped for others to
/// produce empty results too.
pub fn random_bgp(
    rng: &mut ChaCha8Rng,
    triples: &[Triple],
    index: &TermIndex,
) -> BasicGraphPattern {
    let n = rng.gen_range(1..=5);
    let mut vars: BTreeMap<Term, Variable> = BTreeMap::new();
    let mut next_var = 0;
    let mut fresh = |vars: &mut BTreeMap<Term, Variable>, t: &Term| -> Variable {
        vars.entry(t.clone())
            .or_insert_with(|| {
                next_var += 1;
                Variable::new(&format!("v{next_var}"))
            })
            .clone()
    };
    let mut patterns = Vec::new();
    let first = triples.choose(rng).unwrap().clone();
    let mut current = first;
    let mut anchor = current.subject.clone();
    for i in 0..n {
        if i > 0 {
            // Continue from a term that already became a variable.
            let candidates: Vec<Term> = vars
                .keys()
                .filter(|t| index.touching(t).next().is_some())
                .cloned()
                .collect();
            let Some(a) = candidates.choose(rng) else {
                break;
            };
            anchor = a.clone();
            let touching: Vec<&Triple> = index.touching(&anchor).collect();
            current = (*touching.choose(rng).unwrap()).clone();
        }
        let mut term = |t: &Term,
                        pos: usize,
                        vars: &mut BTreeMap<Term, Variable>,
                        rng: &mut ChaCha8Rng|
         -> PatternTerm {
            if *t == anchor || (i == 0 && pos == 0) {
                return PatternTerm::Var(fresh(vars, t));
            }
            if vars.contains_key(t) && rng.gen_bool(0.7) {
                return PatternTerm::Var(vars[t].clone());
            }
            let p_var = match pos {
                0 => 0.5,
                1 => 0.15,
                _ => 0.5,
            };
            if rng.gen_bool(p_var) {
                return PatternTerm::Var(fresh(vars, t));
            }
            if pos == 2 && rng.gen_bool(0.1) {
                // A constant that may not fit: exercises empty joins.
                let other = triples.choose(rng).unwrap();
                return PatternTerm::Term(other.object.clone());
            }
            PatternTerm::Term(t.clone())
        };
        let s = term(&current.subject, 0, &mut vars, rng);
        let p = term(&current.predicate, 1, &mut vars, rng);
        let o = term(&current.object, 2, &mut vars, rng);
        patterns.push(TriplePattern::new(s, p, o));
    }
    let draft = BasicGraphPattern::new(patterns.clone(), Projection::All).unwrap();
    let all = draft.variables();
    let projection = if rng.gen_bool(0.5) || all.is_empty() {
        Projection::All
    } else {
        let mut chosen: Vec<Variable> = all.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if chosen.is_empty() {
            chosen.push(all[0].clone());
        }
        Projection::Vars(chosen)
    };
    BasicGraphPattern::new(patterns, projection).unwrap()
}

/// Triples by subject and object term.
pub struct TermIndex {
    by_term: HashMap<Term, Vec<usize>>,
    triples: Vec<Triple>,
}

impl TermIndex {
    pub fn new(triples: &[Triple]) -> TermIndex {
        let mut by_term: HashMap<Term, Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_term.entry(t.subject.clone()).or_default().push(i);
            if t.object != t.subject {
                by_term.entry(t.object.clone()).or_default().push(i);
            }
        }
        TermIndex {
            by_term,
            triples: triples.to_vec(),
        }
    }

    pub fn touching<'a>(&'a self, t: &Term) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_term
            .get(t)
            .into_iter()
            .flatten()
            .map(move |&i| &self.triples[i])
    }
}

pub struct SuiteCase {
    pub bgp: BasicGraphPattern,
    pub expected: Canon,
}

pub struct SuiteDataset {
    pub config: GenConfig,
    pub triples: Vec<Triple>,
    pub store: TripleStore,
    pub cases: Vec<SuiteCase>,
}

/// Region size for the suite stores: small enough that every table spans
/// many regions, so stages run over many partitions.
pub const SUITE_REGION_SIZE: u64 = 16 * 1024;

/// Intermediate-result cap for generated queries, keeping the nested-loop
/// oracles fast.
pub const SUITE_BUDGET: usize = 400;

/// `datasets` generated datasets with `per_dataset` random queries each,
/// expected results computed by [`brute_force`].
pub fn build_suite(datasets: usize, per_dataset: usize) -> Vec<SuiteDataset> {
    (0..datasets)
        .map(|d| {
            let config = suite_config(d);
            let (triples, _) = generate_triples(&config).unwrap();
            let mut text = Vec::new();
            mapsin_core::rdf::write_ntriples(&mut text, &triples).unwrap();
            let mut store = TripleStore::new(RdfConfig {
                max_region_size: SUITE_REGION_SIZE,
                ..RdfConfig::default()
            })
            .unwrap();
            let stats = store.load_ntriples(text.as_slice()).unwrap();
            assert!(stats.parse_errors.is_empty());
            let index = TermIndex::new(&triples);
            let mut rng = ChaCha8Rng::seed_from_u64(77 + d as u64);
            let mut cases = Vec::new();
            while cases.len() < per_dataset {
                let bgp = random_bgp(&mut rng, &triples, &index);
                if let Some(expected) = brute_force(&bgp, &triples, SUITE_BUDGET) {
                    cases.push(SuiteCase { bgp, expected });
                }
            }
            SuiteDataset {
                config,
                triples,
                store,
                cases,
            }
        })
        .collect()
}
