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

//! Python bindings: a `Store` class plus `generate` and `parse_query`.
//!
//! Terms cross the boundary as strings in N-Triples form (`<iri>`,
//! `"literal"`), statistics as plain dicts.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use mapsin_core::datagen::{self, GenConfig, GenError};
use mapsin_core::engine::{run_query, Engine, EngineError};
use mapsin_core::executor::ExecConfig;
use mapsin_core::planner::{plan, PlanMode};
use mapsin_core::rdf::{RdfConfig, RdfError, Term, TripleStore, DEFAULT_CLASS_PREDICATE};
use mapsin_core::sparql::{parse_query as parse, SparqlError};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn store_err(e: RdfError) -> PyErr {
    match e {
        RdfError::InvalidTerm(_) | RdfError::MalformedEncoding(_) => {
            PyValueError::new_err(e.to_string())
        }
        RdfError::NotWritable | RdfError::PreconditionViolation(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyIOError::new_err(other.to_string()),
    }
}

fn query_err(e: SparqlError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn engine_err(e: EngineError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn gen_err(e: GenError) -> PyErr {
    match e {
        GenError::InvalidConfig(m) => PyValueError::new_err(m),
        GenError::Io(e) => PyIOError::new_err(e.to_string()),
    }
}

/// Converts any serializable value through JSON into Python objects.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A triple store held in memory, optionally persisted to a directory.
#[pyclass(name = "Store", module = "mapsin")]
struct PyStore {
    inner: TripleStore,
}

#[pymethods]
impl PyStore {
    #[new]
    #[pyo3(signature = (class_predicate = DEFAULT_CLASS_PREDICATE, compound_class_keys = true, region_size = 64 * 1024))]
    fn new(class_predicate: &str, compound_class_keys: bool, region_size: u64) -> PyResult<Self> {
        let config = RdfConfig {
            class_predicate: Term::new_iri(class_predicate).map_err(store_err)?,
            compound_class_keys,
            max_region_size: region_size,
        };
        Ok(PyStore {
            inner: TripleStore::new(config).map_err(store_err)?,
        })
    }

    /// Opens a store directory written by `persist` or the `load` command.
    #[staticmethod]
    fn open(path: &str) -> PyResult<Self> {
        Ok(PyStore {
            inner: TripleStore::open(path).map_err(store_err)?,
        })
    }

    fn persist(&self, path: &str) -> PyResult<()> {
        std::fs::create_dir_all(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        self.inner.persist(path).map_err(store_err)
    }

    /// Loads N-Triples text and returns the load statistics.
    fn load_ntriples<'py>(&mut self, py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
        let stats = self
            .inner
            .load_ntriples(text.as_bytes())
            .map_err(store_err)?;
        to_py(py, &stats)
    }

    /// Loads an N-Triples file and returns the load statistics.
    fn load_file<'py>(&mut self, py: Python<'py>, path: &str) -> PyResult<Bound<'py, PyAny>> {
        let file = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        let stats = self
            .inner
            .load_ntriples(BufReader::new(file))
            .map_err(store_err)?;
        to_py(py, &stats)
    }

    /// Runs a query. Returns `(rows, stats)` where each row maps variable
    /// names to terms and rows come in sorted order.
    #[pyo3(signature = (sparql, engine = "mapsin", mode = "auto", workers = None))]
    fn query<'py>(
        &self,
        py: Python<'py>,
        sparql: &str,
        engine: &str,
        mode: &str,
        workers: Option<usize>,
    ) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyAny>)> {
        let bgp = parse(sparql).map_err(query_err)?;
        let engine: Engine = engine
            .parse()
            .map_err(|e: mapsin_core::engine::UnknownEngine| {
                PyValueError::new_err(e.to_string())
            })?;
        let mode: PlanMode = mode
            .parse()
            .map_err(|e: mapsin_core::planner::UnknownMode| PyValueError::new_err(e.to_string()))?;
        let mut config = ExecConfig::default();
        if let Some(w) = workers {
            if w == 0 {
                return Err(PyValueError::new_err("workers must be positive"));
            }
            config.workers = w;
        }
        let outcome = run_query(&self.inner, &bgp, engine, mode, config).map_err(engine_err)?;
        let rows = PyList::empty(py);
        for m in outcome.results.sorted().iter() {
            let row = PyDict::new(py);
            for (var, term) in m.iter() {
                row.set_item(var.name(), term.to_string())?;
            }
            rows.append(row)?;
        }
        Ok((rows, to_py(py, &outcome.stats)?))
    }

    #[pyo3(signature = (sparql, mode = "auto"))]
    fn explain(&self, sparql: &str, mode: &str) -> PyResult<String> {
        let bgp = parse(sparql).map_err(query_err)?;
        let mode: PlanMode = mode
            .parse()
            .map_err(|e: mapsin_core::planner::UnknownMode| PyValueError::new_err(e.to_string()))?;
        let router = self.inner.router();
        Ok(plan(&bgp, mode, router).explain(router))
    }

    /// Per-table cell, row and region counts.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.table_stats().map_err(store_err)?)
    }

    fn __len__(&self) -> PyResult<usize> {
        self.inner.triple_count().map_err(store_err)
    }

    fn __repr__(&self) -> String {
        let config = self.inner.config();
        format!(
            "Store(class_predicate={:?}, compound_class_keys={}, region_size={})",
            config.class_predicate.lexical(),
            config.compound_class_keys,
            config.max_region_size
        )
    }
}

/// Writes a synthetic N-Triples dataset to `path` and returns its summary.
#[pyfunction]
#[pyo3(signature = (path, seed = 1, entities = 100, classes = 4, attributes = (1, 4), links = (0, 2), class_skew = 0.5, attribute_values = 16))]
#[allow(clippy::too_many_arguments)]
fn generate<'py>(
    py: Python<'py>,
    path: &str,
    seed: u64,
    entities: usize,
    classes: usize,
    attributes: (usize, usize),
    links: (usize, usize),
    class_skew: f64,
    attribute_values: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let config = GenConfig {
        seed,
        entities,
        classes,
        attributes,
        links,
        class_skew,
        attribute_values,
    };
    config.validate().map_err(gen_err)?;
    let file = File::create(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
    let mut w = BufWriter::new(file);
    let summary = datagen::generate(&config, &mut w).map_err(gen_err)?;
    w.flush().map_err(|e| PyIOError::new_err(e.to_string()))?;
    to_py(py, &summary)
}

/// Parses a query and returns it in canonical printed form.
#[pyfunction]
fn parse_query(sparql: &str) -> PyResult<String> {
    Ok(parse(sparql).map_err(query_err)?.to_string())
}

#[pymodule]
fn mapsin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStore>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_query, m)?)?;
    Ok(())
}
