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

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mapsin_core::kvstore::{KvStore, DEFAULT_FAMILY};
use mapsin_core::rdf::Term;
use serde_json::Value;

const ARTICLES: &str = r#"<Article1> <title> "PigSPARQL" .
<Article1> <year> "2011" .
<Article1> <author> <Alex> .
<Article1> <author> <Martin> .
<Article2> <title> "RDFPath" .
<Article2> <year> "2011" .
<Article2> <author> <Martin> .
<Article2> <author> <Alex> .
<Article2> <cite> <Article1> .
"#;

const ARTICLE_QUERY: &str =
    "SELECT * WHERE { ?article title ?title . ?article author ?author . ?article year ?year }";

fn mapsin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapsin"))
        .args(args)
        .env_remove("MAPSIN_STORE")
        .env_remove("MAPSIN_REGION_SIZE")
        .env_remove("MAPSIN_CLASS_PREDICATE")
        .env_remove("MAPSIN_WORKERS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> (String, String) {
    let out = mapsin(args);
    let (stdout, stderr) = (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}\nstdout: {stdout}\nstderr: {stderr}"
    );
    (stdout, stderr)
}

fn json(line: &str) -> Value {
    serde_json::from_str(line.trim()).unwrap()
}

fn cells(report: &Value, table: &str) -> u64 {
    report["tables"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["table"] == table)
        .unwrap()["cells"]
        .as_u64()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn article_store(dir: &Path) -> String {
    let data = dir.join("articles.nt");
    fs::write(&data, ARTICLES).unwrap();
    let store = dir.join("store");
    ok(&["load", "--input", p(&data), "--store", p(&store)]);
    p(&store).to_string()
}

#[test]
fn load_reports_cells_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("articles.nt");
    fs::write(&data, ARTICLES).unwrap();
    let store = dir.path().join("store");
    let (out, _) = ok(&["load", "--input", p(&data), "--store", p(&store)]);
    let report = json(&out);
    // Nine triples in the example graph, one cell each per table.
    assert_eq!(ARTICLES.lines().count(), 9);
    assert_eq!(report["load"]["triples_stored"], 9);
    assert_eq!(cells(&report, "T_spo"), 9);
    assert_eq!(cells(&report, "T_ops"), 9);

    // Loading the same lines again only counts duplicates.
    let (out, _) = ok(&["load", "--input", p(&data), "--store", p(&store)]);
    let report = json(&out);
    assert_eq!(report["load"]["duplicates"], 9);
    assert_eq!(report["load"]["triples_stored"], 0);
    assert_eq!(cells(&report, "T_spo"), 9);
    assert_eq!(cells(&report, "T_ops"), 9);
}

#[test]
fn unreadable_input_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = mapsin(&[
        "load",
        "--input",
        p(&dir.path().join("missing.nt")),
        "--store",
        p(&dir.path().join("s")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("io failure"));
    let out = mapsin(&[
        "query",
        "--store",
        p(&dir.path().join("nothing")),
        "--sparql",
        ARTICLE_QUERY,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn article_query_across_engines_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let store = article_store(dir.path());
    let (multiway, stats) = ok(&[
        "query",
        "--store",
        &store,
        "--sparql",
        ARTICLE_QUERY,
        "--engine",
        "mapsin",
        "--mode",
        "multiway",
        "--stats",
    ]);
    assert_eq!(multiway.lines().count(), 1 + 4);
    assert_eq!(
        multiway.lines().next().unwrap(),
        "?article\t?title\t?author\t?year"
    );
    let stats = json(&stats);
    assert_eq!(stats["stats"]["stages_run"], 2);
    assert_eq!(stats["stats"]["get_requests"], 2);
    assert_eq!(stats["results"], 4);

    let (oracle, _) = ok(&[
        "query",
        "--store",
        &store,
        "--sparql",
        ARTICLE_QUERY,
        "--engine",
        "oracle",
    ]);
    assert_eq!(oracle, multiway);
    let (reduce, _) = ok(&[
        "query",
        "--store",
        &store,
        "--sparql",
        ARTICLE_QUERY,
        "--engine",
        "reduce",
    ]);
    assert_eq!(reduce, multiway);

    let (cascade, stats) = ok(&[
        "query",
        "--store",
        &store,
        "--sparql",
        ARTICLE_QUERY,
        "--mode",
        "cascade",
        "--stats",
    ]);
    assert_eq!(cascade, multiway);
    assert_eq!(json(&stats)["stats"]["get_requests"], 6);
}

#[test]
fn explain_prints_the_plan_without_running() {
    let dir = tempfile::tempdir().unwrap();
    let store = article_store(dir.path());
    let (text, stats) = ok(&[
        "query",
        "--store",
        &store,
        "--sparql",
        ARTICLE_QUERY,
        "--explain",
        "--stats",
    ]);
    assert!(text.starts_with("plan mode=auto stages=2\n"), "{text}");
    assert!(text.contains("multiway-join on ?article"), "{text}");
    assert!(stats.is_empty());
    let (same, _) = ok(&["explain", "--store", &store, "--sparql", ARTICLE_QUERY]);
    assert_eq!(same, text);
}

#[test]
fn bad_queries_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let store = article_store(dir.path());
    let out = mapsin(&[
        "query",
        "--store",
        &store,
        "--sparql",
        "SELECT * WHERE { ?x ?y ?z } LIMIT 3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LIMIT"));
    let out = mapsin(&["query", "--store", &store]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_load_query_bench() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = d.join("a.nt");
    let b = d.join("b.nt");
    let (summary, _) = ok(&[
        "generate",
        "--seed",
        "7",
        "--entities",
        "100",
        "--out",
        p(&a),
    ]);
    ok(&[
        "generate",
        "--seed",
        "7",
        "--entities",
        "100",
        "--out",
        p(&b),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let summary = json(&summary);
    assert_eq!(summary["class_triples"], 100);

    let store = d.join("store");
    let store = p(&store);
    let out = Command::new(env!("CARGO_BIN_EXE_mapsin"))
        .args(["load", "--input", p(&a)])
        .env("MAPSIN_STORE", store)
        .env("MAPSIN_REGION_SIZE", "4096")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(report["max_region_size"], 4096);
    assert_eq!(report["load"]["triples_stored"], summary["triples"]);
    assert!(report["tables"][0]["regions"].as_u64().unwrap() > 1);

    let ns = "http://example.org/";
    let queries = [
        format!("PREFIX ex: <{ns}>\nSELECT ?e ?v WHERE {{ ?e a ex:Class1 . ?e ex:attr0 ?v }}"),
        format!("PREFIX ex: <{ns}>\nSELECT * WHERE {{ ?e ex:link0 ?f . ?f ex:attr0 ?v . ?f ex:attr1 ?w }}"),
        format!("PREFIX ex: <{ns}>\nSELECT ?e WHERE {{ ?e ex:attr0 \"v3\" . ?e a ?c }}"),
    ];
    let qdir = d.join("queries");
    fs::create_dir(&qdir).unwrap();
    for (i, q) in queries.iter().enumerate() {
        fs::write(qdir.join(format!("q{i}.rq")), q).unwrap();
        let mut outputs = Vec::new();
        for engine in ["mapsin", "reduce", "oracle"] {
            outputs.push(
                ok(&[
                    "query",
                    "--store",
                    store,
                    "--query",
                    p(&qdir.join(format!("q{i}.rq"))),
                    "--engine",
                    engine,
                ])
                .0,
            );
        }
        assert!(outputs[0].lines().count() > 1, "query {i} has no results");
        assert_eq!(outputs[0], outputs[1], "query {i}");
        assert_eq!(outputs[0], outputs[2], "query {i}");
    }
    fs::write(qdir.join("notes.txt"), "ignored").unwrap();

    let (report, _) = ok(&[
        "bench",
        "--store",
        store,
        "--queries",
        p(&qdir),
        "--engines",
        "mapsin,reduce",
    ]);
    let lines: Vec<Value> = report.lines().map(json).collect();
    assert_eq!(lines.len(), 3 * 2);
    for q in 0..3 {
        let pair = &lines[2 * q..2 * q + 2];
        assert_eq!(pair[0]["query"], format!("q{q}.rq"));
        assert_eq!(pair[0]["engine"], "mapsin");
        assert_eq!(pair[0]["mode"], "auto");
        assert_eq!(pair[1]["engine"], "reduce");
        assert_eq!(pair[0]["results"], pair[1]["results"]);
    }

    let (report, _) = ok(&[
        "bench",
        "--store",
        store,
        "--queries",
        p(&qdir),
        "--engines",
        "mapsin,oracle",
        "--modes",
        "cascade,multiway",
        "--repeat",
        "2",
        "--workers",
        "3",
    ]);
    let lines: Vec<Value> = report.lines().map(json).collect();
    assert_eq!(lines.len(), 2 * 3 * 3);
    let (first, second) = lines.split_at(9);
    for (x, y) in first.iter().zip(second) {
        assert_eq!(x["round"], 1);
        assert_eq!(y["round"], 2);
        assert_eq!(x["query"], y["query"]);
        assert_eq!(x["stats"], y["stats"]);
        assert_eq!(x["results"], y["results"]);
    }
}

#[test]
fn bench_reports_engine_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let store = article_store(dir.path());
    // Add a cell to the object-keyed table only, so index lookups and a
    // scan of the subject-keyed table disagree.
    let mut kv = KvStore::open(&store).unwrap();
    kv.put(
        "T_ops",
        &Term::iri("Ghost").encode(),
        DEFAULT_FAMILY,
        &Term::iri("author").encode(),
        &Term::iri("Article1").encode(),
    )
    .unwrap();
    kv.persist(&store).unwrap();
    let qdir = dir.path().join("queries");
    fs::create_dir(&qdir).unwrap();
    fs::write(qdir.join("ghost.rq"), "SELECT ?a WHERE { ?a author Ghost }").unwrap();
    let out = mapsin(&[
        "bench",
        "--store",
        &store,
        "--queries",
        p(&qdir),
        "--engines",
        "mapsin,oracle",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("mismatch: ghost.rq mapsin/auto -> 1 results"),
        "{err}"
    );
    assert!(
        err.contains("mismatch: ghost.rq oracle -> 0 results"),
        "{err}"
    );
}
