"""Smoke test for the `mapsin` Python extension.

Build the module first, for example with `maturin develop -m crates/python/Cargo.toml`
or by copying the built shared library next to this file as `mapsin.so`.
"""

import os
import sys
import tempfile

import mapsin

ARTICLES = """\
<Article1> <title> "PigSPARQL" .
<Article1> <year> "2011" .
<Article1> <author> <Alex> .
<Article1> <author> <Martin> .
<Article2> <title> "RDFPath" .
<Article2> <year> "2011" .
<Article2> <author> <Martin> .
<Article2> <author> <Alex> .
<Article2> <cite> <Article1> .
"""

ARTICLE_QUERY = "SELECT * WHERE { ?article title ?title . ?article author ?author . ?article year ?year }"


def check(cond, message):
    if not cond:
        print(f"FAIL: {message}")
        sys.exit(1)
    print(f"ok: {message}")


def main():
    store = mapsin.Store()
    stats = store.load_ntriples(ARTICLES)
    check(stats["triples_stored"] == 9 and len(store) == 9, "example graph loads nine triples")

    rows, stats = store.query(ARTICLE_QUERY, engine="mapsin", mode="multiway")
    check(len(rows) == 4, "query returns four rows")
    check(stats["get_requests"] == 2 and stats["stages_run"] == 2, "multiway plan issues two GETs")
    _, cascade = store.query(ARTICLE_QUERY, mode="cascade")
    check(cascade["get_requests"] == 6, "cascade plan issues six GETs")
    for engine in ("reduce", "oracle"):
        other, _ = store.query(ARTICLE_QUERY, engine=engine)
        check(other == rows, f"{engine} engine agrees")

    plan = store.explain(ARTICLE_QUERY)
    check(plan.startswith("plan mode=auto stages=2"), "explain renders the plan")
    check("?article" in mapsin.parse_query(ARTICLE_QUERY), "parse_query round-trips")

    try:
        mapsin.parse_query("SELECT * WHERE { ?s ?p ?o } LIMIT 1")
        check(False, "unsupported constructs raise")
    except ValueError:
        check(True, "unsupported constructs raise ValueError")

    with tempfile.TemporaryDirectory() as tmp:
        data = os.path.join(tmp, "data.nt")
        summary = mapsin.generate(data, seed=7, entities=200)
        check(summary["class_triples"] == 200, "generator writes one class triple per entity")
        big = mapsin.Store(region_size=4096)
        loaded = big.load_file(data)
        check(loaded["parse_errors"] == [], "generated data parses cleanly")
        check(big.stats()[0]["regions"] > 1, "small regions split the table")
        q = (
            "PREFIX ex: <http://example.org/> "
            "SELECT ?e ?v WHERE { ?e a ex:Class0 . ?e ex:attr0 ?v }"
        )
        results = {e: big.query(q, engine=e, workers=2)[0] for e in ("mapsin", "reduce", "oracle")}
        check(len(results["mapsin"]) > 0, "class query has answers")
        check(results["mapsin"] == results["reduce"] == results["oracle"], "engines agree on generated data")

        path = os.path.join(tmp, "store")
        big.persist(path)
        reopened = mapsin.Store.open(path)
        check(reopened.query(q)[0] == results["mapsin"], "persisted store answers the same")

    print("smoke test passed")


if __name__ == "__main__":
    main()
