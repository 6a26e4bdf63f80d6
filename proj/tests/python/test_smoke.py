import json
import os
import subprocess
from pathlib import Path

import pytest

import bqr

DATA = Path(os.environ.get("BQR_DATA_DIR", Path(__file__).resolve().parents[2] / "data" / "synthetic"))


@pytest.fixture(scope="module")
def engine():
    return bqr.Engine(DATA / "corpus.jsonl", topics=DATA / "topics.jsonl",
                      embeddings=DATA / "embeddings.txt", fixtures=DATA / "fixtures.json")


def test_search(engine):
    res = engine.search("politics", 20)
    assert 0 < len(res["hits"]) <= 20
    assert res["hits"] == sorted(res["hits"], key=lambda h: (-h["score"], h["doc_id"]))
    assert engine.search("qwertyuiop")["hits"] == []
    assert len(engine) == 90


def test_recommend_front(engine):
    rec = engine.recommend("politics", method="m2")
    assert rec["original"]["dim_scores"][-1] == {"name": "relevance", "value": 1.0}
    vecs = [[d["value"] for d in r["dim_scores"]] for r in rec["recommendations"]]
    front = bqr.pareto_front(vecs, ["maximize"] * 3)
    assert sorted(front) == list(range(len(vecs)))
    assert rec["trace_summary"]["iterations_used"] <= 5


def test_recommend_matches_api_payload(engine):
    # The payload must be identical across calls and sessions.
    other = bqr.Engine(DATA / "corpus.jsonl", topics=DATA / "topics.jsonl",
                       embeddings=DATA / "embeddings.txt", fixtures=DATA / "fixtures.json")
    assert engine.recommend("classical music", method="m3", topic_id="t2") == \
        other.recommend("classical music", method="m3", topic_id="t2")


def test_errors(engine):
    with pytest.raises(bqr.InapplicableMethod):
        engine.recommend("telescope", method="m3")
    with pytest.raises(bqr.OutOfVocabulary):
        engine.recommend("assorted", method="m1")
    with pytest.raises(bqr.ProviderError):
        engine.recommend("politics", method="m2", k=3)
    with pytest.raises(bqr.InvalidArgument):
        engine.recommend("politics", k=0)
    with pytest.raises(bqr.Error):
        bqr.Engine(DATA / "nope.jsonl")


def test_evaluate(engine):
    matrix, csv_text = engine.evaluate(["m1", "m2"], ["t1", "t2"])
    assert csv_text.splitlines()[0] == "topic_id,method_a,method_b,score"
    assert matrix["topics"] == ["t1", "t2"]
    for cell in matrix["cells"]:
        if cell["method_a"] == cell["method_b"]:
            assert cell["score"] == 0


def test_formulas():
    assert bqr.jsd({"X": 1.0}, {"Y": 1.0}) == 1.0
    assert bqr.jsd({"X": 1.0}, {"X": 0.5, "Y": 0.5}) == pytest.approx(0.3113, abs=1e-4)
    assert bqr.text_set_relevance(["a b", "c d"], ["a b"]) == pytest.approx(2 / 3, abs=1e-9)
    assert bqr.tokenize("A, b! a") == ["a", "b", "a"]
    assert bqr.parse_query_list("1. Foo Bar\n2. baz") == ["foo bar", "baz"]
    p = bqr.build_prompt("politics", ["election"])
    assert len(bqr.prompt_hash(p)) == 16
    assert bqr.pareto_front([[0.9, 0.1], [0.5, 0.5], [0.4, 0.4]], ["maximize", "maximize"]) == [0, 1]
    assert bqr.pareto_front([[0.1], [0.3]], ["minimize"]) == [0]
