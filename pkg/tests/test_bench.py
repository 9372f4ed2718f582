import json
import shlex
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from codegraph.bench import Pipeline, QuestionSuite, RunArtifact, latency_stats, run_suite
from oracles import two_pass_stats

QUESTIONS = ("Which classes use the shopping cart facade?", "How is a cart priced?")


@given(st.lists(st.floats(0, 1e4, allow_nan=False), min_size=1, max_size=200))
def test_stats_match_two_pass_oracle(xs):
    got = latency_stats(xs).to_dict()
    for key, value in two_pass_stats(xs).items():
        assert got[key] == pytest.approx(value, abs=1e-9, rel=1e-12)


def test_stats_examples():
    s = latency_stats([1.0, 2.0, 3.0, 4.0])
    assert (s.mean, s.median, s.min, s.max) == (2.5, 2.5, 1.0, 4.0)
    assert s.std == pytest.approx((1.25) ** 0.5)  # population, not sample
    assert latency_stats([3.0]).std == 0.0
    with pytest.raises(ValueError):
        latency_stats([])


def test_suite_loading(tmp_path):
    path = tmp_path / "questions.json"
    path.write_text(json.dumps(list(QUESTIONS)))
    suite = QuestionSuite.load(str(path))
    assert suite.questions == QUESTIONS and suite.repository_label == "questions"
    path.write_text('{"q": 1}')
    with pytest.raises(ValueError):
        QuestionSuite.load(str(path))
    with pytest.raises(ValueError):
        QuestionSuite("x", ())


@pytest.mark.parametrize("approach", ["nograph", "dkb"])
def test_run_suite(shop_root, shop_index, shop_graph, approach):
    pipe = Pipeline(approach, str(shop_root), shop_index, shop_graph if approach == "dkb" else None)
    art = run_suite(pipe, QuestionSuite("fixture", QUESTIONS))
    assert [r["question"] for r in art.responses] == list(QUESTIONS)
    assert art.failures == 0 and art.generator == "none"
    assert all(r["answer"] is None and r["time_taken_seconds"] >= 0 for r in art.responses)
    assert (art.graph_generation_time == 0.0) == (approach == "nograph")
    if approach == "dkb":
        assert "ShoppingCartFacadeImpl" in art.responses[0]["context_summary"]["included_entities"]
    assert art.default_filename == f"{approach}_rag_response.json"


def test_generator_and_failures(shop_root, shop_index, shop_graph):
    echo = f"{shlex.quote(sys.executable)} -c \"import sys; print(len(sys.stdin.read()))\""
    pipe = Pipeline("dkb", str(shop_root), shop_index, shop_graph, generator_cmd=echo)
    art = run_suite(pipe, QuestionSuite("fixture", QUESTIONS))
    assert all(int(r["answer"]) > 0 for r in art.responses)

    failing = f"{shlex.quote(sys.executable)} -c \"import sys; sys.exit(3)\""
    pipe = Pipeline("dkb", str(shop_root), shop_index, shop_graph, generator_cmd=failing)
    bad = run_suite(pipe, QuestionSuite("fixture", QUESTIONS))
    assert bad.failures == 2 and bad.stats() is None
    assert bad.to_dict()["latency_stats"] is None


def test_failures_are_left_out_of_stats():
    resp = [
        {"question": "a", "answer": "x", "error": None, "time_taken_seconds": 1.0},
        {"question": "b", "answer": None, "error": "boom", "time_taken_seconds": 99.0},
        {"question": "c", "answer": "y", "error": None, "time_taken_seconds": 3.0},
    ]
    art = RunArtifact("dkb", 0.5, 0.25, resp)
    d = art.to_dict()
    assert d["failed_questions"] == 1 and d["latency_stats"]["mean"] == 2.0
    assert d["std_convention"] == "population"


def test_artifact_round_trip():
    resp = [{"question": "q", "answer": "ä", "error": None, "time_taken_seconds": 0.123,
             "context_summary": {"seeds": ["A"]}}]
    art = RunArtifact("nograph", 1.234, 0.0, resp, repository_label="r")
    text = art.to_json()
    assert RunArtifact.from_json(text).to_json() == text
    with pytest.raises(ValueError):
        RunArtifact("llmkb", 0, 0, [])
    with pytest.raises(ValueError):
        Pipeline("dkb", ".", None)
