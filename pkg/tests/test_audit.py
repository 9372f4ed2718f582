import logging
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from codegraph.audit import (
    SKIP_MARKER,
    AuditReport,
    CoverageReport,
    ExtractionRecord,
    UndefinedRateError,
    audit_files,
    build_dependency_graph,
    chunk_coverage,
    coverage_table,
    detect_skips,
    file_success_rate,
    node_coverage,
    normalize_path,
    parse_records,
    round_half_up,
)


def rec(path, name="C", deps=()):
    return ExtractionRecord(path, name, tuple(deps))


@pytest.mark.parametrize(
    "num,den,shown",
    [(833, 1210, "0.688"), (3465, 5403, "0.641"), (4873, 5403, "0.902"), (842, 1158, "0.727"),
     (1052, 1371, "0.767"), (1, 8, "0.125"), (1, 16, "0.063"), (5, 5, "1.000"), (0, 7, "0.000"),
     (1, 2000, "0.001"), (2001, 4000, "0.500")],
)
def test_round_half_up(num, den, shown):
    assert round_half_up(num, den) == shown


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_round_half_up_against_decimal(num, den):
    from decimal import ROUND_HALF_UP, Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = 50
        expected = (Decimal(num) / Decimal(den)).quantize(Decimal("0.001"), ROUND_HALF_UP)
    assert round_half_up(num, den) == str(expected)


def test_ratios():
    assert file_success_rate(833, 1210) == 833 / 1210
    assert chunk_coverage(3465, 5403) == 3465 / 5403
    assert node_coverage(842, 1158) == 842 / 1158
    with pytest.raises(UndefinedRateError):
        file_success_rate(0, 0)
    with pytest.raises(UndefinedRateError):
        chunk_coverage(1, 0)
    with pytest.raises(ValueError):
        file_success_rate(5, 4)


def test_detect_skips_examples(caplog):
    files = ["src/a/A.java", "src\\b\\B.java", "src/c/./C.java", "src/d/D.java"]
    records = [rec("src/a/A.java"), rec("./src/b/B.java"), rec("other/place/C.java")]
    with caplog.at_level(logging.INFO):
        assert detect_skips(files, records) == ["D.java"]
    assert f"{SKIP_MARKER}: D.java" in caplog.text
    assert detect_skips(files, records, unique_by="path") == ["src/d/D.java"]
    assert detect_skips(["A.java"], [rec("a.java")]) == ["A.java"]  # case-sensitive
    with pytest.raises(ValueError):
        detect_skips([], records)


def test_normalize_path():
    assert normalize_path("a\\b\\..\\c.java") == "a/c.java"
    assert normalize_path("./x//y.java") == "x/y.java"


def test_audit_report():
    report = audit_files([f"d/F{i}.java" for i in range(4)], [rec("d/F0.java"), rec("d/F2.java")])
    assert report == AuditReport(4, 2, 2, ("F1.java", "F3.java"), 0.5)
    assert report.to_dict()["file_success_rate_display"] == "0.500"
    with pytest.raises(ValueError):
        AuditReport(4, 2, 1, (), 0.5)


def test_parse_records_counts_violations():
    doc = {"results": [
        {"file_path": "A.java", "class_name": "A", "dependencies": ["B", "B", "java.util.List"]},
        {"file_path": "B.java", "class_name": ""},
        {"file_path": "C.java", "class_name": "C", "dependencies": "oops"},
        "not a record",
        {"file_path": "D.java", "class_name": "D", "dependencies": None},
    ]}
    rs = parse_records(doc)
    assert [r.class_name for r in rs.records] == ["A", "D"]
    assert rs.records[0].dependencies == ("B", "java.util.List")
    assert rs.schema_violations == 3


def test_dependency_graph():
    g = build_dependency_graph([
        {"file_path": "A.java", "class_name": "A",
         "dependencies": ["B", "java.util.List", "org.springframework.Foo", "jakarta.X", "", "A2"]},
        {"file_path": "B.java", "class_name": "B", "dependencies": ["A"]},
        {"file_path": "Z.java", "class_name": None},
    ])
    assert g.nodes == ("A", "A2", "B")
    assert g.edges == (("A", "A2"), ("A", "B"), ("B", "A"))
    assert g.schema_violations == 1
    assert {e["relation"] for e in g.to_dict()["edges"]} == {"depends_on"}


def test_coverage_report_and_table():
    cov = CoverageReport(5403, 3465, 1158, 842)
    d = cov.to_dict()
    assert (d["chunk_coverage_display"], d["node_coverage_display"]) == ("0.641", "0.727")
    assert CoverageReport(10, 5).to_dict()["node_coverage"] is None
    table = coverage_table(AuditReport.from_counts(1210, 377), cov, 1503, 2552)
    assert "File success rate" in table and "0.688" in table
    assert "Graph edges (schema-dependent)" in table
    assert coverage_table(None, None).count("---") == 12


def _basenames(rng, n):
    return [f"pkg{rng.randint(0, 3)}/F{i}_{rng.randint(0, 999)}.java" for i in range(n)]


def test_skip_injection_sample():
    rng = random.Random(7)
    for _ in range(20):
        files = _basenames(rng, rng.randint(5, 40))
        deleted = set(rng.sample(files, rng.randint(0, len(files))))
        records = [rec(f) for f in files if f not in deleted]
        report = audit_files(files, records)
        assert set(report.skipped) == {f.rsplit("/", 1)[1] for f in deleted}
        assert report.file_success_rate == (len(files) - len(deleted)) / len(files)
