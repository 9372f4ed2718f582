"""Completeness audit for probabilistic (LLM-style) per-file extraction records.

Records follow the extraction schema::

    {"results": [{"file_path": ..., "class_name": ..., "dependencies": [...]}]}
"""

from __future__ import annotations

import json
import logging
import posixpath
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

log = logging.getLogger(__name__)

SKIP_MARKER = "SKIPPED/MISSED by LLM"
DEFAULT_EXCLUDED_PREFIXES = ("java.", "javax.", "jakarta.", "org.springframework.")
EDGE_TOTALS_NOTE = "schema-dependent; raw edge totals are not a completeness measure"


class UndefinedRateError(ZeroDivisionError):
    """A coverage ratio was requested with a zero denominator."""


class SchemaViolation(ValueError):
    pass


@dataclass(frozen=True)
class ExtractionRecord:
    file_path: str
    class_name: str
    dependencies: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.class_name, str) or not self.class_name.strip():
            raise SchemaViolation("class_name must be a non-empty string")
        # dedupe on ingest, first occurrence wins
        object.__setattr__(self, "dependencies", tuple(dict.fromkeys(self.dependencies)))

    @classmethod
    def from_dict(cls, raw: Mapping) -> ExtractionRecord:
        if not isinstance(raw, Mapping):
            raise SchemaViolation("record must be an object")
        deps = raw.get("dependencies", [])
        if deps is None:
            deps = []
        if not isinstance(deps, list) or not all(isinstance(d, str) for d in deps):
            raise SchemaViolation("dependencies must be a list of strings")
        path = raw.get("file_path") or ""
        if not isinstance(path, str):
            raise SchemaViolation("file_path must be a string")
        return cls(path, raw.get("class_name"), tuple(deps))


@dataclass
class RecordSet:
    records: list[ExtractionRecord] = field(default_factory=list)
    schema_violations: int = 0


def parse_records(document: Mapping | Sequence) -> RecordSet:
    """Validate an extraction document; malformed records are counted, not fatal."""
    raw = document.get("results", []) if isinstance(document, Mapping) else document
    if not isinstance(raw, list):
        raise SchemaViolation('"results" must be a list')
    out = RecordSet()
    for i, item in enumerate(raw):
        try:
            out.records.append(ExtractionRecord.from_dict(item))
        except SchemaViolation as exc:
            log.warning("record %d rejected: %s", i, exc)
            out.schema_violations += 1
    return out


def load_records(path: str) -> RecordSet:
    with open(path, encoding="utf-8") as fh:
        return parse_records(json.load(fh))


# -- skip detection --------------------------------------------------------


def normalize_path(path: str) -> str:
    """Unify separators and collapse dot segments; case is preserved."""
    return posixpath.normpath(path.replace("\\", "/"))


def detect_skips(
    input_files: Sequence[str],
    records: Iterable[ExtractionRecord],
    unique_by: str = "basename",
) -> list[str]:
    """Input files absent from the records, by exact normalized path or by basename.

    Returns the sorted unique basenames, or normalized paths when
    ``unique_by="path"``.
    """
    if not input_files:
        raise ValueError("input_files must be non-empty")
    if unique_by not in ("basename", "path"):
        raise ValueError(f"unknown unique_by {unique_by!r}")
    seen = {normalize_path(r.file_path) for r in records if r.file_path}
    seen_basenames = {posixpath.basename(p) for p in seen}
    skipped = set()
    for original in input_files:
        norm = normalize_path(original)
        if norm in seen:
            continue
        base = posixpath.basename(norm)
        if base in seen_basenames:
            continue
        log.info("%s: %s", SKIP_MARKER, base)
        skipped.add(base if unique_by == "basename" else norm)
    return sorted(skipped)


# -- ratios ------------------------------------------------------------------


def _ratio(numerator: int, denominator: int, what: str) -> float:
    if denominator == 0:
        raise UndefinedRateError(f"{what} is undefined for a zero denominator")
    return numerator / denominator


def file_success_rate(n_processed: int, n_files: int) -> float:
    if not 0 <= n_processed <= n_files:
        if n_files == 0:
            raise UndefinedRateError("file success rate is undefined for zero files")
        raise ValueError(f"need 0 <= n_processed <= n_files, got {n_processed}/{n_files}")
    return _ratio(n_processed, n_files, "file success rate")


def chunk_coverage(c_approach: int, c_baseline: int) -> float:
    return _ratio(c_approach, c_baseline, "chunk coverage")


def node_coverage(nodes_approach: int, nodes_reference: int) -> float:
    return _ratio(nodes_approach, nodes_reference, "node coverage")


def round_half_up(numerator: int, denominator: int, places: int = 3) -> str:
    """Exact decimal rendering of ``numerator / denominator``, ties rounded up."""
    if denominator <= 0:
        raise UndefinedRateError("cannot round a ratio with a non-positive denominator")
    scaled = Fraction(numerator, denominator) * 10**places + Fraction(1, 2)
    units = scaled.numerator // scaled.denominator
    whole, frac = divmod(units, 10**places)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)


# -- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    n_files: int
    n_processed: int
    n_skipped: int
    skipped: tuple[str, ...]
    file_success_rate: float

    def __post_init__(self) -> None:
        if self.n_processed + self.n_skipped != self.n_files:
            raise ValueError("n_processed + n_skipped must equal n_files")

    @property
    def file_success_rate_display(self) -> str:
        return round_half_up(self.n_processed, self.n_files)

    @classmethod
    def from_counts(cls, n_files: int, n_skipped: int, skipped: Sequence[str] = ()) -> AuditReport:
        n_processed = n_files - n_skipped
        return cls(
            n_files, n_processed, n_skipped, tuple(skipped), file_success_rate(n_processed, n_files)
        )

    def to_dict(self) -> dict:
        return {
            "file_success_rate": self.file_success_rate,
            "file_success_rate_display": self.file_success_rate_display,
            "n_files": self.n_files,
            "n_processed": self.n_processed,
            "n_skipped": self.n_skipped,
            "skipped": list(self.skipped),
        }


def audit_files(
    input_files: Sequence[str], records: Iterable[ExtractionRecord], unique_by: str = "basename"
) -> AuditReport:
    skipped = detect_skips(input_files, records, unique_by)
    return AuditReport.from_counts(len(input_files), len(skipped), skipped)


@dataclass(frozen=True)
class CoverageReport:
    chunks_baseline: int
    chunks_approach: int
    nodes_reference: int | None = None
    nodes_approach: int | None = None

    @property
    def chunk_coverage(self) -> float:
        return chunk_coverage(self.chunks_approach, self.chunks_baseline)

    @property
    def node_coverage(self) -> float | None:
        if self.nodes_reference is None or self.nodes_approach is None:
            return None
        return node_coverage(self.nodes_approach, self.nodes_reference)

    def to_dict(self) -> dict:
        nodes_known = self.node_coverage is not None
        return {
            "chunk_coverage": self.chunk_coverage,
            "chunk_coverage_display": round_half_up(self.chunks_approach, self.chunks_baseline),
            "chunks_approach": self.chunks_approach,
            "chunks_baseline": self.chunks_baseline,
            "node_coverage": self.node_coverage,
            "node_coverage_display": (
                round_half_up(self.nodes_approach, self.nodes_reference) if nodes_known else None
            ),
            "nodes_approach": self.nodes_approach,
            "nodes_reference": self.nodes_reference,
        }


# -- dependency graph ------------------------------------------------------------


@dataclass(frozen=True)
class DependencyGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    schema_violations: int = 0
    relation: str = "depends_on"

    def to_dict(self) -> dict:
        return {
            "edge_count": len(self.edges),
            "edges": [{"src": s, "dst": d, "relation": self.relation} for s, d in self.edges],
            "node_count": len(self.nodes),
            "nodes": [{"name": n, "kind": "class"} for n in self.nodes],
            "schema_violations": self.schema_violations,
        }


def is_excluded(dependency: str, prefixes: Sequence[str] = DEFAULT_EXCLUDED_PREFIXES) -> bool:
    return dependency.startswith(tuple(prefixes))


def build_dependency_graph(
    records: Iterable[ExtractionRecord | Mapping],
    excluded_prefixes: Sequence[str] = DEFAULT_EXCLUDED_PREFIXES,
) -> DependencyGraph:
    """One node per class name, a ``depends_on`` edge per kept dependency."""
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    violations = 0
    for rec in records:
        if isinstance(rec, Mapping):
            try:
                rec = ExtractionRecord.from_dict(rec)
            except SchemaViolation as exc:
                log.warning("record rejected: %s", exc)
                violations += 1
                continue
        nodes.add(rec.class_name)
        for dep in rec.dependencies:
            if not dep or is_excluded(dep, excluded_prefixes):
                continue
            nodes.add(dep)
            edges.add((rec.class_name, dep))
    return DependencyGraph(tuple(sorted(nodes)), tuple(sorted(edges)), violations)


# -- text table --------------------------------------------------------------------


def coverage_table(
    audit: AuditReport | None,
    coverage: CoverageReport | None,
    dkb_edges: int | None = None,
    approach_edges: int | None = None,
) -> str:
    """Plain-text table using the completeness-table row labels."""

    def cell(value) -> str:
        return "---" if value is None else str(value)

    rows = [
        ("Total Java files discovered", audit and audit.n_files),
        ("Files skipped/missed by LLM", audit and audit.n_skipped),
        ("Files successfully analyzed", audit and audit.n_processed),
        ("File success rate", audit and audit.file_success_rate_display),
        ("Total code chunks embedded", coverage and coverage.chunks_approach),
        ("Baseline code chunks", coverage and coverage.chunks_baseline),
        (
            "Chunk coverage (vs No-Graph)",
            coverage and round_half_up(coverage.chunks_approach, coverage.chunks_baseline),
        ),
        ("Graph nodes", coverage and coverage.nodes_approach),
        ("Reference graph nodes", coverage and coverage.nodes_reference),
        ("Graph edges (schema-dependent)", approach_edges),
        ("Reference graph edges (schema-dependent)", dkb_edges),
        (
            "Node coverage (vs DKB)",
            coverage and coverage.to_dict()["node_coverage_display"],
        ),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {cell(value)}" for label, value in rows) + "\n"
