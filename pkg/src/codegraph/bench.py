"""Run a fixed question suite and write the per-run JSON artifact."""

from __future__ import annotations

import json
import logging
import os
import shlex
import statistics
import subprocess
import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from codegraph.graph_retrieval import (
    ContextBundle,
    Excerpt,
    ExpansionConfig,
    assemble_context,
    entities_from_hits,
    expand,
    render_prompt,
)
from codegraph.index import DEFAULT_TOP_K, ChunkIndex
from codegraph.ontology import OntologyGraph

log = logging.getLogger(__name__)

APPROACHES = ("nograph", "dkb")
STD_CONVENTION = "population"


def _ms(seconds: float) -> float:
    return round(seconds, 3)


@dataclass(frozen=True)
class QuestionSuite:
    repository_label: str
    questions: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.questions:
            raise ValueError("a question suite needs at least one question")
        for q in self.questions:
            if not isinstance(q, str) or not q.strip():
                raise ValueError("questions must be non-empty strings")

    @classmethod
    def load(cls, path: str, label: str | None = None) -> QuestionSuite:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise ValueError("suite file must hold a JSON list of question strings")
        return cls(label or os.path.splitext(os.path.basename(path))[0], tuple(data))


@dataclass(frozen=True)
class LatencyStats:
    mean: float
    std: float
    median: float
    min: float
    max: float

    def to_dict(self) -> dict:
        return {
            "max": self.max,
            "mean": self.mean,
            "median": self.median,
            "min": self.min,
            "std": self.std,
        }


def latency_stats(times: Sequence[float]) -> LatencyStats:
    """Mean, population std, median (midpoint for even counts), min and max."""
    if not times:
        raise ValueError("latency_stats needs at least one sample")
    return LatencyStats(
        mean=statistics.fmean(times),
        std=statistics.pstdev(times),
        median=statistics.median(times),
        min=min(times),
        max=max(times),
    )


@dataclass
class Pipeline:
    """Everything a suite run needs, built ahead of time."""

    approach: str
    root: str
    index: ChunkIndex
    graph: OntologyGraph | None = None
    top_k: int = DEFAULT_TOP_K
    expansion: ExpansionConfig = field(default_factory=ExpansionConfig)
    generator_cmd: str | None = None

    def __post_init__(self) -> None:
        if self.approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}")
        if self.approach == "dkb" and self.graph is None:
            raise ValueError("the dkb approach needs an ontology graph")

    def context(self, question: str) -> tuple[ContextBundle, dict]:
        hits = self.index.retrieve(question, self.top_k)
        if self.approach == "nograph":
            bundle = ContextBundle(
                excerpts=[Excerpt(None, h.chunk.source_path, "hit", h.chunk.text) for h in hits]
            )
            seeds: list[str] = []
        else:
            seeds = entities_from_hits(hits, self.graph)
            included = expand(self.graph, seeds, self.expansion)
            bundle = assemble_context(self.graph, included, seeds, hits, self.expansion, self.root)
        summary = {
            "context_chars": len(bundle.render()),
            "included_entities": list(bundle.included_entities),
            "n_excerpts": len(bundle.excerpts),
            "n_hits": len(hits),
            "seeds": seeds,
        }
        return bundle, summary

    def generate(self, prompt: str) -> str | None:
        if not self.generator_cmd:
            return None
        proc = subprocess.run(
            shlex.split(self.generator_cmd),
            input=prompt,
            capture_output=True,
            text=True,
            check=True,
        )
        return proc.stdout


@dataclass
class RunArtifact:
    approach: str
    db_gen_time: float
    graph_generation_time: float
    responses: list[dict]
    generator: str = "none"
    repository_label: str = ""

    def __post_init__(self) -> None:
        if self.approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}")
        if self.db_gen_time < 0 or self.graph_generation_time < 0:
            raise ValueError("times must be non-negative")

    @property
    def failures(self) -> int:
        return sum(1 for r in self.responses if r.get("error"))

    def stats(self) -> LatencyStats | None:
        times = [r["time_taken_seconds"] for r in self.responses if not r.get("error")]
        return latency_stats(times) if times else None

    def to_dict(self) -> dict:
        stats = self.stats()
        return {
            "approach": self.approach,
            "db_gen_time": self.db_gen_time,
            "failed_questions": self.failures,
            "generator": self.generator,
            "graph_generation_time": self.graph_generation_time,
            "latency_stats": stats.to_dict() if stats else None,
            "repository_label": self.repository_label,
            "responses": self.responses,
            "std_convention": STD_CONVENTION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> RunArtifact:
        return cls(
            approach=data["approach"],
            db_gen_time=data["db_gen_time"],
            graph_generation_time=data["graph_generation_time"],
            responses=list(data["responses"]),
            generator=data.get("generator", "none"),
            repository_label=data.get("repository_label", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> RunArtifact:
        return cls.from_dict(json.loads(text))

    @property
    def default_filename(self) -> str:
        return f"{self.approach}_rag_response.json"


def run_suite(pipeline: Pipeline, suite: QuestionSuite) -> RunArtifact:
    """Answer every question in order, timing each end-to-end path."""
    responses = []
    template = "dkb_answer" if pipeline.approach == "dkb" else "nograph_answer"
    for question in suite.questions:
        started = time.perf_counter()
        entry: dict = {"question": question, "answer": None, "error": None}
        try:
            bundle, summary = pipeline.context(question)
            entry["context_summary"] = summary
            entry["answer"] = pipeline.generate(render_prompt(bundle, question, template))
        except Exception as exc:  # a failed question must not stop the suite
            log.warning("question failed: %s: %s", question, exc)
            entry.setdefault("context_summary", None)
            entry["error"] = f"{type(exc).__name__}: {exc}"
        entry["time_taken_seconds"] = _ms(time.perf_counter() - started)
        responses.append(entry)

    graph_time = 0.0
    if pipeline.approach == "dkb":
        graph_time = _ms(pipeline.graph.build_seconds or 0.0)
    return RunArtifact(
        approach=pipeline.approach,
        db_gen_time=_ms(pipeline.index.build_seconds or 0.0),
        graph_generation_time=graph_time,
        responses=responses,
        generator=pipeline.generator_cmd or "none",
        repository_label=suite.repository_label,
    )
