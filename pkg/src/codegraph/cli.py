"""Command-line entry point: index, graph, query, audit, bench, export."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from codegraph import audit as audit_mod
from codegraph.bench import Pipeline, QuestionSuite, run_suite
from codegraph.chunking import DEFAULT_CHUNK_OVERLAP, DEFAULT_CHUNK_SIZE
from codegraph.graph_retrieval import (
    ExpansionConfig,
    assemble_context,
    entities_from_hits,
    expand,
    load_prompt,
    render_prompt,
)
from codegraph.index import DEFAULT_TOP_K, ChunkIndex, build_index
from codegraph.ontology import ConfigurationError, OntologyGraph, build_graph, scan_repository

log = logging.getLogger("codegraph")

ROOT_ENV = "CODEGRAPH_ROOT"
DEFAULT_OUT = "codegraph_out"
INDEX_FILE = "index.json"
MANIFEST_FILE = "index_manifest.json"
GRAPH_FILE = "graph.json"
AUDIT_FILE = "audit_report.json"
PROMPT_NAMES = ("nograph_answer", "dkb_answer", "llmkb_extract", "llmkb_answer")


class MissingArtifact(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    project_root: str | None
    output_dir: str = DEFAULT_OUT
    chunk_size: int = DEFAULT_CHUNK_SIZE
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP
    top_k: int = DEFAULT_TOP_K
    depth: int = 1
    interface_expansion: bool = True
    timings: bool = True

    def __post_init__(self) -> None:
        if not self.chunk_size > self.chunk_overlap >= 0:
            raise ConfigurationError("--chunk-size must exceed --chunk-overlap (>= 0)")
        if self.top_k < 1:
            raise ConfigurationError("--k must be >= 1")
        if self.depth < 0:
            raise ConfigurationError("--depth must be >= 0")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(
            project_root=args.root or os.environ.get(ROOT_ENV) or None,
            output_dir=args.out,
            chunk_size=args.chunk_size,
            chunk_overlap=args.chunk_overlap,
            top_k=args.k,
            depth=args.depth,
            interface_expansion=not args.no_interface_expansion,
            timings=not args.no_timings,
        )

    @property
    def root(self) -> str:
        if not self.project_root:
            raise ConfigurationError(f"no repository root: pass --root or set {ROOT_ENV}")
        return self.project_root

    @property
    def expansion(self) -> ExpansionConfig:
        return ExpansionConfig(depth=self.depth, interface_expansion=self.interface_expansion)

    def out_path(self, name: str) -> Path:
        out = Path(self.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        return out / name

    def artifact(self, name: str, hint: str) -> Path:
        path = Path(self.output_dir) / name
        if not path.is_file():
            raise MissingArtifact(f"{path} not found; run `codegraph {hint}` first")
        return path


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _untimed(data: dict, config: RunConfig) -> dict:
    if not config.timings:
        data = dict(data, build_seconds=None)
    return data


# -- commands ------------------------------------------------------------------


def cmd_index(config: RunConfig) -> dict:
    files = scan_repository(config.root)
    index = build_index(config.root, files, None, config.chunk_size, config.chunk_overlap)
    manifest = _untimed(index.manifest(files), config)
    _write(config.out_path(INDEX_FILE), _dump(_untimed(index.to_dict(), config)))
    _write(config.out_path(MANIFEST_FILE), _dump(manifest))
    return manifest


def write_graph(graph: OntologyGraph, config: RunConfig, export: str) -> dict:
    data = _untimed(graph.to_dict(), config)
    _write(config.out_path(GRAPH_FILE), _dump(data))
    written = [str(config.out_path(GRAPH_FILE))]
    if export == "dot":
        dot_path = config.out_path("graph.dot")
        _write(dot_path, graph.to_dot())
        written.append(str(dot_path))
    return {
        "build_seconds": data["build_seconds"],
        "edge_count": data["edge_count"],
        "files": written,
        "node_count": data["node_count"],
    }


def cmd_graph(config: RunConfig, export: str = "json") -> dict:
    return write_graph(build_graph(config.root), config, export)


def cmd_export(config: RunConfig, export: str, source: str | None, prompts: bool) -> dict:
    path = Path(source) if source else config.artifact(GRAPH_FILE, "graph")
    graph = OntologyGraph.from_json(path.read_text(encoding="utf-8"))
    result = write_graph(graph, config, export)
    if prompts:
        for name in PROMPT_NAMES:
            target = config.out_path("prompts")
            target.mkdir(exist_ok=True)
            _write(target / f"{name}.txt", load_prompt(name))
            result["files"].append(str(target / f"{name}.txt"))
    return result


def load_artifacts(config: RunConfig) -> tuple[ChunkIndex, OntologyGraph]:
    index_path = config.artifact(INDEX_FILE, "index")
    graph_path = config.artifact(GRAPH_FILE, "graph")
    index = ChunkIndex.from_json(index_path.read_text(encoding="utf-8"))
    graph = OntologyGraph.from_json(graph_path.read_text(encoding="utf-8"))
    return index, graph


def cmd_query(config: RunConfig, question: str, as_text: bool = False) -> dict | str:
    index, graph = load_artifacts(config)
    root = config.root
    started = time.perf_counter()
    hits = index.retrieve(question, config.top_k)
    seeds = entities_from_hits(hits, graph)
    included = expand(graph, seeds, config.expansion)
    bundle = assemble_context(graph, included, seeds, hits, config.expansion, root)
    elapsed = time.perf_counter() - started
    if as_text:
        return render_prompt(bundle, question)
    return dict(bundle.to_dict(), question=question, elapsed_seconds=round(elapsed, 3))


def cmd_audit(
    config: RunConfig,
    records_path: str | None = None,
    counters_path: str | None = None,
    unique_by: str = "basename",
    table: bool = False,
) -> dict | str:
    if counters_path:
        with open(counters_path, encoding="utf-8") as fh:
            counters = json.load(fh)
        report = audit_from_counters(counters)
    elif records_path:
        report = audit_repository(config, records_path, unique_by)
    else:
        raise ConfigurationError("audit needs --records or --counters")
    _write(config.out_path(AUDIT_FILE), _dump(report))
    if table:
        return report_table(report)
    return report


def audit_from_counters(counters: dict) -> dict:
    report: dict = {"edge_totals_note": audit_mod.EDGE_TOTALS_NOTE}
    if "n_files" in counters:
        report["audit"] = audit_mod.AuditReport.from_counts(
            counters["n_files"], counters.get("n_skipped", 0)
        ).to_dict()
    if "chunks_baseline" in counters:
        report["coverage"] = audit_mod.CoverageReport(
            counters["chunks_baseline"],
            counters["chunks_approach"],
            counters.get("nodes_reference"),
            counters.get("nodes_approach"),
        ).to_dict()
    # further approaches measured against the same baseline
    for name, run in sorted(counters.get("runs", {}).items()):
        report.setdefault("runs", {})[name] = audit_mod.CoverageReport(
            counters["chunks_baseline"],
            run["chunks_approach"],
            run.get("nodes_reference"),
            run.get("nodes_approach"),
        ).to_dict()
    report["edge_totals"] = {
        "approach": counters.get("edges_approach"),
        "reference": counters.get("edges_reference"),
    }
    return report


def audit_repository(config: RunConfig, records_path: str, unique_by: str) -> dict:
    root = config.root
    records = audit_mod.load_records(records_path)
    files = scan_repository(root)
    if not files:
        raise ConfigurationError(f"no Java files under {root}")
    report = audit_mod.audit_files(files, records.records, unique_by)
    skipped = set(report.skipped)
    key = (lambda f: f.rsplit("/", 1)[-1]) if unique_by == "basename" else audit_mod.normalize_path
    processed = {f for f in files if key(f) not in skipped}

    baseline = build_index(root, files, None, config.chunk_size, config.chunk_overlap)
    approach = build_index(root, files, processed, config.chunk_size, config.chunk_overlap)
    dkb = build_graph(root, files)
    extracted = audit_mod.build_dependency_graph(records.records)
    coverage = audit_mod.CoverageReport(
        len(baseline), len(approach), len(dkb.entities), len(extracted.nodes)
    )
    return {
        "audit": report.to_dict(),
        "coverage": coverage.to_dict(),
        "edge_totals": {"approach": len(extracted.edges), "reference": len(dkb.edges)},
        "edge_totals_note": audit_mod.EDGE_TOTALS_NOTE,
        "schema_violations": records.schema_violations,
    }


def report_table(report: dict) -> str:
    a = report.get("audit")
    c = report.get("coverage")
    audit = (
        audit_mod.AuditReport.from_counts(a["n_files"], a["n_skipped"], a["skipped"]) if a else None
    )
    coverage = (
        audit_mod.CoverageReport(
            c["chunks_baseline"], c["chunks_approach"], c["nodes_reference"], c["nodes_approach"]
        )
        if c
        else None
    )
    edges = report.get("edge_totals", {})
    return audit_mod.coverage_table(audit, coverage, edges.get("reference"), edges.get("approach"))


def cmd_bench(
    config: RunConfig, suite_path: str, approach: str, generator_cmd: str | None = None
) -> dict:
    suite = QuestionSuite.load(suite_path)
    root = config.root
    files = scan_repository(root)
    index = build_index(root, files, None, config.chunk_size, config.chunk_overlap)
    graph = build_graph(root, files) if approach == "dkb" else None
    pipeline = Pipeline(
        approach=approach,
        root=root,
        index=index,
        graph=graph,
        top_k=config.top_k,
        expansion=config.expansion,
        generator_cmd=generator_cmd,
    )
    artifact = run_suite(pipeline, suite)
    path = config.out_path(artifact.default_filename)
    _write(path, artifact.to_json())
    return {
        "failed_questions": artifact.failures,
        "file": str(path),
        "latency_stats": artifact.to_dict()["latency_stats"],
        "responses": len(artifact.responses),
    }


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--root", help=f"repository root (default: ${ROOT_ENV})")
    common.add_argument("--out", default=DEFAULT_OUT, help="output directory")
    common.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    common.add_argument("--chunk-overlap", type=int, default=DEFAULT_CHUNK_OVERLAP)
    common.add_argument("--k", type=int, default=DEFAULT_TOP_K, help="chunks retrieved per query")
    common.add_argument("--depth", type=int, default=1, help="graph expansion hop depth")
    common.add_argument("--no-interface-expansion", action="store_true")
    common.add_argument(
        "--no-timings",
        action="store_true",
        help="write build_seconds as null so reruns are byte-identical",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="codegraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("index", parents=[common], help="chunk the repository and write the index")

    p = sub.add_parser("graph", parents=[common], help="build the ontology graph")
    p.add_argument("--export", choices=("dot", "json"), default="json")

    p = sub.add_parser("query", parents=[common], help="assemble graph-aware context")
    p.add_argument("question")
    p.add_argument("--text", action="store_true", help="print the filled answer prompt instead")

    p = sub.add_parser("audit", parents=[common], help="audit extraction records")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--records", help="extraction records JSON")
    group.add_argument("--counters", help="JSON of precomputed counters to replay")
    p.add_argument("--unique-by", choices=("basename", "path"), default="basename")
    p.add_argument("--table", action="store_true", help="print a text table instead of JSON")

    p = sub.add_parser("bench", parents=[common], help="run a question suite")
    p.add_argument("--suite", required=True, help="JSON list of questions")
    p.add_argument("--approach", choices=("nograph", "dkb"), default="dkb")
    p.add_argument("--generator-cmd", help="command that reads a prompt on stdin, answers on stdout")

    p = sub.add_parser("export", parents=[common], help="re-export a saved graph")
    p.add_argument("--export", choices=("dot", "json"), default="dot")
    p.add_argument("--from", dest="source", help="graph JSON (default: OUT/graph.json)")
    p.add_argument("--prompts", action="store_true", help="also write the prompt templates")
    return parser


def run(args: argparse.Namespace) -> dict | str:
    config = RunConfig.from_args(args)
    if args.command == "index":
        return cmd_index(config)
    if args.command == "graph":
        return cmd_graph(config, args.export)
    if args.command == "query":
        return cmd_query(config, args.question, args.text)
    if args.command == "audit":
        return cmd_audit(config, args.records, args.counters, args.unique_by, args.table)
    if args.command == "bench":
        return cmd_bench(config, args.suite, args.approach, args.generator_cmd)
    if args.command == "export":
        return cmd_export(config, args.export, args.source, args.prompts)
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="codegraph: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        result = run(args)
    except (ConfigurationError, MissingArtifact) as exc:
        print(f"codegraph: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"codegraph: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(result if isinstance(result, str) else _dump(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
