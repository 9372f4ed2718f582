"""Deterministic code-knowledge-graph retrieval and indexing audit for Java repositories."""

from codegraph.audit import (
    AuditReport,
    CoverageReport,
    ExtractionRecord,
    build_dependency_graph,
    chunk_coverage,
    detect_skips,
    file_success_rate,
    node_coverage,
)
from codegraph.bench import LatencyStats, QuestionSuite, RunArtifact, latency_stats, run_suite
from codegraph.chunking import CodeChunk, chunk_file
from codegraph.graph_retrieval import (
    ContextBundle,
    ExpansionConfig,
    assemble_context,
    entities_from_hits,
    expand,
    interface_consumer_expand,
)
from codegraph.index import ChunkIndex, RetrievalHit, build_index, retrieve
from codegraph.kernels import BACKEND
from codegraph.ontology import (
    CodeEntity,
    OntologyGraph,
    TypedEdge,
    build_graph,
    discover_types,
    extract_edges,
    scan_repository,
)

__version__ = "0.1.0"
