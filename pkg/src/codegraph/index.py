"""Chunk index with deterministic TF-IDF cosine retrieval.

Scoring, fixed so rankings reproduce exactly:

* tokens are maximal ``[a-z0-9_]+`` runs of the lowercased text;
* ``idf(t) = ln((1 + N) / (1 + df(t))) + 1`` over the N indexed chunks;
* chunk and query vectors are raw counts times idf, L2-normalized;
* the score is their dot product, summed over query terms in sorted order.

Hits are ordered by (score desc, path asc, offset asc).
"""

from __future__ import annotations

import json
import logging
import math
import os
import re
import time
from array import array
from collections import Counter
from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from codegraph.chunking import DEFAULT_CHUNK_OVERLAP, DEFAULT_CHUNK_SIZE, CodeChunk, chunk_file
from codegraph.kernels import accumulate_scores

log = logging.getLogger(__name__)

_TERM_RE = re.compile(r"[a-z0-9_]+")

DEFAULT_TOP_K = 10


def tokenize(text: str) -> list[str]:
    return _TERM_RE.findall(text.lower())


@dataclass(frozen=True)
class RetrievalHit:
    chunk: CodeChunk
    score: float


class Retriever(Protocol):
    def retrieve(self, query: str, k: int = DEFAULT_TOP_K) -> list[RetrievalHit]: ...


def hit_order(hit: RetrievalHit) -> tuple:
    return (-hit.score, hit.chunk.source_path, hit.chunk.start_offset)


@dataclass(frozen=True)
class ChunkIndex:
    chunks: tuple[CodeChunk, ...]
    chunk_size: int = DEFAULT_CHUNK_SIZE
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP
    build_seconds: float | None = None
    idf: dict[str, float] = field(init=False, repr=False, compare=False)
    _postings: dict[str, tuple[array, array]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.chunks)
        counts = [Counter(tokenize(c.text)) for c in self.chunks]
        df: Counter[str] = Counter()
        for tf in counts:
            df.update(tf.keys())
        idf = {t: math.log((1 + n) / (1 + d)) + 1.0 for t, d in df.items()}
        postings: dict[str, tuple[array, array]] = {}
        for cid, tf in enumerate(counts):
            weights = {t: c * idf[t] for t, c in tf.items()}
            norm = math.sqrt(sum(w * w for w in weights.values()))
            for t in sorted(weights):
                ids, ws = postings.setdefault(t, (array("i"), array("d")))
                ids.append(cid)
                ws.append(weights[t] / norm)
        object.__setattr__(self, "idf", idf)
        object.__setattr__(self, "_postings", postings)

    def __len__(self) -> int:
        return len(self.chunks)

    def query_vector(self, query: str) -> dict[str, float]:
        tf = Counter(t for t in tokenize(query) if t in self.idf)
        weights = {t: c * self.idf[t] for t, c in tf.items()}
        norm = math.sqrt(sum(w * w for w in weights.values()))
        return {t: w / norm for t, w in weights.items()} if norm else {}

    def scores(self, query: str) -> array:
        qvec = self.query_vector(query)
        postings = [(qvec[t], *self._postings[t]) for t in sorted(qvec)]
        return accumulate_scores(postings, len(self.chunks))

    def retrieve(self, query: str, k: int = DEFAULT_TOP_K) -> list[RetrievalHit]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self.chunks:
            return []
        scores = self.scores(query)
        hits = [RetrievalHit(self.chunks[i], s) for i, s in enumerate(scores) if s > 0.0]
        hits.sort(key=hit_order)
        return hits[:k]

    # -- manifest and persistence -------------------------------------------

    def per_file_counts(self) -> dict[str, int]:
        return dict(Counter(c.source_path for c in self.chunks))

    def manifest(self, files: Iterable[str] | None = None) -> dict:
        counts = self.per_file_counts()
        paths = list(files) if files is not None else sorted(counts)
        return {
            "build_seconds": self.build_seconds,
            "chunk_overlap": self.chunk_overlap,
            "chunk_size": self.chunk_size,
            "per_file": [{"chunks": counts.get(p, 0), "path": p} for p in paths],
            "total_chunks": len(self.chunks),
        }

    def to_dict(self) -> dict:
        return {
            "build_seconds": self.build_seconds,
            "chunk_overlap": self.chunk_overlap,
            "chunk_size": self.chunk_size,
            "chunks": [
                {"id": c.id, "path": c.source_path, "start_offset": c.start_offset, "text": c.text}
                for c in self.chunks
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ChunkIndex:
        return cls(
            chunks=tuple(
                CodeChunk(c["id"], c["path"], c["start_offset"], c["text"]) for c in data["chunks"]
            ),
            chunk_size=data["chunk_size"],
            chunk_overlap=data["chunk_overlap"],
            build_seconds=data.get("build_seconds"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ChunkIndex:
        return cls.from_dict(json.loads(text))


def read_text(root: str | os.PathLike, rel_path: str) -> str:
    # newline="" keeps offsets aligned with the bytes on disk
    with open(Path(root) / rel_path, encoding="utf-8", errors="replace", newline="") as fh:
        return fh.read()


def build_index(
    root: str | os.PathLike,
    files: Iterable[str],
    include_filter: Collection[str] | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP,
) -> ChunkIndex:
    """Chunk every (included) file and build the term statistics."""
    started = time.perf_counter()
    chunks: list[CodeChunk] = []
    for rel in files:
        if include_filter is not None and rel not in include_filter:
            continue
        try:
            text = read_text(root, rel)
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", rel, exc)
            continue
        chunks.extend(
            chunk_file(text, chunk_size, chunk_overlap, source_path=rel, first_id=len(chunks))
        )
    index = ChunkIndex(tuple(chunks), chunk_size, chunk_overlap)
    object.__setattr__(index, "build_seconds", time.perf_counter() - started)
    return index


def retrieve(index: Retriever, query: str, k: int = DEFAULT_TOP_K) -> list[RetrievalHit]:
    return index.retrieve(query, k)
