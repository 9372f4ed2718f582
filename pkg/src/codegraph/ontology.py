"""Deterministic typed dependency graph over project-local Java types.

Pass 1 discovers every type declaration and builds the simple-name ->
file map; pass 2 turns field types, constructor parameter types and
supertype clauses into ``injects`` / ``implements`` / ``extends`` edges,
keeping only targets that are themselves project types.
"""

from __future__ import annotations

import json
import logging
import os
import time
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from codegraph.java.parser import KINDS, TypeDeclaration, parse_declarations

log = logging.getLogger(__name__)

JAVA_SUFFIX = ".java"
RELATIONS = ("injects", "extends", "implements")
# higher wins when several signals connect the same ordered pair
RELATION_PRECEDENCE = {"extends": 3, "implements": 2, "injects": 1}


class ConfigurationError(Exception):
    """The repository root is missing or unreadable."""


@dataclass(frozen=True, order=True)
class CodeEntity:
    name: str
    kind: str
    path: str

    def __post_init__(self) -> None:
        if not self.name or "/" in self.name or "\\" in self.name:
            raise ValueError(f"invalid entity name {self.name!r}")
        if self.kind not in KINDS:
            raise ValueError(f"invalid entity kind {self.kind!r}")


@dataclass(frozen=True, order=True)
class TypedEdge:
    src: str
    dst: str
    relation: str

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValueError(f"invalid relation {self.relation!r}")
        if self.src == self.dst:
            raise ValueError(f"self-edge on {self.src!r}")


FileMap = Mapping[str, str]


@dataclass(frozen=True)
class OntologyGraph:
    """Immutable ontology graph; entities and edges are kept sorted."""

    entities: tuple[CodeEntity, ...]
    edges: tuple[TypedEdge, ...]
    build_seconds: float | None = None
    file_map: dict[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        entities = tuple(sorted(self.entities))
        edges = tuple(sorted(self.edges))
        object.__setattr__(self, "entities", entities)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "file_map", {e.name: e.path for e in entities})
        if len(self.file_map) != len(entities):
            raise ValueError("duplicate entity names")
        seen = set()
        for e in edges:
            if e.src not in self.file_map or e.dst not in self.file_map:
                raise ValueError(f"edge {e.src}->{e.dst} leaves the entity set")
            if (e.src, e.dst) in seen:
                raise ValueError(f"duplicate edge {e.src}->{e.dst}")
            seen.add((e.src, e.dst))

    def __contains__(self, name: object) -> bool:
        return name in self.file_map

    def __len__(self) -> int:
        return len(self.entities)

    @cached_property
    def _adjacency(self) -> tuple[dict, dict, dict]:
        succ: dict[str, list[str]] = {e.name: [] for e in self.entities}
        pred: dict[str, list[str]] = {e.name: [] for e in self.entities}
        rel: dict[tuple[str, str], str] = {}
        for e in self.edges:  # sorted, so adjacency lists come out name-ordered
            succ[e.src].append(e.dst)
            rel[(e.src, e.dst)] = e.relation
        for e in sorted(self.edges, key=lambda e: (e.dst, e.src)):
            pred[e.dst].append(e.src)
        return succ, pred, rel

    def successors(self, name: str) -> list[str]:
        return list(self._adjacency[0].get(name, ()))

    def predecessors(self, name: str) -> list[str]:
        return list(self._adjacency[1].get(name, ()))

    def relation(self, src: str, dst: str) -> str | None:
        return self._adjacency[2].get((src, dst))

    def entity(self, name: str) -> CodeEntity:
        return self._entity_index[name]

    @cached_property
    def _entity_index(self) -> dict[str, CodeEntity]:
        return {e.name: e for e in self.entities}

    # -- export ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "build_seconds": self.build_seconds,
            "edge_count": len(self.edges),
            "edges": [{"src": e.src, "dst": e.dst, "relation": e.relation} for e in self.edges],
            "node_count": len(self.entities),
            "nodes": [{"name": e.name, "kind": e.kind, "path": e.path} for e in self.entities],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph ontology {"]
        for e in self.entities:
            lines.append(f"  {_dot_id(e.name)} [label={_dot_id(e.name)}, kind={_dot_id(e.kind)}];")
        for e in self.edges:
            lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.dst)} [label={_dot_id(e.relation)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> OntologyGraph:
        return cls(
            entities=tuple(CodeEntity(n["name"], n["kind"], n["path"]) for n in data["nodes"]),
            edges=tuple(TypedEdge(e["src"], e["dst"], e["relation"]) for e in data["edges"]),
            build_seconds=data.get("build_seconds"),
        )

    @classmethod
    def from_json(cls, text: str) -> OntologyGraph:
        return cls.from_dict(json.loads(text))


def _dot_id(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


# -- scanning -------------------------------------------------------------


def scan_repository(root: str | os.PathLike) -> list[str]:
    """List Java sources under *root* as sorted, forward-slash relative paths."""
    root = Path(root)
    if not root.is_dir() or not os.access(root, os.R_OK | os.X_OK):
        raise ConfigurationError(f"repository root {str(root)!r} is missing or unreadable")
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for filename in filenames:
            if not filename.endswith(JAVA_SUFFIX):
                continue
            full = os.path.join(dirpath, filename)
            rel = Path(os.path.relpath(full, root)).as_posix()
            try:
                with open(full, "rb"):
                    pass
            except OSError as exc:
                log.warning("skipping unreadable file %s: %s", rel, exc)
                continue
            found.append(rel)
    found.sort()
    return found


def read_source(root: str | os.PathLike, rel_path: str) -> bytes:
    return (Path(root) / rel_path).read_bytes()


def decode_source(source: bytes) -> str:
    return source.decode("utf-8", errors="replace")


def _declarations(file: str, source: bytes) -> list[TypeDeclaration]:
    if b"\x00" in source:
        log.warning("no syntax tree for %s: binary content", file)
        return []
    return parse_declarations(decode_source(source))


# -- the two passes ---------------------------------------------------------


def discover_types(file: str, source: bytes) -> list[CodeEntity]:
    """Pass 1 for one file: every declared type (nested ones included) mapped to *file*."""
    return [CodeEntity(d.name, d.kind, file) for d in _declarations(file, source)]


def _edges_for(decl: TypeDeclaration, file_map: FileMap) -> list[TypedEdge]:
    # interfaces put their super-interfaces in an extends clause
    raw: list[tuple[str, str]] = [(t, "extends") for t in decl.extends]
    raw += [(t, "implements") for t in decl.implements]
    raw += [(t, "injects") for t in decl.field_types]
    raw += [(t, "injects") for t in decl.constructor_param_types]
    best: dict[str, str] = {}
    for dst, relation in raw:
        if dst == decl.name or dst not in file_map:
            continue
        current = best.get(dst)
        if current is None or RELATION_PRECEDENCE[relation] > RELATION_PRECEDENCE[current]:
            best[dst] = relation
    return [TypedEdge(decl.name, dst, rel) for dst, rel in sorted(best.items())]


def extract_edges(entity: CodeEntity, source: bytes, file_map: FileMap) -> list[TypedEdge]:
    """Pass 2 for one entity: typed edges to other project types, deduplicated."""
    for decl in _declarations(entity.path, source):
        if decl.name == entity.name:
            return _edges_for(decl, file_map)
    return []


def build_graph(root: str | os.PathLike, files: Iterable[str] | None = None) -> OntologyGraph:
    """Run both passes over the repository and time the construction."""
    started = time.perf_counter()
    if files is None:
        files = scan_repository(root)

    parsed: dict[str, list[TypeDeclaration]] = {}
    entities: dict[str, CodeEntity] = {}
    for rel in files:
        try:
            source = read_source(root, rel)
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", rel, exc)
            continue
        parsed[rel] = decls = _declarations(rel, source)
        for d in decls:
            existing = entities.get(d.name)
            if existing is not None:
                log.warning(
                    "type name collision: %s declared in %s and %s; keeping the first",
                    d.name,
                    existing.path,
                    rel,
                )
                continue
            entities[d.name] = CodeEntity(d.name, d.kind, rel)

    file_map = {name: e.path for name, e in entities.items()}
    edges: list[TypedEdge] = []
    for entity in entities.values():
        decl = next(d for d in parsed[entity.path] if d.name == entity.name)
        edges.extend(_edges_for(decl, file_map))

    return OntologyGraph(
        entities=tuple(entities.values()),
        edges=tuple(edges),
        build_seconds=time.perf_counter() - started,
    )
