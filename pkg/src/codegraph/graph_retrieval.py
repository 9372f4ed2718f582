"""Graph-aware context assembly.

Retrieved chunks name their seed entities (file base name), seeds are
expanded through both edge directions up to a hop depth, implementations
pull in the consumers of the interfaces they implement, and the result is
rendered as relationship notes plus budgeted code excerpts.
"""

from __future__ import annotations

import logging
import os
import posixpath
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from importlib import resources

from codegraph.index import RetrievalHit, read_text
from codegraph.ontology import JAVA_SUFFIX, OntologyGraph

log = logging.getLogger(__name__)

VIA_INTERFACE = "uses (via interface)"
_PLACEHOLDER = re.compile(r"\{(context|question)\}")


@dataclass(frozen=True)
class ExpansionConfig:
    depth: int = 1
    interface_expansion: bool = True
    # "seeds": interface rule on seeds only; "all": on every node reached before the last hop
    interface_scope: str = "seeds"
    seed_excerpt_chars: int = 1200
    neighbor_excerpt_chars: int = 800
    max_neighbors_per_seed: int = 8

    def __post_init__(self) -> None:
        for name in ("depth", "seed_excerpt_chars", "neighbor_excerpt_chars", "max_neighbors_per_seed"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.interface_scope not in ("seeds", "all"):
            raise ValueError(f"unknown interface_scope {self.interface_scope!r}")


@dataclass(frozen=True)
class Excerpt:
    entity: str | None  # None for hits whose file maps to no graph node
    path: str
    role: str  # "seed" | "hit" | "neighbor"
    text: str

    def to_dict(self) -> dict:
        return {"entity": self.entity, "path": self.path, "role": self.role, "text": self.text}


@dataclass
class ContextBundle:
    ontology_notes: list[str] = field(default_factory=list)
    excerpts: list[Excerpt] = field(default_factory=list)
    included_entities: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "included_entities": list(self.included_entities),
            "ontology_notes": list(self.ontology_notes),
            "excerpts": [e.to_dict() for e in self.excerpts],
        }

    def render(self) -> str:
        """Plain-text context: relationship notes, then the code excerpts."""
        parts = list(self.ontology_notes)
        for e in self.excerpts:
            label = f"{e.path} ({e.entity})" if e.entity else e.path
            parts.append(f"--- {label} ---\n{e.text}")
        return "\n".join(parts)


def candidate_name(source_path: str) -> str:
    base = posixpath.basename(source_path.replace("\\", "/"))
    return base[: -len(JAVA_SUFFIX)] if base.endswith(JAVA_SUFFIX) else base


def entities_from_hits(hits: Iterable[RetrievalHit], graph: OntologyGraph) -> list[str]:
    """Seed entities named by the hit files, first-seen order, graph nodes only."""
    seeds: list[str] = []
    for hit in hits:
        name = candidate_name(hit.chunk.source_path)
        if name in graph and name not in seeds:
            seeds.append(name)
    return seeds


def interface_consumer_expand(
    graph: OntologyGraph, entity: str, notes: list[str] | None = None
) -> list[str]:
    """Predecessors of every interface *entity* implements, sorted by name.

    The entity itself is left out even though it is a predecessor of its own
    interface. When *notes* is given, one note per implemented interface is
    appended to it.
    """
    consumers: set[str] = set()
    for iface in graph.successors(entity):
        if graph.relation(entity, iface) != "implements":
            continue
        if notes is not None:
            notes.append(
                f"[ONTOLOGY INFO]: {entity} implements {iface}. Checking consumers of {iface}..."
            )
        consumers.update(p for p in graph.predecessors(iface) if p != entity)
    return sorted(consumers)


def _neighbors(graph: OntologyGraph, name: str) -> set[str]:
    return set(graph.successors(name)) | set(graph.predecessors(name))


def expand_with_origin(
    graph: OntologyGraph, seeds: Sequence[str], config: ExpansionConfig
) -> dict[str, str]:
    """Ordered mapping of every included entity to the seed that reached it first.

    Hops follow edges in both directions; with interface expansion on, a
    node that implements an interface also links to that interface's
    consumers (only seed nodes do, unless ``interface_scope == "all"``).
    """
    origin: dict[str, str] = {}
    for seed in seeds:
        if seed in graph:
            origin.setdefault(seed, seed)
    seed_set = set(origin)
    for seed in list(origin):
        visited = {seed}
        frontier = [seed]
        for _ in range(config.depth):
            reached: set[str] = set()
            for node in frontier:
                reached |= _neighbors(graph, node)
                if config.interface_expansion and (
                    config.interface_scope == "all" or node in seed_set
                ):
                    reached.update(interface_consumer_expand(graph, node))
            frontier = sorted(reached - visited)
            if not frontier:
                break
            visited.update(frontier)
            for node in frontier:
                origin.setdefault(node, seed)
    return origin


def expand(graph: OntologyGraph, seeds: Sequence[str], config: ExpansionConfig) -> list[str]:
    """Included entity set V_d in stable order (seed order, then hops by name)."""
    return list(expand_with_origin(graph, seeds, config))


def _relationship_notes(
    graph: OntologyGraph, name: str, config: ExpansionConfig, notes: list[str]
) -> None:
    consumers = interface_consumer_expand(graph, name, notes) if config.interface_expansion else []
    notes.append(f"[ONTOLOGY INFO]: Relationships for {name}:")
    for dep in graph.successors(name):
        notes.append(f"  - [INJECTS/USES] -> {dep} ({graph.relation(name, dep)})")
    users = graph.predecessors(name)
    users += [c for c in consumers if c not in users]
    for user in users:
        notes.append(f"  - [USED BY] <- {user} ({graph.relation(user, name) or VIA_INTERFACE})")


def assemble_context(
    graph: OntologyGraph,
    included: Sequence[str],
    seeds: Sequence[str],
    hits: Sequence[RetrievalHit],
    config: ExpansionConfig,
    root: str | os.PathLike,
) -> ContextBundle:
    """Notes and excerpts for each hit file, in hit order, deduplicated by class name."""
    bundle = ContextBundle(included_entities=list(included))
    if not hits:
        return bundle
    origin = expand_with_origin(graph, seeds, config)
    seed_set = set(seeds)
    excerpted: set[str] = set()
    processed: set[str] = set()
    for hit in hits:
        name = candidate_name(hit.chunk.source_path)
        if name in processed:
            continue
        processed.add(name)
        text = hit.chunk.text[: config.seed_excerpt_chars]
        if name not in graph or name not in seed_set:
            bundle.excerpts.append(Excerpt(None, hit.chunk.source_path, "hit", text))
            continue
        _relationship_notes(graph, name, config, bundle.ontology_notes)
        bundle.excerpts.append(Excerpt(name, hit.chunk.source_path, "seed", text))
        excerpted.add(name)

        budget = config.max_neighbors_per_seed
        for neighbor, reached_from in origin.items():
            if budget == 0:
                break
            if reached_from != name or neighbor in seed_set or neighbor in excerpted:
                continue
            path = graph.file_map[neighbor]
            try:
                source = read_text(root, path)
            except OSError as exc:
                log.warning("cannot read %s for %s: %s", path, neighbor, exc)
                bundle.ontology_notes.append(
                    f"[ONTOLOGY INFO]: Source for {neighbor} unavailable ({path})."
                )
                continue
            bundle.excerpts.append(
                Excerpt(neighbor, path, "neighbor", source[: config.neighbor_excerpt_chars])
            )
            excerpted.add(neighbor)
            budget -= 1
    return bundle


def load_prompt(name: str) -> str:
    return resources.files("codegraph").joinpath("prompts", f"{name}.txt").read_text("utf-8")


def render_prompt(bundle: ContextBundle, question: str, template: str = "dkb_answer") -> str:
    values = {"context": bundle.render(), "question": question}
    # single pass, so braces inside the code excerpts are left alone
    return _PLACEHOLDER.sub(lambda m: values[m.group(1)], load_prompt(template))
