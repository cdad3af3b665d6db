"""Scene document: both layers plus cross-layer links, with canonical
JSON serialization ("semtopo/1").

Serialization is canonical -- sorted keys, fixed field order, shortest
round-trip decimals -- so identical documents yield identical bytes and
golden-file comparisons are exact.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .entitygraph import EntityEdge, EntityGraph, EntityNode
from .errors import ConfigError, InputError, InvariantError

logger = logging.getLogger(__name__)

SCENE_VERSION = "semtopo/1"

# Sentiment hue mapping shipped with the document: score -1 maps to the cool
# endpoint, +1 to the warm one, linear RGB in between. The viewer needs no
# other semantic knowledge.
PALETTE = {
    "name": "cool-warm",
    "low_color": (59, 76, 192),
    "high_color": (180, 4, 38),
    "score_range": (-1.0, 1.0),
}


@dataclass(frozen=True)
class SemanticNode:
    sentence_index: int
    position: tuple[float, float, float]
    cluster: int
    sentiment_label: int
    sentiment_score: float
    text: str


@dataclass(frozen=True)
class CrossLink:
    entity_a: str
    entity_b: str
    timestamp: int
    semantic_node_ref: int


@dataclass(frozen=True)
class EntityLayer:
    graph: EntityGraph
    positions: Mapping[str, tuple[float, ...]]
    dim: int = 3


@dataclass(frozen=True)
class SceneDocument:
    version: str
    provenance: Mapping[str, Any]
    semantic_layer: tuple[SemanticNode, ...]
    entity_layer: EntityLayer
    links: tuple[CrossLink, ...]
    links_skipped: int = 0
    palette: Mapping[str, Any] = field(default_factory=lambda: dict(PALETTE))


def link_layers(
    semantic_layer: Sequence[SemanticNode], entity_graph: EntityGraph
) -> tuple[list[CrossLink], int]:
    """One link per (edge, event timestamp); events whose sentence was
    filtered out are skipped with a warning and counted."""
    known = {node.sentence_index for node in semantic_layer}
    links: list[CrossLink] = []
    skipped = 0
    for edge in entity_graph.edges:
        for ts in edge.event_timestamps:
            if ts in known:
                links.append(
                    CrossLink(
                        entity_a=edge.entity_a,
                        entity_b=edge.entity_b,
                        timestamp=ts,
                        semantic_node_ref=ts,
                    )
                )
            else:
                skipped += 1
                logger.warning(
                    "link for edge (%s, %s) at timestamp %d skipped: "
                    "sentence not retained",
                    edge.entity_a, edge.entity_b, ts,
                )
    return links, skipped


def build_semantic_nodes(
    records,
    coords,
    cluster_labels,
    row_index: Sequence[int],
    sentiment,
) -> list[SemanticNode]:
    """Layer-1 nodes for every retained sentence, sorted by sentence index."""
    retained = {r.index: r for r in records if r.retained}
    if not retained:
        raise ConfigError("no retained sentences")
    if len(row_index) != len(retained):
        raise InvariantError(
            f"projection rows ({len(row_index)}) do not cover retained "
            f"sentences ({len(retained)})"
        )
    nodes = []
    for row, sentence_index in enumerate(row_index):
        record = retained.get(sentence_index)
        if record is None:
            raise InvariantError(
                f"projection row {row} references unknown sentence {sentence_index}"
            )
        nodes.append(
            SemanticNode(
                sentence_index=sentence_index,
                position=tuple(float(x) for x in coords[row]),
                cluster=int(cluster_labels[row]),
                sentiment_label=int(sentiment.labels[sentence_index]),
                sentiment_score=float(sentiment.scores[sentence_index]),
                text=record.raw,
            )
        )
    nodes.sort(key=lambda n: n.sentence_index)
    return nodes


def assemble_scene(
    semantic_nodes: Sequence[SemanticNode],
    entity_graph: EntityGraph,
    entity_positions: Mapping[str, Sequence[float]],
    layout_dim: int,
    links: Sequence[CrossLink],
    links_skipped: int,
    provenance: Mapping[str, Any],
) -> SceneDocument:
    doc = SceneDocument(
        version=SCENE_VERSION,
        provenance=dict(provenance),
        semantic_layer=tuple(semantic_nodes),
        entity_layer=EntityLayer(
            graph=entity_graph,
            positions={
                name: tuple(float(x) for x in pos)
                for name, pos in entity_positions.items()
            },
            dim=layout_dim,
        ),
        links=tuple(links),
        links_skipped=links_skipped,
    )
    validate(doc)
    return doc


def build_scene(
    records,
    coords,
    cluster_labels,
    row_index: Sequence[int],
    sentiment,
    entity_graph: EntityGraph,
    entity_positions: Mapping[str, Sequence[float]],
    layout_dim: int,
    provenance: Mapping[str, Any],
) -> SceneDocument:
    """Assemble and validate the full document from pipeline outputs."""
    nodes = build_semantic_nodes(records, coords, cluster_labels, row_index, sentiment)
    links, skipped = link_layers(nodes, entity_graph)
    return assemble_scene(
        nodes, entity_graph, entity_positions, layout_dim, links, skipped, provenance
    )


def validate(doc: SceneDocument) -> None:
    """Referential-integrity and range checks; raises InvariantError naming
    the first dangling reference found."""
    if doc.version != SCENE_VERSION:
        raise InvariantError(f"unsupported scene version {doc.version!r}")
    seen_sentences = set()
    for node in doc.semantic_layer:
        if node.sentence_index in seen_sentences:
            raise InvariantError(
                f"duplicate semantic node for sentence {node.sentence_index}"
            )
        seen_sentences.add(node.sentence_index)
        if len(node.position) != 3 or not all(
            isinstance(x, float) and x == x and abs(x) != float("inf")
            for x in node.position
        ):
            raise InvariantError(
                f"semantic node {node.sentence_index} has a bad position"
            )
        if node.sentiment_label not in (0, 1):
            raise InvariantError(
                f"semantic node {node.sentence_index}: sentiment label "
                f"{node.sentiment_label} not in {{0, 1}}"
            )
        if not -1.0 <= node.sentiment_score <= 1.0:
            raise InvariantError(
                f"semantic node {node.sentence_index}: score outside [-1, 1]"
            )
        if (node.sentiment_label == 1) != (node.sentiment_score >= 0):
            raise InvariantError(
                f"semantic node {node.sentence_index}: label/score sign mismatch"
            )

    graph = doc.entity_layer.graph  # EntityGraph.__post_init__ checked itself
    node_names = {n.entity for n in graph.nodes}
    position_names = set(doc.entity_layer.positions)
    if node_names != position_names:
        missing = sorted(node_names - position_names)
        extra = sorted(position_names - node_names)
        raise InvariantError(
            f"entity positions out of sync: missing {missing}, extra {extra}"
        )
    for name, pos in doc.entity_layer.positions.items():
        if len(pos) != doc.entity_layer.dim:
            raise InvariantError(
                f"entity {name!r} position has {len(pos)} components, "
                f"expected {doc.entity_layer.dim}"
            )

    edge_keys = {(e.entity_a, e.entity_b): e for e in graph.edges}
    expected_events = sum(len(e.event_timestamps) for e in graph.edges)
    if len(doc.links) + doc.links_skipped != expected_events:
        raise InvariantError(
            f"link conservation broken: {len(doc.links)} links + "
            f"{doc.links_skipped} skipped != {expected_events} events"
        )
    linked: dict[tuple[str, str, int], int] = {}
    for link in doc.links:
        edge = edge_keys.get((link.entity_a, link.entity_b))
        if edge is None:
            raise InvariantError(
                f"link references unknown edge ({link.entity_a!r}, {link.entity_b!r})"
            )
        if link.semantic_node_ref != link.timestamp:
            raise InvariantError(
                f"link node ref {link.semantic_node_ref} != timestamp {link.timestamp}"
            )
        if link.semantic_node_ref not in seen_sentences:
            raise InvariantError(
                f"link references missing semantic node {link.semantic_node_ref}"
            )
        key = (link.entity_a, link.entity_b, link.timestamp)
        linked[key] = linked.get(key, 0) + 1
        available = sum(1 for ts in edge.event_timestamps if ts == link.timestamp)
        if linked[key] > available:
            raise InvariantError(
                f"edge ({link.entity_a!r}, {link.entity_b!r}) has {available} "
                f"event(s) at timestamp {link.timestamp} but more links"
            )


def summarize(doc: SceneDocument) -> dict[str, int]:
    return {
        "semantic_nodes": len(doc.semantic_layer),
        "clusters": len({n.cluster for n in doc.semantic_layer}),
        "entities": len(doc.entity_layer.graph.nodes),
        "entity_edges": len(doc.entity_layer.graph.edges),
        "links": len(doc.links),
        "links_skipped": doc.links_skipped,
    }


def _to_dict(doc: SceneDocument) -> dict:
    return {
        "version": doc.version,
        "provenance": dict(doc.provenance),
        "palette": {
            "name": doc.palette["name"],
            "low_color": [int(c) for c in doc.palette["low_color"]],
            "high_color": [int(c) for c in doc.palette["high_color"]],
            "score_range": [float(x) for x in doc.palette["score_range"]],
        },
        "semantic_layer": [
            {
                "sentence_index": n.sentence_index,
                "position": [float(x) for x in n.position],
                "cluster": n.cluster,
                "sentiment_label": n.sentiment_label,
                "sentiment_score": float(n.sentiment_score),
                "text": n.text,
            }
            for n in doc.semantic_layer
        ],
        "entity_layer": {
            "dim": doc.entity_layer.dim,
            "nodes": [
                {
                    "entity": n.entity,
                    "saliency": float(n.saliency),
                    "mention_count": n.mention_count,
                    "position": [
                        float(x) for x in doc.entity_layer.positions[n.entity]
                    ],
                }
                for n in doc.entity_layer.graph.nodes
            ],
            "edges": [
                {
                    "entity_a": e.entity_a,
                    "entity_b": e.entity_b,
                    "cooc_count": e.cooc_count,
                    "dep_proxy": float(e.dep_proxy),
                    "weight": float(e.weight),
                    "event_timestamps": list(e.event_timestamps),
                }
                for e in doc.entity_layer.graph.edges
            ],
        },
        "links": [
            {
                "entity_a": link.entity_a,
                "entity_b": link.entity_b,
                "timestamp": link.timestamp,
                "semantic_node": link.semantic_node_ref,
            }
            for link in doc.links
        ],
        "links_skipped": doc.links_skipped,
    }


def serialize(doc: SceneDocument) -> bytes:
    payload = json.dumps(
        _to_dict(doc), sort_keys=True, indent=1, ensure_ascii=False, allow_nan=False
    )
    return (payload + "\n").encode("utf-8")


class _Walker:
    """Schema walker producing path-addressed parse errors."""

    def __init__(self, data: Any):
        self.data = data

    def get(self, obj, key, kind, path):
        if not isinstance(obj, dict):
            raise InputError(f"{path or '<root>'}: expected an object")
        if key not in obj:
            raise InputError(f"{path}{key}: missing field")
        value = obj[key]
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InputError(f"{path}{key}: expected a number")
            return float(value)
        if kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise InputError(f"{path}{key}: expected an integer")
            return value
        if not isinstance(value, kind):
            raise InputError(f"{path}{key}: expected {kind.__name__}")
        return value


def parse(data: bytes | str) -> SceneDocument:
    """Parse and fully validate scene bytes; never returns a partial document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"scene file is not UTF-8: {exc}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"scene file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise InputError("scene file must contain a JSON object")
    w = _Walker(raw)
    version = w.get(raw, "version", str, "")
    if version != SCENE_VERSION:
        raise InputError(
            f"unsupported scene version {version!r}; this reader handles "
            f"{SCENE_VERSION!r}"
        )
    provenance = w.get(raw, "provenance", dict, "")
    palette_raw = w.get(raw, "palette", dict, "")
    palette = {
        "name": w.get(palette_raw, "name", str, "palette."),
        "low_color": tuple(
            int(c) for c in w.get(palette_raw, "low_color", list, "palette.")
        ),
        "high_color": tuple(
            int(c) for c in w.get(palette_raw, "high_color", list, "palette.")
        ),
        "score_range": tuple(
            float(x) for x in w.get(palette_raw, "score_range", list, "palette.")
        ),
    }

    nodes = []
    for i, item in enumerate(w.get(raw, "semantic_layer", list, "")):
        path = f"semantic_layer[{i}]."
        position = w.get(item, "position", list, path)
        if len(position) != 3:
            raise InputError(f"{path}position: expected 3 components")
        nodes.append(
            SemanticNode(
                sentence_index=w.get(item, "sentence_index", int, path),
                position=tuple(float(x) for x in position),
                cluster=w.get(item, "cluster", int, path),
                sentiment_label=w.get(item, "sentiment_label", int, path),
                sentiment_score=w.get(item, "sentiment_score", float, path),
                text=w.get(item, "text", str, path),
            )
        )

    layer_raw = w.get(raw, "entity_layer", dict, "")
    dim = w.get(layer_raw, "dim", int, "entity_layer.")
    entity_nodes = []
    positions = {}
    for i, item in enumerate(w.get(layer_raw, "nodes", list, "entity_layer.")):
        path = f"entity_layer.nodes[{i}]."
        entity = w.get(item, "entity", str, path)
        entity_nodes.append(
            EntityNode(
                entity=entity,
                saliency=w.get(item, "saliency", float, path),
                mention_count=w.get(item, "mention_count", int, path),
            )
        )
        positions[entity] = tuple(
            float(x) for x in w.get(item, "position", list, path)
        )
    entity_edges = []
    for i, item in enumerate(w.get(layer_raw, "edges", list, "entity_layer.")):
        path = f"entity_layer.edges[{i}]."
        timestamps = w.get(item, "event_timestamps", list, path)
        if not all(isinstance(t, int) and not isinstance(t, bool) for t in timestamps):
            raise InputError(f"{path}event_timestamps: expected integers")
        entity_edges.append(
            EntityEdge(
                entity_a=w.get(item, "entity_a", str, path),
                entity_b=w.get(item, "entity_b", str, path),
                cooc_count=w.get(item, "cooc_count", int, path),
                dep_proxy=w.get(item, "dep_proxy", float, path),
                weight=w.get(item, "weight", float, path),
                event_timestamps=tuple(timestamps),
            )
        )
    try:
        graph = EntityGraph(nodes=tuple(entity_nodes), edges=tuple(entity_edges))
    except InvariantError as exc:
        raise InvariantError(f"entity_layer: {exc}") from None

    links = []
    for i, item in enumerate(w.get(raw, "links", list, "")):
        path = f"links[{i}]."
        links.append(
            CrossLink(
                entity_a=w.get(item, "entity_a", str, path),
                entity_b=w.get(item, "entity_b", str, path),
                timestamp=w.get(item, "timestamp", int, path),
                semantic_node_ref=w.get(item, "semantic_node", int, path),
            )
        )

    doc = SceneDocument(
        version=version,
        provenance=provenance,
        semantic_layer=tuple(nodes),
        entity_layer=EntityLayer(graph=graph, positions=positions, dim=dim),
        links=tuple(links),
        links_skipped=w.get(raw, "links_skipped", int, ""),
        palette=palette,
    )
    validate(doc)
    return doc
