"""End-to-end pipeline: config file parsing and stage orchestration.

Stage order: corpus -> embedding -> projection -> clustering -> affect ->
entitygraph -> forcelayout -> link -> build. The first failing stage aborts
with its name and cause; the resulting scene bytes are a pure function of
(input files, config).
"""
from __future__ import annotations

import configparser
import hashlib
import logging
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from . import affect, corpus, embedding, entitygraph, scene
from .clustering import DensityPeakClusterer
from .errors import ConfigError, InputError, SemtopoError
from .forcelayout import ForceAtlas2Layout
from .projection import SemanticProjection

logger = logging.getLogger(__name__)

STAGES = (
    "corpus",
    "embedding",
    "projection",
    "clustering",
    "affect",
    "entitygraph",
    "forcelayout",
    "link",
    "build",
)


@dataclass
class PipelineConfig:
    """Resolved configuration for one pipeline run.

    Mirrors the INI config file; CLI flags override individual fields.
    """

    text: str = ""
    stopwords: str = ""
    patterns: tuple[str, ...] = ()
    delimiters: str = ""

    embedding_source: str = ""  # "file" | "fallback"
    embedding_path: str = ""
    embedding_dim: int = embedding.DEFAULT_DIM

    projection_n_neighbors: int = 15
    projection_min_dist: float = 0.1
    projection_epochs: int = 500
    projection_learning_rate: float = 1.0
    projection_negative_samples: int = 5

    clustering_rho_quantile: float = 0.65
    clustering_dc_quantile: float = 0.02
    clustering_delta_quantile: float = 0.95

    sentiment_path: str = ""
    lexicon_path: str = ""

    entity_window: int = 5
    entity_alpha: float = 0.7
    gazetteer_path: str = ""
    annotations_path: str = ""
    entity_heuristic: bool = False

    layout_scaling: float = 10.0
    layout_gravity: float = 1.0
    layout_iterations: int = 1000
    layout_dim: int = 3

    seed: int = 0
    # per-stage overrides; None means "use the master seed"
    embedding_seed: int | None = None
    projection_seed: int | None = None
    layout_seed: int | None = None
    out_path: str = "scene.json"

    def snapshot(self) -> dict[str, Any]:
        """JSON-native view of every resolved value, for provenance.

        The output path is a sink, not an input; it stays out so scene bytes
        depend only on (input files, config).
        """
        snap: dict[str, Any] = {}
        for f in fields(self):
            if f.name == "out_path":
                continue
            value = getattr(self, f.name)
            snap[f.name] = list(value) if isinstance(value, tuple) else value
        return snap


_SCHEMA = {
    ("corpus", "text"): ("text", str),
    ("corpus", "stopwords"): ("stopwords", str),
    ("corpus", "patterns"): ("patterns", "lines"),
    ("corpus", "delimiters"): ("delimiters", str),
    ("embedding", "source"): ("embedding_source", str),
    ("embedding", "path"): ("embedding_path", str),
    ("embedding", "dim"): ("embedding_dim", int),
    ("embedding", "seed"): ("embedding_seed", int),
    ("projection", "n_neighbors"): ("projection_n_neighbors", int),
    ("projection", "min_dist"): ("projection_min_dist", float),
    ("projection", "epochs"): ("projection_epochs", int),
    ("projection", "learning_rate"): ("projection_learning_rate", float),
    ("projection", "negative_samples"): ("projection_negative_samples", int),
    ("projection", "seed"): ("projection_seed", int),
    ("clustering", "rho_quantile"): ("clustering_rho_quantile", float),
    ("clustering", "dc_quantile"): ("clustering_dc_quantile", float),
    ("clustering", "delta_quantile"): ("clustering_delta_quantile", float),
    ("affect", "sentiment"): ("sentiment_path", str),
    ("affect", "lexicon"): ("lexicon_path", str),
    ("entity", "window"): ("entity_window", int),
    ("entity", "alpha"): ("entity_alpha", float),
    ("entity", "gazetteer"): ("gazetteer_path", str),
    ("entity", "annotations"): ("annotations_path", str),
    ("entity", "heuristic"): ("entity_heuristic", bool),
    ("layout", "scaling"): ("layout_scaling", float),
    ("layout", "gravity"): ("layout_gravity", float),
    ("layout", "iterations"): ("layout_iterations", int),
    ("layout", "dim"): ("layout_dim", int),
    ("layout", "seed"): ("layout_seed", int),
    ("pipeline", "seed"): ("seed", int),
    ("output", "scene"): ("out_path", str),
}


def load_config(path: str | Path) -> PipelineConfig:
    """Parse the INI config file; unknown sections or keys are errors."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None

    config = PipelineConfig()
    known_sections = {section for section, _ in _SCHEMA}
    for section in parser.sections():
        if section not in known_sections:
            raise ConfigError(f"{path}: unknown config section [{section}]")
        for key, raw in parser.items(section):
            spec = _SCHEMA.get((section, key))
            if spec is None:
                raise ConfigError(f"{path}: unknown config key {section}.{key}")
            name, kind = spec
            try:
                if kind == "lines":
                    value: Any = tuple(
                        line.strip() for line in raw.splitlines() if line.strip()
                    )
                elif kind is bool:
                    value = parser.getboolean(section, key)
                elif kind is int:
                    value = int(raw)
                elif kind is float:
                    value = float(raw)
                else:
                    value = raw.strip()
            except ValueError:
                raise ConfigError(
                    f"{path}: bad value for {section}.{key}: {raw!r}"
                ) from None
            setattr(config, name, value)

    # Paths in the config resolve relative to the config file itself.
    base = path.parent
    for name in (
        "text", "stopwords", "embedding_path", "sentiment_path",
        "lexicon_path", "gazetteer_path", "annotations_path",
    ):
        value = getattr(config, name)
        if value:
            setattr(config, name, str((base / value)))
    return config


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class _StageTimer:
    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is None:
            logger.info("stage %s: %.3fs", self.name, elapsed)
        elif isinstance(exc, SemtopoError) and not getattr(exc, "_staged", False):
            exc._staged = True
            exc.args = (f"stage {self.name}: {exc}",)
        return False


def build_records(config: PipelineConfig) -> list[corpus.SentenceRecord]:
    if not config.text:
        raise ConfigError("no corpus text configured (corpus.text or --text)")
    raw = corpus.read_text(config.text)
    stopwords = (
        corpus.read_stopwords(config.stopwords)
        if config.stopwords
        else frozenset()
    )
    delimiters = (
        frozenset(config.delimiters)
        if config.delimiters
        else corpus.DEFAULT_DELIMITERS
    )
    pre = corpus.PreprocessConfig(
        stopwords=stopwords,
        clause_patterns=config.patterns,
        sentence_delimiters=delimiters,
    )
    records = corpus.segment(raw, pre)
    return corpus.retain_clauses(records, config.patterns)


def run_pipeline(config: PipelineConfig) -> scene.SceneDocument:
    provenance_inputs: dict[str, dict[str, str]] = {}

    with _StageTimer("corpus"):
        records = build_records(config)
        provenance_inputs["text"] = {
            "path": config.text, "sha256": _digest(config.text)
        }
        if config.stopwords:
            provenance_inputs["stopwords"] = {
                "path": config.stopwords, "sha256": _digest(config.stopwords)
            }
        retained = [r for r in records if r.retained]
        if not retained:
            raise ConfigError("no retained sentences")

    with _StageTimer("embedding"):
        if config.embedding_source == "file" or (
            not config.embedding_source and config.embedding_path
        ):
            if not config.embedding_path:
                raise ConfigError("embedding source is 'file' but no path given")
            matrix = embedding.load_embeddings(
                config.embedding_path,
                config.embedding_dim,
                expected_indices=[r.index for r in retained],
            )
            provenance_inputs["embeddings"] = {
                "path": config.embedding_path,
                "sha256": _digest(config.embedding_path),
            }
        elif config.embedding_source == "fallback":
            seed = (
                config.embedding_seed
                if config.embedding_seed is not None
                else config.seed
            )
            matrix = embedding.embed_records(
                records, dim=config.embedding_dim, seed=seed
            )
        elif not config.embedding_source:
            raise ConfigError(
                "no embedding source: set embedding.path or enable the "
                "fallback embedder"
            )
        else:
            raise ConfigError(
                f"unknown embedding source {config.embedding_source!r}"
            )

    with _StageTimer("projection"):
        projector = SemanticProjection(
            n_neighbors=config.projection_n_neighbors,
            min_dist=config.projection_min_dist,
            n_epochs=config.projection_epochs,
            learning_rate=config.projection_learning_rate,
            negative_samples=config.projection_negative_samples,
            random_state=(
                config.projection_seed
                if config.projection_seed is not None
                else config.seed
            ),
        )
        coords = projector.fit_transform(matrix.vectors)

    with _StageTimer("clustering"):
        clusterer = DensityPeakClusterer(
            rho_quantile=config.clustering_rho_quantile,
            dc_quantile=config.clustering_dc_quantile,
            delta_quantile=config.clustering_delta_quantile,
        )
        cluster_labels = clusterer.fit(coords).labels_

    with _StageTimer("affect"):
        if config.sentiment_path:
            sentiment = affect.load_sentiment(
                config.sentiment_path, [r.index for r in retained]
            )
            provenance_inputs["sentiment"] = {
                "path": config.sentiment_path,
                "sha256": _digest(config.sentiment_path),
            }
        else:
            lexicon: dict[str, float] = {}
            if config.lexicon_path:
                lexicon = affect.load_lexicon(config.lexicon_path)
                provenance_inputs["lexicon"] = {
                    "path": config.lexicon_path,
                    "sha256": _digest(config.lexicon_path),
                }
            else:
                logger.warning(
                    "no sentiment source configured; scoring everything "
                    "neutral via an empty lexicon"
                )
            sentiment = affect.label_records(records, lexicon)

    with _StageTimer("entitygraph"):
        mentions: list[entitygraph.EntityMention] = []
        if config.annotations_path:
            loaded = entitygraph.load_entity_annotations(config.annotations_path)
            provenance_inputs["annotations"] = {
                "path": config.annotations_path,
                "sha256": _digest(config.annotations_path),
            }
            valid = {r.index for r in records}
            for m in loaded:
                if m.sentence_index not in valid:
                    raise InputError(
                        f"annotation mentions unknown sentence {m.sentence_index}"
                    )
            mentions.extend(loaded)
        if config.gazetteer_path or config.entity_heuristic:
            gazetteer: list[str] = []
            if config.gazetteer_path:
                gazetteer = entitygraph.load_gazetteer(config.gazetteer_path)
                provenance_inputs["gazetteer"] = {
                    "path": config.gazetteer_path,
                    "sha256": _digest(config.gazetteer_path),
                }
            mentions.extend(
                entitygraph.extract_entities(
                    records, gazetteer, heuristic=config.entity_heuristic
                )
            )
        graph = entitygraph.build_entity_graph(
            mentions,
            n_sentences=len(retained),
            window=config.entity_window,
            alpha=config.entity_alpha,
        )

    with _StageTimer("forcelayout"):
        if graph.nodes:
            layout = ForceAtlas2Layout(
                scaling=config.layout_scaling,
                gravity=config.layout_gravity,
                iterations=config.layout_iterations,
                dim=config.layout_dim,
                random_state=(
                    config.layout_seed
                    if config.layout_seed is not None
                    else config.seed
                ),
            )
            W, order = graph.to_adjacency()
            positions = {
                name: tuple(float(x) for x in row)
                for name, row in zip(order, layout.fit_transform(W))
            }
        else:
            positions = {}

    with _StageTimer("link"):
        semantic_nodes = scene.build_semantic_nodes(
            records, coords, cluster_labels, matrix.row_index, sentiment
        )
        links, skipped = scene.link_layers(semantic_nodes, graph)

    with _StageTimer("build"):
        provenance = {
            "config": config.snapshot(),
            "inputs": provenance_inputs,
            "seed": config.seed,
            "format": scene.SCENE_VERSION,
        }
        document = scene.assemble_scene(
            semantic_nodes, graph, positions, config.layout_dim,
            links, skipped, provenance,
        )
    return document


def ingest_stats(config: PipelineConfig) -> dict[str, int]:
    """Corpus statistics for the `ingest` subcommand."""
    records = build_records(config)
    retained = [r for r in records if r.retained]
    tokens = [t for r in records for t in r.tokens]
    return {
        "sentences": len(records),
        "retained": len(retained),
        "tokens": len(tokens),
        "distinct_tokens": len(set(tokens)),
    }
