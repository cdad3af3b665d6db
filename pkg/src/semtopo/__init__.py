"""semtopo: narrative text to a two-layer 3D semantic topology scene.

Layer 1 is a sentence-level 3D point cloud (embedding -> projection ->
density-peak clusters, sentiment-colored); layer 2 is an entity relation
graph laid out by a force simulation; narrative timestamps link the two.
"""

from .affect import SentimentLabels, lexicon_sentiment, load_lexicon, load_sentiment
from .clustering import DensityPeakClusterer
from .corpus import (
    PreprocessConfig,
    SentenceRecord,
    filter_stopwords,
    retain_clauses,
    segment,
    tokenize,
)
from .embedding import (
    EmbeddingMatrix,
    cosine_distance,
    fallback_embed,
    load_embeddings,
    save_embeddings,
)
from .entitygraph import (
    EntityGraph,
    EntityMention,
    build_entity_graph,
    cooccurrence,
    dependency_proxy,
    edge_weight,
    extract_entities,
    load_entity_annotations,
    tfidf_saliency,
)
from .errors import ConfigError, InputError, InvariantError, SemtopoError
from .forcelayout import ForceAtlas2Layout
from .pipeline import PipelineConfig, load_config, run_pipeline
from .projection import (
    SemanticProjection,
    fuzzy_affinities,
    knn_graph,
    optimize_layout,
    trustworthiness,
)
from .scene import (
    CrossLink,
    SceneDocument,
    SemanticNode,
    build_scene,
    link_layers,
    parse,
    serialize,
    summarize,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CrossLink",
    "DensityPeakClusterer",
    "EmbeddingMatrix",
    "EntityGraph",
    "EntityMention",
    "ForceAtlas2Layout",
    "InputError",
    "InvariantError",
    "PipelineConfig",
    "PreprocessConfig",
    "SceneDocument",
    "SemanticNode",
    "SemanticProjection",
    "SentenceRecord",
    "SentimentLabels",
    "SemtopoError",
    "build_entity_graph",
    "build_scene",
    "cooccurrence",
    "cosine_distance",
    "dependency_proxy",
    "edge_weight",
    "extract_entities",
    "fallback_embed",
    "filter_stopwords",
    "fuzzy_affinities",
    "knn_graph",
    "lexicon_sentiment",
    "link_layers",
    "load_config",
    "load_embeddings",
    "load_entity_annotations",
    "load_lexicon",
    "load_sentiment",
    "optimize_layout",
    "parse",
    "retain_clauses",
    "run_pipeline",
    "save_embeddings",
    "segment",
    "serialize",
    "summarize",
    "tfidf_saliency",
    "tokenize",
    "trustworthiness",
    "validate",
]
