"""Lexical-layer graph: entity mentions, windowed co-occurrence counts,
TF-IDF node saliency, and mixed edge weights.

No dependency parser is in scope: the dependency-distance term is a token-gap
(or sentence-gap) proxy behind a stable contract, swappable later.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import SentenceRecord, tokenize_with_case
from .errors import ConfigError, InputError, InvariantError

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 5
DEFAULT_ALPHA = 0.7


def canonicalize(entity: str) -> str:
    return " ".join(entity.lower().split())


@dataclass(frozen=True)
class EntityMention:
    entity: str
    sentence_index: int
    token_position: int


@dataclass(frozen=True)
class EntityNode:
    entity: str
    saliency: float
    mention_count: int


@dataclass(frozen=True)
class EntityEdge:
    entity_a: str
    entity_b: str
    cooc_count: int
    dep_proxy: float
    weight: float
    event_timestamps: tuple[int, ...]


@dataclass(frozen=True)
class EntityGraph:
    nodes: tuple[EntityNode, ...]
    edges: tuple[EntityEdge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        names = [n.entity for n in self.nodes]
        if len(set(names)) != len(names):
            raise InvariantError("duplicate entity nodes")
        known = set(names)
        seen = set()
        for e in self.edges:
            if e.entity_a >= e.entity_b:
                raise InvariantError(
                    f"edge ({e.entity_a!r}, {e.entity_b!r}) not stored with a < b"
                )
            if (e.entity_a, e.entity_b) in seen:
                raise InvariantError(
                    f"duplicate edge ({e.entity_a!r}, {e.entity_b!r})"
                )
            seen.add((e.entity_a, e.entity_b))
            for end in (e.entity_a, e.entity_b):
                if end not in known:
                    raise InvariantError(f"edge endpoint {end!r} has no node")
            if not e.event_timestamps:
                raise InvariantError(
                    f"edge ({e.entity_a!r}, {e.entity_b!r}) has no event timestamps"
                )
            if list(e.event_timestamps) != sorted(e.event_timestamps):
                raise InvariantError(
                    f"edge ({e.entity_a!r}, {e.entity_b!r}) timestamps not sorted"
                )

    def get_edge(self, a: str, b: str) -> EntityEdge | None:
        a, b = canonicalize(a), canonicalize(b)
        if a > b:
            a, b = b, a
        for e in self.edges:
            if (e.entity_a, e.entity_b) == (a, b):
                return e
        return None

    def degree(self, entity: str) -> int:
        entity = canonicalize(entity)
        return sum(1 for e in self.edges if entity in (e.entity_a, e.entity_b))

    def to_adjacency(self) -> tuple[np.ndarray, list[str]]:
        """Symmetric weight matrix plus the node order behind its rows."""
        order = [n.entity for n in self.nodes]
        pos = {name: i for i, name in enumerate(order)}
        W = np.zeros((len(order), len(order)), dtype=np.float64)
        for e in self.edges:
            i, j = pos[e.entity_a], pos[e.entity_b]
            W[i, j] = W[j, i] = e.weight
        return W, order


def extract_entities(
    records: Sequence[SentenceRecord],
    gazetteer: Iterable[str],
    heuristic: bool = False,
) -> list[EntityMention]:
    """Dictionary lookup over the filtered token stream, longest match first.

    With ``heuristic`` on, capitalized non-sentence-initial tokens that fall
    outside gazetteer matches also become mentions. Only retained records are
    scanned; token positions index into ``record.tokens``.
    """
    entries: dict[tuple[str, ...], str] = {}
    for raw in gazetteer:
        canon = canonicalize(raw)
        if canon:
            entries[tuple(canon.split())] = canon
    max_len = max((len(k) for k in entries), default=0)

    mentions: list[EntityMention] = []
    for record in records:
        if not record.retained:
            continue
        tokens = record.tokens
        covered = [False] * len(tokens)
        pos = 0
        while pos < len(tokens):
            matched = None
            for length in range(min(max_len, len(tokens) - pos), 0, -1):
                candidate = tuple(tokens[pos : pos + length])
                if candidate in entries:
                    matched = (entries[candidate], length)
                    break
            if matched is None:
                pos += 1
                continue
            entity, length = matched
            mentions.append(
                EntityMention(
                    entity=entity, sentence_index=record.index, token_position=pos
                )
            )
            for c in range(pos, pos + length):
                covered[c] = True
            pos += length
        if heuristic:
            mentions.extend(_heuristic_mentions(record, covered))
    return mentions


def _heuristic_mentions(
    record: SentenceRecord, covered: Sequence[bool]
) -> list[EntityMention]:
    """Capitalized tokens (other than the sentence opener) left uncovered by
    gazetteer matches, aligned back onto the filtered token positions."""
    cased = tokenize_with_case(record.raw)
    found: list[EntityMention] = []
    filtered_pos = 0
    for raw_pos, token in enumerate(cased):
        lowered = token.lower()
        if filtered_pos < len(record.tokens) and record.tokens[filtered_pos] == lowered:
            this_pos = filtered_pos
            filtered_pos += 1
        else:
            continue  # token was dropped by the stopword filter
        if raw_pos == 0 or covered[this_pos]:
            continue
        if token[0].isupper():
            found.append(
                EntityMention(
                    entity=lowered,
                    sentence_index=record.index,
                    token_position=this_pos,
                )
            )
    return found


def load_entity_annotations(path: str | Path) -> list[EntityMention]:
    """CoNLL-style '<token> <sentence_index> <bio_tag>' lines.

    Contiguous B-/I- spans merge into one mention; an I- tag without a
    matching open span is a parse error. Token positions count the file's
    token order within each sentence, so the annotation must list the same
    token stream the pipeline tokenizes.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"annotation file not found: {path}") from None

    mentions: list[EntityMention] = []
    current: dict | None = None
    sentence_pos: dict[int, int] = {}
    prev_sentence = None

    def close() -> None:
        nonlocal current
        if current is not None:
            mentions.append(
                EntityMention(
                    entity=canonicalize(" ".join(current["tokens"])),
                    sentence_index=current["sentence"],
                    token_position=current["start"],
                )
            )
            current = None

    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            close()
            continue
        fields = stripped.split()
        if len(fields) != 3:
            raise InputError(
                f"{path}:{line_no}: expected '<token> <sentence_index> <bio_tag>'"
            )
        token, sent_field, tag = fields
        try:
            sentence = int(sent_field)
        except ValueError:
            raise InputError(
                f"{path}:{line_no}: sentence index {sent_field!r} is not an integer"
            ) from None
        position = sentence_pos.get(sentence, 0)
        sentence_pos[sentence] = position + 1
        if sentence != prev_sentence:
            close()
            prev_sentence = sentence

        if tag == "O":
            close()
        elif tag.startswith("B-"):
            close()
            current = {
                "tokens": [token],
                "sentence": sentence,
                "start": position,
                "type": tag[2:],
            }
        elif tag.startswith("I-"):
            if current is None or current["type"] != tag[2:]:
                raise InputError(
                    f"{path}:{line_no}: {tag} without an open {tag[2:]} span"
                )
            current["tokens"].append(token)
        else:
            raise InputError(f"{path}:{line_no}: unknown BIO tag {tag!r}")
    close()
    return mentions


def cooccurrence(
    mentions: Sequence[EntityMention], window: int = DEFAULT_WINDOW
) -> dict[tuple[str, str], list[tuple[int, int]]]:
    """Unordered sentence-index pairs within the strict window.

    Entities e != f co-occur once per unordered pair (s_e, s_f) with
    |s_e - s_f| < window; repeated mentions inside one sentence do not add
    events. Returns pair -> sorted list of (lo, hi) sentence-index events;
    the event timestamp is the lo component.
    """
    if window < 1:
        raise ConfigError(f"co-occurrence window must be >= 1; got {window}")
    sentences: dict[str, set[int]] = {}
    for m in mentions:
        sentences.setdefault(m.entity, set()).add(m.sentence_index)
    entities = sorted(sentences)
    result: dict[tuple[str, str], list[tuple[int, int]]] = {}
    for i, e in enumerate(entities):
        for f in entities[i + 1 :]:
            events = {
                (min(se, sf), max(se, sf))
                for se in sentences[e]
                for sf in sentences[f]
                if abs(se - sf) < window
            }
            if events:
                result[(e, f)] = sorted(events)
    return result


def tfidf_saliency(
    mentions: Sequence[EntityMention], n_sentences: int
) -> dict[str, float]:
    """tf = mention share, idf = ln(n_sentences / sentences containing), with
    sentences as documents. Zero exactly for an entity present everywhere."""
    if n_sentences < 1:
        raise ConfigError(f"n_sentences must be >= 1; got {n_sentences}")
    if not mentions:
        raise ConfigError("tfidf_saliency needs at least one mention")
    counts: dict[str, int] = {}
    containing: dict[str, set[int]] = {}
    for m in mentions:
        counts[m.entity] = counts.get(m.entity, 0) + 1
        containing.setdefault(m.entity, set()).add(m.sentence_index)
    total = sum(counts.values())
    return {
        entity: (counts[entity] / total)
        * math.log(n_sentences / len(containing[entity]))
        for entity in counts
    }


def dependency_proxy(
    mentions_a: Sequence[EntityMention],
    mentions_b: Sequence[EntityMention],
    events: Sequence[tuple[int, int]],
) -> float:
    """Closeness proxy for one entity pair.

    Mean over shared sentences of (min token gap - 1); with no shared
    sentence, mean sentence-index gap over the pair's co-occurrence events.
    """
    if not events:
        raise ValueError("dependency_proxy called on a non-co-occurring pair")
    by_sentence_a: dict[int, list[int]] = {}
    for m in mentions_a:
        by_sentence_a.setdefault(m.sentence_index, []).append(m.token_position)
    shared_gaps = []
    for m in mentions_b:
        positions = by_sentence_a.get(m.sentence_index)
        if positions is None:
            continue
        shared_gaps.append((m.sentence_index, m.token_position, positions))
    if shared_gaps:
        per_sentence: dict[int, int] = {}
        for sentence, pos_b, positions_a in shared_gaps:
            gap = min(abs(pos_b - pa) for pa in positions_a)
            if sentence not in per_sentence or gap < per_sentence[sentence]:
                per_sentence[sentence] = gap
        return sum(g - 1 for g in per_sentence.values()) / len(per_sentence)
    return sum(hi - lo for lo, hi in events) / len(events)


def edge_weight(
    cooc_count: int,
    max_cooc: int,
    proxy: float,
    max_proxy: float,
    alpha: float = DEFAULT_ALPHA,
) -> float:
    """alpha-blend of normalized co-occurrence and token closeness, in [0, 1]."""
    if not max_cooc >= cooc_count >= 1:
        raise ValueError(
            f"need max_cooc >= cooc_count >= 1; got {cooc_count}/{max_cooc}"
        )
    if not max_proxy >= proxy >= 0:
        raise ValueError(f"need max_proxy >= proxy >= 0; got {proxy}/{max_proxy}")
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1]; got {alpha}")
    closeness = 1.0 - proxy / max_proxy if max_proxy > 0 else 1.0
    return alpha * (cooc_count / max_cooc) + (1.0 - alpha) * closeness


def build_entity_graph(
    mentions: Sequence[EntityMention],
    n_sentences: int,
    window: int = DEFAULT_WINDOW,
    alpha: float = DEFAULT_ALPHA,
) -> EntityGraph:
    """Assemble nodes (saliency, mention counts) and weighted edges."""
    if not mentions:
        return EntityGraph(nodes=(), edges=())
    saliency = tfidf_saliency(mentions, n_sentences)
    counts: dict[str, int] = {}
    by_entity: dict[str, list[EntityMention]] = {}
    for m in mentions:
        counts[m.entity] = counts.get(m.entity, 0) + 1
        by_entity.setdefault(m.entity, []).append(m)
    nodes = tuple(
        EntityNode(entity=e, saliency=saliency[e], mention_count=counts[e])
        for e in sorted(counts)
    )
    events_by_pair = cooccurrence(mentions, window)
    if not events_by_pair:
        return EntityGraph(nodes=nodes, edges=())
    proxies = {
        pair: dependency_proxy(by_entity[pair[0]], by_entity[pair[1]], events)
        for pair, events in events_by_pair.items()
    }
    max_cooc = max(len(ev) for ev in events_by_pair.values())
    max_proxy = max(proxies.values())
    edges = tuple(
        EntityEdge(
            entity_a=a,
            entity_b=b,
            cooc_count=len(events),
            dep_proxy=proxies[(a, b)],
            weight=edge_weight(
                len(events), max_cooc, proxies[(a, b)], max_proxy, alpha
            ),
            event_timestamps=tuple(lo for lo, _ in events),
        )
        for (a, b), events in sorted(events_by_pair.items())
    )
    return EntityGraph(nodes=nodes, edges=edges)


def load_gazetteer(path: str | Path) -> list[str]:
    """One entity surface form per line; '#' comments and blanks skipped."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"gazetteer file not found: {path}") from None
    entries = []
    for line in lines:
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            entries.append(stripped)
    return entries
