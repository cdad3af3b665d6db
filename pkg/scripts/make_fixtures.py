#!/usr/bin/env python3
"""Regenerate derived fixtures and golden files.

Oracles here are computed with deliberately simple, independent logic
(plain regex tokenization, exhaustive scans) rather than through the
library code they later check. Run from the repo root:

    python scripts/make_fixtures.py
"""
from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"

sys.path.insert(0, str(ROOT / "src"))

WINDOW = 5

GAZETTEER = [
    "mr gray", "inspector vale", "lady holt",
    "dr finch", "miss pembroke", "colonel ash",
]


def simple_sentences(text: str) -> list[str]:
    parts = re.split(r"[.!?]", text)
    return [p.strip() for p in parts if p.strip()]


def simple_tokens(sentence: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", sentence.lower())


def load_stopwords() -> set[str]:
    words = set()
    for line in (FIXTURES / "stopwords.txt").read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def oracle_mentions() -> list[dict]:
    """Longest-match gazetteer scan over the filtered token streams."""
    text = (FIXTURES / "corpus.txt").read_text()
    stop = load_stopwords()
    entries = {tuple(e.split()): e for e in GAZETTEER}
    max_len = max(len(k) for k in entries)
    mentions = []
    for sentence_index, sentence in enumerate(simple_sentences(text)):
        tokens = [t for t in simple_tokens(sentence) if t not in stop]
        pos = 0
        while pos < len(tokens):
            hit = None
            for length in range(min(max_len, len(tokens) - pos), 0, -1):
                if tuple(tokens[pos : pos + length]) in entries:
                    hit = length
                    break
            if hit is None:
                pos += 1
                continue
            mentions.append(
                {
                    "entity": entries[tuple(tokens[pos : pos + hit])],
                    "sentence_index": sentence_index,
                    "token_position": pos,
                }
            )
            pos += hit
    return mentions


def write_annotations(mentions: list[dict]) -> None:
    """CoNLL-style file over the filtered token stream, tags from the oracle."""
    text = (FIXTURES / "corpus.txt").read_text()
    stop = load_stopwords()
    spans: dict[int, dict[int, int]] = {}
    for m in mentions:
        length = len(m["entity"].split())
        spans.setdefault(m["sentence_index"], {})[m["token_position"]] = length
    lines = []
    for sentence_index, sentence in enumerate(simple_sentences(text)):
        tokens = [t for t in simple_tokens(sentence) if t not in stop]
        inside = 0
        for pos, token in enumerate(tokens):
            if pos in spans.get(sentence_index, {}):
                tag = "B-PER"
                inside = spans[sentence_index][pos] - 1
            elif inside > 0:
                tag = "I-PER"
                inside -= 1
            else:
                tag = "O"
            lines.append(f"{token} {sentence_index} {tag}")
        lines.append("")
    (FIXTURES / "annotations.conll").write_text("\n".join(lines) + "\n")


def oracle_events(mentions: list[dict]) -> dict[tuple[str, str], list[tuple[int, int]]]:
    """Exhaustive pair scan: unordered sentence pairs with |gap| < WINDOW."""
    sentences: dict[str, set[int]] = {}
    for m in mentions:
        sentences.setdefault(m["entity"], set()).add(m["sentence_index"])
    pairs: dict[tuple[str, str], list[tuple[int, int]]] = {}
    names = sorted(sentences)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            events = set()
            for sa in sentences[a]:
                for sb in sentences[b]:
                    if abs(sa - sb) < WINDOW:
                        events.add((min(sa, sb), max(sa, sb)))
            if events:
                pairs[(a, b)] = sorted(events)
    return pairs


def oracle_dep_proxy(mentions: list[dict]) -> dict:
    """Spreadsheet-style proxy table: shared-sentence token gaps first,
    event sentence gaps otherwise."""
    by_entity: dict[str, list[dict]] = {}
    for m in mentions:
        by_entity.setdefault(m["entity"], []).append(m)
    table = {}
    for (a, b), events in oracle_events(mentions).items():
        shared: dict[int, int] = {}
        for ma in by_entity[a]:
            for mb in by_entity[b]:
                if ma["sentence_index"] != mb["sentence_index"]:
                    continue
                gap = abs(ma["token_position"] - mb["token_position"])
                s = ma["sentence_index"]
                if s not in shared or gap < shared[s]:
                    shared[s] = gap
        if shared:
            proxy = sum(g - 1 for g in shared.values()) / len(shared)
        else:
            proxy = sum(hi - lo for lo, hi in events) / len(events)
        table[f"{a}|{b}"] = proxy
    return table


def write_embeddings() -> None:
    from semtopo import corpus, embedding

    text = (FIXTURES / "corpus.txt").read_text()
    records = corpus.segment(text)
    vectors = []
    for record in records:
        vectors.append(embedding.fallback_embed(corpus.tokenize(record.raw), 384, 2024))
    matrix = embedding.EmbeddingMatrix(
        dim=384,
        vectors=np.vstack(vectors),
        row_index=tuple(r.index for r in records),
        normalized=True,
    )
    embedding.save_embeddings(matrix, FIXTURES / "embeddings_30x384.txt")


def write_goldens(mentions: list[dict]) -> None:
    from semtopo.forcelayout import ForceAtlas2Layout
    from semtopo.projection import find_curve_params, trustworthiness
    from semtopo import pipeline, scene

    GOLDEN.mkdir(exist_ok=True)

    a, b = find_curve_params(0.1)
    (GOLDEN / "curve_params.json").write_text(
        json.dumps({"min_dist": 0.1, "spread": 1.0, "a": a, "b": b}, indent=1) + "\n"
    )

    # Random-layout trustworthiness band on the 3-cluster projection fixture.
    rng = np.random.default_rng(12345)
    centers = np.zeros((3, 50))
    for i in range(3):
        centers[i, i] = np.sqrt(2)
    X = np.vstack([c + 0.1 * rng.standard_normal((100, 50)) for c in centers])
    values = []
    for seed in range(20):
        Y = np.random.default_rng(seed).uniform(-10, 10, (300, 3))
        values.append(trustworthiness(X, Y, 15))
    (GOLDEN / "random_trustworthiness.json").write_text(
        json.dumps(
            {
                "fixture": "three-cluster gaussian n=300 d=50",
                "n_layouts": 20,
                "values": values,
                "min": min(values),
                "max": max(values),
                "mean": sum(values) / len(values),
            },
            indent=1,
        )
        + "\n"
    )

    # Energy decay ratio on the 50-node random graph.
    g = np.random.default_rng(11)
    n = 50
    W = np.zeros((n, n))
    for _ in range(120):
        i, j = g.integers(0, n, 2)
        if i != j:
            W[min(i, j), max(i, j)] = g.uniform(0.2, 1.0)
    W = W + W.T
    fa = ForceAtlas2Layout(scaling=10.0, gravity=1.0, iterations=1000, random_state=0)
    fa.fit(W)
    trace = fa.energy_trace_
    ratio = float(np.median(trace[900:1000]) / np.median(trace[0:100]))
    (GOLDEN / "energy_ratio.json").write_text(
        json.dumps(
            {"fixture": "random graph n=50 m=120 seed=11", "ratio": ratio,
             "threshold": 0.10},
            indent=1,
        )
        + "\n"
    )

    # Fixture scene summary. Node/entity/edge/link counts are derived from
    # the independent oracles above; the cluster count is frozen from a run.
    events = oracle_events(mentions)
    config = pipeline.load_config(FIXTURES / "fixture.ini")
    document = pipeline.run_pipeline(config)
    summary = scene.summarize(document)
    expected = {
        "semantic_nodes": 30,
        "entities": len({m["entity"] for m in mentions}),
        "entity_edges": len(events),
        "links": sum(len(ev) for ev in events.values()),
        "links_skipped": 0,
    }
    for key, value in expected.items():
        if summary[key] != value:
            raise SystemExit(
                f"pipeline summary {key}={summary[key]} disagrees with "
                f"oracle {value}"
            )
    (GOLDEN / "fixture_summary.json").write_text(
        json.dumps(summary, indent=1, sort_keys=True) + "\n"
    )


def main() -> None:
    mentions = oracle_mentions()
    (FIXTURES / "mentions_oracle.json").write_text(
        json.dumps(mentions, indent=1) + "\n"
    )
    write_annotations(mentions)
    (FIXTURES / "dep_proxy_oracle.json").write_text(
        json.dumps(oracle_dep_proxy(mentions), indent=1, sort_keys=True) + "\n"
    )
    write_embeddings()
    write_goldens(mentions)
    print("fixtures regenerated")


if __name__ == "__main__":
    main()
