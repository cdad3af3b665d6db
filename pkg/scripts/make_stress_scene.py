#!/usr/bin/env python3
"""Generate the 1000-sentence stress scene consumed by the viewer tests.

Builds a synthetic mystery corpus, runs the full pipeline on it, and writes
the scene JSON into the frontend test fixtures. Deterministic.
"""
from __future__ import annotations

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

OUT = ROOT / "frontend" / "test" / "fixtures"

CHARACTERS = [
    "Alder", "Briggs", "Calloway", "Dunmore", "Eastley", "Fenwick",
    "Garrow", "Hollis", "Ives", "Jessop", "Kerrick", "Lowell",
]
VERBS = [
    "questioned", "followed", "suspected", "met", "avoided", "accused",
    "watched", "trusted", "warned", "betrayed",
]
PLACES = [
    "in the cellar", "near the gatehouse", "on the terrace", "by the mill",
    "in the study", "under the bridge", "at the chapel", "in the orchard",
]
FILLER = [
    "The fog refused to lift that morning.",
    "A cold wind worked at the shutters all night.",
    "Nobody spoke of the locked drawer again.",
    "The clocks in the hall disagreed by seven minutes.",
    "Rain kept the roads empty for days.",
    "An unsigned letter arrived with the early post.",
    "The lamps burned low and nobody trimmed them.",
    "Footsteps on the gravel stopped at the door.",
]


def build_corpus(n_sentences: int, seed: int) -> str:
    rng = random.Random(seed)
    sentences = []
    for _ in range(n_sentences):
        roll = rng.random()
        if roll < 0.45:
            a, b = rng.sample(CHARACTERS, 2)
            sentences.append(f"{a} {rng.choice(VERBS)} {b} {rng.choice(PLACES)}.")
        elif roll < 0.7:
            a = rng.choice(CHARACTERS)
            sentences.append(f"{a} said nothing {rng.choice(PLACES)}.")
        else:
            sentences.append(rng.choice(FILLER))
    return "\n".join(sentences)


def main() -> None:
    from semtopo import pipeline, scene

    OUT.mkdir(parents=True, exist_ok=True)
    work = ROOT / "frontend" / "test" / "fixtures" / "_work"
    work.mkdir(exist_ok=True)
    corpus_path = work / "stress_corpus.txt"
    corpus_path.write_text(build_corpus(1000, seed=99), encoding="utf-8")
    gazetteer_path = work / "stress_gazetteer.txt"
    gazetteer_path.write_text("\n".join(CHARACTERS) + "\n", encoding="utf-8")
    lexicon_path = work / "stress_lexicon.txt"
    lexicon_path.write_text(
        "accused -0.7\nbetrayed -0.9\nwarned -0.4\navoided -0.3\n"
        "suspected -0.5\nquestioned -0.2\ntrusted 0.6\nmet 0.2\n"
        "followed -0.1\nwatched -0.2\nfog -0.3\ncold -0.4\nrain -0.2\n"
        "empty -0.3\nlocked -0.4\nunsigned -0.2\nlow -0.1\nstopped -0.2\n",
        encoding="utf-8",
    )

    config = pipeline.PipelineConfig(
        text=str(corpus_path),
        embedding_source="fallback",
        embedding_dim=128,
        projection_epochs=200,
        gazetteer_path=str(gazetteer_path),
        lexicon_path=str(lexicon_path),
        layout_iterations=600,
        seed=7,
    )
    document = pipeline.run_pipeline(config)
    data = scene.serialize(document)
    (OUT / "stress_scene.json").write_bytes(data)
    print(f"stress scene: {scene.summarize(document)} ({len(data)} bytes)")

    # small fixture scene for the state-layer oracle tests
    small = pipeline.run_pipeline(
        pipeline.load_config(ROOT / "tests" / "fixtures" / "fixture.ini")
    )
    (OUT / "fixture_scene.json").write_bytes(scene.serialize(small))
    print(f"fixture scene: {scene.summarize(small)}")


if __name__ == "__main__":
    main()
