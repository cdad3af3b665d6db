"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line. Run with `pytest tests/test_acceptance.py -v -s`.
"""
import json
import math
import shutil
import subprocess
import sys
import time

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from semtopo import entitygraph, pipeline, scene
from semtopo.clustering import (
    DensityPeakClusterer,
    cutoff_distance,
    local_density,
    pairwise_euclidean,
)
from semtopo.forcelayout import ForceAtlas2Layout
from semtopo.projection import SemanticProjection, knn_graph, trustworthiness

from conftest import FIXTURES
from helpers import make_cluster_fixture, make_halo_blobs, make_random_graph
from test_projection import brute_force_knn


def report(name: str, ok: bool = True) -> None:
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'}: {name}")
    assert ok


@pytest.fixture(scope="module")
def fixture_document():
    return pipeline.run_pipeline(pipeline.load_config(FIXTURES / "fixture.ini"))


def test_knn_exactness_and_runtime():
    """Exact k-NN on three random fixtures, checked against the O(n^2) scan."""
    elapsed = 0.0
    for n in (100, 300, 1000):
        X = np.random.default_rng(n).standard_normal((n, 50))
        start = time.perf_counter()
        idx, dists = knn_graph(X, 15)
        elapsed += time.perf_counter() - start
        idx_bf, dists_bf = brute_force_knn(X, 15)
        assert np.array_equal(idx, idx_bf), f"neighbor mismatch at n={n}"
        assert np.allclose(dists, dists_bf, rtol=0, atol=1e-9)
    assert elapsed < 10.0, f"k-NN took {elapsed:.1f}s"
    report(f"k-NN exactness (n=100/300/1000, {elapsed:.2f}s)")


def test_projection_quality_gate():
    """Trustworthiness >= 0.90 on the 3-cluster fixture, paper parameters."""
    X, _ = make_cluster_fixture(n_clusters=3, n_per_cluster=100, dim=50)
    start = time.perf_counter()
    Y = SemanticProjection(
        n_neighbors=15, min_dist=0.1, metric="cosine", random_state=42
    ).fit_transform(X)
    elapsed = time.perf_counter() - start
    tw = trustworthiness(X, Y, 15)
    assert tw >= 0.90, f"trustworthiness {tw:.4f} < 0.90"
    assert elapsed < 30.0, f"projection took {elapsed:.1f}s"
    report(f"projection quality (trustworthiness={tw:.4f}, {elapsed:.1f}s)")


def test_dpc_recovery():
    """Blob fixtures recovered at ARI >= 0.95; densities exact to 1e-12."""
    results = []
    for centers, want in (
        ([(0.0, 0.0), (2.0, 0.0)], 2),
        ([(0.0, 0.0), (2.0, 0.0), (1.0, 1.7)], 3),
    ):
        X, truth = make_halo_blobs(centers)
        clusterer = DensityPeakClusterer(rho_quantile=0.65).fit(X)
        assert len(clusterer.centers_) == want
        ari = adjusted_rand_score(truth, clusterer.labels_)
        assert ari >= 0.95, f"{want}-blob ARI {ari:.3f} < 0.95"
        results.append(ari)

        distances = pairwise_euclidean(X)
        dc = cutoff_distance(distances, 0.02)
        rho = local_density(distances, dc)
        brute = np.array(
            [
                sum(
                    math.exp(-((distances[i, j] / dc) ** 2))
                    for j in range(len(X))
                    if j != i
                )
                for i in range(len(X))
            ]
        )
        assert np.max(np.abs(rho - brute)) < 1e-12
    report(f"DPC recovery (ARI {results[0]:.3f} / {results[1]:.3f}, densities exact)")


def test_cooccurrence_exactness(records, mentions_oracle):
    """Window-5 counts equal the brute-force pair scan, strict boundary."""
    gazetteer = entitygraph.load_gazetteer(FIXTURES / "gazetteer.txt")
    mentions = entitygraph.extract_entities(records, gazetteer)
    got = entitygraph.cooccurrence(mentions, window=5)

    brute: dict = {}
    for a in mentions:
        for b in mentions:
            if a.entity >= b.entity:
                continue
            if abs(a.sentence_index - b.sentence_index) < 5:
                lo = min(a.sentence_index, b.sentence_index)
                hi = max(a.sentence_index, b.sentence_index)
                brute.setdefault((a.entity, b.entity), set()).add((lo, hi))
    assert got == {pair: sorted(ev) for pair, ev in brute.items()}

    # |delta| == 5 must NOT co-occur: inspector vale (s1) vs miss pembroke (s6)
    assert ("inspector vale", "miss pembroke") not in got
    boundary = entitygraph.cooccurrence(
        [
            entitygraph.EntityMention("e", 0, 0),
            entitygraph.EntityMention("f", 5, 0),
        ],
        window=5,
    )
    assert boundary == {}
    report(f"co-occurrence exactness ({len(got)} pairs, strict boundary)")


def test_weight_formulas():
    """TF-IDF and edge weights against hand-computed tables; monotone over
    1000 randomized inputs."""
    mentions = [
        entitygraph.EntityMention(m["entity"], m["sentence_index"], m["token_position"])
        for m in json.loads((FIXTURES / "mentions_oracle.json").read_text())
    ]
    saliency = entitygraph.tfidf_saliency(mentions, 30)
    # 18 mentions total; counts and sentence spreads hand-tallied from the corpus
    hand = {
        "mr gray": (4 / 18) * math.log(30 / 4),
        "colonel ash": (4 / 18) * math.log(30 / 4),
        "lady holt": (3 / 18) * math.log(30 / 3),
        "dr finch": (3 / 18) * math.log(30 / 3),
        "miss pembroke": (3 / 18) * math.log(30 / 3),
        "inspector vale": (1 / 18) * math.log(30 / 1),
    }
    for entity, expected in hand.items():
        assert abs(saliency[entity] - expected) < 1e-9, entity

    # spec-level substitution cases
    assert entitygraph.edge_weight(4, 4, 0.0, 2.0, 0.7) == pytest.approx(1.0, abs=1e-9)
    assert entitygraph.edge_weight(4, 4, 2.0, 2.0, 0.7) == pytest.approx(0.7, abs=1e-9)
    assert entitygraph.edge_weight(2, 4, 1.0, 2.0, 0.7) == pytest.approx(0.5, abs=1e-9)
    # fixture edges, hand-normalized: max_cooc=4, max_proxy=4.0
    graph = entitygraph.build_entity_graph(mentions, 30)
    hand_edges = {
        ("colonel ash", "miss pembroke"): 0.7 * (4 / 4) + 0.3 * (1 - 2.0 / 4.0),
        ("dr finch", "inspector vale"): 0.7 * (1 / 4) + 0.3 * (1 - 4.0 / 4.0),
        ("inspector vale", "mr gray"): 0.7 * (1 / 4) + 0.3 * (1 - 1.0 / 4.0),
    }
    for (a, b), expected in hand_edges.items():
        assert abs(graph.get_edge(a, b).weight - expected) < 1e-9, (a, b)

    rng = np.random.default_rng(1234)
    for _ in range(1000):
        max_cooc = int(rng.integers(2, 60))
        cooc = int(rng.integers(1, max_cooc))
        max_proxy = float(rng.uniform(0.1, 30))
        proxy = float(rng.uniform(0, max_proxy))
        alpha = float(rng.uniform(0, 1))
        w = entitygraph.edge_weight(cooc, max_cooc, proxy, max_proxy, alpha)
        assert 0.0 <= w <= 1.0
        assert entitygraph.edge_weight(cooc + 1, max_cooc, proxy, max_proxy, alpha) >= w
        assert (
            entitygraph.edge_weight(cooc, max_cooc, proxy * 0.5, max_proxy, alpha) >= w
        )
    report("weight formulas (TF-IDF + alpha-blend vs hand tables, 1000 randomized)")


def test_forceatlas2_physics():
    """Equilibrium, gravity decay, energy decay, translation invariance."""
    W = np.array([[0.0, 1.0], [1.0, 0.0]])
    positions = ForceAtlas2Layout(
        scaling=10.0, gravity=0.0, iterations=1000, random_state=3
    ).fit_transform(W)
    d = float(np.linalg.norm(positions[0] - positions[1]))
    target = math.sqrt(4 * 10.0 / 1.0)
    assert abs(d - target) / target < 0.05, f"equilibrium {d:.3f} vs {target:.3f}"

    single = ForceAtlas2Layout(
        scaling=10.0, gravity=1.0, iterations=1000, random_state=5
    ).fit_transform(np.zeros((1, 1)))
    assert np.linalg.norm(single[0]) < 1e-3

    fa = ForceAtlas2Layout(scaling=10.0, gravity=1.0, iterations=1000, random_state=0)
    fa.fit(make_random_graph(n=50, m=120, seed=11))
    trace = fa.energy_trace_
    ratio = float(np.median(trace[900:1000]) / np.median(trace[0:100]))
    assert ratio <= 0.10, f"energy ratio {ratio:.4f} > 0.10"

    t = np.array([1.5, -2.25, 0.5])
    init = np.random.default_rng(8).uniform(-1, 1, (2, 3))
    base = ForceAtlas2Layout(
        gravity=0.0, iterations=100, random_state=3
    ).fit_transform(W, positions=init)
    moved = ForceAtlas2Layout(
        gravity=0.0, iterations=100, random_state=3
    ).fit_transform(W, positions=init + t)
    drift = float(np.abs(moved - (base + t)).max())
    assert drift < 1e-9, f"translation drift {drift:.2e}"
    report(
        f"ForceAtlas2 physics (eq {100*abs(d-target)/target:.2f}%, "
        f"|origin|={np.linalg.norm(single[0]):.1e}, energy {ratio:.4f}, "
        f"drift {drift:.1e})"
    )


def test_pipeline_determinism(fixture_document):
    """Same config, two runs: identical scene bytes; round trip exact."""
    again = pipeline.run_pipeline(pipeline.load_config(FIXTURES / "fixture.ini"))
    first = scene.serialize(fixture_document)
    second = scene.serialize(again)
    assert first == second
    assert scene.parse(first) == fixture_document
    assert scene.serialize(scene.parse(first)) == first
    report(f"determinism + canonical round trip ({len(first)} bytes)")


def test_cross_layer_conservation(fixture_document):
    """accepted + skipped == total edge events, with and without drops."""
    def events_total(doc):
        return sum(
            len(e.event_timestamps) for e in doc.entity_layer.graph.edges
        )

    assert len(fixture_document.links) + fixture_document.links_skipped == events_total(
        fixture_document
    )

    # force drops: remove sentence 21's node and relink
    survivors = [
        n for n in fixture_document.semantic_layer if n.sentence_index != 21
    ]
    links, skipped = scene.link_layers(
        survivors, fixture_document.entity_layer.graph
    )
    assert skipped > 0
    assert len(links) + skipped == events_total(fixture_document)
    report(
        f"cross-layer conservation ({len(fixture_document.links)} links + "
        f"{fixture_document.links_skipped} skipped; with drops: "
        f"{len(links)}+{skipped})"
    )


def test_cli_exit_codes(tmp_path):
    """Scripted scenarios: good run 0, bad config 1, missing file 2,
    invariant breach 3."""
    def cli(*args):
        return subprocess.run(
            [sys.executable, "-m", "semtopo", *args], capture_output=True, text=True
        )

    workdir = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, workdir)
    out = tmp_path / "scene.json"

    good = cli("run", "--config", str(workdir / "fixture.ini"), "--out", str(out))
    assert good.returncode == 0, good.stderr

    bad_config = workdir / "bad.ini"
    bad_config.write_text("[corpus]\ntext = corpus.txt\n")
    assert cli("run", "--config", str(bad_config)).returncode == 1

    missing = workdir / "missing.ini"
    missing.write_text("[corpus]\ntext = gone.txt\n[embedding]\nsource = fallback\n")
    assert cli("run", "--config", str(missing)).returncode == 2

    tampered_doc = json.loads(out.read_text())
    tampered_doc["links"][0]["semantic_node"] = 4242
    tampered_doc["links"][0]["timestamp"] = 4242
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(tampered_doc))
    assert cli("validate", str(tampered)).returncode == 3
    report("CLI exit codes 0/1/2/3")


def test_fixture_summary_matches_golden(fixture_document, golden_dir):
    """End-to-end fixture counts equal the oracle-derived golden summary."""
    golden = json.loads((golden_dir / "fixture_summary.json").read_text())
    assert scene.summarize(fixture_document) == golden
    report(f"fixture summary matches golden ({golden})")
