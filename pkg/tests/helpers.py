"""Shared fixture generators used by tests and the acceptance suite."""
from __future__ import annotations

import numpy as np


def make_halo_blobs(centers, n_per_blob=150, seed=0):
    """Gaussian cores with a sparse halo; labels follow blob order."""
    rng = np.random.default_rng(seed)
    points, labels = [], []
    for label, center in enumerate(centers):
        n_halo = int(n_per_blob * 0.12)
        core = rng.normal(center, 0.08, (n_per_blob - n_halo, 2))
        halo = rng.normal(center, 0.45, (n_halo, 2))
        points.append(np.vstack([core, halo]))
        labels.extend([label] * n_per_blob)
    return np.vstack(points), np.array(labels)


def make_cluster_fixture(n_clusters=3, n_per_cluster=100, dim=50, seed=12345):
    """Well-separated Gaussian clusters (std 0.1, center separation 2.0)."""
    rng = np.random.default_rng(seed)
    centers = np.zeros((n_clusters, dim))
    for i in range(n_clusters):
        centers[i, i] = np.sqrt(2)  # pairwise center distance 2.0
    X = np.vstack(
        [c + 0.1 * rng.standard_normal((n_per_cluster, dim)) for c in centers]
    )
    labels = np.repeat(np.arange(n_clusters), n_per_cluster)
    return X, labels


def make_random_graph(n=50, m=120, seed=11):
    """Random symmetric weight matrix with ~m undirected edges."""
    rng = np.random.default_rng(seed)
    W = np.zeros((n, n))
    for _ in range(m):
        i, j = rng.integers(0, n, 2)
        if i != j:
            W[min(i, j), max(i, j)] = rng.uniform(0.2, 1.0)
    return W + W.T
