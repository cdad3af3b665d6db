"""3D projection of sentence vectors: exact k-NN graph, fuzzy affinity
calibration, and a seeded stochastic attract/repulse layout.

The layout loop is deliberately single-threaded: edge-sampling order affects
the exact bits of the result, and reproducibility is part of the contract.
The O(n^2) k-NN stage is exact rather than approximate; corpora here are
sentence-sized.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.optimize import curve_fit
from scipy.sparse import coo_matrix
from sklearn.base import BaseEstimator

from ._validation import as_float_matrix, check_at_least, check_open_unit_interval
from .errors import ConfigError, InvariantError

OUT_DIM = 3
INIT_RANGE = 10.0
GRAD_CLIP = 4.0
REPULSION_STRENGTH = 1.0
SMOOTH_K_TOLERANCE = 1e-5
SIGMA_BOUNDS = (1e-8, 1e8)
MAX_SIGMA_ITER = 64


def cosine_distance_matrix(X: np.ndarray) -> np.ndarray:
    """Full pairwise cosine-distance matrix, clamped into [0, 2]."""
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        bad = int(np.argmin(norms))
        raise ValueError(f"row {bad} is a zero vector; cosine distance undefined")
    Xn = X / norms[:, None]
    D = 1.0 - Xn @ Xn.T
    np.clip(D, 0.0, 2.0, out=D)
    return D


def knn_graph(X, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors under cosine distance, self excluded.

    Ties break toward the lower index (stable sort order). Returns
    (indices, distances), each of shape (n, k).
    """
    X = as_float_matrix(X, "X")
    n = X.shape[0]
    if n <= k:
        raise ConfigError(f"n_neighbors must be < n_points; got k={k}, n={n}")
    if k < 1:
        raise ConfigError(f"n_neighbors must be >= 1; got {k}")
    D = cosine_distance_matrix(X)
    np.fill_diagonal(D, np.inf)
    order = np.argsort(D, axis=1, kind="stable")[:, :k]
    dists = np.take_along_axis(D, order, axis=1)
    return order.astype(np.int64), dists


@dataclass(frozen=True, eq=False)
class AffinityGraph:
    """Symmetrized fuzzy k-NN graph: undirected edges with weights in (0, 1]."""

    n_points: int
    heads: np.ndarray
    tails: np.ndarray
    weights: np.ndarray
    sigmas: np.ndarray
    rhos: np.ndarray


def smooth_knn_calibration(knn_dists: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-point (sigma, rho) so that sum_j exp(-max(0, d_ij - rho_i)/sigma_i)
    hits log2(k), solved by bisection within SIGMA_BOUNDS."""
    n = knn_dists.shape[0]
    target = np.log2(k)
    sigmas = np.empty(n, dtype=np.float64)
    rhos = knn_dists[:, 0].copy()
    lo_bound, hi_bound = SIGMA_BOUNDS
    for i in range(n):
        shifted = np.maximum(0.0, knn_dists[i] - rhos[i])
        lo, hi = lo_bound, hi_bound
        sigma = 1.0
        for _ in range(MAX_SIGMA_ITER):
            total = float(np.exp(-shifted / sigma).sum())
            if abs(total - target) < SMOOTH_K_TOLERANCE:
                break
            if total > target:
                hi = sigma
            else:
                lo = sigma
            sigma = 0.5 * (lo + hi)
        sigmas[i] = sigma
    return sigmas, rhos


def fuzzy_affinities(
    knn_indices: np.ndarray, knn_dists: np.ndarray, k: int | None = None
) -> AffinityGraph:
    """Directed membership weights from the smooth-kNN calibration, then
    fuzzy-union symmetrization w = a + b - ab."""
    n, n_neighbors = knn_indices.shape
    if k is None:
        k = n_neighbors
    sigmas, rhos = smooth_knn_calibration(knn_dists, k)
    vals = np.exp(-np.maximum(0.0, knn_dists - rhos[:, None]) / sigmas[:, None])
    rows = np.repeat(np.arange(n), n_neighbors)
    cols = knn_indices.ravel()
    A = coo_matrix((vals.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    U = (A + A.T - A.multiply(A.T)).tocoo()
    mask = U.row < U.col
    heads = U.row[mask].astype(np.int64)
    tails = U.col[mask].astype(np.int64)
    weights = np.minimum(U.data[mask], 1.0)
    order = np.lexsort((tails, heads))
    graph = AffinityGraph(
        n_points=n,
        heads=heads[order],
        tails=tails[order],
        weights=weights[order],
        sigmas=sigmas,
        rhos=rhos,
    )
    counts = np.zeros(n, dtype=np.int64)
    np.add.at(counts, graph.heads, 1)
    np.add.at(counts, graph.tails, 1)
    if n > 1 and np.any(counts == 0):
        raise InvariantError("affinity graph left a point with no neighbors")
    return graph


def find_curve_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) for 1/(1 + a x^(2b)) against the min_dist plateau."""

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2 * b))

    xv = np.linspace(0, spread * 3, 300)
    yv = np.zeros(xv.shape)
    yv[xv < min_dist] = 1.0
    yv[xv >= min_dist] = np.exp(-(xv[xv >= min_dist] - min_dist) / spread)
    params, _ = curve_fit(curve, xv, yv)
    return float(params[0]), float(params[1])


@njit(cache=True)
def _splitmix64(state):
    state[0] = (state[0] + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state[0]
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(
        0xFFFFFFFFFFFFFFFF
    )
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(
        0xFFFFFFFFFFFFFFFF
    )
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _layout_epoch(
    emb,
    heads,
    tails,
    epochs_per_sample,
    epoch_of_next_sample,
    epochs_per_negative,
    epoch_of_next_negative,
    epoch,
    alpha,
    a,
    b,
    gamma,
    rng_state,
):
    n = emb.shape[0]
    dim = emb.shape[1]
    for e in range(heads.shape[0]):
        if epoch_of_next_sample[e] > epoch:
            continue
        i = heads[e]
        j = tails[e]
        d2 = 0.0
        for d in range(dim):
            diff = emb[i, d] - emb[j, d]
            d2 += diff * diff
        if d2 > 0.0:
            coeff = (-2.0 * a * b * d2 ** (b - 1.0)) / (a * d2**b + 1.0)
        else:
            coeff = 0.0
        for d in range(dim):
            grad = coeff * (emb[i, d] - emb[j, d])
            if grad > GRAD_CLIP:
                grad = GRAD_CLIP
            elif grad < -GRAD_CLIP:
                grad = -GRAD_CLIP
            emb[i, d] += grad * alpha
            emb[j, d] -= grad * alpha
        epoch_of_next_sample[e] += epochs_per_sample[e]

        if epochs_per_negative[e] == np.inf:
            continue
        n_neg = int((epoch - epoch_of_next_negative[e]) / epochs_per_negative[e])
        for _ in range(n_neg):
            t = int(_splitmix64(rng_state) % np.uint64(n))
            d2 = 0.0
            for d in range(dim):
                diff = emb[i, d] - emb[t, d]
                d2 += diff * diff
            if d2 > 0.0:
                coeff = (2.0 * gamma * b) / ((0.001 + d2) * (a * d2**b + 1.0))
            elif i == t:
                continue
            else:
                coeff = 0.0
            for d in range(dim):
                if coeff > 0.0:
                    grad = coeff * (emb[i, d] - emb[t, d])
                    if grad > GRAD_CLIP:
                        grad = GRAD_CLIP
                    elif grad < -GRAD_CLIP:
                        grad = -GRAD_CLIP
                else:
                    grad = GRAD_CLIP
                emb[i, d] += grad * alpha
        epoch_of_next_negative[e] += n_neg * epochs_per_negative[e]


def optimize_layout(
    graph: AffinityGraph,
    *,
    n_epochs: int = 500,
    learning_rate: float = 1.0,
    negative_samples: int = 5,
    min_dist: float = 0.1,
    seed: int = 0,
    curve_params: tuple[float, float] | None = None,
) -> np.ndarray:
    """Optimize a 3D embedding of the affinity graph by seeded SGD.

    Initialization is uniform in [-INIT_RANGE, INIT_RANGE]^3; edges are
    sampled proportionally to weight, with ``negative_samples`` repulsive
    updates per attractive one; the learning rate decays linearly to zero.
    Deterministic for a fixed (graph, parameters, seed).
    """
    check_at_least("epochs", n_epochs, 1)
    check_at_least("negative_samples", negative_samples, 0)
    n = graph.n_points
    if n < 1:
        raise ConfigError("cannot lay out an empty affinity graph")
    a, b = curve_params if curve_params is not None else find_curve_params(min_dist)

    rng = np.random.default_rng(seed)
    emb = rng.uniform(-INIT_RANGE, INIT_RANGE, size=(n, OUT_DIM))
    rng_state = np.array([rng.integers(2**63, dtype=np.uint64)], dtype=np.uint64)

    if graph.heads.shape[0] == 0 or graph.weights.max() <= 0.0:
        return emb

    # Both directions of every undirected edge take part in sampling,
    # row-major order for determinism.
    sym = coo_matrix(
        (
            np.concatenate([graph.weights, graph.weights]),
            (
                np.concatenate([graph.heads, graph.tails]),
                np.concatenate([graph.tails, graph.heads]),
            ),
        ),
        shape=(n, n),
    ).tocsr().tocoo()
    heads = sym.row.astype(np.int64)
    tails = sym.col.astype(np.int64)
    weights = sym.data

    epochs_per_sample = weights.max() / weights
    epoch_of_next_sample = epochs_per_sample.copy()
    if negative_samples > 0:
        epochs_per_negative = epochs_per_sample / negative_samples
    else:
        epochs_per_negative = np.full_like(epochs_per_sample, np.inf)
    epoch_of_next_negative = epochs_per_negative.copy()

    guard = 10.0 * (2.0 * INIT_RANGE) * np.sqrt(OUT_DIM)
    for epoch in range(n_epochs):
        alpha = learning_rate * (1.0 - epoch / float(n_epochs))
        _layout_epoch(
            emb,
            heads,
            tails,
            epochs_per_sample,
            epoch_of_next_sample,
            epochs_per_negative,
            epoch_of_next_negative,
            epoch,
            alpha,
            a,
            b,
            REPULSION_STRENGTH,
            rng_state,
        )
        if not np.all(np.isfinite(emb)):
            raise InvariantError(f"non-finite coordinates at epoch {epoch}")
        span = float(np.linalg.norm(emb.max(axis=0) - emb.min(axis=0)))
        if span > guard:
            raise InvariantError(
                f"layout exploded at epoch {epoch}: bounding box {span:.3g} "
                f"exceeds guard {guard:.3g}"
            )
    return emb


def trustworthiness(X, Y, n_neighbors: int, x_metric: str = "cosine") -> float:
    """Rank-based projection quality in [0, 1].

    Penalizes points that are neighbors in the projection Y but not in the
    original space X (cosine ranks in X, euclidean in Y).
    """
    X = as_float_matrix(X, "X")
    Y = as_float_matrix(Y, "Y")
    n = X.shape[0]
    if Y.shape[0] != n:
        raise ValueError("X and Y must have the same number of rows")
    if not 0 < n_neighbors < n / 2:
        raise ConfigError(
            f"trustworthiness needs 0 < k < n/2; got k={n_neighbors}, n={n}"
        )
    if x_metric == "cosine":
        D_x = cosine_distance_matrix(X)
    elif x_metric == "euclidean":
        diff = X[:, None, :] - X[None, :, :]
        D_x = np.sqrt((diff**2).sum(axis=2))
    else:
        raise ConfigError(f"unsupported trustworthiness metric {x_metric!r}")
    diff = Y[:, None, :] - Y[None, :, :]
    D_y = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(D_x, np.inf)
    np.fill_diagonal(D_y, np.inf)

    order_x = np.argsort(D_x, axis=1, kind="stable")
    order_y = np.argsort(D_y, axis=1, kind="stable")[:, :n_neighbors]
    # rank of j among i's original-space neighbors, 1-based
    ranks_x = np.empty((n, n), dtype=np.int64)
    rng = np.arange(1, n + 1)
    for i in range(n):
        ranks_x[i, order_x[i]] = rng
    penalty = 0
    for i in range(n):
        r = ranks_x[i, order_y[i]] - n_neighbors
        penalty += int(r[r > 0].sum())
    scale = 2.0 / (n * n_neighbors * (2.0 * n - 3.0 * n_neighbors - 1.0))
    return 1.0 - scale * penalty


class SemanticProjection(BaseEstimator):
    """UMAP-style 3D embedding of sentence vectors.

    Parameters mirror the pipeline config: exact cosine k-NN graph,
    smooth-kNN affinity calibration, stochastic attract/repulse layout.
    After ``fit``, the coordinates live in ``embedding_``.
    """

    def __init__(
        self,
        n_neighbors: int = 15,
        min_dist: float = 0.1,
        metric: str = "cosine",
        n_epochs: int = 500,
        learning_rate: float = 1.0,
        negative_samples: int = 5,
        random_state: int = 0,
    ):
        self.n_neighbors = n_neighbors
        self.min_dist = min_dist
        self.metric = metric
        self.n_epochs = n_epochs
        self.learning_rate = learning_rate
        self.negative_samples = negative_samples
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_float_matrix(X, "X")
        n = X.shape[0]
        if self.metric != "cosine":
            raise ConfigError(f"unsupported projection metric {self.metric!r}")
        if not 1 < self.n_neighbors < n:
            raise ConfigError(
                f"projection needs 1 < n_neighbors < n_points; "
                f"got n_neighbors={self.n_neighbors}, n_points={n}"
            )
        check_open_unit_interval("min_dist", self.min_dist)
        check_at_least("epochs", self.n_epochs, 1)
        indices, dists = knn_graph(X, self.n_neighbors)
        self.affinity_graph_ = fuzzy_affinities(indices, dists, self.n_neighbors)
        self.curve_a_, self.curve_b_ = find_curve_params(self.min_dist)
        self.embedding_ = optimize_layout(
            self.affinity_graph_,
            n_epochs=self.n_epochs,
            learning_rate=self.learning_rate,
            negative_samples=self.negative_samples,
            min_dist=self.min_dist,
            seed=self.random_state,
            curve_params=(self.curve_a_, self.curve_b_),
        )
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_
