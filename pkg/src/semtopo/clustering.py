"""Density-peak cluster assignment over the projected coordinates.

Centers are points whose local density and separation both clear quantile
thresholds; everything else inherits the label of its nearest denser point.
The density cutoff reading is quantile-based: absolute densities are
scale-dependent and meaningless across corpora.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._validation import as_float_matrix, check_open_unit_interval
from .errors import ConfigError

# Sentinel parent for the global density maximum.
NO_PARENT = -1

# Floor substituted when every pairwise distance at the cutoff quantile is 0
# (all-coincident degenerate inputs).
_DC_FLOOR = 1e-12


def pairwise_euclidean(coords: np.ndarray) -> np.ndarray:
    coords = as_float_matrix(coords, "coords")
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def cutoff_distance(distances: np.ndarray, quantile: float) -> float:
    """The given quantile of the sorted pairwise-distance multiset (i < j)."""
    check_open_unit_interval("dc_quantile", quantile)
    n = distances.shape[0]
    if n < 2:
        raise ConfigError("cutoff distance needs at least 2 points")
    iu = np.triu_indices(n, k=1)
    return float(np.quantile(np.sort(distances[iu]), quantile))


def local_density(distances: np.ndarray, dc: float) -> np.ndarray:
    """Gaussian-kernel density rho_i = sum_{j != i} exp(-(d_ij/dc)^2)."""
    if dc <= 0.0:
        raise ConfigError(f"dc must be positive; got {dc}")
    kernel = np.exp(-((distances / dc) ** 2))
    return kernel.sum(axis=1) - 1.0  # remove the self term exp(0)


def delta_and_parent(
    rho: np.ndarray, distances: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Separation delta_i = min distance to a strictly denser point, and that
    point's index. Density ties break toward the lower index ("denser").
    The global maximum gets its row maximum and the NO_PARENT sentinel.
    """
    n = rho.shape[0]
    delta = np.empty(n, dtype=np.float64)
    parent = np.empty(n, dtype=np.int64)
    indices = np.arange(n)
    for i in range(n):
        higher = (rho > rho[i]) | ((rho == rho[i]) & (indices < i))
        if not higher.any():
            delta[i] = distances[i].max() if n > 1 else 0.0
            parent[i] = NO_PARENT
            continue
        cand = np.flatnonzero(higher)
        dvals = distances[i, cand]
        best = cand[np.lexsort((cand, dvals))[0]]
        delta[i] = distances[i, best]
        parent[i] = best
    return delta, parent


def select_centers(
    rho: np.ndarray,
    delta: np.ndarray,
    rho_quantile: float = 0.65,
    delta_quantile: float = 0.95,
) -> np.ndarray:
    """Centers: rho above its quantile AND delta above its quantile.

    If the rule selects nothing, the single gamma = rho * delta maximizer
    becomes the center. The global density maximum is always included (the
    assignment forest needs a root). Returned sorted by descending gamma.
    """
    check_open_unit_interval("rho_quantile", rho_quantile)
    check_open_unit_interval("delta_quantile", delta_quantile)
    n = rho.shape[0]
    if n == 1:
        return np.array([0], dtype=np.int64)
    gamma = rho * delta
    rho_t = np.quantile(rho, rho_quantile)
    delta_t = np.quantile(delta, delta_quantile)
    selected = set(np.flatnonzero((rho > rho_t) & (delta > delta_t)).tolist())
    if not selected:
        selected = {int(np.lexsort((np.arange(n), -gamma))[0])}
    global_max = int(np.lexsort((np.arange(n), -rho))[0])
    selected.add(global_max)
    centers = np.array(sorted(selected), dtype=np.int64)
    order = np.lexsort((centers, -gamma[centers]))
    return centers[order]


def assign(
    centers: np.ndarray, nearest_higher: np.ndarray, rho: np.ndarray
) -> np.ndarray:
    """Propagate labels down the density ordering: non-centers inherit their
    nearest denser point's label."""
    if len(centers) == 0:
        raise ConfigError("assignment needs at least one center")
    n = rho.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    for cluster_id, center in enumerate(centers):
        labels[center] = cluster_id
    order = np.lexsort((np.arange(n), -rho))
    for i in order:
        if labels[i] < 0:
            labels[i] = labels[nearest_higher[i]]
    return labels


class DensityPeakClusterer(BaseEstimator, ClusterMixin):
    """Density-peak clustering with quantile-thresholded center selection.

    ``dc`` is taken from the ``dc_quantile`` of the pairwise-distance
    multiset (the published 1-2% rule of thumb). After ``fit``:
    ``labels_``, ``centers_``, ``rho_``, ``delta_``, ``nearest_higher_``,
    ``dc_``.
    """

    def __init__(
        self,
        rho_quantile: float = 0.65,
        dc_quantile: float = 0.02,
        delta_quantile: float = 0.95,
        kernel: str = "gaussian",
    ):
        self.rho_quantile = rho_quantile
        self.dc_quantile = dc_quantile
        self.delta_quantile = delta_quantile
        self.kernel = kernel

    def fit(self, X, y=None):
        if self.kernel != "gaussian":
            raise ConfigError(f"unsupported density kernel {self.kernel!r}")
        check_open_unit_interval("rho_quantile", self.rho_quantile)
        check_open_unit_interval("dc_quantile", self.dc_quantile)
        check_open_unit_interval("delta_quantile", self.delta_quantile)
        X = as_float_matrix(X, "X")
        n = X.shape[0]
        if n == 1:
            self.rho_ = np.zeros(1)
            self.delta_ = np.zeros(1)
            self.nearest_higher_ = np.array([NO_PARENT], dtype=np.int64)
            self.centers_ = np.array([0], dtype=np.int64)
            self.labels_ = np.zeros(1, dtype=np.int64)
            self.dc_ = 0.0
            return self
        distances = pairwise_euclidean(X)
        dc = cutoff_distance(distances, self.dc_quantile)
        self.dc_ = dc
        if dc <= 0.0:
            dc = _DC_FLOOR
        self.rho_ = local_density(distances, dc)
        self.delta_, self.nearest_higher_ = delta_and_parent(self.rho_, distances)
        self.centers_ = select_centers(
            self.rho_, self.delta_, self.rho_quantile, self.delta_quantile
        )
        self.labels_ = assign(self.centers_, self.nearest_higher_, self.rho_)
        return self
