"""Force-directed entity layout: degree-scaled repulsion, linear edge
attraction, origin gravity, and the adaptive swing/traction speed rule.

Exact O(n^2) repulsion, no Barnes-Hut: these are character networks with tens
of nodes, and exactness keeps the physics testable. The per-step update is
fully vectorized with a fixed reduction order, so runs are bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_at_least, check_positive
from .errors import ConfigError, InvariantError

# Adaptive-speed constants, as published for the algorithm.
OPTIMAL_JITTER_COEFF = 0.05
MAX_JITTER = 10.0
MIN_SPEED_EFFICIENCY = 0.05
SWING_RATIO_GUARD = 2.0
EFFICIENCY_DROP = 0.7
EFFICIENCY_PANIC_DROP = 0.5
EFFICIENCY_RAISE = 1.3
MAX_SPEED = 1000.0
MAX_SPEED_RISE = 0.5

COINCIDENCE_JITTER = 1e-4
EXPLOSION_LIMIT = 1e6
INIT_RANGE = 1.0


@dataclass(frozen=True, eq=False)
class LayoutState:
    positions: np.ndarray
    prev_forces: np.ndarray
    speed: float = 1.0
    speed_efficiency: float = 1.0
    energy: float = 0.0


def _jitter_coincident(positions: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Nudge exact duplicates apart (higher index moves) so force directions
    stay defined; magnitude COINCIDENCE_JITTER, seeded."""
    positions = positions.copy()
    n = positions.shape[0]
    for _ in range(n):
        moved = False
        for i in range(n):
            for j in range(i + 1, n):
                if np.array_equal(positions[i], positions[j]):
                    direction = rng.standard_normal(positions.shape[1])
                    direction /= np.linalg.norm(direction)
                    positions[j] = positions[j] + COINCIDENCE_JITTER * direction
                    moved = True
        if not moved:
            return positions
    raise InvariantError("could not separate coincident nodes by jitter")


def forces(
    positions: np.ndarray,
    masses: np.ndarray,
    edge_index: np.ndarray,
    edge_weights: np.ndarray,
    scaling: float,
    gravity: float,
    edge_weight_influence: float = 1.0,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Net force per node; returns (forces, possibly-jittered positions).

    Repulsion between u, v has magnitude scaling * m_u * m_v / d and acts
    along u - v; each edge attracts with magnitude w^influence * d; gravity
    pulls toward the origin with magnitude gravity * m_u (zero at the
    origin). Pairwise terms are exactly equal and opposite.
    """
    n = positions.shape[0]
    if n > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        d2 = (diff**2).sum(axis=2)
        coincident = (d2 == 0.0).sum() > n  # beyond the diagonal
        if coincident:
            if rng is None:
                rng = np.random.default_rng(0)
            positions = _jitter_coincident(positions, rng)
            diff = positions[:, None, :] - positions[None, :, :]
            d2 = (diff**2).sum(axis=2)
        np.fill_diagonal(d2, np.inf)
        factor = scaling * np.outer(masses, masses) / d2
        total = (factor[:, :, None] * diff).sum(axis=1)
    else:
        total = np.zeros_like(positions)

    norms = np.linalg.norm(positions, axis=1)
    pull = np.zeros_like(positions)
    nonzero = norms > 0.0
    pull[nonzero] = (
        -(gravity * masses[nonzero] / norms[nonzero])[:, None] * positions[nonzero]
    )
    total = total + pull

    if edge_index.shape[0]:
        a = edge_index[:, 0]
        b = edge_index[:, 1]
        delta = positions[b] - positions[a]
        w = edge_weights**edge_weight_influence
        np.add.at(total, a, w[:, None] * delta)
        np.add.at(total, b, -(w[:, None] * delta))
    return total, positions


def step(
    state: LayoutState,
    masses: np.ndarray,
    edge_index: np.ndarray,
    edge_weights: np.ndarray,
    *,
    scaling: float,
    gravity: float,
    jitter_tolerance: float = 1.0,
    edge_weight_influence: float = 1.0,
    rng: np.random.Generator | None = None,
) -> LayoutState:
    """One adaptive-speed update. A zero-force state is a fixpoint."""
    n = state.positions.shape[0]
    force, positions = forces(
        state.positions,
        masses,
        edge_index,
        edge_weights,
        scaling,
        gravity,
        edge_weight_influence,
        rng,
    )
    energy = float((force**2).sum())

    swing_per_node = masses * np.linalg.norm(state.prev_forces - force, axis=1)
    traction_per_node = 0.5 * masses * np.linalg.norm(state.prev_forces + force, axis=1)
    total_swing = float(swing_per_node.sum())
    total_traction = float(traction_per_node.sum())
    if total_swing == 0.0 and total_traction == 0.0:
        return replace(state, prev_forces=force, energy=energy, positions=positions)
    total_swing = max(total_swing, 1e-16)
    total_traction = max(total_traction, 1e-16)

    optimal_jitter = OPTIMAL_JITTER_COEFF * np.sqrt(n)
    jitter = jitter_tolerance * min(
        MAX_JITTER,
        max(np.sqrt(optimal_jitter), optimal_jitter * total_traction / n**2),
    )
    speed_efficiency = state.speed_efficiency
    if total_swing / total_traction > SWING_RATIO_GUARD:
        if speed_efficiency > MIN_SPEED_EFFICIENCY:
            speed_efficiency *= EFFICIENCY_PANIC_DROP
        jitter = max(jitter, jitter_tolerance)
    target_speed = jitter * speed_efficiency * total_traction / total_swing
    if total_swing > jitter * total_traction:
        if speed_efficiency > MIN_SPEED_EFFICIENCY:
            speed_efficiency *= EFFICIENCY_DROP
    elif state.speed < MAX_SPEED:
        speed_efficiency *= EFFICIENCY_RAISE
    speed = state.speed + min(target_speed - state.speed, MAX_SPEED_RISE * state.speed)

    factor = speed / (1.0 + np.sqrt(speed * swing_per_node))
    new_positions = positions + force * factor[:, None]
    if not np.all(np.isfinite(new_positions)):
        raise InvariantError("layout produced non-finite positions")
    if np.abs(new_positions).max() > EXPLOSION_LIMIT:
        raise InvariantError(
            f"layout exploded: |position| exceeds {EXPLOSION_LIMIT:g}"
        )
    return LayoutState(
        positions=new_positions,
        prev_forces=force,
        speed=speed,
        speed_efficiency=speed_efficiency,
        energy=energy,
    )


class ForceAtlas2Layout(BaseEstimator):
    """Entity-graph layout over a symmetric non-negative weight matrix.

    ``fit(W)`` runs ``iterations`` adaptive steps from a seeded random start
    in [-1, 1]^dim; results land in ``positions_`` with the per-iteration
    ``energy_trace_``. Node mass is 1 + degree.
    """

    def __init__(
        self,
        scaling: float = 10.0,
        gravity: float = 1.0,
        iterations: int = 1000,
        dim: int = 3,
        random_state: int = 0,
        jitter_tolerance: float = 1.0,
        edge_weight_influence: float = 1.0,
    ):
        self.scaling = scaling
        self.gravity = gravity
        self.iterations = iterations
        self.dim = dim
        self.random_state = random_state
        self.jitter_tolerance = jitter_tolerance
        self.edge_weight_influence = edge_weight_influence

    def _validate(self, W) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        check_positive("scaling", self.scaling)
        if self.gravity < 0:
            raise ConfigError(f"gravity must be >= 0; got {self.gravity}")
        check_at_least("iterations", self.iterations, 1)
        if self.dim not in (2, 3):
            raise ConfigError(f"layout dim must be 2 or 3; got {self.dim}")
        W = np.asarray(W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ConfigError(f"weight matrix must be square; got shape {W.shape}")
        if W.shape[0] == 0:
            raise ConfigError("cannot lay out an empty graph")
        if not np.all(np.isfinite(W)):
            raise ConfigError("weight matrix contains non-finite entries")
        if np.any(W < 0):
            raise ConfigError("edge weights must be non-negative")
        if not np.array_equal(W, W.T):
            raise ConfigError("weight matrix must be symmetric")
        iu = np.triu_indices(W.shape[0], k=1)
        present = W[iu] > 0
        edge_index = np.stack([iu[0][present], iu[1][present]], axis=1)
        edge_weights = W[iu][present]
        degrees = (W > 0).sum(axis=1)
        masses = degrees.astype(np.float64) + 1.0
        return W, edge_index, edge_weights, masses

    def fit(self, X, y=None, positions: np.ndarray | None = None):
        W, edge_index, edge_weights, masses = self._validate(X)
        n = W.shape[0]
        rng = np.random.default_rng(self.random_state)
        if positions is None:
            pos = rng.uniform(-INIT_RANGE, INIT_RANGE, size=(n, self.dim))
        else:
            pos = np.asarray(positions, dtype=np.float64).copy()
            if pos.shape != (n, self.dim):
                raise ConfigError(
                    f"initial positions must have shape {(n, self.dim)}; got {pos.shape}"
                )
        state = LayoutState(positions=pos, prev_forces=np.zeros_like(pos))
        trace = np.empty(self.iterations, dtype=np.float64)
        for it in range(self.iterations):
            state = step(
                state,
                masses,
                edge_index,
                edge_weights,
                scaling=self.scaling,
                gravity=self.gravity,
                jitter_tolerance=self.jitter_tolerance,
                edge_weight_influence=self.edge_weight_influence,
                rng=rng,
            )
            trace[it] = state.energy
        self.masses_ = masses
        self.positions_ = state.positions
        self.energy_trace_ = trace
        self.final_state_ = state
        return self

    def fit_transform(self, X, y=None, positions: np.ndarray | None = None):
        return self.fit(X, positions=positions).positions_
