import numpy as np
import pytest

from semtopo import forcelayout
from semtopo.errors import ConfigError
from helpers import make_random_graph

TWO_NODE = np.array([[0.0, 1.0], [1.0, 0.0]])


class TestForces:
    def test_single_node_at_origin_no_force(self):
        force, _ = forcelayout.forces(
            np.zeros((1, 3)),
            np.ones(1),
            np.empty((0, 2), dtype=int),
            np.empty(0),
            scaling=10.0,
            gravity=1.0,
        )
        assert np.array_equal(force, np.zeros((1, 3)))

    def test_single_node_gravity_unit_pull(self):
        force, _ = forcelayout.forces(
            np.array([[1.0, 0.0, 0.0]]),
            np.ones(1),
            np.empty((0, 2), dtype=int),
            np.empty(0),
            scaling=10.0,
            gravity=1.0,
        )
        assert np.allclose(force, [[-1.0, 0.0, 0.0]])

    def test_two_isolated_nodes_repulsion_magnitude(self):
        d = 2.0
        positions = np.array([[0.0, 0.0, 0.0], [d, 0.0, 0.0]])
        force, _ = forcelayout.forces(
            positions,
            np.ones(2),  # degree 0 -> mass 1
            np.empty((0, 2), dtype=int),
            np.empty(0),
            scaling=10.0,
            gravity=0.0,
        )
        assert force[0] == pytest.approx([-10.0 / d, 0.0, 0.0])
        assert np.array_equal(force[0], -force[1])

    def test_newtons_third_law_pairwise(self):
        rng = np.random.default_rng(5)
        positions = rng.uniform(-1, 1, (2, 3))
        force, _ = forcelayout.forces(
            positions,
            np.array([2.0, 2.0]),
            np.array([[0, 1]]),
            np.array([0.8]),
            scaling=10.0,
            gravity=0.0,
        )
        assert np.array_equal(force[0], -force[1])

    def test_coincident_nodes_jittered_not_error(self):
        positions = np.zeros((2, 3))
        rng = np.random.default_rng(0)
        force, jittered = forcelayout.forces(
            positions,
            np.ones(2),
            np.empty((0, 2), dtype=int),
            np.empty(0),
            scaling=10.0,
            gravity=0.0,
            rng=rng,
        )
        assert not np.array_equal(jittered[0], jittered[1])
        assert np.all(np.isfinite(force))
        moved = jittered[1] - positions[1]
        assert np.linalg.norm(moved) == pytest.approx(
            forcelayout.COINCIDENCE_JITTER, rel=1e-9
        )


class TestStep:
    def test_zero_force_state_is_fixpoint(self):
        state = forcelayout.LayoutState(
            positions=np.zeros((1, 3)), prev_forces=np.zeros((1, 3))
        )
        out = forcelayout.step(
            state,
            np.ones(1),
            np.empty((0, 2), dtype=int),
            np.empty(0),
            scaling=10.0,
            gravity=1.0,
        )
        assert np.array_equal(out.positions, state.positions)
        assert out.energy == 0.0

    def test_two_node_equilibrium_distance(self):
        fa = forcelayout.ForceAtlas2Layout(
            scaling=10.0, gravity=0.0, iterations=1000, random_state=3
        )
        positions = fa.fit_transform(TWO_NODE)
        d = np.linalg.norm(positions[0] - positions[1])
        target = np.sqrt(4 * 10.0 / 1.0)
        assert abs(d - target) / target < 0.05

    def test_bitwise_deterministic(self):
        a = forcelayout.ForceAtlas2Layout(iterations=200, random_state=9).fit_transform(
            TWO_NODE
        )
        b = forcelayout.ForceAtlas2Layout(iterations=200, random_state=9).fit_transform(
            TWO_NODE
        )
        assert np.array_equal(a, b)


class TestLayout:
    def test_single_node_decays_to_origin(self):
        fa = forcelayout.ForceAtlas2Layout(
            scaling=10.0, gravity=1.0, iterations=1000, random_state=5
        )
        positions = fa.fit_transform(np.zeros((1, 1)))
        assert np.linalg.norm(positions[0]) < 1e-3

    def test_triangle_symmetry(self):
        W = np.array(
            [
                [0.0, 1.0, 1.0],
                [1.0, 0.0, 1.0],
                [1.0, 1.0, 0.0],
            ]
        )
        spreads = []
        for seed in range(10):
            fa = forcelayout.ForceAtlas2Layout(
                gravity=0.0, iterations=1500, random_state=seed
            )
            p = fa.fit_transform(W)
            d = [
                np.linalg.norm(p[0] - p[1]),
                np.linalg.norm(p[1] - p[2]),
                np.linalg.norm(p[0] - p[2]),
            ]
            spreads.append((max(d) - min(d)) / np.mean(d))
        assert np.mean(spreads) < 0.02

    def test_energy_decays_on_random_graph(self, golden_dir):
        import json

        golden = json.loads((golden_dir / "energy_ratio.json").read_text())
        W = make_random_graph()
        fa = forcelayout.ForceAtlas2Layout(
            scaling=10.0, gravity=1.0, iterations=1000, random_state=0
        )
        fa.fit(W)
        trace = fa.energy_trace_
        ratio = float(np.median(trace[900:1000]) / np.median(trace[0:100]))
        assert ratio <= golden["threshold"]
        assert ratio == pytest.approx(golden["ratio"], rel=1e-9)
        assert np.all(np.isfinite(trace))

    def test_translation_invariance_without_gravity(self):
        t = np.array([1.5, -2.25, 0.5])
        init = np.random.default_rng(8).uniform(-1, 1, (2, 3))
        base = forcelayout.ForceAtlas2Layout(
            gravity=0.0, iterations=100, random_state=3
        ).fit_transform(TWO_NODE, positions=init)
        moved = forcelayout.ForceAtlas2Layout(
            gravity=0.0, iterations=100, random_state=3
        ).fit_transform(TWO_NODE, positions=init + t)
        assert np.abs(moved - (base + t)).max() < 1e-9

    def test_mirror_symmetry_preserved(self):
        """A mirrored initialization of the symmetric two-node graph stays
        mirrored throughout the run."""
        init = np.array([[0.7, -0.4, 0.2], [-0.7, 0.4, -0.2]])
        positions = forcelayout.ForceAtlas2Layout(
            gravity=1.0, iterations=300, random_state=0
        ).fit_transform(TWO_NODE, positions=init)
        assert np.abs(positions[0] + positions[1]).max() < 1e-6

    def test_empty_graph_rejected(self):
        with pytest.raises(ConfigError, match="empty"):
            forcelayout.ForceAtlas2Layout().fit(np.zeros((0, 0)))

    def test_asymmetric_matrix_rejected(self):
        W = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(ConfigError, match="symmetric"):
            forcelayout.ForceAtlas2Layout().fit(W)

    def test_dim_2_supported(self):
        fa = forcelayout.ForceAtlas2Layout(dim=2, iterations=50, random_state=1)
        assert fa.fit_transform(TWO_NODE).shape == (2, 2)

    def test_positions_stay_bounded(self):
        W = make_random_graph(n=20, m=40, seed=4)
        fa = forcelayout.ForceAtlas2Layout(iterations=500, random_state=2)
        positions = fa.fit_transform(W)
        assert np.abs(positions).max() < forcelayout.EXPLOSION_LIMIT
