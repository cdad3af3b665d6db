import numpy as np
import pytest
from hypothesis import given, strategies as st

from semtopo import corpus, embedding
from semtopo.errors import InputError


class TestFallbackEmbed:
    def test_deterministic(self):
        v1 = embedding.fallback_embed(["butler", "clue"], 16, 7)
        v2 = embedding.fallback_embed(["butler", "clue"], 16, 7)
        assert np.array_equal(v1, v2)

    def test_repeated_token_same_direction(self):
        v1 = embedding.fallback_embed(["a"], 8, 1)
        v2 = embedding.fallback_embed(["a", "a"], 8, 1)
        assert embedding.cosine_distance(v1, v2) < 1e-12

    def test_unit_norm(self):
        v = embedding.fallback_embed(["x", "y", "z"], 32, 3)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9

    def test_empty_tokens_zero_vector(self):
        assert np.array_equal(embedding.fallback_embed([], 8, 0), np.zeros(8))

    def test_seed_changes_vector(self):
        v1 = embedding.fallback_embed(["a"], 8, 1)
        v2 = embedding.fallback_embed(["a"], 8, 2)
        assert not np.array_equal(v1, v2)

    def test_token_overlap_implies_proximity(self, records):
        """Sentences sharing >= 50% of tokens sit closer, on average, than
        token-disjoint pairs (exhaustive scan over the fixture corpus, on the
        same raw token stream the embedder sees)."""
        token_sets = [set(corpus.tokenize(r.raw)) for r in records]
        vecs = [
            embedding.fallback_embed(corpus.tokenize(r.raw), 64, 5) for r in records
        ]
        overlap_d, disjoint_d = [], []
        for i in range(len(records)):
            for j in range(i + 1, len(records)):
                a, b = token_sets[i], token_sets[j]
                if not a or not b:
                    continue
                d = embedding.cosine_distance(vecs[i], vecs[j])
                if len(a & b) * 2 >= min(len(a), len(b)):
                    overlap_d.append(d)
                elif not a & b:
                    disjoint_d.append(d)
        assert overlap_d and disjoint_d
        assert np.mean(overlap_d) < np.mean(disjoint_d)


class TestCosineDistance:
    def test_identity(self):
        v = np.array([1.0, 2.0, 3.0])
        assert embedding.cosine_distance(v, v) < 1e-15

    def test_orthogonal(self):
        assert embedding.cosine_distance([1, 0], [0, 1]) == 1.0

    def test_opposite(self):
        assert abs(embedding.cosine_distance([1.0, 0.5], [-1.0, -0.5]) - 2.0) < 1e-15

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            embedding.cosine_distance([0.0, 0.0], [1.0, 0.0])

    @given(
        st.lists(st.floats(-10, 10), min_size=2, max_size=6),
        st.floats(0.01, 100),
        st.floats(0.01, 100),
    )
    def test_scale_invariance(self, values, alpha, beta):
        u = np.asarray(values)
        v = u[::-1].copy() + 0.25
        if np.linalg.norm(u) < 1e-6 or np.linalg.norm(v) < 1e-6:
            return
        d1 = embedding.cosine_distance(u, v)
        d2 = embedding.cosine_distance(alpha * u, beta * v)
        assert abs(d1 - d2) < 1e-12

    def test_symmetry(self):
        u = np.array([0.3, -0.2, 0.9])
        v = np.array([1.1, 0.4, -0.5])
        assert embedding.cosine_distance(u, v) == embedding.cosine_distance(v, u)


class TestVectorFile:
    def test_fixture_loads_as_384(self, fixtures_dir):
        m = embedding.load_embeddings(fixtures_dir / "embeddings_30x384.txt", 384)
        assert m.dim == 384
        assert m.n_rows == 30
        assert m.normalized

    def test_round_trip_identity(self, tmp_path):
        rng = np.random.default_rng(0)
        vectors = rng.standard_normal((5, 6))
        vectors /= np.linalg.norm(vectors, axis=1)[:, None]
        m = embedding.EmbeddingMatrix(
            dim=6, vectors=vectors, row_index=(0, 1, 2, 4, 7)
        )
        path = tmp_path / "v.txt"
        embedding.save_embeddings(m, path)
        loaded = embedding.load_embeddings(path, 6)
        assert np.array_equal(loaded.vectors, m.vectors)
        assert loaded.row_index == m.row_index

    def test_dimension_mismatch(self, fixtures_dir):
        with pytest.raises(InputError, match="found dim=384, expected 128"):
            embedding.load_embeddings(fixtures_dir / "embeddings_30x384.txt", 128)

    def test_missing_row_named(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("dim=2 count=2 normalized=0\n0 1.0 0.0\n2 0.0 1.0\n")
        with pytest.raises(InputError, match=r"missing rows.*\[1\]"):
            embedding.load_embeddings(path, 2, expected_indices=[0, 1, 2])

    def test_non_finite_located(self, tmp_path):
        rows = ["dim=20 count=5 normalized=0"]
        for i in range(5):
            vals = ["0.5"] * 20
            if i == 4:
                vals[17] = "nan"
            rows.append(f"{i} " + " ".join(vals))
        path = tmp_path / "v.txt"
        path.write_text("\n".join(rows) + "\n")
        with pytest.raises(InputError, match="row 4, column 17"):
            embedding.load_embeddings(path, 20)

    def test_extra_rows_for_dropped_sentences_warn(self, tmp_path, caplog):
        path = tmp_path / "v.txt"
        path.write_text("dim=2 count=2 normalized=0\n0 1.0 0.0\n5 0.0 1.0\n")
        m = embedding.load_embeddings(path, 2, expected_indices=[0])
        assert m.row_index == (0,)

    def test_count_header_mismatch(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("dim=2 count=3 normalized=0\n0 1.0 0.0\n")
        with pytest.raises(InputError, match="count=3"):
            embedding.load_embeddings(path, 2)

    def test_unnormalized_flag_respected(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("dim=2 count=1 normalized=0\n0 3.0 4.0\n")
        m = embedding.load_embeddings(path, 2)
        assert not m.normalized
        assert np.array_equal(m.vectors, [[3.0, 4.0]])

    def test_normalized_flag_enforced(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("dim=2 count=1 normalized=1\n0 3.0 4.0\n")
        with pytest.raises(InputError, match="norm"):
            embedding.load_embeddings(path, 2)
