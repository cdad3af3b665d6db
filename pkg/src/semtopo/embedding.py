"""Sentence vectors: vector-file ingestion plus a seeded hashing fallback embedder."""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, InputError, InvariantError

logger = logging.getLogger(__name__)

DEFAULT_DIM = 384
UNIT_NORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Row-major matrix of sentence vectors; ``row_index`` maps row -> sentence."""

    dim: int
    vectors: np.ndarray
    row_index: tuple[int, ...]
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "row_index", tuple(int(i) for i in self.row_index))
        vectors = np.asarray(self.vectors, dtype=np.float64)
        object.__setattr__(self, "vectors", vectors)
        if vectors.ndim != 2 or vectors.shape[1] != self.dim:
            raise InvariantError(
                f"embedding matrix shape {vectors.shape} does not match dim={self.dim}"
            )
        if vectors.shape[0] != len(self.row_index):
            raise InvariantError("row_index length does not match row count")
        if len(set(self.row_index)) != len(self.row_index):
            raise InvariantError("row_index contains duplicate sentence indices")
        if not np.all(np.isfinite(vectors)):
            raise InvariantError("embedding matrix contains non-finite components")
        if self.normalized and vectors.shape[0]:
            norms = np.linalg.norm(vectors, axis=1)
            if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
                bad = int(np.argmax(np.abs(norms - 1.0)))
                raise InvariantError(
                    f"row {bad} has norm {norms[bad]!r} but matrix is flagged normalized"
                )

    @property
    def n_rows(self) -> int:
        return self.vectors.shape[0]


def fallback_embed(tokens: Sequence[str], dim: int, seed: int) -> np.ndarray:
    """Deterministic bag-of-hashed-tokens embedding.

    Each token is hashed (with the seed) to a pseudo-random unit direction;
    directions are summed and the result L2-normalized. Not semantically
    faithful, but token overlap implies proximity, which is all the
    downstream geometry needs. Empty input yields the zero vector.
    """
    if dim < 1:
        raise ConfigError(f"embedding dim must be >= 1; got {dim}")
    total = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        digest = hashlib.sha256(f"{seed}:{token}".encode("utf-8")).digest()
        token_seed = int.from_bytes(digest[:8], "little")
        direction = np.random.Generator(np.random.PCG64(token_seed)).standard_normal(dim)
        total += direction / np.linalg.norm(direction)
    norm = np.linalg.norm(total)
    if norm < 1e-12:
        logger.warning("fallback embedding degenerate (no usable tokens); zero vector")
        return np.zeros(dim, dtype=np.float64)
    return total / norm


def cosine_distance(u, v) -> float:
    """1 - cos(u, v), clamped into [0, 2]; undefined (error) for zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"vector shapes differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine distance is undefined for zero vectors")
    d = 1.0 - float(np.dot(u, v)) / (nu * nv)
    return min(2.0, max(0.0, d))


def save_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    """Write the documented vector-file format (full-precision decimals)."""
    path = Path(path)
    lines = [
        f"dim={matrix.dim} count={matrix.n_rows} normalized={1 if matrix.normalized else 0}"
    ]
    for row, sentence_index in zip(matrix.vectors, matrix.row_index):
        lines.append(
            str(sentence_index) + " " + " ".join(repr(float(x)) for x in row)
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_header(line: str, path: Path) -> tuple[int, int, bool]:
    fields = line.split()
    parsed = {}
    for item in fields:
        key, _, value = item.partition("=")
        parsed[key] = value
    try:
        dim = int(parsed["dim"])
        count = int(parsed["count"])
        normalized = parsed["normalized"] not in ("0", "")
    except (KeyError, ValueError):
        raise InputError(
            f"{path}: malformed header {line!r}; expected "
            "'dim=<d> count=<n> normalized=<0|1>'"
        ) from None
    return dim, count, normalized


def load_embeddings(
    path: str | Path,
    expected_dim: int,
    expected_indices: Iterable[int] | None = None,
) -> EmbeddingMatrix:
    """Parse a vector file, checking dimension, coverage, and finiteness.

    When ``expected_indices`` is given (the retained sentence indices), every
    one of them must be present exactly once; rows for unknown indices are
    dropped with a warning. Rows are returned sorted by sentence index.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"embedding file not found: {path}") from None
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise InputError(f"{path}: empty vector file")
    dim, count, normalized = _parse_header(lines[0], path)
    if dim != expected_dim:
        raise InputError(
            f"{path}: dimension mismatch: found dim={dim}, expected {expected_dim}"
        )
    data_lines = lines[1:]
    if len(data_lines) != count:
        raise InputError(
            f"{path}: header says count={count} but file has {len(data_lines)} rows"
        )

    indices: list[int] = []
    rows = np.empty((len(data_lines), dim), dtype=np.float64)
    for row_no, line in enumerate(data_lines):
        fields = line.split()
        if len(fields) != dim + 1:
            raise InputError(
                f"{path}: row {row_no} has {len(fields) - 1} components, expected {dim}"
            )
        try:
            sentence_index = int(fields[0])
            rows[row_no] = [float(x) for x in fields[1:]]
        except ValueError as exc:
            raise InputError(f"{path}: row {row_no}: {exc}") from None
        bad = np.flatnonzero(~np.isfinite(rows[row_no]))
        if bad.size:
            raise InputError(
                f"{path}: non-finite value at row {row_no}, column {int(bad[0])}"
            )
        indices.append(sentence_index)

    if len(set(indices)) != len(indices):
        dupes = sorted({i for i in indices if indices.count(i) > 1})
        raise InputError(f"{path}: duplicate sentence indices: {dupes}")

    if expected_indices is not None:
        expected = sorted(int(i) for i in expected_indices)
        missing = sorted(set(expected) - set(indices))
        if missing:
            raise InputError(
                f"{path}: missing rows for sentence indices: {missing}"
            )
        extra = sorted(set(indices) - set(expected))
        if extra:
            logger.warning(
                "%s: dropping %d rows for non-retained sentences: %s",
                path, len(extra), extra,
            )
            keep = [i for i, idx in enumerate(indices) if idx not in set(extra)]
            rows = rows[keep]
            indices = [indices[i] for i in keep]

    order = np.argsort(np.asarray(indices, dtype=np.int64), kind="stable")
    rows = rows[order]
    indices = [indices[i] for i in order]
    try:
        return EmbeddingMatrix(
            dim=dim, vectors=rows, row_index=tuple(indices), normalized=normalized
        )
    except InvariantError as exc:
        raise InputError(f"{path}: {exc}") from None


def embed_records(
    records, dim: int = DEFAULT_DIM, seed: int = 0
) -> EmbeddingMatrix:
    """Fallback-embed every retained record (raw-text tokens, stopwords kept)."""
    from .corpus import tokenize

    vectors = []
    indices = []
    for record in records:
        if not record.retained:
            continue
        vectors.append(fallback_embed(tokenize(record.raw), dim, seed))
        indices.append(record.index)
    if not vectors:
        raise ConfigError("no retained sentences to embed")
    matrix = np.vstack(vectors)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms < 1e-12):
        bad = [indices[i] for i in np.flatnonzero(norms < 1e-12)]
        raise InputError(
            f"sentences {bad} produced zero embeddings (no usable tokens); "
            "drop them with a clause pattern or supply external vectors"
        )
    return EmbeddingMatrix(
        dim=dim, vectors=matrix, row_index=tuple(indices), normalized=True
    )
