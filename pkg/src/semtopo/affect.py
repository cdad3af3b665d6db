"""Binary sentiment per retained sentence: external classifier output or a
lexicon fallback. Label 1 iff score >= 0 (ties are positive, by convention)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InputError

logger = logging.getLogger(__name__)

SOURCE_EXTERNAL = "external"
SOURCE_LEXICON = "lexicon"


@dataclass(frozen=True)
class SentimentLabels:
    labels: Mapping[int, int]
    scores: Mapping[int, float]
    source: str


def lexicon_sentiment(
    tokens: Sequence[str], lexicon: Mapping[str, float]
) -> tuple[int, float]:
    """Mean valence of matched tokens, clamped into [-1, 1].

    The mean (not the sum) keeps sentence length from dominating polarity.
    No matches score 0, which labels positive under the tie rule.
    """
    matched = [lexicon[t] for t in tokens if t in lexicon]
    score = sum(matched) / max(1, len(matched))
    score = min(1.0, max(-1.0, score))
    return (1 if score >= 0.0 else 0), score


def label_records(records, lexicon: Mapping[str, float]) -> SentimentLabels:
    labels: dict[int, int] = {}
    scores: dict[int, float] = {}
    for record in records:
        if not record.retained:
            continue
        label, score = lexicon_sentiment(record.tokens, lexicon)
        labels[record.index] = label
        scores[record.index] = score
    return SentimentLabels(labels=labels, scores=scores, source=SOURCE_LEXICON)


def load_lexicon(path: str | Path) -> dict[str, float]:
    """Lines of '<token> <valence>'; blank lines and '#' comments skipped."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"lexicon file not found: {path}") from None
    lexicon: dict[str, float] = {}
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise InputError(f"{path}:{line_no}: expected '<token> <valence>'")
        try:
            lexicon[fields[0].lower()] = float(fields[1])
        except ValueError:
            raise InputError(
                f"{path}:{line_no}: valence {fields[1]!r} is not a number"
            ) from None
    return lexicon


def load_sentiment(
    path: str | Path, retained_indices: Iterable[int]
) -> SentimentLabels:
    """Parse '<sentence_index> <label> [score]' lines from an external
    classifier. Every retained sentence must be covered; rows for dropped
    sentences are ignored with a warning. Missing scores default to +/-1.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"sentiment file not found: {path}") from None
    retained = set(int(i) for i in retained_indices)
    labels: dict[int, int] = {}
    scores: dict[int, float] = {}
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) not in (2, 3):
            raise InputError(
                f"{path}:{line_no}: expected '<sentence_index> <label> [score]'"
            )
        try:
            index = int(fields[0])
            label = int(fields[1])
        except ValueError:
            raise InputError(f"{path}:{line_no}: malformed index or label") from None
        if label not in (0, 1):
            raise InputError(
                f"{path}:{line_no}: label must be 0 or 1; got {fields[1]}"
            )
        if len(fields) == 3:
            try:
                score = float(fields[2])
            except ValueError:
                raise InputError(
                    f"{path}:{line_no}: score {fields[2]!r} is not a number"
                ) from None
            if not -1.0 <= score <= 1.0:
                raise InputError(
                    f"{path}:{line_no}: score {score} outside [-1, 1]"
                )
            if (label == 1) != (score >= 0.0):
                raise InputError(
                    f"{path}:{line_no}: label {label} inconsistent with score {score}"
                )
        else:
            score = 1.0 if label == 1 else -1.0
        if index in labels:
            raise InputError(f"{path}:{line_no}: duplicate sentence index {index}")
        if index not in retained:
            logger.warning(
                "%s:%d: sentiment for non-retained sentence %d ignored",
                path, line_no, index,
            )
            continue
        labels[index] = label
        scores[index] = score
    missing = sorted(retained - set(labels))
    if missing:
        raise InputError(f"{path}: missing sentiment for sentence indices: {missing}")
    return SentimentLabels(labels=labels, scores=scores, source=SOURCE_EXTERNAL)
