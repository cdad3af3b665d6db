"""Text ingestion: sentence segmentation, tokenization, stopword and clause filters."""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Pattern, Sequence

from .errors import ConfigError

DEFAULT_DELIMITERS = frozenset(".!?。！？")

# Runs of letters/digits; underscores and punctuation act as separators.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Han ideographs plus kana: scripts without word spacing, split per character.
_CJK_RANGES = (
    (0x3040, 0x30FF),
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xF900, 0xFAFF),
)


def _is_cjk(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


@dataclass(frozen=True)
class SentenceRecord:
    """One narrative unit; ``index`` doubles as the narrative timestamp."""

    index: int
    raw: str
    tokens: tuple[str, ...]
    retained: bool = True


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = frozenset()
    clause_patterns: tuple[str, ...] = ()
    sentence_delimiters: frozenset[str] = DEFAULT_DELIMITERS

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "clause_patterns", tuple(self.clause_patterns))
        object.__setattr__(
            self, "sentence_delimiters", frozenset(self.sentence_delimiters)
        )
        if not self.sentence_delimiters:
            raise ConfigError("sentence_delimiters must not be empty")
        compile_patterns(self.clause_patterns)


def compile_patterns(patterns: Sequence[str]) -> list[Pattern[str]]:
    compiled = []
    for pattern in patterns:
        try:
            compiled.append(re.compile(pattern))
        except re.error as exc:
            raise ConfigError(f"invalid clause pattern {pattern!r}: {exc}") from None
    return compiled


def tokenize(sentence: str) -> list[str]:
    """Lowercased word tokens; punctuation stripped, CJK split per character."""
    return [token.lower() for token in tokenize_with_case(sentence)]


def tokenize_with_case(sentence: str) -> list[str]:
    """Same segmentation as :func:`tokenize` but with original casing kept."""
    tokens: list[str] = []
    for match in _WORD_RE.finditer(sentence):
        run = match.group()
        buf: list[str] = []
        for ch in run:
            if _is_cjk(ch):
                if buf:
                    tokens.append("".join(buf))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
        if buf:
            tokens.append("".join(buf))
    return tokens


def filter_stopwords(tokens: Iterable[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    return [token for token in tokens if token not in stopwords]


def segment(raw: str, config: PreprocessConfig | None = None) -> list[SentenceRecord]:
    """Split ``raw`` into sentence records at delimiter characters.

    Every input character ends up either inside exactly one record's ``raw``
    or is a delimiter/whitespace dropped at the boundary; indices are
    contiguous in document order.
    """
    if config is None:
        config = PreprocessConfig()
    records: list[SentenceRecord] = []
    chunk: list[str] = []

    def flush() -> None:
        text = "".join(chunk).strip()
        chunk.clear()
        if not text:
            return
        tokens = tuple(filter_stopwords(tokenize(text), config.stopwords))
        records.append(SentenceRecord(index=len(records), raw=text, tokens=tokens))

    for ch in raw:
        if ch in config.sentence_delimiters:
            flush()
        else:
            chunk.append(ch)
    flush()
    return records


def retain_clauses(
    records: Sequence[SentenceRecord], patterns: Sequence[str]
) -> list[SentenceRecord]:
    """Flag records whose raw text matches no pattern as retained=False.

    Indices are never touched; an empty pattern list retains everything.
    """
    compiled = compile_patterns(patterns)
    if not compiled:
        return [replace(r, retained=True) for r in records]
    return [
        replace(r, retained=any(p.search(r.raw) for p in compiled)) for r in records
    ]


def read_text(path: str | Path) -> str:
    from .errors import InputError

    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"text file not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"text file {path} is not valid UTF-8: {exc}") from None


def read_stopwords(path: str | Path) -> frozenset[str]:
    """One lowercase token per line; blank lines and '#' comments skipped."""
    from .errors import InputError

    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"stopword file not found: {path}") from None
    words = set()
    for line in lines:
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)
