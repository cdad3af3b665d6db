"""Small input-validation helpers used by the estimators."""
from __future__ import annotations

import numpy as np

from .errors import ConfigError


def as_float_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float64 array."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} must contain at least one row")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_open_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ConfigError(f"{name} must lie in (0, 1); got {value}")
    return value


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0:
        raise ConfigError(f"{name} must be positive; got {value}")
    return value


def check_at_least(name: str, value: int, minimum: int) -> int:
    value = int(value)
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}; got {value}")
    return value
