"""Shared input-validation helpers used across the package."""

import numpy as np

__all__ = [
    "check_count",
    "check_fraction",
    "check_points",
    "check_positive",
]


def check_positive(value, name):
    """Raise ValueError unless ``value`` is a finite number > 0."""
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def check_count(value, name, minimum=0):
    """Raise ValueError unless ``value`` is an integer >= ``minimum``."""
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_fraction(value, name, *, closed_left=True, closed_right=True):
    """Raise ValueError unless ``value`` lies in the unit interval.

    ``closed_left``/``closed_right`` control whether the endpoints 0 and 1
    are admitted.
    """
    lo_ok = value >= 0 if closed_left else value > 0
    hi_ok = value <= 1 if closed_right else value < 1
    if not (np.isfinite(value) and lo_ok and hi_ok):
        lo = "[" if closed_left else "("
        hi = "]" if closed_right else ")"
        raise ValueError(f"{name} must be in {lo}0, 1{hi}, got {value!r}")
    return float(value)


def check_points(X, name="points", min_rows=1):
    """Coerce ``X`` to a 2-D float array of finite point coordinates.

    A sequence of equal-length vectors is accepted; ragged input, fewer than
    ``min_rows`` rows, or non-finite entries raise ValueError.
    """
    try:
        arr = np.asarray(X, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a 2-D numeric array") from exc
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {arr.ndim} dimensions")
    if arr.shape[0] < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} rows, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr
