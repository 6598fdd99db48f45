"""Composite cultural-dimension scores across analysis units.

Each dimension averages z-scored measure columns, oriented so that larger
means more of the named trait: collectivism from clustering and repeated
dyads, extraversion from self-loops against anonymity, boldness from
self-loops and speed, egalitarianism from low inequality and broad
contribution.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .measures import MEASURE_FIELDS, MeasureVector

__all__ = [
    "DIMENSION_COMPONENTS",
    "DIMENSION_FIELDS",
    "DimensionScorer",
    "DimensionScores",
    "dimension_scores",
    "rank_units",
    "zscore",
]

DIMENSION_FIELDS = ("collectivism", "extraversion", "boldness", "egalitarianism")

# Signed measure components per dimension; the sign orients the measure so
# that a larger z-score always pushes the dimension up.
DIMENSION_COMPONENTS: Mapping[str, tuple[tuple[str, float], ...]] = {
    "collectivism": (("clustering_coefficient", 1.0), ("multiple_link_ratio", 1.0)),
    "extraversion": (("self_loop_ratio", 1.0), ("anonymity_ratio", -1.0)),
    "boldness": (("self_loop_ratio", 1.0), ("speed", 1.0)),
    "egalitarianism": (("gini", -1.0), ("pareto_ratio", 1.0)),
}


@dataclass(frozen=True)
class DimensionScores:
    """The four dimension values for one unit; each is a z-score composite."""

    collectivism: float
    extraversion: float
    boldness: float
    egalitarianism: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in DIMENSION_FIELDS}


def zscore(values) -> np.ndarray:
    """Standardize a sequence with the population standard deviation.

    A zero-variance sequence maps to all zeros instead of erroring, so one
    constant column cannot poison a whole table. Fewer than two values
    raise ValueError.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("zscore needs a flat sequence of at least 2 values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("zscore input contains non-finite values")
    sigma = arr.std()
    if sigma == 0:
        return np.zeros(arr.size)
    return (arr - arr.mean()) / sigma


def _resolve_weights(weights) -> dict[str, tuple[float, ...]]:
    resolved = {}
    for dim, components in DIMENSION_COMPONENTS.items():
        pair = (weights or {}).get(dim, (1.0,) * len(components))
        if len(pair) != len(components) or any(w <= 0 for w in pair):
            raise ValueError(f"weights for {dim} must be {len(components)} positive numbers")
        resolved[dim] = tuple(float(w) for w in pair)
    return resolved


def dimension_scores(
    units: Sequence[tuple[str, MeasureVector]],
    weights: Mapping[str, Sequence[float]] | None = None,
) -> dict[str, DimensionScores]:
    """Score every unit on the four dimensions.

    Parameters
    ----------
    units : sequence of (name, MeasureVector)
        At least two uniquely named units; standardization is cross-unit.
    weights : mapping, optional
        Per-dimension component weights (positive, same order as
        ``DIMENSION_COMPONENTS``). The default is an equal-weight mean.

    Returns
    -------
    dict
        Unit name -> DimensionScores, preserving input order. Each
        dimension column has mean 0 across units by construction.
    """
    names = [name for name, _ in units]
    if len(names) < 2:
        raise ValueError("dimension scores need at least 2 units")
    if len(set(names)) != len(names):
        raise ValueError("unit names must be unique")
    resolved = _resolve_weights(weights)
    z_columns = {
        field: zscore([getattr(vector, field) for _, vector in units])
        for components in DIMENSION_COMPONENTS.values()
        for field, _ in components
    }
    result = {}
    for row, name in enumerate(names):
        values = {}
        for dim in DIMENSION_FIELDS:
            parts = DIMENSION_COMPONENTS[dim]
            w = resolved[dim]
            total = sum(wi * sign * z_columns[field][row] for wi, (field, sign) in zip(w, parts))
            values[dim] = total / sum(w)
        result[name] = DimensionScores(**values)
    return result


def rank_units(scores: Mapping[str, DimensionScores], dimension: str) -> list[str]:
    """Unit names ordered from highest to lowest on one dimension.

    Exact ties break lexicographically by unit name, so the ordering is
    deterministic. Unknown dimension names raise ValueError.
    """
    if dimension not in DIMENSION_FIELDS:
        raise ValueError(
            f"unknown dimension {dimension!r}; expected one of {', '.join(DIMENSION_FIELDS)}"
        )
    return sorted(scores, key=lambda name: (-getattr(scores[name], dimension), name))


class DimensionScorer(BaseEstimator, TransformerMixin):
    """Project measure matrices onto the four cultural dimensions.

    ``fit`` learns per-column means and population standard deviations from
    a measure matrix (columns in :data:`~editnet.measures.MEASURE_FIELDS`
    order, e.g. the output of :class:`~editnet.measures.BehaviorVectorizer`);
    ``transform`` standardizes and combines the signed components.
    ``fit_transform`` on a unit table reproduces :func:`dimension_scores`.

    Parameters
    ----------
    weights : mapping, optional
        Per-dimension component weights; equal weights when omitted.

    Attributes
    ----------
    mean_ : ndarray of shape (n_measures,)
        Column means of the fit data.
    scale_ : ndarray of shape (n_measures,)
        Population standard deviations, with zeros replaced by 1 so that
        constant columns standardize to 0.
    """

    def __init__(self, weights=None):
        self.weights = weights

    def fit(self, X, y=None):
        X = self._validate(X, min_rows=2)
        _resolve_weights(self.weights)
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        self.scale_ = scale
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Map a measure matrix to dimension scores.

        Returns
        -------
        ndarray of shape (n_units, 4)
            Columns in :data:`DIMENSION_FIELDS` order.
        """
        check_is_fitted(self, ["mean_", "scale_"])
        X = self._validate(X, min_rows=1)
        Z = (X - self.mean_) / self.scale_
        resolved = _resolve_weights(self.weights)
        columns = []
        for dim in DIMENSION_FIELDS:
            parts = DIMENSION_COMPONENTS[dim]
            w = resolved[dim]
            idx = [MEASURE_FIELDS.index(field) for field, _ in parts]
            signs = np.array([sign for _, sign in parts])
            columns.append((Z[:, idx] * signs * w).sum(axis=1) / sum(w))
        return np.column_stack(columns)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(DIMENSION_FIELDS, dtype=object)

    @staticmethod
    def _validate(X, min_rows):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(MEASURE_FIELDS):
            raise ValueError(f"expected a (n, {len(MEASURE_FIELDS)}) measure matrix")
        if X.shape[0] < min_rows:
            raise ValueError(f"need at least {min_rows} rows, got {X.shape[0]}")
        if not np.all(np.isfinite(X)):
            raise ValueError("measure matrix contains non-finite values")
        return X
