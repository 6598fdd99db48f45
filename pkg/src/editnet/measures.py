"""Behavioral and structural measures over an interaction network.

All measures are ratios or normalized coefficients, so corpora of wildly
different sizes stay comparable. Degenerate denominators (no links, no
editors, no events) yield 0 rather than errors.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .ingest import EditStream
from .network import InteractionNetwork, SimpleGraph, build_network, simple_projection
from .validation import check_count, check_fraction, check_positive

__all__ = [
    "BehaviorVectorizer",
    "MEASURE_FIELDS",
    "MeasureConfig",
    "MeasureVector",
    "active_ratio",
    "anonymity_ratio",
    "clustering_coefficient",
    "density_and_degree",
    "gini",
    "measure_all",
    "multiple_link_ratio",
    "pareto_ratio",
    "self_loop_ratio",
    "speed",
]

# Canonical field/column order for vectors, JSON objects, and CSV rows.
MEASURE_FIELDS = (
    "self_loop_ratio",
    "multiple_link_ratio",
    "speed",
    "active_ratio",
    "anonymity_ratio",
    "gini",
    "pareto_ratio",
    "clustering_coefficient",
    "density",
    "mean_degree",
    "editor_count",
    "event_count",
    "link_count",
)


@dataclass(frozen=True)
class MeasureConfig:
    """Tunable parameters of the measure suite.

    The defaults are one hour for the speed window, more-than-10 edits for
    an active editor, and an 80% edit mass for the Pareto ratio.
    """

    speed_window: int = 3600
    active_threshold: int = 10
    pareto_mass: float = 0.8

    def __post_init__(self):
        check_positive(self.speed_window, "speed_window")
        check_count(self.active_threshold, "active_threshold", minimum=0)
        check_fraction(self.pareto_mass, "pareto_mass", closed_left=False)


@dataclass(frozen=True)
class MeasureVector:
    """The full measure set for one analysis unit."""

    self_loop_ratio: float
    multiple_link_ratio: float
    speed: float
    active_ratio: float
    anonymity_ratio: float
    gini: float
    pareto_ratio: float
    clustering_coefficient: float
    density: float
    mean_degree: float
    editor_count: int
    event_count: int
    link_count: int

    def as_dict(self) -> dict:
        """Field name -> value, in canonical order."""
        return {name: getattr(self, name) for name in MEASURE_FIELDS}

    def as_array(self) -> np.ndarray:
        """All fields as a float vector in canonical order."""
        return np.array([float(getattr(self, name)) for name in MEASURE_FIELDS])


def self_loop_ratio(net: InteractionNetwork) -> float:
    """Fraction of links that are self-loops; 0 for a linkless network."""
    if net.total_links == 0:
        return 0.0
    return net.self_loop_count / net.total_links


def multiple_link_ratio(net: InteractionNetwork) -> float:
    """Fraction of links lying in repeated dyads.

    Every occurrence of a link whose unordered editor pair has multiplicity
    at least 2 counts toward the numerator; self-loops never do.
    """
    if net.total_links == 0:
        return 0.0
    repeated = sum(m for m in net.pair_multiplicity.values() if m >= 2)
    return repeated / net.total_links


def speed(stream: EditStream, window: float) -> float:
    """Fraction of edits landing within ``window`` seconds of the previous
    edit on the same page.

    The first edit of each page has no predecessor and never qualifies.
    """
    check_positive(window, "window")
    if stream.event_count == 0:
        return 0.0
    fast = 0
    for events in stream.pages.values():
        for earlier, later in zip(events, events[1:]):
            if later.timestamp - earlier.timestamp <= window:
                fast += 1
    return fast / stream.event_count


def active_ratio(net: InteractionNetwork, threshold: int) -> float:
    """Fraction of editors with strictly more than ``threshold`` edits."""
    check_count(threshold, "threshold", minimum=0)
    if not net.nodes:
        return 0.0
    active = sum(1 for stats in net.nodes.values() if stats.edits > threshold)
    return active / len(net.nodes)


def anonymity_ratio(net: InteractionNetwork) -> float:
    """Fraction of editors who are unregistered."""
    if not net.nodes:
        return 0.0
    anonymous = sum(1 for stats in net.nodes.values() if stats.anonymous)
    return anonymous / len(net.nodes)


def gini(counts) -> float:
    """Gini coefficient of a non-negative count distribution.

    Computed via the sorted form, which equals the normalized mean absolute
    difference sum(|x_i - x_j|) / (2 n^2 mu). Returns 0 for a single count
    or an all-zero distribution; raises ValueError on empty input.
    """
    values = np.asarray(counts, dtype=float)
    if values.size == 0:
        raise ValueError("gini of an empty sequence is undefined")
    if values.ndim != 1 or not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValueError("counts must be a flat sequence of non-negative numbers")
    n = values.size
    total = values.sum()
    if n == 1 or total == 0:
        return 0.0
    values = np.sort(values)
    ranks = np.arange(1, n + 1)
    return float(((2 * ranks - n - 1) * values).sum() / (n * total))


def pareto_ratio(counts, mass: float = 0.8) -> float:
    """Smallest fraction of top contributors covering ``mass`` of all edits.

    Counts are sorted descending and the shortest prefix whose sum reaches
    ``mass`` times the total determines the numerator. Raises ValueError on
    empty input or an all-zero total.
    """
    check_fraction(mass, "mass", closed_left=False)
    values = np.asarray(counts, dtype=float)
    if values.size == 0:
        raise ValueError("pareto_ratio of an empty sequence is undefined")
    if values.ndim != 1 or not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValueError("counts must be a flat sequence of non-negative numbers")
    total = values.sum()
    if total == 0:
        raise ValueError("pareto_ratio undefined for an all-zero distribution")
    prefix = np.cumsum(np.sort(values)[::-1])
    k = int(np.argmax(prefix >= mass * total)) + 1
    return k / values.size


def clustering_coefficient(graph: SimpleGraph) -> float:
    """Average local clustering coefficient of a simple undirected graph.

    Nodes of degree below 2 contribute 0; the average runs over all nodes.
    An empty graph scores 0.
    """
    node_ids = sorted(graph.nodes)
    if not node_ids:
        return 0.0
    total = 0.0
    for node in node_ids:  # sorted: fixed-order float reduction
        degree = graph.degree(node)
        if degree < 2:
            continue
        neighbors = graph.neighbors(node)
        closed = sum(len(neighbors & graph.neighbors(other)) for other in neighbors)
        total += closed / (degree * (degree - 1))
    return total / len(node_ids)


def density_and_degree(graph: SimpleGraph) -> tuple[float, float]:
    """Edge density 2m/(n(n-1)) and mean degree 2m/n; zeros for tiny graphs."""
    n = graph.node_count
    m = graph.edge_count
    density = 2 * m / (n * (n - 1)) if n >= 2 else 0.0
    mean_degree = 2 * m / n if n >= 1 else 0.0
    return density, mean_degree


def measure_all(stream: EditStream, config: MeasureConfig | None = None) -> MeasureVector:
    """Compute the full measure vector for one stream.

    Builds the interaction network and its simple projection, then fills
    every field using the configured speed window, active threshold, and
    Pareto mass. Deterministic: reductions run in canonical order, so the
    result is independent of page presentation order.
    """
    cfg = config or MeasureConfig()
    net = build_network(stream)
    graph = simple_projection(net)
    density, mean_degree = density_and_degree(graph)
    edit_counts = [stats.edits for stats in net.nodes.values()]
    return MeasureVector(
        self_loop_ratio=self_loop_ratio(net),
        multiple_link_ratio=multiple_link_ratio(net),
        speed=speed(stream, cfg.speed_window) if stream.event_count else 0.0,
        active_ratio=active_ratio(net, cfg.active_threshold),
        anonymity_ratio=anonymity_ratio(net),
        gini=gini(edit_counts) if edit_counts else 0.0,
        pareto_ratio=pareto_ratio(edit_counts, cfg.pareto_mass) if edit_counts else 0.0,
        clustering_coefficient=clustering_coefficient(graph),
        density=density,
        mean_degree=mean_degree,
        editor_count=net.node_count,
        event_count=stream.event_count,
        link_count=net.total_links,
    )


class BehaviorVectorizer(BaseEstimator, TransformerMixin):
    """Turn edit streams into measure vectors, one row per stream.

    Stateless transformer: ``fit`` only validates parameters, ``transform``
    maps a sequence of :class:`EditStream` objects to a float matrix whose
    columns follow :data:`MEASURE_FIELDS`. Plays well in scikit-learn
    pipelines ahead of scalers or clusterers.

    Parameters
    ----------
    speed_window : int, default=3600
        Gap bound in seconds for an edit to count as fast.
    active_threshold : int, default=10
        An editor is active with strictly more edits than this.
    pareto_mass : float, default=0.8
        Edit mass the top-contributor prefix must cover.
    """

    def __init__(self, speed_window=3600, active_threshold=10, pareto_mass=0.8):
        self.speed_window = speed_window
        self.active_threshold = active_threshold
        self.pareto_mass = pareto_mass

    def _config(self) -> MeasureConfig:
        return MeasureConfig(
            speed_window=self.speed_window,
            active_threshold=self.active_threshold,
            pareto_mass=self.pareto_mass,
        )

    def fit(self, X, y=None):
        self._config()
        return self

    def transform(self, X):
        """Measure every stream in ``X``.

        Returns
        -------
        ndarray of shape (n_streams, 13)
        """
        config = self._config()
        rows = []
        for stream in X:
            if not isinstance(stream, EditStream):
                raise TypeError(f"expected EditStream, got {type(stream).__name__}")
            rows.append(measure_all(stream, config).as_array())
        return np.array(rows).reshape(len(rows), len(MEASURE_FIELDS))

    def get_feature_names_out(self, input_features=None):
        return np.asarray(MEASURE_FIELDS, dtype=object)
