"""Sequential interaction networks over editors.

Each edit on a page links its editor to the editor of the immediately
preceding edit on the same page. Self-loops (same editor twice in a row)
and repeated dyads are retained, which is the whole point: the resulting
structure is a directed multigraph, not a simple graph.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .ingest import EditEvent, EditStream

__all__ = [
    "InteractionNetwork",
    "Link",
    "NodeStats",
    "SimpleGraph",
    "build_network",
    "build_page_chain",
    "edge_list_lines",
    "merge_networks",
    "simple_projection",
    "to_dot",
]


@dataclass(frozen=True)
class Link:
    """One directed link: the later edit's editor points at the preceding one."""

    source: str
    target: str
    page_id: str
    gap: int

    def __post_init__(self):
        if self.gap < 0:
            raise ValueError(f"gap must be non-negative, got {self.gap}")

    @property
    def is_self_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class NodeStats:
    """Per-editor totals: edit count and whether any edit was anonymous."""

    edits: int
    anonymous: bool


@dataclass(frozen=True)
class InteractionNetwork:
    """Directed interaction multigraph with self-loops and link multiplicities.

    ``links_by_page`` keeps each page's chain in edit order;
    ``pair_multiplicity`` counts links per unordered editor pair, excluding
    self-loops, which have their own tally. Instances are immutable and
    compare equal independently of page insertion order.
    """

    nodes: Mapping[str, NodeStats]
    links_by_page: Mapping[str, tuple[Link, ...]]
    pair_multiplicity: Mapping[tuple[str, str], int]
    self_loop_count: int
    total_links: int
    per_page_event_counts: Mapping[str, int]

    def links(self) -> Iterator[Link]:
        """Iterate all links, pages in sorted order, chain order within a page."""
        for page_id in sorted(self.links_by_page):
            yield from self.links_by_page[page_id]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def event_count(self) -> int:
        return sum(self.per_page_event_counts.values())


def build_page_chain(events: Sequence[EditEvent]) -> list[Link]:
    """Link consecutive edits of one page: n events yield n-1 links.

    Link i points from the editor of event i+1 back to the editor of event
    i, carrying their timestamp gap. Consecutive edits by the same editor
    each yield one self-loop.

    Raises ValueError if the events span multiple pages or are not sorted
    ascending by timestamp.
    """
    if not events:
        return []
    page_id = events[0].page_id
    links = []
    for earlier, later in zip(events, events[1:]):
        if later.page_id != page_id or earlier.page_id != page_id:
            raise ValueError("events must all belong to one page")
        if later.timestamp < earlier.timestamp:
            raise ValueError(f"events for page {page_id!r} are not time-ordered")
        links.append(
            Link(
                source=later.editor_id,
                target=earlier.editor_id,
                page_id=page_id,
                gap=later.timestamp - earlier.timestamp,
            )
        )
    return links


def build_network(stream: EditStream) -> InteractionNetwork:
    """Aggregate every page chain of a stream into one interaction network."""
    nodes: dict[str, list] = {}  # editor -> [edits, anonymous]
    links_by_page: dict[str, tuple[Link, ...]] = {}
    pair_multiplicity: dict[tuple[str, str], int] = {}
    per_page_event_counts: dict[str, int] = {}
    self_loops = 0
    total = 0
    for page_id, events in stream.pages.items():
        per_page_event_counts[page_id] = len(events)
        for event in events:
            entry = nodes.get(event.editor_id)
            if entry is None:
                nodes[event.editor_id] = [1, event.anonymous]
            else:
                entry[0] += 1
                entry[1] = entry[1] or event.anonymous
        chain = build_page_chain(events)
        links_by_page[page_id] = tuple(chain)
        total += len(chain)
        for link in chain:
            if link.is_self_loop:
                self_loops += 1
            else:
                pair = _pair_key(link.source, link.target)
                pair_multiplicity[pair] = pair_multiplicity.get(pair, 0) + 1
    return InteractionNetwork(
        nodes={editor: NodeStats(*entry) for editor, entry in nodes.items()},
        links_by_page=links_by_page,
        pair_multiplicity=pair_multiplicity,
        self_loop_count=self_loops,
        total_links=total,
        per_page_event_counts=per_page_event_counts,
    )


def _pair_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


def merge_networks(a: InteractionNetwork, b: InteractionNetwork) -> InteractionNetwork:
    """Combine two networks built from disjoint page sets.

    Counts add componentwise, node tables union with summed edit counts and
    OR-ed anonymity; the operation is associative and commutative, so a
    parallel build over any page partition reproduces the single-pass
    network exactly. Overlapping page ids raise ValueError because a page's
    chain cannot be split.
    """
    overlap = a.links_by_page.keys() & b.links_by_page.keys()
    if overlap:
        sample = ", ".join(sorted(overlap)[:3])
        raise ValueError(f"networks share page(s): {sample}")
    nodes = {editor: [stats.edits, stats.anonymous] for editor, stats in a.nodes.items()}
    for editor, stats in b.nodes.items():
        entry = nodes.get(editor)
        if entry is None:
            nodes[editor] = [stats.edits, stats.anonymous]
        else:
            entry[0] += stats.edits
            entry[1] = entry[1] or stats.anonymous
    pairs = dict(a.pair_multiplicity)
    for pair, count in b.pair_multiplicity.items():
        pairs[pair] = pairs.get(pair, 0) + count
    return InteractionNetwork(
        nodes={editor: NodeStats(*entry) for editor, entry in nodes.items()},
        links_by_page={**a.links_by_page, **b.links_by_page},
        pair_multiplicity=pairs,
        self_loop_count=a.self_loop_count + b.self_loop_count,
        total_links=a.total_links + b.total_links,
        per_page_event_counts={**a.per_page_event_counts, **b.per_page_event_counts},
    )


class SimpleGraph:
    """Minimal undirected simple graph: nodes plus an adjacency map."""

    __slots__ = ("_adjacency", "_edge_count")

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str]] = ()):
        self._adjacency: dict[str, set[str]] = {node: set() for node in nodes}
        self._edge_count = 0
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: str, v: str) -> None:
        if u == v:
            raise ValueError("simple graph admits no self-loops")
        if u not in self._adjacency or v not in self._adjacency:
            raise KeyError("edge endpoints must be existing nodes")
        if v not in self._adjacency[u]:
            self._adjacency[u].add(v)
            self._adjacency[v].add(u)
            self._edge_count += 1

    @property
    def nodes(self):
        return self._adjacency.keys()

    @property
    def node_count(self) -> int:
        return len(self._adjacency)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def neighbors(self, node: str) -> frozenset:
        return frozenset(self._adjacency[node])

    def degree(self, node: str) -> int:
        return len(self._adjacency[node])

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adjacency.get(u, ())


def simple_projection(net: InteractionNetwork) -> SimpleGraph:
    """Collapse the multigraph to a simple undirected graph.

    Self-loops and multiplicities are dropped: an edge {u, v} exists iff at
    least one link ever connected the two distinct editors. All nodes are
    kept, including those left isolated by the collapse.
    """
    graph = SimpleGraph(net.nodes.keys())
    for u, v in net.pair_multiplicity:
        graph.add_edge(u, v)
    return graph


def edge_list_lines(net: InteractionNetwork) -> Iterator[str]:
    """Tab-separated link lines: source, target, page_id, gap."""
    for link in net.links():
        yield f"{link.source}\t{link.target}\t{link.page_id}\t{link.gap}"


def _dot_quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: InteractionNetwork, name: str = "edits") -> str:
    """DOT rendering of the multigraph, self-loops and multiplicities intact."""
    lines = [f"digraph {_dot_quote(name)} {{"]
    for editor in sorted(net.nodes):
        lines.append(f"  {_dot_quote(editor)};")
    for link in net.links():
        lines.append(
            f"  {_dot_quote(link.source)} -> {_dot_quote(link.target)}"
            f" [page={_dot_quote(link.page_id)}, gap={link.gap}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
