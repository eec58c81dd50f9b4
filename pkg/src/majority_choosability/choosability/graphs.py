"""Graph, list and colouring types shared by every solver.

Finite graphs keep explicit adjacency (backed by :mod:`networkx`); countable graphs are
oracles that enumerate vertices, stream neighbours and declare degrees. A :class:`FiniteGraph`
also speaks the oracle interface, so closure and saturation code accepts either.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from itertools import islice

import networkx as nx

from .exceptions import (
    GraphFormatError,
    HorizonRequiredError,
    InputError,
    ListSizeError,
    PartialColouringError,
    PreconditionError,
    VertexNotColouredError,
)
from .utils import sorted_vertices, vertex_sort_key

logger = logging.getLogger(__name__)

Vertex = str
Colour = int


@total_ordering
@dataclass(frozen=True)
class Card:
    """Cardinality of a vertex set: a natural number, or aleph-0 when ``count`` is ``None``."""

    count: int | None

    @classmethod
    def of(cls, n: int) -> Card:
        if n < 0:
            raise ValueError(f"Cardinality cannot be negative: {n}")
        return cls(n)

    @property
    def is_finite(self) -> bool:
        return self.count is not None

    def __lt__(self, other):
        if not isinstance(other, Card):
            return NotImplemented
        if self.count is None:
            return False
        return other.count is None or self.count < other.count

    def __add__(self, other):
        if not isinstance(other, Card):
            return NotImplemented
        if self.count is None or other.count is None:
            return ALEPH_0
        return Card(self.count + other.count)

    def __str__(self):
        return "aleph0" if self.count is None else str(self.count)

    def to_json(self) -> int | str:
        return "aleph0" if self.count is None else self.count


ALEPH_0 = Card(None)


class LazyGraph(ABC):
    """Oracle for a countable graph.

    Implementations must be pure: repeated calls return identical streams, and
    ``u in neighbours(v)`` holds exactly when ``v in neighbours(u)``.
    """

    is_finite = False

    @abstractmethod
    def vertices(self) -> Iterator[Vertex]:
        """Injective enumeration of the vertex set."""

    @abstractmethod
    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        """Neighbours of ``v`` in a fixed order; infinite when the degree is aleph-0."""

    @abstractmethod
    def degree(self, v: Vertex) -> Card:
        pass

    @abstractmethod
    def has_vertex(self, v: Vertex) -> bool:
        pass

    def require_vertex(self, v: Vertex) -> None:
        if not self.has_vertex(v):
            raise InputError(f"Unknown vertex {v!r}.", code="unknown_vertex")

    def neighbour_prefix(self, v: Vertex, k: int) -> list[Vertex]:
        return list(islice(self.neighbours(v), k))

    def scan_neighbours(self, v: Vertex, horizon: int | None = None) -> tuple[list[Vertex], bool]:
        """Return the neighbours of ``v`` and whether that list is the whole neighbourhood.

        Infinite neighbourhoods are cut at ``horizon``, which is then mandatory.
        """
        if self.degree(v).is_finite:
            return list(self.neighbours(v)), True
        if horizon is None:
            raise HorizonRequiredError(
                f"Vertex {v!r} has infinite degree; a horizon is required to scan it."
            )
        return self.neighbour_prefix(v, horizon), False

    def check_symmetry(self, vertices: Iterable[Vertex], horizon: int) -> tuple | None:
        """Return the first pair ``(v, u)`` with ``u in N(v)`` but ``v not in N(u)``.

        Pairs where both endpoints have infinite degree are only checked up to ``horizon``
        and never reported, since the back edge may appear later in the stream.
        """
        for v in vertices:
            for u in self.scan_neighbours(v, horizon)[0]:
                back, complete = self.scan_neighbours(u, horizon)
                if v not in back and complete:
                    return v, u
        return None

    def check_degrees(self, vertices: Iterable[Vertex], horizon: int) -> Vertex | None:
        """Return the first vertex whose declared degree disagrees with its stream."""
        for v in vertices:
            declared = self.degree(v)
            prefix = self.neighbour_prefix(v, horizon + 1)
            if declared.is_finite:
                if len(list(self.neighbours(v))) != declared.count:
                    return v
            elif len(prefix) <= horizon:
                return v
        return None


class FiniteGraph(LazyGraph):
    """Finite simple graph with explicit adjacency.

    Vertex identifiers are opaque strings, kept in natural order and mapped to dense indices.
    Isolated vertices are rejected unless ``allow_isolated`` is set.
    """

    is_finite = True

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Iterable[Vertex]],
        allow_isolated: bool = False,
        truncated: Iterable[Vertex] = (),
    ):
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            duplicates = sorted_vertices({v for v in vertices if vertices.count(v) > 1})
            raise GraphFormatError(
                f"Duplicate vertex identifiers: {duplicates}.", code="duplicate_vertex"
            )

        graph = nx.Graph()
        graph.add_nodes_from(vertices)
        for edge in edges:
            u, v = tuple(edge)
            if u == v:
                raise GraphFormatError(f"Self-loop on vertex {u!r}.", code="self_loop")
            for endpoint in (u, v):
                if endpoint not in graph:
                    raise GraphFormatError(
                        f"Edge {u!r}-{v!r} refers to unknown vertex {endpoint!r}.",
                        code="dangling_endpoint",
                    )
            if graph.has_edge(u, v):
                raise GraphFormatError(f"Duplicate edge {u!r}-{v!r}.", code="duplicate_edge")
            graph.add_edge(u, v)

        if not allow_isolated:
            isolated = sorted_vertices(nx.isolates(graph))
            if isolated:
                raise GraphFormatError(
                    f"Isolated vertices are not permitted: {isolated}.", code="isolated_vertex"
                )

        self._graph = nx.freeze(graph)
        self.allow_isolated = allow_isolated
        self.truncated = frozenset(truncated)
        self.vertex_ids = tuple(sorted_vertices(vertices))
        self._index = {v: i for i, v in enumerate(self.vertex_ids)}
        self._adjacency = {v: tuple(sorted_vertices(graph.adj[v])) for v in self.vertex_ids}
        self._neighbour_sets = {v: frozenset(nbrs) for v, nbrs in self._adjacency.items()}

    def __repr__(self):
        return f"<FiniteGraph order={self.order} size={self.size}>"

    def __eq__(self, other):
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return self.vertex_ids == other.vertex_ids and self.edges() == other.edges()

    __hash__ = None

    @classmethod
    def from_networkx(cls, graph: nx.Graph, allow_isolated: bool = False) -> FiniteGraph:
        return cls(
            [str(v) for v in graph.nodes],
            [(str(u), str(v)) for u, v in graph.edges],
            allow_isolated=allow_isolated,
        )

    def to_networkx(self) -> nx.Graph:
        return nx.Graph(self._graph)

    @property
    def order(self) -> int:
        return len(self.vertex_ids)

    @property
    def size(self) -> int:
        return self._graph.number_of_edges()

    def __len__(self):
        return self.order

    def vertices(self) -> Iterator[Vertex]:
        return iter(self.vertex_ids)

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._index

    def index(self, v: Vertex) -> int:
        self.require_vertex(v)
        return self._index[v]

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        return iter(self._adjacency[v])

    def neighbour_set(self, v: Vertex) -> frozenset[Vertex]:
        self.require_vertex(v)
        return self._neighbour_sets[v]

    def degree(self, v: Vertex) -> Card:
        return Card.of(self.deg(v))

    def deg(self, v: Vertex) -> int:
        self.require_vertex(v)
        return len(self._adjacency[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return self._graph.has_edge(u, v)

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        """All edges, each oriented from the lower to the higher vertex index, sorted."""
        pairs = []
        for u, v in self._graph.edges:
            if self._index[u] > self._index[v]:
                u, v = v, u
            pairs.append((u, v))
        return sorted(pairs, key=lambda e: (self._index[e[0]], self._index[e[1]]))

    def subgraph(self, vertices: Iterable[Vertex]) -> FiniteGraph:
        keep = set(vertices)
        for v in keep:
            self.require_vertex(v)
        return FiniteGraph(
            keep,
            [(u, v) for u, v in self.edges() if u in keep and v in keep],
            allow_isolated=True,
            truncated=self.truncated & keep,
        )


class ListSystem:
    """Colour lists per vertex; ``default`` serves every vertex without an explicit list.

    The default makes list systems on countable graphs finite to describe
    ("all lists are {1,2,3}").
    """

    def __init__(
        self,
        lists: Mapping[Vertex, Iterable[Colour]] | None = None,
        default: Iterable[Colour] | None = None,
    ):
        self._lists = {v: frozenset(colours) for v, colours in (lists or {}).items()}
        self.default = frozenset(default) if default is not None else None
        for v, colours in self._lists.items():
            if not colours:
                raise ListSizeError(f"The list of vertex {v!r} is empty.", code="empty_list")
        if self.default is not None and not self.default:
            raise ListSizeError("The default list is empty.", code="empty_list")

    def __repr__(self):
        return f"<ListSystem explicit={len(self._lists)} default={sorted(self.default or ())}>"

    def __eq__(self, other):
        if not isinstance(other, ListSystem):
            return NotImplemented
        return self._lists == other._lists and self.default == other.default

    __hash__ = None

    def __contains__(self, v: Vertex) -> bool:
        return v in self._lists or self.default is not None

    def __getitem__(self, v: Vertex) -> frozenset[Colour]:
        try:
            return self._lists[v]
        except KeyError:
            if self.default is None:
                raise PreconditionError(
                    f"No colour list for vertex {v!r}.", code="missing_list"
                ) from None
            return self.default

    @property
    def explicit(self) -> dict[Vertex, frozenset[Colour]]:
        return dict(self._lists)

    @property
    def palette(self) -> tuple[Colour, ...]:
        colours = set(self.default or ())
        for lst in self._lists.values():
            colours.update(lst)
        return tuple(sorted(colours))

    def uniform_size(self) -> int | None:
        sizes = {len(lst) for lst in self._lists.values()}
        if self.default is not None:
            sizes.add(len(self.default))
        return sizes.pop() if len(sizes) == 1 else None

    def require_size(self, vertices: Iterable[Vertex], size: int) -> None:
        for v in vertices:
            if len(self[v]) != size:
                raise ListSizeError(
                    f"Vertex {v!r} has a list of {len(self[v])} colours, {size} are required."
                )

    def restrict(self, vertices: Iterable[Vertex]) -> ListSystem:
        return ListSystem({v: self[v] for v in vertices})

    def as_dict(self) -> dict[Vertex, list[Colour]]:
        return {v: sorted(self._lists[v]) for v in sorted_vertices(self._lists)}


class PartialColouring(Mapping):
    """Immutable map from a set of coloured vertices to colours."""

    def __init__(self, assignment: Mapping[Vertex, Colour] | None = None):
        self._assignment = dict(assignment or {})

    def __repr__(self):
        return f"<PartialColouring domain={len(self._assignment)}>"

    def __getitem__(self, v: Vertex) -> Colour:
        return self._assignment[v]

    def __iter__(self):
        return iter(sorted_vertices(self._assignment))

    def __len__(self):
        return len(self._assignment)

    @property
    def domain(self) -> frozenset[Vertex]:
        return frozenset(self._assignment)

    def extend(self, other: Mapping[Vertex, Colour]) -> PartialColouring:
        """Return the union with ``other``; both must agree on their common domain."""
        merged = dict(self._assignment)
        for v, colour in other.items():
            if merged.get(v, colour) != colour:
                raise PreconditionError(
                    f"Extension recolours vertex {v!r} from {merged[v]} to {colour}.",
                    code="conflicting_extension",
                )
            merged[v] = colour
        return PartialColouring(merged)

    def restrict(self, vertices: Iterable[Vertex]) -> PartialColouring:
        return PartialColouring({v: self[v] for v in vertices if v in self._assignment})

    def list_violation(self, lists: ListSystem) -> Vertex | None:
        for v in self:
            if self[v] not in lists[v]:
                return v
        return None

    def require_list_respecting(self, lists: ListSystem) -> None:
        if (v := self.list_violation(lists)) is not None:
            raise PreconditionError(
                f"Vertex {v!r} has colour {self[v]} outside its list {sorted(lists[v])}.",
                code="list_violation",
            )

    def require_total(self, graph: FiniteGraph) -> None:
        missing = [v for v in graph.vertex_ids if v not in self._assignment]
        if missing:
            raise PartialColouringError(
                f"Colouring is not total; uncoloured vertices: {missing[:10]}."
            )

    def as_dict(self) -> dict[Vertex, Colour]:
        return {v: self._assignment[v] for v in self}


class Verdict(str, Enum):
    HAPPY = "happy"
    UNHAPPY = "unhappy"
    PENDING = "pending"


@dataclass(frozen=True)
class Happiness:
    """Happiness of a vertex, with the counters it was decided on.

    ``same`` and ``diff`` count coloured neighbours with the vertex's own colour and with
    another colour; uncoloured neighbours are never counted.
    """

    verdict: Verdict
    same: int
    diff: int

    @property
    def is_happy(self) -> bool:
        return self.verdict is Verdict.HAPPY


def neighbour_colour_counts(
    colouring: Mapping[Vertex, Colour], neighbours: Iterable[Vertex]
) -> Counter:
    return Counter(colouring[u] for u in neighbours if u in colouring)


def happiness_status(
    graph: LazyGraph,
    colouring: Mapping[Vertex, Colour],
    v: Vertex,
    horizon: int | None = None,
    infinite_opposite: bool = False,
) -> Happiness:
    """Decide whether ``v`` has at most as many same-coloured as other-coloured neighbours.

    For infinite degree only the first ``horizon`` neighbours are counted and the verdict
    stays pending, unless the caller certifies infinitely many opposite neighbours.
    """
    if v not in colouring:
        raise VertexNotColouredError(f"Vertex {v!r} is not coloured.")
    neighbours, complete = graph.scan_neighbours(v, horizon)
    counts = neighbour_colour_counts(colouring, neighbours)
    same = counts[colouring[v]]
    diff = sum(counts.values()) - same
    if complete:
        return Happiness(Verdict.HAPPY if same <= diff else Verdict.UNHAPPY, same, diff)
    return Happiness(Verdict.HAPPY if infinite_opposite else Verdict.PENDING, same, diff)


def is_majority_colouring(
    graph: FiniteGraph,
    colouring: Mapping[Vertex, Colour],
    vertices: Iterable[Vertex] | None = None,
) -> tuple[bool, Vertex | None]:
    """Whether every listed vertex (default: all) is happy; returns the first unhappy one."""
    for v in graph.vertex_ids if vertices is None else sorted_vertices(vertices):
        if not happiness_status(graph, colouring, v).is_happy:
            return False, v
    return True, None


def cross_edge_count(graph: FiniteGraph, colouring: Mapping[Vertex, Colour]) -> int:
    PartialColouring(colouring).require_total(graph)
    return sum(1 for u, v in graph.edges() if colouring[u] != colouring[v])


def monochromatic_edge_count(graph: FiniteGraph, colouring: Mapping[Vertex, Colour]) -> int:
    PartialColouring(colouring).require_total(graph)
    return sum(1 for u, v in graph.edges() if colouring[u] == colouring[v])


def induced_finite_subgraph(
    graph: LazyGraph, vertex_set: Iterable[Vertex], horizon: int | None = None
) -> FiniteGraph:
    """Subgraph induced by a finite vertex set.

    Members of infinite degree are scanned up to ``horizon`` only; they are listed in the
    ``truncated`` attribute of the result. Edges towards a truncated member are still found
    from the other endpoint whenever that one has finite degree.
    """
    members = set(vertex_set)
    for v in members:
        graph.require_vertex(v)
    if isinstance(graph, FiniteGraph):
        return graph.subgraph(members)

    edges = set()
    truncated = []
    for v in sorted_vertices(members):
        neighbours, complete = graph.scan_neighbours(v, horizon)
        if not complete:
            truncated.append(v)
        for u in neighbours:
            if u in members:
                edges.add(tuple(sorted((u, v), key=vertex_sort_key)))
    if truncated:
        logger.debug("Induced subgraph truncated at horizon %s for %s", horizon, truncated)
    return FiniteGraph(members, sorted(edges), allow_isolated=True, truncated=truncated)


def neighbours_within(
    graph: LazyGraph, v: Vertex, vertex_set: Iterable[Vertex], horizon: int | None = None
) -> frozenset[Vertex] | None:
    """``N(v)`` intersected with a finite vertex set, or ``None`` when undecidable.

    An infinite neighbourhood is never enumerated completely: membership is read from the
    finite neighbourhoods of the candidates instead, and only pairs of two infinite-degree
    vertices fall back to scanning ``v``'s stream up to ``horizon``.
    """
    members = set(vertex_set)
    if graph.degree(v).is_finite:
        return frozenset(u for u in graph.neighbours(v) if u in members)

    found = set()
    prefix = None
    for u in members:
        if u == v:
            continue
        if graph.degree(u).is_finite:
            if v in set(graph.neighbours(u)):
                found.add(u)
            continue
        if prefix is None:
            if horizon is None:
                return None
            prefix = set(graph.neighbour_prefix(v, horizon))
        if u in prefix:
            found.add(u)
        elif v not in set(graph.neighbour_prefix(u, horizon)):
            return None
        else:
            found.add(u)
    return frozenset(found)


def count_neighbours_in(
    graph: LazyGraph, v: Vertex, vertex_set: Iterable[Vertex], horizon: int | None = None
) -> Card | None:
    within = neighbours_within(graph, v, vertex_set, horizon)
    return None if within is None else Card.of(len(within))
