"""Closed sets, closures, boundaries and the saturation construction.

A set ``A`` is closed when every vertex outside it keeps a neighbour outside it. The closure is
built in stages: each stage adds every vertex whose whole neighbourhood lies in the previous
stage. Lazy graphs are handled with budgets (materialized vertices) and horizons (neighbours
scanned per infinite-degree vertex); a result cut short by either is flagged incomplete.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum

from .exceptions import PreconditionError
from .graphs import ALEPH_0, Card, LazyGraph, Vertex, count_neighbours_in
from .utils import sorted_vertices, vertex_sort_key

logger = logging.getLogger(__name__)


def _is_absorbable(graph: LazyGraph, v: Vertex, members: frozenset | set) -> bool:
    # Infinite neighbourhoods never fit inside a finite set.
    if not graph.degree(v).is_finite:
        return False
    return all(u in members for u in graph.neighbours(v))


def _candidates(
    graph: LazyGraph, sources: Iterable[Vertex], horizon: int | None
) -> tuple[set[Vertex], bool]:
    """Neighbours of ``sources``; the flag is false when a neighbourhood was truncated."""
    found = set()
    exhaustive = True
    for v in sources:
        neighbours, complete = graph.scan_neighbours(v, horizon)
        exhaustive &= complete
        found.update(neighbours)
    return found, exhaustive


def nbly(graph: LazyGraph, A: Iterable[Vertex], horizon: int | None = None) -> frozenset[Vertex]:
    """Vertices all of whose neighbours lie in ``A``.

    On a finite graph every vertex is examined. On a lazy graph only neighbours of ``A`` can
    qualify (there are no isolated vertices), and infinite-degree members of ``A`` are scanned
    up to ``horizon``.
    """
    members = frozenset(A)
    if graph.is_finite:
        candidates = graph.vertices()
    else:
        candidates, _ = _candidates(graph, members, horizon)
    return frozenset(v for v in candidates if _is_absorbable(graph, v, members))


@dataclass(frozen=True)
class ClosedVerdict:
    closed: bool
    witness: Vertex | None = None
    exhaustive: bool = True

    def __bool__(self):
        return self.closed


def is_closed(graph: LazyGraph, A: Iterable[Vertex], horizon: int | None = None) -> ClosedVerdict:
    """Whether ``nbly(A)`` is contained in ``A``; returns the first outside vertex that is not.

    A ``True`` verdict with ``exhaustive=False`` only covers the scanned neighbours of
    infinite-degree members.
    """
    members = frozenset(A)
    if graph.is_finite:
        candidates, exhaustive = set(graph.vertices()), True
    else:
        candidates, exhaustive = _candidates(graph, members, horizon)
    for v in sorted_vertices(candidates - members):
        if _is_absorbable(graph, v, members):
            return ClosedVerdict(False, witness=v, exhaustive=exhaustive)
    if not exhaustive:
        logger.warning("Closedness only checked up to horizon %s", horizon)
    return ClosedVerdict(True, exhaustive=exhaustive)


@dataclass(frozen=True)
class ClosureTrace:
    """Stage sequence ``A = A_0 ⊆ A_1 ⊆ ...`` of a closure computation."""

    stages: tuple[frozenset[Vertex], ...]
    absorbed_at: dict[Vertex, int] = field(default_factory=dict)
    complete: bool = True

    @property
    def base(self) -> frozenset[Vertex]:
        return self.stages[0]

    @property
    def closed_set(self) -> frozenset[Vertex]:
        return self.stages[-1]

    @property
    def boundary(self) -> frozenset[Vertex]:
        return self.closed_set - self.base

    def as_dict(self) -> dict:
        return {
            "stages": [sorted_vertices(stage) for stage in self.stages],
            "absorbedAt": {v: self.absorbed_at[v] for v in sorted_vertices(self.absorbed_at)},
            "complete": self.complete,
        }


def closure(
    graph: LazyGraph,
    A: Iterable[Vertex],
    budget: int | None = None,
    horizon: int | None = None,
) -> tuple[frozenset[Vertex], ClosureTrace]:
    """Smallest closed superset of ``A``, with its stage trace.

    ``budget`` caps the number of materialized vertices. When it would be exceeded, or when an
    infinite neighbourhood was only scanned up to ``horizon``, the partial result is returned
    with ``trace.complete`` set to false.
    """
    current = frozenset(A)
    for v in current:
        graph.require_vertex(v)
    stages = [current]
    absorbed_at = {}
    complete = True

    if graph.is_finite:
        candidates = set(graph.vertices())
    else:
        candidates, exhaustive = _candidates(graph, current, horizon)
        complete &= exhaustive

    while True:
        added = frozenset(
            v for v in candidates if v not in current and _is_absorbable(graph, v, current)
        )
        if not added:
            break
        if budget is not None and len(current) + len(added) > budget:
            logger.warning(
                "Closure budget of %d vertices exhausted at stage %d", budget, len(stages)
            )
            complete = False
            break
        current = current | added
        stages.append(current)
        for v in added:
            absorbed_at[v] = len(stages) - 1
        # Only neighbours of new members can become absorbable.
        candidates, exhaustive = _candidates(graph, added, horizon)
        complete &= exhaustive

    trace = ClosureTrace(stages=tuple(stages), absorbed_at=absorbed_at, complete=complete)
    logger.debug(
        "Closure of %d vertices has %d stages, %d boundary vertices",
        len(stages[0]),
        len(stages),
        len(trace.boundary),
    )
    return current, trace


@dataclass(frozen=True)
class EliminationOrder:
    """Boundary vertices ordered so each one's neighbourhood lies in ``A`` and earlier entries."""

    order: tuple[Vertex, ...]
    stage_of: dict[Vertex, int] = field(default_factory=dict)
    complete: bool = True

    def __iter__(self):
        return iter(self.order)

    def __len__(self):
        return len(self.order)

    def position(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.order)}

    def as_dict(self) -> dict:
        return {
            "order": list(self.order),
            "stageOf": {v: self.stage_of[v] for v in self.order},
            "complete": self.complete,
        }


def elimination_order(
    graph: LazyGraph,
    A: Iterable[Vertex],
    trace: ClosureTrace | None = None,
    budget: int | None = None,
    horizon: int | None = None,
) -> EliminationOrder:
    """Order the boundary by absorption stage, ties in vertex-id order."""
    if trace is None:
        _, trace = closure(graph, A, budget=budget, horizon=horizon)
    order = sorted(trace.boundary, key=lambda v: (trace.absorbed_at[v], vertex_sort_key(v)))
    return EliminationOrder(
        order=tuple(order),
        stage_of={v: trace.absorbed_at[v] for v in order},
        complete=trace.complete,
    )


def elimination_violation(
    graph: LazyGraph, A: Iterable[Vertex], order: Iterable[Vertex]
) -> Vertex | None:
    """First vertex of ``order`` with a neighbour outside ``A`` and the earlier entries."""
    allowed = set(A)
    for v in order:
        if not _is_absorbable(graph, v, allowed):
            return v
        allowed.add(v)
    return None


@dataclass(frozen=True)
class BoundaryReport:
    verdicts: dict[Vertex, bool]

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def failures(self) -> list[Vertex]:
        return sorted_vertices(v for v, ok in self.verdicts.items() if not ok)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "failures": self.failures}


def boundary_degree_check(
    graph: LazyGraph,
    A: Iterable[Vertex],
    trace: ClosureTrace | None = None,
    budget: int | None = None,
    horizon: int | None = None,
) -> BoundaryReport:
    """Every boundary vertex has its whole neighbourhood inside the closure."""
    if trace is None:
        _, trace = closure(graph, A, budget=budget, horizon=horizon)
    closed = trace.closed_set
    return BoundaryReport(
        verdicts={
            v: _is_absorbable(graph, v, closed) for v in sorted_vertices(trace.boundary)
        }
    )


@dataclass(frozen=True)
class SaturationResult:
    """Materialized part of a saturated superset ``B*`` of ``B``.

    ``generation`` maps each vertex to the round that added it (seed vertices are round 0).
    """

    b_star: frozenset[Vertex]
    generation: dict[Vertex, int]
    complete: bool = True

    @property
    def rounds(self) -> int:
        return max(self.generation.values(), default=0)

    def as_dict(self) -> dict:
        return {
            "bStar": sorted_vertices(self.b_star),
            "generation": {v: self.generation[v] for v in sorted_vertices(self.generation)},
            "rounds": self.rounds,
            "complete": self.complete,
        }


def saturate(
    graph: LazyGraph,
    A: Iterable[Vertex],
    B: Iterable[Vertex],
    mu: Card = ALEPH_0,
    budget: int | None = None,
) -> SaturationResult:
    """Grow ``B`` round by round, adding ``N(b) \\ A`` for every newly added ``b``.

    With ``mu`` countable every neighbourhood qualifies for the rule. The neighbour streams of
    one round are dovetailed, so an infinite neighbourhood does not starve the others; the
    ``budget`` caps the total number of materialized vertices.
    """
    if mu.is_finite:
        raise PreconditionError(
            "Saturation can only be constructed for a countably infinite mu; "
            "use is_saturated to check finite candidates.",
            code="finite_mu",
        )
    if budget is None and not graph.is_finite:
        raise PreconditionError("Saturating a lazy graph needs a budget.", code="budget")
    excluded = frozenset(A)
    seed = sorted_vertices(set(B))
    for v in seed:
        graph.require_vertex(v)
    if budget is not None and len(seed) > budget:
        raise PreconditionError(f"Budget {budget} is smaller than the seed set.", code="budget")

    generation = {v: 0 for v in seed}
    frontier = seed
    complete = True
    round_index = 0
    while frontier and complete:
        round_index += 1
        streams = deque(iter(graph.neighbours(b)) for b in frontier)
        added = []
        while streams:
            stream = streams.popleft()
            u = next(stream, None)
            if u is None:
                continue
            streams.append(stream)
            if u in excluded or u in generation:
                continue
            if budget is not None and len(generation) >= budget:
                complete = False
                logger.warning(
                    "Saturation budget of %d vertices exhausted in round %d", budget, round_index
                )
                break
            generation[u] = round_index
            added.append(u)
        frontier = sorted_vertices(added)

    return SaturationResult(
        b_star=frozenset(generation), generation=generation, complete=complete
    )


class SaturationStatus(str, Enum):
    SATURATED = "saturated"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SaturationVerdict:
    status: SaturationStatus
    witness: Vertex | None = None
    counters: dict = field(default_factory=dict)
    within_horizon: bool = False

    def __bool__(self):
        return self.status is SaturationStatus.SATURATED

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": self.witness,
            "counters": self.counters,
            "withinHorizon": self.within_horizon,
        }


def is_saturated(
    graph: LazyGraph,
    A: Iterable[Vertex],
    b_star: Iterable[Vertex],
    horizon: int | None = None,
    complete: bool = True,
) -> SaturationVerdict:
    """Check both saturation clauses for every member of ``b_star`` with outside neighbours.

    When ``complete`` is false ``b_star`` is only the materialized part of a larger set that
    absorbs ``N(b) \\ A`` of every member, so outside neighbours are pending members rather
    than violations; the verdict is then saturated within the horizon, with the pending
    neighbours counted. Infinite neighbourhoods are scanned up to ``horizon``.
    """
    excluded = frozenset(A)
    members = frozenset(b_star)
    size = Card.of(len(members))
    within_horizon = not complete
    pending = 0

    for b in sorted_vertices(members):
        neighbours, scanned_all = graph.scan_neighbours(b, horizon)
        within_horizon |= not scanned_all
        outside = [u for u in neighbours if u not in excluded and u not in members]
        if not outside:
            continue
        if not complete:
            pending += len(outside)
            continue
        # A and B* are finite here, so an infinite neighbourhood leaves infinitely many outside.
        outside_card = Card.of(len(outside)) if scanned_all else ALEPH_0
        inside = count_neighbours_in(graph, b, members - excluded, horizon)
        counters = {
            "outside": outside_card.to_json(),
            "inside": None if inside is None else inside.to_json(),
            "size": size.to_json(),
        }
        if not outside_card > size:
            return SaturationVerdict(
                SaturationStatus.VIOLATED, b, counters, within_horizon=within_horizon
            )
        if inside is None:
            return SaturationVerdict(
                SaturationStatus.UNKNOWN, b, counters, within_horizon=within_horizon
            )
        if inside != size:
            return SaturationVerdict(
                SaturationStatus.VIOLATED, b, counters, within_horizon=within_horizon
            )

    counters = {"pending": pending, "checked": len(members)} if not complete else {}
    return SaturationVerdict(
        SaturationStatus.SATURATED, counters=counters, within_horizon=within_horizon
    )
