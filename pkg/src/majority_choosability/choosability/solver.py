"""Majority list-colouring of finite graphs.

The main solver maximizes the number of cross edges by single-vertex recolouring. Recolouring
``v`` from ``a`` to ``c`` gains ``count(a) - count(c)`` cross edges (counts over the neighbours
of ``v``), so at a local optimum no colour of ``v``'s list is rarer among its neighbours than its
own. With at least two colours to choose from that means at most half of ``v``'s neighbours
share its colour: every free vertex is happy.
"""

from __future__ import annotations

import logging
import math
import random
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

from .exceptions import (
    GuardExceededError,
    ListSizeError,
    PreconditionError,
    VerificationError,
)
from .graphs import (
    Colour,
    FiniteGraph,
    ListSystem,
    PartialColouring,
    Vertex,
    cross_edge_count,
    happiness_status,
    neighbour_colour_counts,
)
from .utils import sorted_vertices

logger = logging.getLogger(__name__)
audit_log = logging.getLogger("majority_choosability.audit")

DEFAULT_GUARD = 2**24
EXHAUSTIVE_ORACLE_MAX_ORDER = 4
SAMPLED_ORACLE_MAX_ORDER = 10


@dataclass(frozen=True)
class SolveInstance:
    """A finite graph with a frozen part ``h`` and free vertices choosing from sublists.

    ``b1`` may not receive ``c_x``; that colour is removed from its list before solving.
    """

    graph: FiniteGraph
    frozen: PartialColouring
    lists: ListSystem
    free: tuple[Vertex, ...] = ()
    b1: Vertex | None = None
    c_x: Colour | None = None

    def __post_init__(self):
        if not self.free:
            free = [v for v in self.graph.vertex_ids if v not in self.frozen]
            object.__setattr__(self, "free", tuple(free))
        else:
            object.__setattr__(self, "free", tuple(sorted_vertices(self.free)))

    def effective_list(self, v: Vertex) -> frozenset[Colour]:
        colours = self.lists[v]
        if v == self.b1 and self.c_x is not None:
            colours = colours - {self.c_x}
        return colours

    def validate(self) -> SolveInstance:
        overlap = self.frozen.domain & set(self.free)
        if overlap:
            raise PreconditionError(
                f"Vertices are both frozen and free: {sorted_vertices(overlap)}.",
                code="frozen_free_overlap",
            )
        for v in self.frozen.domain | set(self.free):
            self.graph.require_vertex(v)
        missing = [v for v in self.graph.vertex_ids if v not in self.frozen and v not in self.free]
        if missing:
            raise PreconditionError(
                f"Vertices are neither frozen nor free: {missing}.", code="unassigned_vertex"
            )
        if self.b1 is not None and self.b1 not in self.free:
            raise PreconditionError(f"Vertex b1={self.b1!r} must be free.", code="b1_not_free")
        for v in self.free:
            if len(self.effective_list(v)) < 2:
                raise ListSizeError(
                    f"Free vertex {v!r} has only {sorted(self.effective_list(v))} to choose from; "
                    "at least two colours are needed to guarantee happiness."
                )
        return self

    def search_space(self) -> int:
        return math.prod(len(self.effective_list(v)) for v in self.free)


@dataclass(frozen=True)
class SolveResult:
    colouring: PartialColouring
    objective: int
    iterations: int = 0
    passes: int = 0
    locally_optimal: bool = True
    method: str = "local-search"

    def as_dict(self) -> dict:
        return {
            "colouring": self.colouring.as_dict(),
            "objective": self.objective,
            "iterations": self.iterations,
            "passes": self.passes,
            "locallyOptimal": self.locally_optimal,
            "method": self.method,
        }


def recolour_gain(
    graph: FiniteGraph, colouring: dict[Vertex, Colour], v: Vertex, colour: Colour
) -> int:
    """Change in cross edges when ``v`` is recoloured to ``colour``."""
    counts = neighbour_colour_counts(colouring, graph.neighbours(v))
    return counts[colouring[v]] - counts[colour]


def _improving_move(
    instance: SolveInstance, colouring: dict[Vertex, Colour], v: Vertex
) -> Colour | None:
    counts = neighbour_colour_counts(colouring, instance.graph.neighbours(v))
    current = colouring[v]
    for colour in sorted(instance.effective_list(v)):
        if colour != current and counts[current] - counts[colour] > 0:
            return colour
    return None


def find_improving_move(
    instance: SolveInstance, colouring: PartialColouring
) -> tuple[Vertex, Colour] | None:
    assignment = dict(colouring)
    for v in instance.free:
        if (colour := _improving_move(instance, assignment, v)) is not None:
            return v, colour
    return None


def solve_finite(instance: SolveInstance, audit: bool = True) -> SolveResult:
    """Local search for a list-colouring with a locally maximal number of cross edges.

    Starts from the lowest colour of every list, then scans free vertices in vertex-id order
    and colours ascending, applying the first improving move, until a full pass finds none.
    """
    instance.validate()
    assignment = dict(instance.frozen)
    for v in instance.free:
        assignment[v] = min(instance.effective_list(v))

    iterations = passes = 0
    improved = True
    while improved:
        improved = False
        passes += 1
        for v in instance.free:
            if (colour := _improving_move(instance, assignment, v)) is not None:
                assignment[v] = colour
                iterations += 1
                improved = True

    colouring = PartialColouring(assignment)
    result = SolveResult(
        colouring=colouring,
        objective=cross_edge_count(instance.graph, colouring),
        iterations=iterations,
        passes=passes,
    )
    logger.debug(
        "Local search on %d vertices: objective %d after %d moves",
        instance.graph.order,
        result.objective,
        iterations,
    )
    if audit:
        audit_solve_result(instance, result)
    return result


def exhaustive_max_cross(instance: SolveInstance, guard: int = DEFAULT_GUARD) -> SolveResult:
    """Global maximum of cross edges over all colourings respecting the frozen part and lists.

    Assignments are enumerated in vertex-id order with colours ascending; the first maximum
    wins, which breaks ties lexicographically.
    """
    instance.validate()
    space = instance.search_space()
    if space > guard:
        raise GuardExceededError(
            f"{space} assignments exceed the enumeration guard of {guard}.",
        )
    domains = [sorted(instance.effective_list(v)) for v in instance.free]
    frozen = dict(instance.frozen)
    edges = instance.graph.edges()

    best_value, best = -1, None
    for choice in product(*domains):
        assignment = frozen | dict(zip(instance.free, choice))
        value = sum(1 for u, v in edges if assignment[u] != assignment[v])
        if value > best_value:
            best_value, best = value, assignment

    colouring = PartialColouring(best)
    return SolveResult(
        colouring=colouring,
        objective=best_value,
        iterations=space,
        passes=1,
        locally_optimal=find_improving_move(instance, colouring) is None,
        method="exhaustive",
    )


def audit_solve_result(instance: SolveInstance, result: SolveResult) -> None:
    """Re-check a solver result instead of trusting it.

    Verifies agreement with the frozen part, list membership, the excluded colour at ``b1``,
    happiness of every free vertex and local optimality.
    """
    colouring = result.colouring
    graph = instance.graph

    def fail(detail, code):
        audit_log.warning(
            "Solve audit failed: %(detail)s",
            {"detail": detail},
            extra={"verdict": "failed", "code": code},
        )
        raise VerificationError(detail, code=code)

    for v, colour in instance.frozen.items():
        if colouring.get(v) != colour:
            fail(f"Frozen vertex {v!r} was recoloured.", "frozen_changed")
    for v in instance.free:
        if v not in colouring:
            fail(f"Free vertex {v!r} is uncoloured.", "partial_colouring")
        if colouring[v] not in instance.effective_list(v):
            fail(f"Vertex {v!r} has colour {colouring[v]} outside its list.", "list_violation")
    if instance.b1 is not None and colouring[instance.b1] == instance.c_x:
        fail(f"Vertex {instance.b1!r} received the excluded colour.", "excluded_colour")
    for v in instance.free:
        happiness = happiness_status(graph, colouring, v)
        if not happiness.is_happy:
            fail(
                f"Free vertex {v!r} is unhappy ({happiness.same} same, {happiness.diff} other).",
                "unhappy_vertex",
            )
    if result.locally_optimal and (move := find_improving_move(instance, colouring)):
        fail(f"Recolouring {move[0]!r} to {move[1]} would add cross edges.", "not_locally_optimal")
    if result.objective != cross_edge_count(graph, colouring):
        fail("Reported objective does not match the colouring.", "objective_mismatch")

    audit_log.debug(
        "Solve audit passed for %(order)s vertices",
        {"order": graph.order},
        extra={"verdict": "passed", "objective": result.objective},
    )


def unfriendly_partition(graph: FiniteGraph, colours: int = 2) -> SolveResult:
    """Majority colouring with ``colours`` classes and no lists; two classes give an
    unfriendly partition."""
    if colours < 2:
        raise PreconditionError("At least two colours are needed.", code="colour_count")
    palette = range(1, colours + 1)
    instance = SolveInstance(
        graph=graph,
        frozen=PartialColouring(),
        lists=ListSystem(default=palette),
    )
    return solve_finite(instance)


def exists_majority_list_colouring(
    graph: FiniteGraph, lists: ListSystem, guard: int = DEFAULT_GUARD
) -> PartialColouring | None:
    """Backtracking search for a list-colouring that makes every vertex happy.

    A branch is cut as soon as some vertex has more than half of its neighbours in its own
    colour, since that count can only grow.
    """
    order = graph.vertex_ids
    space = math.prod(len(lists[v]) for v in order)
    if space > guard:
        raise GuardExceededError(f"{space} assignments exceed the enumeration guard of {guard}.")
    domains = {v: sorted(lists[v]) for v in order}
    assignment: dict[Vertex, Colour] = {}

    def overloaded(v: Vertex) -> bool:
        same = sum(1 for u in graph.neighbours(v) if assignment.get(u) == assignment[v])
        return 2 * same > graph.deg(v)

    def search(position: int) -> bool:
        if position == len(order):
            return True
        v = order[position]
        for colour in domains[v]:
            assignment[v] = colour
            touched = [v] + [u for u in graph.neighbours(v) if u in assignment]
            if not any(overloaded(u) for u in touched) and search(position + 1):
                return True
            del assignment[v]
        return False

    return PartialColouring(assignment) if search(0) else None


def canonical_list_systems(
    vertices: Iterable[Vertex], ell: int, palette_size: int
) -> Iterator[ListSystem]:
    """All systems of ``ell``-lists from a palette, one per class under colour renaming.

    A system is identified with the multiset of its colour incidence sets (the vertices whose
    list holds a given colour); every vertex lies in exactly ``ell`` of them.
    """
    vertices = sorted_vertices(vertices)
    subsets = [
        frozenset(subset)
        for size in range(1, len(vertices) + 1)
        for subset in combinations(vertices, size)
    ]

    def extend(start: int, chosen: list, cover: dict) -> Iterator[list]:
        if all(cover[v] == ell for v in vertices):
            yield list(chosen)
            return
        if len(chosen) == palette_size:
            return
        for index in range(start, len(subsets)):
            subset = subsets[index]
            if any(cover[v] == ell for v in subset):
                continue
            for v in subset:
                cover[v] += 1
            chosen.append(subset)
            yield from extend(index, chosen, cover)
            chosen.pop()
            for v in subset:
                cover[v] -= 1

    for incidence in extend(0, [], {v: 0 for v in vertices}):
        yield ListSystem(
            {
                v: {colour for colour, members in enumerate(incidence, start=1) if v in members}
                for v in vertices
            }
        )


def sampled_list_systems(
    vertices: Iterable[Vertex], ell: int, palette_size: int, samples: int, seed: int
) -> Iterator[ListSystem]:
    vertices = sorted_vertices(vertices)
    rng = random.Random(seed)
    palette = range(1, palette_size + 1)
    for _ in range(samples):
        yield ListSystem({v: rng.sample(palette, ell) for v in vertices})


def _admits_colouring(graph: FiniteGraph, lists: ListSystem, guard: int) -> bool:
    return exists_majority_list_colouring(graph, lists, guard) is not None


@dataclass(frozen=True)
class ChoosabilityVerdict:
    choosable: bool
    ell: int
    palette_size: int
    mode: str
    systems_checked: int
    witness: ListSystem | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "choosable": self.choosable,
            "ell": self.ell,
            "paletteSize": self.palette_size,
            "mode": self.mode,
            "systemsChecked": self.systems_checked,
            "witness": self.witness.as_dict() if self.witness is not None else None,
        }


def majority_choosable_oracle(
    graph: FiniteGraph,
    ell: int,
    palette_size: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
    guard: int = DEFAULT_GUARD,
    workers: int = 1,
) -> ChoosabilityVerdict:
    """Check every (exhaustive) or randomly drawn (sampled) system of ``ell``-lists.

    Each system is an independent unit of work; with ``workers > 1`` they are fanned out over a
    process pool. The first failing system in enumeration order is returned as the witness.
    """
    if ell < 1 or palette_size < ell:
        raise PreconditionError(
            f"Need 1 <= ell <= palette size, got ell={ell}, palette={palette_size}.",
            code="invalid_palette",
        )
    if mode == "exhaustive":
        if graph.order > EXHAUSTIVE_ORACLE_MAX_ORDER:
            raise GuardExceededError(
                f"Exhaustive mode supports at most {EXHAUSTIVE_ORACLE_MAX_ORDER} vertices."
            )
        systems = canonical_list_systems(graph.vertex_ids, ell, palette_size)
    elif mode == "sampled":
        if graph.order > SAMPLED_ORACLE_MAX_ORDER:
            raise GuardExceededError(
                f"Sampled mode supports at most {SAMPLED_ORACLE_MAX_ORDER} vertices."
            )
        systems = sampled_list_systems(graph.vertex_ids, ell, palette_size, samples, seed)
    else:
        raise PreconditionError(f"Unknown oracle mode {mode!r}.", code="unknown_mode")

    systems = list(systems)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(
                executor.map(
                    _admits_colouring,
                    [graph] * len(systems),
                    systems,
                    [guard] * len(systems),
                    chunksize=64,
                )
            )
    else:
        outcomes = [_admits_colouring(graph, lists, guard) for lists in systems]

    witness = next((lists for lists, ok in zip(systems, outcomes) if not ok), None)
    verdict = ChoosabilityVerdict(
        choosable=witness is None,
        ell=ell,
        palette_size=palette_size,
        mode=mode,
        systems_checked=len(systems),
        witness=witness,
    )
    audit_log.info(
        "Choosability oracle: %(verdict)s after %(checked)s list systems",
        {"verdict": verdict.choosable, "checked": verdict.systems_checked},
        extra={"order": graph.order, "ell": ell, "mode": mode},
    )
    return verdict
