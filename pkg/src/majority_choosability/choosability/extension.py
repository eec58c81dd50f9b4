"""Greedy happy extension of a colouring of ``A ∪ B*`` over the boundary of that set.

Boundary vertices are coloured in elimination order, so when a vertex ``z`` is reached all of
its neighbours are coloured. With three colours in the list at most one of them is carried by
more than half of those neighbours, so at least two choices keep ``z`` happy; if ``z`` is a
reserved witness of some ``b`` in ``B'`` the choice also avoids ``b``'s colour.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import networkx as nx

from .closure import ClosureTrace, EliminationOrder, closure, elimination_order
from .exceptions import (
    HorizonRequiredError,
    ListSizeError,
    PartialColouringError,
    PreconditionError,
    VerificationError,
)
from .graphs import (
    Colour,
    LazyGraph,
    ListSystem,
    PartialColouring,
    Vertex,
    count_neighbours_in,
    happiness_status,
    neighbour_colour_counts,
    neighbours_within,
)
from .streams import DisjointRefinement, LazySet, LazySetFamily
from .utils import sorted_vertices, vertex_sort_key

logger = logging.getLogger(__name__)
audit_log = logging.getLogger("majority_choosability.audit")

EXTENSION_LIST_SIZE = 3


@dataclass(frozen=True)
class BPrime:
    """Members of ``B*`` with more boundary neighbours than neighbours in ``A ∪ B*``."""

    members: frozenset[Vertex]
    unknown: frozenset[Vertex] = frozenset()
    counts: dict[Vertex, dict] = field(default_factory=dict)


def compute_B_prime(
    graph: LazyGraph,
    A: Iterable[Vertex],
    b_star: Iterable[Vertex],
    boundary: Iterable[Vertex] | None = None,
    horizon: int | None = None,
) -> BPrime:
    """``B'`` by direct comparison of the two neighbour counts.

    Counts that cannot be decided within ``horizon`` put the vertex in ``unknown``.
    """
    b_star = frozenset(b_star)
    core = frozenset(A) | b_star
    if boundary is None:
        _, trace = closure(graph, core, horizon=horizon)
        boundary = trace.boundary
    boundary = frozenset(boundary)

    members, unknown, counts = set(), set(), {}
    for b in sorted_vertices(b_star):
        on_boundary = count_neighbours_in(graph, b, boundary, horizon)
        inside = count_neighbours_in(graph, b, core, horizon)
        if on_boundary is None or inside is None:
            unknown.add(b)
            continue
        counts[b] = {"boundary": on_boundary.to_json(), "inside": inside.to_json()}
        if on_boundary > inside:
            members.add(b)
    return BPrime(frozenset(members), frozenset(unknown), counts)


@dataclass(frozen=True)
class FFamily:
    """Pairwise disjoint witness sets ``F_b`` on the boundary.

    ``demand`` is the size each ``b`` needs; ``hall_violation`` holds a set of members whose
    joint boundary neighbourhood is too small for their joint demand, when one exists.
    """

    sets: dict[Vertex, tuple[Vertex, ...]]
    demand: dict[Vertex, int] = field(default_factory=dict)
    hall_violation: dict | None = None

    @property
    def feasible(self) -> bool:
        return self.hall_violation is None

    def owner(self) -> dict[Vertex, Vertex]:
        return {z: b for b, members in self.sets.items() for z in members}

    def as_dict(self) -> dict:
        return {
            "sets": {b: list(self.sets[b]) for b in sorted_vertices(self.sets)},
            "demand": {b: self.demand[b] for b in sorted_vertices(self.demand)},
            "hallViolation": self.hall_violation,
        }


def build_F_family(
    graph: LazyGraph,
    b_prime: Iterable[Vertex],
    boundary: Iterable[Vertex],
    demand: dict[Vertex, int] | None = None,
    horizon: int | None = None,
) -> FFamily:
    """Disjoint ``F_b ⊆ N(b) ∩ boundary`` for a finite boundary.

    Members of infinite degree are matched from the finite neighbourhoods of the boundary
    vertices, so ``horizon`` is only read when both ends of a pair have infinite degree.

    A maximum flow first meets every demand where possible (the default demand is the whole
    boundary neighbourhood); the remaining boundary vertices then go, one at a time, to the
    adjacent member with the smallest set. If demands cannot all be met, the source side of a
    minimum cut is returned as a Hall violation.
    """
    boundary = frozenset(boundary)
    members = sorted_vertices(b_prime)
    candidates = {}
    for b in members:
        within = neighbours_within(graph, b, boundary, horizon)
        if within is None:
            raise HorizonRequiredError(
                f"Boundary neighbours of {b!r} cannot be decided without a horizon."
            )
        candidates[b] = sorted_vertices(within)
    requested = demand or {}
    demand = {b: min(len(candidates[b]), requested.get(b, len(candidates[b]))) for b in members}

    flow_graph = nx.DiGraph()
    for b in members:
        flow_graph.add_edge("source", ("b", b), capacity=demand[b])
        for z in candidates[b]:
            flow_graph.add_edge(("b", b), ("z", z), capacity=1)
            flow_graph.add_edge(("z", z), "sink", capacity=1)

    sets = {b: [] for b in members}
    hall_violation = None
    if members and flow_graph.has_node("sink"):
        value, flow = nx.maximum_flow(flow_graph, "source", "sink")
        for b in members:
            sets[b] = [z for z in candidates[b] if flow[("b", b)].get(("z", z), 0) > 0]
        if value < sum(demand.values()):
            _, (reachable, _) = nx.minimum_cut(flow_graph, "source", "sink")
            blocked = sorted_vertices(
                node[1] for node in reachable if node != "source" and node[0] == "b"
            )
            union = {z for b in blocked for z in candidates[b]}
            hall_violation = {
                "members": blocked,
                "neighbourhoodSize": len(union),
                "demand": sum(demand[b] for b in blocked),
            }

    used = {z for chosen in sets.values() for z in chosen}
    for z in sorted_vertices(boundary - used):
        wanting = [b for b in members if z in candidates[b]]
        if wanting:
            b = min(wanting, key=lambda b: (len(sets[b]), vertex_sort_key(b)))
            sets[b].append(z)

    return FFamily(
        sets={b: tuple(sorted_vertices(sets[b])) for b in members},
        demand=demand,
        hall_violation=hall_violation,
    )


def stream_F_family(
    graph: LazyGraph,
    b_prime: Iterable[Vertex],
    in_boundary: Callable[[Vertex], bool],
    schedule_seed: int | None = None,
    step_budget_factor: int = 16,
) -> DisjointRefinement:
    """Countable-scale witness sets: disjoint refinement of the boundary neighbourhoods."""

    def member(b: Vertex) -> LazySet:
        def neighbours():
            return (u for u in graph.neighbours(b) if in_boundary(u))

        return LazySet(b, neighbours, graph.degree(b))

    family = LazySetFamily([member(b) for b in sorted_vertices(b_prime)])
    return DisjointRefinement(family, schedule_seed, step_budget_factor)


@dataclass(frozen=True)
class ExtensionPlan:
    graph: LazyGraph
    A: frozenset[Vertex]
    b_star: frozenset[Vertex]
    base: PartialColouring
    lists: ListSystem
    order: EliminationOrder
    trace: ClosureTrace
    b_prime: BPrime
    family: FFamily

    @property
    def core(self) -> frozenset[Vertex]:
        return self.A | self.b_star


def plan_extension(
    graph: LazyGraph,
    A: Iterable[Vertex],
    b_star: Iterable[Vertex],
    base: PartialColouring,
    lists: ListSystem,
    horizon: int | None = None,
) -> ExtensionPlan:
    """Assemble closure, elimination order, ``B'`` and the witness family for ``A ∪ B*``."""
    A, b_star = frozenset(A), frozenset(b_star)
    if A & b_star:
        raise PreconditionError("A and B* must be disjoint.", code="overlap")
    core = A | b_star
    uncoloured = sorted_vertices(core - base.domain)
    if uncoloured:
        raise PartialColouringError(
            f"The base colouring must cover A ∪ B*; uncoloured: {uncoloured[:10]}."
        )
    base.restrict(core).require_list_respecting(lists)

    _, trace = closure(graph, core, horizon=horizon)
    order = elimination_order(graph, core, trace=trace)
    lists.require_size(order, EXTENSION_LIST_SIZE)
    boundary = trace.boundary
    b_prime = compute_B_prime(graph, A, b_star, boundary, horizon)

    demand = {}
    for b, counts in b_prime.counts.items():
        if b in b_prime.members:
            demand[b] = -(-(counts["inside"] + counts["boundary"]) // 2)
    family = build_F_family(graph, b_prime.members, boundary, demand, horizon)

    owners = {}
    for b, members in family.sets.items():
        for z in members:
            if z in owners:
                raise PreconditionError(
                    f"Boundary vertex {z!r} is a witness of both {owners[z]!r} and {b!r}.",
                    code="overlapping_witness",
                )
            owners[z] = b
    if not family.feasible:
        logger.warning("Witness family falls short: %s", family.hall_violation)

    return ExtensionPlan(
        graph=graph,
        A=A,
        b_star=b_star,
        base=base.restrict(core),
        lists=lists,
        order=order,
        trace=trace,
        b_prime=b_prime,
        family=family,
    )


@dataclass(frozen=True)
class ExtensionStep:
    vertex: Vertex
    safe: tuple[Colour, ...]
    avoided: Colour | None
    owner: Vertex | None
    chosen: Colour

    def as_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "safe": list(self.safe),
            "avoided": self.avoided,
            "owner": self.owner,
            "chosen": self.chosen,
        }


@dataclass(frozen=True)
class ExtensionResult:
    colouring: PartialColouring
    log: tuple[ExtensionStep, ...]

    def as_dict(self) -> dict:
        return {
            "colouring": self.colouring.as_dict(),
            "log": [step.as_dict() for step in self.log],
        }


def safe_colours(counts, degree: int, colours: Iterable[Colour]) -> list[Colour]:
    """Colours that leave a vertex with at most as many same as other-coloured neighbours."""
    return sorted(c for c in colours if counts[c] <= degree - counts[c])


def extend_over_boundary(plan: ExtensionPlan) -> ExtensionResult:
    graph = plan.graph
    owners = plan.family.owner()
    colouring = dict(plan.base)
    steps = []
    for z in plan.order:
        neighbours = list(graph.neighbours(z))
        if not neighbours:
            raise PreconditionError(f"Boundary vertex {z!r} is isolated.", code="isolated_vertex")
        uncoloured = [u for u in neighbours if u not in colouring]
        if uncoloured:
            raise PreconditionError(
                f"Boundary vertex {z!r} has uncoloured neighbours {uncoloured[:5]} at its turn.",
                code="elimination_order",
            )
        colours = plan.lists[z]
        if len(colours) != EXTENSION_LIST_SIZE:
            raise ListSizeError(f"Boundary vertex {z!r} needs a list of 3 colours.")

        counts = neighbour_colour_counts(colouring, neighbours)
        safe = safe_colours(counts, len(neighbours), colours)
        if len(safe) < 2:
            raise VerificationError(
                f"Vertex {z!r} has only {safe} as safe colours; two are always expected.",
                code="safe_set",
            )
        owner = owners.get(z)
        avoided = colouring[owner] if owner is not None and colouring[owner] in safe else None
        chosen = next(c for c in safe if c != avoided)
        colouring[z] = chosen
        steps.append(ExtensionStep(z, tuple(safe), avoided, owner, chosen))

    logger.debug("Extended a colouring over %d boundary vertices", len(steps))
    return ExtensionResult(PartialColouring(colouring), tuple(steps))


@dataclass(frozen=True)
class ExtensionAudit:
    extends_base: bool
    boundary_happy: dict[Vertex, bool]
    b_prime_report: dict[Vertex, dict]
    b_star_happy: dict[Vertex, bool]

    @property
    def passed(self) -> bool:
        return (
            self.extends_base
            and all(self.boundary_happy.values())
            and all(r["witnessesOpposite"] for r in self.b_prime_report.values())
            and all(r["happy"] for r in self.b_prime_report.values() if r["sufficient"])
        )

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "extendsBase": self.extends_base,
            "boundaryHappy": self.boundary_happy,
            "bPrime": self.b_prime_report,
            "bStarHappy": self.b_star_happy,
        }


def audit_extension(
    graph: LazyGraph, plan: ExtensionPlan, result: ExtensionResult
) -> ExtensionAudit:
    """Recount happiness after an extension.

    A member ``b`` of ``B'`` is guaranteed happy when ``2|F_b|`` covers its neighbours inside
    ``A ∪ B*`` plus its boundary neighbours; the report marks that as ``sufficient``.
    """
    colouring = result.colouring
    extends = all(colouring.get(v) == colour for v, colour in plan.base.items())
    boundary_happy = {z: happiness_status(graph, colouring, z).is_happy for z in plan.order}

    report = {}
    for b in sorted_vertices(plan.b_prime.members):
        witnesses = plan.family.sets.get(b, ())
        counts = plan.b_prime.counts[b]
        horizon = counts["boundary"] + counts["inside"]
        happiness = happiness_status(graph, colouring, b, horizon=horizon)
        report[b] = {
            "witnesses": len(witnesses),
            "inside": counts["inside"],
            "boundary": counts["boundary"],
            "sufficient": 2 * len(witnesses) >= counts["inside"] + counts["boundary"],
            "witnessesOpposite": all(colouring[z] != colouring[b] for z in witnesses),
            "happy": happiness.is_happy,
        }

    b_star_happy = {}
    closed = plan.trace.closed_set
    for b in sorted_vertices(plan.b_star):
        if graph.degree(b).is_finite and all(u in closed for u in graph.neighbours(b)):
            b_star_happy[b] = happiness_status(graph, colouring, b).is_happy

    audit = ExtensionAudit(extends, boundary_happy, report, b_star_happy)
    audit_log.info(
        "Extension audit %(verdict)s over %(boundary)s boundary vertices",
        {"verdict": "passed" if audit.passed else "failed", "boundary": len(boundary_happy)},
        extra={"verdict": audit.passed, "bPrime": len(report)},
    )
    return audit
