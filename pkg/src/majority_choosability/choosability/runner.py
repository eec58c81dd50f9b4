"""Certified prefix colourings of countable graphs.

Given a closed finite set ``A`` with a colouring ``h`` and the infinite rest ``B``, the pipeline

1. enumerates ``B`` breadth-first from ``x``,
2. picks 2-element sublists so every infinite ``B``-neighbourhood keeps losing every colour,
3. solves the nested finite instances ``G_1 ⊆ ... ⊆ G_N`` by local search,
4. extracts a prefix colouring from ``g_1, ..., g_N`` with a finite pigeonhole surrogate,
5. certifies happiness where the prefix decides it and reports counters elsewhere.

Nothing here claims a limit colouring; stability across horizons is measured and reported.
"""

from __future__ import annotations

import dataclasses
import logging
from collections import Counter, deque
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice

from .closure import is_closed
from .exceptions import (
    HypothesisError,
    PreconditionError,
    VerificationError,
)
from .graphs import (
    Colour,
    FiniteGraph,
    LazyGraph,
    ListSystem,
    PartialColouring,
    Verdict,
    Vertex,
    happiness_status,
    induced_finite_subgraph,
    neighbours_within,
)
from .solver import SolveInstance, SolveResult, audit_solve_result, solve_finite
from .streams import LazySet, LazySetFamily, SublistTable, select_sublists
from .utils import config_hash, sorted_vertices

logger = logging.getLogger(__name__)
audit_log = logging.getLogger("majority_choosability.audit")

SUBLIST_SIZE = 2


@dataclass(frozen=True)
class RunConfig:
    """Inputs of one pipeline run.

    ``A`` defaults to the empty set (``B`` is then the whole vertex set) and ``h`` to the lowest
    colour of each list on ``A``. ``sublist_horizon`` defaults to ``horizon``.
    """

    graph: LazyGraph
    lists: ListSystem
    x: Vertex
    c_x: Colour
    horizon: int
    prefix: int
    A: frozenset[Vertex] = frozenset()
    h: PartialColouring | None = None
    neighbour_horizon: int = 1000
    sublist_horizon: int | None = None
    threads: int = 1
    a_closed_certified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        if self.h is None:
            object.__setattr__(
                self, "h", PartialColouring({a: min(self.lists[a]) for a in self.A})
            )

    @property
    def effective_sublist_horizon(self) -> int:
        return self.sublist_horizon or self.horizon

    def describe(self) -> dict:
        describe = getattr(self.graph, "describe", None)
        return {
            "graph": describe() if describe else repr(self.graph),
            "lists": {
                "explicit": self.lists.as_dict(),
                "default": sorted(self.lists.default or ()),
            },
            "x": self.x,
            "cX": self.c_x,
            "horizon": self.horizon,
            "prefix": self.prefix,
            "A": sorted_vertices(self.A),
            "h": self.h.as_dict(),
            "neighbourHorizon": self.neighbour_horizon,
            "sublistHorizon": self.effective_sublist_horizon,
        }

    def validate(self) -> RunConfig:
        if self.horizon < 1 or not 1 <= self.prefix <= self.horizon:
            raise PreconditionError(
                f"Need 1 <= prefix <= horizon, got prefix={self.prefix}, horizon={self.horizon}.",
                code="prefix_horizon",
            )
        if self.graph.is_finite:
            raise HypothesisError(
                "The rest B of the vertex set must be infinite; use the finite solver instead.",
                code="b_finite",
            )
        self.graph.require_vertex(self.x)
        if self.x in self.A:
            raise PreconditionError(f"Vertex x={self.x!r} must lie outside A.", code="x_in_a")
        if self.c_x not in self.lists[self.x]:
            raise HypothesisError(
                f"Colour {self.c_x} is not in the list of {self.x!r}.", code="cx_not_in_list"
            )
        if set(self.h.domain) != set(self.A):
            raise PreconditionError("h must colour exactly the vertices of A.", code="h_domain")
        self.h.require_list_respecting(self.lists)
        if not self.a_closed_certified:
            verdict = is_closed(self.graph, self.A, horizon=self.neighbour_horizon)
            if not verdict:
                raise HypothesisError(
                    f"A is not closed: every neighbour of {verdict.witness!r} lies in A.",
                    code="a_not_closed",
                )
        return self


def enumerate_B(graph: LazyGraph, A: frozenset[Vertex], x: Vertex) -> Iterator[Vertex]:
    """Breadth-first enumeration of ``V \\ A`` starting at ``x``.

    Neighbour streams take turns one element at a time, so an infinite neighbourhood does not
    block the rest of the search. Other components are reached through the global vertex
    enumeration once the queue runs empty.
    """
    seen = set(A) | {x}
    yield x
    streams = deque([iter(graph.neighbours(x))])
    everything = iter(graph.vertices())
    while True:
        if not streams:
            u = next((u for u in everything if u not in seen), None)
            if u is None:
                return
            seen.add(u)
            yield u
            streams.append(iter(graph.neighbours(u)))
            continue
        stream = streams.popleft()
        u = next((u for u in stream if u not in seen), None)
        if u is None:
            continue
        seen.add(u)
        yield u
        streams.append(stream)
        streams.append(iter(graph.neighbours(u)))


@dataclass(frozen=True)
class InstanceBatch(Sequence):
    """The nested instances ``G_1 ⊆ ... ⊆ G_N`` with what they were built from."""

    b_order: tuple[Vertex, ...]
    table: SublistTable
    sublists: ListSystem
    graph_n: FiniteGraph
    instances: tuple[SolveInstance, ...]
    tracked_sets: dict[Vertex, str] = field(default_factory=dict)

    def __getitem__(self, index):
        return self.instances[index]

    def __len__(self):
        return len(self.instances)

    def sizes(self) -> list[int]:
        return [instance.graph.order for instance in self.instances]


def tracked_set_name(b: Vertex) -> str:
    return f"N({b})"


def build_instances(config: RunConfig) -> InstanceBatch:
    config.validate()
    graph, A, N = config.graph, config.A, config.horizon
    order = tuple(islice(enumerate_B(graph, A, config.x), N))
    if len(order) < N:
        raise HypothesisError(
            f"B has only {len(order)} vertices; it must be infinite.", code="b_finite"
        )

    # Sets whose every colour must keep disappearing: infinite B-neighbourhoods.
    tracked = {}
    members = []
    for b in order:
        if not graph.degree(b).is_finite:
            tracked[b] = tracked_set_name(b)
            members.append(
                LazySet(tracked[b], lambda b=b: (u for u in graph.neighbours(b) if u not in A))
            )
    table = select_sublists(
        lambda: enumerate_B(graph, A, config.x),
        LazySetFamily(members),
        config.lists,
        config.x,
        config.c_x,
        SUBLIST_SIZE,
        config.effective_sublist_horizon,
    )
    sublists = table.sublists()

    a_neighbours = []
    for b in order:
        within = neighbours_within(graph, b, A, config.neighbour_horizon)
        if within is None:
            raise HypothesisError(
                f"Cannot bound the neighbours of {b!r} in A; A must be closed and finite.",
                code="infinite_a_neighbourhood",
            )
        a_neighbours.append(within)

    graph_n = induced_finite_subgraph(
        graph, set(order).union(*a_neighbours), horizon=config.neighbour_horizon
    )
    instances = []
    frozen_part = set()
    for n in range(1, N + 1):
        frozen_part |= a_neighbours[n - 1]
        free = order[:n]
        instances.append(
            SolveInstance(
                graph=graph_n.subgraph(set(free) | frozen_part),
                frozen=config.h.restrict(frozen_part),
                lists=ListSystem({v: sublists[v] for v in free}),
                free=free,
                b1=config.x,
                c_x=config.c_x,
            )
        )
    logger.debug("Built %d instances, largest has %d vertices", N, graph_n.order)
    return InstanceBatch(order, table, sublists, graph_n, tuple(instances), tracked)


def solve_instances(batch: InstanceBatch, threads: int = 1) -> list[SolveResult]:
    """Solve every instance (independently, possibly concurrently) and re-audit the results."""

    def solve(n: int) -> SolveResult:
        instance = batch[n]
        result = solve_finite(instance, audit=False)
        audit_solve_result(instance, result)
        return result

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(solve, range(len(batch))))
    return [solve(n) for n in range(len(batch))]


@dataclass(frozen=True)
class Extraction:
    colours: dict[Vertex, Colour]
    trace: tuple[dict, ...]

    def as_dict(self) -> dict:
        return {"colours": self.colours, "trace": list(self.trace)}


def diagonal_extract(
    colourings: Sequence[PartialColouring], order: Sequence[Vertex], k: int
) -> Extraction:
    """Finite stand-in for "infinitely many ``g_n`` agree on ``b_j``".

    Survivors start as all indices ``1..N``. For ``b_j`` the colour whose agreeing survivors
    include the largest index wins (then more survivors, then the lower colour) and the
    survivors shrink to those agreeing. Since ``g_N`` is defined everywhere it always survives,
    so the extract equals ``g_N`` on the prefix; the trace records how much agreement remained.
    """
    if k > len(colourings):
        raise PreconditionError(
            f"Prefix {k} exceeds the number of colourings {len(colourings)}.",
            code="prefix_horizon",
        )
    survivors = list(range(1, len(colourings) + 1))
    colours, trace = {}, []
    for j, b in enumerate(order[:k], start=1):
        votes = {}
        for n in survivors:
            colour = colourings[n - 1].get(b)
            if colour is not None:
                votes.setdefault(colour, []).append(n)
        if not votes:
            raise VerificationError(
                f"No surviving colouring is defined on {b!r} at step {j}.", code="no_survivor"
            )
        best = max(votes, key=lambda c: (max(votes[c]), len(votes[c]), -c))
        survivors = votes[best]
        colours[b] = best
        trace.append(
            {"vertex": b, "colour": best, "survivors": len(survivors), "maxIndex": max(survivors)}
        )
    return Extraction(colours, tuple(trace))


@dataclass(frozen=True)
class CertifiedVerdict:
    verdict: Verdict
    same: int
    diff: int
    guaranteed_opposite: int | None = None

    def as_dict(self) -> dict:
        data = {"verdict": self.verdict.value, "same": self.same, "diff": self.diff}
        if self.guaranteed_opposite is not None:
            data["guaranteedOpposite"] = self.guaranteed_opposite
        return data


def certify(
    graph: LazyGraph,
    colouring: PartialColouring,
    prefix: Sequence[Vertex],
    horizon: int,
    table: SublistTable | None = None,
    tracked_sets: dict[Vertex, str] | None = None,
) -> dict[Vertex, CertifiedVerdict]:
    """Verdicts for prefix vertices: exact only when the whole neighbourhood is coloured.

    Infinite-degree vertices stay pending; when their neighbourhood is tracked by the sublist
    table the number of neighbours that can never share their colour is reported alongside.
    """
    verdicts = {}
    for v in prefix:
        neighbours, complete = graph.scan_neighbours(v, horizon)
        happiness = happiness_status(graph, colouring, v, horizon=horizon)
        if complete and all(u in colouring for u in neighbours):
            verdicts[v] = CertifiedVerdict(happiness.verdict, happiness.same, happiness.diff)
            continue
        guaranteed = None
        if table is not None and tracked_sets and v in tracked_sets:
            guaranteed = table.coverage(tracked_sets[v], colouring[v])
        verdicts[v] = CertifiedVerdict(Verdict.PENDING, happiness.same, happiness.diff, guaranteed)
    return verdicts


def audit_certificate(graph: LazyGraph, certificate: PrefixCertificate) -> None:
    """Recount every certified verdict straight from the adjacency."""
    colouring = certificate.colouring
    for v, verdict in certificate.verdicts.items():
        if verdict.verdict is Verdict.PENDING:
            continue
        if not graph.degree(v).is_finite:
            raise VerificationError(f"Infinite-degree vertex {v!r} was certified.", code="unsound")
        neighbours = list(graph.neighbours(v))
        if any(u not in colouring for u in neighbours):
            raise VerificationError(
                f"Vertex {v!r} was certified with uncoloured neighbours.", code="unsound"
            )
        same = sum(1 for u in neighbours if colouring[u] == colouring[v])
        happy = same <= len(neighbours) - same
        if happy != (verdict.verdict is Verdict.HAPPY):
            raise VerificationError(f"Verdict of {v!r} does not match a recount.", code="unsound")
    if colouring[certificate.x] == certificate.c_x:
        raise VerificationError("x received the excluded colour c_x.", code="excluded_colour")


@dataclass(frozen=True)
class PrefixCertificate:
    version: str
    x: Vertex
    c_x: Colour
    horizon: int
    order: tuple[Vertex, ...]
    colouring: PartialColouring
    verdicts: dict[Vertex, CertifiedVerdict]
    sublists: dict[Vertex, tuple[Colour, ...]]
    extraction: Extraction
    instance_sizes: tuple[int, ...]
    config_hash: str
    stabilization: dict | None = None

    @property
    def gx_differs_from_cx(self) -> bool:
        return self.colouring[self.x] != self.c_x

    def summary(self) -> dict:
        counts = Counter(v.verdict.value for v in self.verdicts.values())
        return {verdict.value: counts.get(verdict.value, 0) for verdict in Verdict}

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "configHash": self.config_hash,
            "x": self.x,
            "cX": self.c_x,
            "gxDiffersFromCx": self.gx_differs_from_cx,
            "horizon": self.horizon,
            "prefix": list(self.order),
            "colouring": self.colouring.as_dict(),
            "sublists": {v: list(s) for v, s in self.sublists.items()},
            "verdicts": {v: self.verdicts[v].as_dict() for v in self.order},
            "summary": self.summary(),
            "extraction": list(self.extraction.trace),
            "instanceSizes": list(self.instance_sizes),
            "stabilization": self.stabilization,
        }


def _pipeline(config: RunConfig, version: str) -> PrefixCertificate:
    batch = build_instances(config)
    results = solve_instances(batch, threads=config.threads)
    prefix = batch.b_order[: config.prefix]
    extraction = diagonal_extract([r.colouring for r in results], batch.b_order, config.prefix)
    colouring = config.h.extend(extraction.colours)
    verdicts = certify(
        config.graph,
        colouring,
        prefix,
        config.neighbour_horizon,
        table=batch.table,
        tracked_sets=batch.tracked_sets,
    )
    return PrefixCertificate(
        version=version,
        x=config.x,
        c_x=config.c_x,
        horizon=config.horizon,
        order=prefix,
        colouring=colouring,
        verdicts=verdicts,
        sublists={v: tuple(sorted(batch.sublists[v])) for v in prefix},
        extraction=extraction,
        instance_sizes=tuple(batch.sizes()),
        config_hash=config_hash(config.describe()),
    )


def compare_prefixes(first: Sequence[Colour], second: Sequence[Colour]) -> int | None:
    """Index of the first differing colour, ``None`` when the prefixes agree."""
    for index, (a, b) in enumerate(zip(first, second)):
        if a != b:
            return index
    return None


def run_prefix(
    config: RunConfig, compare_horizon: int | None = None, version: str = "1.0.0"
) -> PrefixCertificate:
    """Run the pipeline and audit the certificate.

    With ``compare_horizon`` a second run at that horizon is compared on the same prefix; a
    difference is logged as a stability warning and recorded, never raised.
    """
    certificate = _pipeline(config, version)
    audit_certificate(config.graph, certificate)

    if compare_horizon is not None:
        other = _pipeline(dataclasses.replace(config, horizon=compare_horizon), version)
        mine = [certificate.colouring[v] for v in certificate.order]
        theirs = [other.colouring.get(v) for v in certificate.order]
        first_difference = compare_prefixes(mine, theirs)
        if first_difference is not None:
            logger.warning(
                "Prefix differs between horizons %d and %d at index %d",
                config.horizon,
                compare_horizon,
                first_difference,
            )
        certificate = dataclasses.replace(
            certificate,
            stabilization={
                "horizons": [config.horizon, compare_horizon],
                "identical": first_difference is None,
                "firstDifference": first_difference,
            },
        )

    audit_log.info(
        "Prefix certificate for x=%(x)s over %(prefix)s vertices",
        {"x": config.x, "prefix": len(certificate.order)},
        extra={"verdict": certificate.summary(), "configHash": certificate.config_hash},
    )
    return certificate
