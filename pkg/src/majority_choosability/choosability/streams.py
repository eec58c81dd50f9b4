"""Enumeration tools for countable set families.

:class:`DisjointRefinement` thins a family of infinite sets into pairwise disjoint infinite
subsets by dovetailing. :class:`SublistEngine` picks sublists so that for every set ``X`` of a
family and every colour ``c`` infinitely many vertices of ``X`` lose ``c``; both work lazily and
are read through finite horizons.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count, islice

from .exceptions import (
    HypothesisError,
    ListSizeError,
    PreconditionError,
    StreamStalledError,
)
from .graphs import ALEPH_0, Card, Colour, ListSystem, Vertex
from .utils import sorted_vertices

logger = logging.getLogger(__name__)

UNIVERSE = "V"


@dataclass(frozen=True)
class LazySet:
    """Named set given by a stream factory; each call of ``stream`` restarts the enumeration."""

    name: str
    stream: Callable[[], Iterator[Hashable]]
    card: Card = ALEPH_0

    def prefix(self, k: int) -> list:
        return list(islice(self.stream(), k))

    @classmethod
    def naturals(cls, name: str) -> LazySet:
        return cls(name, count)

    @classmethod
    def arithmetic(cls, name: str, start: int, step: int) -> LazySet:
        if step < 1:
            raise PreconditionError(f"Step of {name!r} must be positive.", code="invalid_step")
        return cls(name, lambda: count(start, step))

    @classmethod
    def explicit(cls, name: str, items: Iterable[Hashable]) -> LazySet:
        items = tuple(dict.fromkeys(items))
        return cls(name, lambda: iter(items), Card.of(len(items)))


class LazySetFamily:
    """Family of lazy sets over a finite or countably infinite index set.

    A countable family is given as a factory of an infinite stream of :class:`LazySet`.
    """

    def __init__(self, members: Sequence[LazySet] | Callable[[], Iterator[LazySet]]):
        if callable(members):
            self._factory = members
            self._members = None
        else:
            self._factory = None
            self._members = tuple(members)
            names = [member.name for member in self._members]
            if len(set(names)) != len(names):
                raise PreconditionError("Family member names must be unique.", code="duplicate")

    @property
    def is_finite_index(self) -> bool:
        return self._members is not None

    @property
    def size(self) -> Card:
        return Card.of(len(self._members)) if self.is_finite_index else ALEPH_0

    def members(self) -> Iterator[LazySet]:
        return iter(self._members) if self.is_finite_index else self._factory()

    def __len__(self):
        if not self.is_finite_index:
            raise TypeError("A countably infinite family has no len()")
        return len(self._members)


def _require_infinite(member: LazySet) -> None:
    if member.card.is_finite:
        raise HypothesisError(
            f"Member {member.name!r} has {member.card} elements; "
            "disjoint refinement needs every member to be countably infinite.",
            code="finite_member",
        )


class DisjointRefinement:
    """Pairwise disjoint infinite subsets ``B_i`` of the members ``A_i`` of a family.

    A fair schedule visits every index infinitely often; a visit to ``i`` takes the first
    element of ``A_i`` not used by any output so far. Finite index sets are visited in
    round-robin blocks (shuffled per block when a ``schedule_seed`` is given), countable ones
    diagonally.
    """

    def __init__(
        self,
        family: LazySetFamily,
        schedule_seed: int | None = None,
        step_budget_factor: int = 16,
    ):
        self.family = family
        self.schedule_seed = schedule_seed
        self.step_budget_factor = step_budget_factor
        self.steps = 0
        self._pending = family.members()
        self._members: list[LazySet] = []
        self._sources: list[Iterator] = []
        self._outputs: list[list] = []
        self._used = set()
        if family.is_finite_index:
            while self._activate():
                pass
        self._schedule = self._fair_schedule()

    def _activate(self) -> bool:
        member = next(self._pending, None)
        if member is None:
            return False
        _require_infinite(member)
        self._members.append(member)
        self._sources.append(member.stream())
        self._outputs.append([])
        return True

    def _fair_schedule(self) -> Iterator[int]:
        if self.family.is_finite_index:
            indices = list(range(len(self._members)))
            if not indices:
                return
            for block in count():
                order = list(indices)
                if self.schedule_seed is not None:
                    random.Random(f"{self.schedule_seed}:{block}").shuffle(order)
                yield from order
        else:
            for diagonal in count():
                while len(self._members) <= diagonal and self._activate():
                    pass
                yield from range(min(diagonal + 1, len(self._members)))

    @property
    def names(self) -> list[str]:
        return [member.name for member in self._members]

    def index(self, name: str) -> int:
        while name not in self.names:
            if self.family.is_finite_index or not self._activate():
                raise PreconditionError(f"Unknown family member {name!r}.", code="unknown_member")
        return self.names.index(name)

    def step(self) -> tuple[int, Hashable]:
        """Run one scheduled visit and return the index and the element it emitted."""
        i = next(self._schedule)
        self.steps += 1
        for element in self._sources[i]:
            if element not in self._used:
                self._used.add(element)
                self._outputs[i].append(element)
                return i, element
        raise StreamStalledError(
            f"Member {self._members[i].name!r} ran out of unused elements after "
            f"{len(self._outputs[i])} picks."
        )

    def step_budget(self, i: int, k: int) -> int:
        """Visits allowed for ``B_i`` to reach ``k`` elements.

        Linear in ``k`` times the number of active indices; for a countable index set the
        diagonal schedule makes that number grow with ``i + k``.
        """
        if self.family.is_finite_index:
            return self.step_budget_factor * k * max(1, len(self._members))
        return self.step_budget_factor * (i + k + 1) ** 2

    def prefix(self, name: str, k: int) -> list:
        i = self.index(name)
        budget = self.step_budget(i, k)
        start = self.steps
        while len(self._outputs[i]) < k:
            if self.steps - start >= budget:
                raise StreamStalledError(
                    f"Member {name!r} produced {len(self._outputs[i])} of {k} elements "
                    f"within {budget} steps."
                )
            self.step()
        return self._outputs[i][:k]

    def stream(self, name: str) -> Iterator[Hashable]:
        """Lazy stream of ``B_i``; consuming it drives the shared schedule."""
        for k in count(1):
            yield self.prefix(name, k)[-1]

    def prefixes(self, k: int) -> dict[str, list]:
        if not self.family.is_finite_index:
            raise PreconditionError("Only finite families can be listed at once.", code="infinite")
        return {name: self.prefix(name, k) for name in self.names}


def disjoint_refinement(
    family: LazySetFamily, schedule_seed: int | None = None, step_budget_factor: int = 16
) -> DisjointRefinement:
    return DisjointRefinement(family, schedule_seed, step_budget_factor)


def default_sublist(colours: Iterable[Colour], ell: int) -> frozenset[Colour]:
    """Keep the ``ell`` smallest colours."""
    return frozenset(sorted(colours)[:ell])


@dataclass(frozen=True)
class SublistStep:
    set_name: str
    colour: Colour
    n: int
    vertex: Vertex
    sublist: tuple[Colour, ...]
    struck: bool

    def as_dict(self) -> dict:
        return {
            "set": self.set_name,
            "colour": self.colour,
            "n": self.n,
            "vertex": self.vertex,
            "sublist": list(self.sublist),
            "struck": self.struck,
        }


@dataclass(frozen=True)
class SublistTable:
    """Snapshot of the sublist engine after ``horizon`` processed triples.

    Vertices outside the log get the default sublist, so every lookup is horizon-relative.
    """

    lists: ListSystem
    ell: int
    horizon: int
    set_names: tuple[str, ...]
    colours: tuple[Colour, ...]
    log: tuple[SublistStep, ...]
    known_members: dict[str, frozenset] = field(default_factory=dict)

    @cached_property
    def chosen(self) -> dict[Vertex, frozenset[Colour]]:
        return {step.vertex: frozenset(step.sublist) for step in self.log}

    def sublist(self, v: Vertex) -> frozenset[Colour]:
        chosen = self.chosen
        if v in chosen:
            return chosen[v]
        return default_sublist(self.lists[v], self.ell)

    def sublists(self) -> ListSystem:
        """Logged sublists, with the default rule applied through the list system default."""
        explicit = {v: default_sublist(lst, self.ell) for v, lst in self.lists.explicit.items()}
        explicit.update(self.chosen)
        default = self.lists.default
        return ListSystem(
            explicit,
            default=default_sublist(default, self.ell) if default is not None else None,
        )

    def coverage(self, set_name: str, colour: Colour) -> int:
        if set_name not in self.set_names or colour not in self.colours:
            raise PreconditionError(
                f"Unknown pair ({set_name!r}, {colour}).", code="unknown_pair"
            )
        known = self.known_members.get(set_name, frozenset())
        return sum(
            1
            for v, sublist in self.chosen.items()
            if (set_name == UNIVERSE or v in known) and colour not in sublist
        )

    def coverage_table(self) -> dict[str, dict[Colour, int]]:
        return {
            name: {colour: self.coverage(name, colour) for colour in self.colours}
            for name in self.set_names
        }

    def as_dict(self) -> dict:
        chosen = self.chosen
        return {
            "ell": self.ell,
            "horizon": self.horizon,
            "sets": list(self.set_names),
            "colours": list(self.colours),
            "sublists": {v: sorted(chosen[v]) for v in sorted_vertices(chosen)},
            "log": [step.as_dict() for step in self.log],
            "coverage": {
                name: {str(c): n for c, n in row.items()}
                for name, row in self.coverage_table().items()
            },
        }


class SublistEngine:
    """Incremental sublist selection over the triples of ``family x colours x N``.

    The universe ``V`` is inserted as the first set, the triple ``(V, c_x, 1)`` comes first,
    and the remaining triples follow a diagonal over (set index, n) with colours ascending.
    Each triple chooses the first not yet chosen vertex of its set, in that set's own stream
    order, and strikes the colour from its list when present.
    """

    def __init__(
        self,
        vertex_enum: Callable[[], Iterator[Vertex]],
        family: LazySetFamily,
        lists: ListSystem,
        x: Vertex,
        c_x: Colour,
        ell: int = 2,
    ):
        first = next(iter(vertex_enum()), None)
        if first != x:
            raise PreconditionError(
                f"Vertex {x!r} must be first in the vertex enumeration, found {first!r}.",
                code="x_not_first",
            )
        for v, colours in lists.explicit.items():
            if len(colours) != ell + 1:
                raise ListSizeError(f"Vertex {v!r} needs a list of {ell + 1} colours.")
        if lists.default is not None and len(lists.default) != ell + 1:
            raise ListSizeError(f"The default list needs {ell + 1} colours.")
        if c_x not in lists[x]:
            raise HypothesisError(
                f"Colour {c_x} is not in the list of {x!r}; it cannot be excluded there.",
                code="cx_not_in_list",
            )

        self.lists = lists
        self.x = x
        self.c_x = c_x
        self.ell = ell
        self.colours = lists.palette
        self.steps = 0
        self._pending = family.members()
        self._finite_family = family.is_finite_index
        self._sets: list[LazySet] = []
        self._iters: list[Iterator] = []
        self._seen: list[set] = []
        self._chosen: dict[Vertex, frozenset[Colour]] = {}
        self._covered: list[dict[Colour, int]] = []
        self._log: list[SublistStep] = []
        self._add_set(LazySet(UNIVERSE, vertex_enum))
        if self._finite_family:
            while self._ensure_set(len(self._sets)):
                pass
        self._triples = self._enumerate_triples()

    def _add_set(self, member: LazySet) -> None:
        if member.card.is_finite:
            raise HypothesisError(
                f"Set {member.name!r} is finite; every tracked set must be infinite.",
                code="finite_member",
            )
        if any(s.name == member.name for s in self._sets):
            raise PreconditionError(
                f"Set name {member.name!r} is taken.", code="duplicate"
            )
        self._sets.append(member)
        self._iters.append(member.stream())
        self._seen.append(set())
        self._covered.append(dict.fromkeys(self.colours, 0))

    def _ensure_set(self, i: int) -> bool:
        while len(self._sets) <= i:
            member = next(self._pending, None)
            if member is None:
                return False
            self._add_set(member)
        return True

    def _enumerate_triples(self) -> Iterator[tuple[int, Colour, int]]:
        yield 0, self.c_x, 1
        for diagonal in count():
            for i in range(diagonal + 1):
                if not self._ensure_set(i):
                    break
                n = diagonal - i + 1
                for colour in self.colours:
                    if (i, colour, n) != (0, self.c_x, 1):
                        yield i, colour, n

    def _next_unchosen(self, i: int) -> Vertex:
        for v in self._iters[i]:
            if i and v in self._chosen and v not in self._seen[i]:
                self._count(i, self._chosen[v])
            self._seen[i].add(v)
            if v not in self._chosen:
                return v
        raise StreamStalledError(f"Set {self._sets[i].name!r} has no unchosen vertex left.")

    def advance(self, steps: int) -> SublistEngine:
        for _ in range(steps):
            i, colour, n = next(self._triples)
            v = self._next_unchosen(i)
            base = self.lists[v]
            if len(base) != self.ell + 1:
                raise ListSizeError(f"Vertex {v!r} needs a list of {self.ell + 1} colours.")
            struck = colour in base
            sublist = base - {colour} if struck else default_sublist(base, self.ell)
            self._chosen[v] = frozenset(sublist)
            for j, seen in enumerate(self._seen):
                if j == 0 or v in seen:
                    self._count(j, self._chosen[v])
            self._log.append(
                SublistStep(self._sets[i].name, colour, n, v, tuple(sorted(sublist)), struck)
            )
            self.steps += 1
        return self

    def table(self) -> SublistTable:
        known = {s.name: frozenset(seen) for s, seen in zip(self._sets, self._seen)}
        return SublistTable(
            lists=self.lists,
            ell=self.ell,
            horizon=self.steps,
            set_names=tuple(s.name for s in self._sets),
            colours=self.colours,
            log=tuple(self._log),
            known_members=known,
        )

    def _count(self, i: int, sublist: frozenset[Colour]) -> None:
        for colour in self.colours:
            if colour not in sublist:
                self._covered[i][colour] += 1

    def coverage(self, set_name: str, colour: Colour) -> int:
        """Running coverage counter; agrees with ``table().coverage`` at every step."""
        for member, covered in zip(self._sets, self._covered):
            if member.name == set_name and colour in covered:
                return covered[colour]
        raise PreconditionError(f"Unknown pair ({set_name!r}, {colour}).", code="unknown_pair")

    def horizon_for(self, set_name: str, colour: Colour, m: int, max_steps: int) -> int:
        """Advance until ``(set_name, colour)`` has coverage ``m``; return the horizon reached."""
        while self.coverage(set_name, colour) < m:
            if self.steps >= max_steps:
                raise StreamStalledError(
                    f"Coverage of ({set_name!r}, {colour}) stayed below {m} "
                    f"within {max_steps} steps."
                )
            self.advance(1)
        return self.steps


def select_sublists(
    vertex_enum: Callable[[], Iterator[Vertex]],
    family: LazySetFamily,
    lists: ListSystem,
    x: Vertex,
    c_x: Colour,
    ell: int,
    horizon: int,
) -> SublistTable:
    if horizon < 1:
        raise PreconditionError(f"Horizon must be at least 1, got {horizon}.", code="horizon")
    engine = SublistEngine(vertex_enum, family, lists, x, c_x, ell)
    table = engine.advance(horizon).table()
    logger.debug("Selected %d sublists over %d sets", len(table.log), len(table.set_names))
    return table


def coverage_counter(table: SublistTable, set_name: str, colour: Colour) -> int:
    return table.coverage(set_name, colour)
