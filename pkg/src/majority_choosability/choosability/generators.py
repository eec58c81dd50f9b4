"""Countable graph families, each a pure oracle of (family, parameters, seed, vertex).

Vertex identifiers are structural: ``v3`` on the path, ``2,5`` on the grid, ``t.0.1`` in the
tree, ``c``/``l7`` on the star, ``s12`` in the seeded family and ``d`` for a dominating vertex.
"""

from __future__ import annotations

import random
import re
from collections.abc import Iterator
from functools import lru_cache
from itertools import count

from .exceptions import InputError
from .graphs import ALEPH_0, Card, LazyGraph, Vertex


class GeneratedGraph(LazyGraph):
    family: str = ""
    vertex_regex: re.Pattern = re.compile("")

    def __init__(self, seed: int = 0, **params):
        self.seed = seed
        self.params = params

    def __repr__(self):
        return f"<{type(self).__name__} {self.params} seed={self.seed}>"

    def has_vertex(self, v: Vertex) -> bool:
        return isinstance(v, str) and self.vertex_regex.fullmatch(v) is not None

    def infinite_degree_vertices(self) -> list[Vertex]:
        """Vertices of degree aleph-0, for families that have finitely many of them."""
        return []

    def describe(self) -> dict:
        return {"family": self.family, "params": self.params, "seed": self.seed}


class PathGraph(GeneratedGraph):
    """One-way infinite path ``v0 - v1 - v2 - ...``."""

    family = "path"
    vertex_regex = re.compile(r"v(0|[1-9]\d*)")

    def vertices(self) -> Iterator[Vertex]:
        return (f"v{i}" for i in count())

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        i = int(v[1:])
        if i > 0:
            yield f"v{i - 1}"
        yield f"v{i + 1}"

    def degree(self, v: Vertex) -> Card:
        self.require_vertex(v)
        return Card.of(1 if v == "v0" else 2)


class GridGraph(GeneratedGraph):
    """Quarter-plane grid on ``i,j`` with ``i, j >= 0``, enumerated along anti-diagonals."""

    family = "grid"
    vertex_regex = re.compile(r"(0|[1-9]\d*),(0|[1-9]\d*)")

    def vertices(self) -> Iterator[Vertex]:
        for total in count():
            for i in range(total + 1):
                yield f"{i},{total - i}"

    def _neighbours(self, v: Vertex) -> list[Vertex]:
        self.require_vertex(v)
        i, j = map(int, v.split(","))
        candidates = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
        return [f"{a},{b}" for a, b in candidates if a >= 0 and b >= 0]

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        return iter(self._neighbours(v))

    def degree(self, v: Vertex) -> Card:
        return Card.of(len(self._neighbours(v)))


class RegularTreeGraph(GeneratedGraph):
    """Infinite ``d``-regular tree rooted at ``t``; the children of ``t.p`` are ``t.p.k``.

    The root has ``d`` children, every other vertex a parent and ``d - 1`` children.
    """

    family = "regular-tree"
    vertex_regex = re.compile(r"t(\.(0|[1-9]\d*))*")

    def __init__(self, seed: int = 0, degree: int = 3, **params):
        if degree < 2:
            raise InputError(
                f"Tree degree must be at least 2, got {degree}.", code="invalid_param"
            )
        super().__init__(seed=seed, degree=degree, **params)
        self.d = degree

    def _path(self, v: Vertex) -> list[int]:
        return [int(part) for part in v.split(".")[1:]]

    def has_vertex(self, v: Vertex) -> bool:
        if not super().has_vertex(v):
            return False
        path = self._path(v)
        return not path or (path[0] < self.d and all(k < self.d - 1 for k in path[1:]))

    def _children(self, v: Vertex) -> list[Vertex]:
        fan_out = self.d if v == "t" else self.d - 1
        return [f"{v}.{k}" for k in range(fan_out)]

    def vertices(self) -> Iterator[Vertex]:
        level = ["t"]
        while True:
            yield from level
            level = [child for v in level for child in self._children(v)]

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        if v != "t":
            yield v.rsplit(".", 1)[0]
        yield from self._children(v)

    def degree(self, v: Vertex) -> Card:
        self.require_vertex(v)
        return Card.of(self.d)


class StarGraph(GeneratedGraph):
    """Centre ``c`` of degree aleph-0 joined to leaves ``l0, l1, ...``."""

    family = "star-aleph0"
    vertex_regex = re.compile(r"c|l(0|[1-9]\d*)")

    def vertices(self) -> Iterator[Vertex]:
        yield "c"
        yield from (f"l{i}" for i in count())

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        if v == "c":
            yield from (f"l{i}" for i in count())
        else:
            yield "c"

    def degree(self, v: Vertex) -> Card:
        self.require_vertex(v)
        return ALEPH_0 if v == "c" else Card.of(1)

    def infinite_degree_vertices(self) -> list[Vertex]:
        return ["c"]


class SeededLocallyFiniteGraph(GeneratedGraph):
    """Random locally finite graph on ``s0, s1, ...`` with degrees at most ``max_degree``.

    A path backbone keeps it connected. Round ``r`` (``1 <= r <= max_degree - 2``) splits the
    naturals into blocks of ``2**(r + 1)`` and draws a random matching inside each block from a
    generator seeded by ``(seed, r, block)``; a matched pair becomes an edge unless it is
    already adjacent. Every query is answered from the vertex's own blocks only.
    """

    family = "seeded-locally-finite"
    vertex_regex = re.compile(r"s(0|[1-9]\d*)")

    def __init__(self, seed: int = 0, max_degree: int = 4, **params):
        if max_degree < 2:
            raise InputError(
                f"max_degree must be at least 2, got {max_degree}.", code="invalid_param"
            )
        super().__init__(seed=seed, max_degree=max_degree, **params)
        self.max_degree = max_degree
        self._partner = lru_cache(maxsize=65536)(self._round_partner)

    def vertices(self) -> Iterator[Vertex]:
        return (f"s{i}" for i in count())

    def _round_partner(self, r: int, i: int) -> int | None:
        size = 2 ** (r + 1)
        block = i // size
        members = list(range(block * size, (block + 1) * size))
        rng = random.Random(f"{self.seed}:{r}:{block}")
        rng.shuffle(members)
        for a, b in zip(members[::2], members[1::2]):
            keep = rng.random() < 0.5
            if i in (a, b):
                return (b if i == a else a) if keep else None
        return None

    def _adjacent_before(self, r: int, i: int, j: int) -> bool:
        if abs(i - j) == 1:
            return True
        return any(self._partner(earlier, i) == j for earlier in range(1, r))

    def _neighbour_indices(self, i: int) -> list[int]:
        found = [i - 1] if i > 0 else []
        found.append(i + 1)
        for r in range(1, self.max_degree - 1):
            j = self._partner(r, i)
            if j is not None and not self._adjacent_before(r, i, j):
                found.append(j)
        return found

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        return (f"s{j}" for j in self._neighbour_indices(int(v[1:])))

    def degree(self, v: Vertex) -> Card:
        self.require_vertex(v)
        return Card.of(len(self._neighbour_indices(int(v[1:]))))


class DominatingVertexGraph(GeneratedGraph):
    """A base family plus one vertex ``d`` adjacent to every base vertex."""

    family = "dominating-vertex-plus-family"
    dominator = "d"

    def __init__(self, seed: int = 0, base: dict | None = None, **params):
        if not base:
            raise InputError(
                "The dominating-vertex family needs a base family.", code="invalid_param"
            )
        super().__init__(seed=seed, base=base, **params)
        self.base = instantiate_generator(base)
        if self.base.has_vertex(self.dominator):
            raise InputError("The base family already uses the vertex 'd'.", code="invalid_param")

    def has_vertex(self, v: Vertex) -> bool:
        return v == self.dominator or self.base.has_vertex(v)

    def vertices(self) -> Iterator[Vertex]:
        yield self.dominator
        yield from self.base.vertices()

    def neighbours(self, v: Vertex) -> Iterator[Vertex]:
        self.require_vertex(v)
        if v == self.dominator:
            yield from self.base.vertices()
        else:
            yield self.dominator
            yield from self.base.neighbours(v)

    def degree(self, v: Vertex) -> Card:
        self.require_vertex(v)
        if v == self.dominator:
            return ALEPH_0
        return self.base.degree(v) + Card.of(1)

    def infinite_degree_vertices(self) -> list[Vertex]:
        return [self.dominator, *self.base.infinite_degree_vertices()]


GENERATORS: dict[str, type[GeneratedGraph]] = {
    cls.family: cls
    for cls in (
        PathGraph,
        GridGraph,
        RegularTreeGraph,
        StarGraph,
        SeededLocallyFiniteGraph,
        DominatingVertexGraph,
    )
}
FAMILY_ALIASES = {
    "tree": "regular-tree",
    "star": "star-aleph0",
    "seeded-random-locally-finite": "seeded-locally-finite",
}


def instantiate_generator(spec: dict) -> GeneratedGraph:
    """Build the oracle of a descriptor ``{"family": ..., "params": {...}, "seed": n}``."""
    family = FAMILY_ALIASES.get(spec.get("family"), spec.get("family"))
    try:
        generator_class = GENERATORS[family]
    except KeyError:
        raise InputError(
            f"Unknown generator family {spec.get('family')!r}; "
            f"expected one of {sorted(GENERATORS) + sorted(FAMILY_ALIASES)}.",
            code="unknown_family",
        ) from None
    try:
        return generator_class(seed=spec.get("seed", 0), **(spec.get("params") or {}))
    except TypeError as e:
        raise InputError(f"Invalid parameters for {family!r}: {e}", code="invalid_param") from e
