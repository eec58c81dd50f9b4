import random

import networkx as nx
import pytest

from majority_choosability.choosability.exceptions import (
    GuardExceededError,
    ListSizeError,
    PreconditionError,
    VerificationError,
)
from majority_choosability.choosability.graphs import (
    FiniteGraph,
    ListSystem,
    PartialColouring,
    cross_edge_count,
    is_majority_colouring,
)
from majority_choosability.choosability.solver import (
    SolveInstance,
    SolveResult,
    audit_solve_result,
    canonical_list_systems,
    exhaustive_max_cross,
    exists_majority_list_colouring,
    find_improving_move,
    majority_choosable_oracle,
    recolour_gain,
    solve_finite,
    unfriendly_partition,
)
from tests.utils import random_graph, recount


def free_instance(graph, colours=(1, 2), **kwargs) -> SolveInstance:
    return SolveInstance(
        graph=graph, frozen=PartialColouring(), lists=ListSystem(default=colours), **kwargs
    )


def connected_graphs(max_order):
    """One representative per isomorphism class of connected graphs with 2..max_order vertices."""
    for graph in nx.graph_atlas_g()[1:]:
        if 2 <= graph.number_of_nodes() <= max_order and nx.is_connected(graph):
            yield FiniteGraph.from_networkx(graph)


class TestSolveFinite:
    def test_k2(self, k2):
        result = solve_finite(free_instance(k2))
        assert result.objective == 1
        assert result.colouring["a"] != result.colouring["b"]

    def test_triangle_with_frozen_vertex(self, triangle):
        instance = SolveInstance(
            graph=triangle,
            frozen=PartialColouring({"a": 1}),
            lists=ListSystem({"b": [1, 2], "c": [1, 2]}),
        )
        result = solve_finite(instance)
        assert result.colouring["a"] == 1
        assert result.objective == 2
        assert is_majority_colouring(triangle, result.colouring, ["b", "c"]) == (True, None)

    def test_c4(self, c4):
        result = solve_finite(free_instance(c4))
        assert result.objective == 4
        assert is_majority_colouring(c4, result.colouring) == (True, None)

    def test_single_free_vertex(self, path3):
        instance = SolveInstance(
            graph=path3,
            frozen=PartialColouring({"a": 1, "c": 1}),
            lists=ListSystem({"b": [1, 2]}),
        )
        result = solve_finite(instance)
        assert result.colouring["b"] == 2
        assert result.iterations == 1

    def test_excluded_colour_at_b1(self, path3):
        instance = free_instance(path3, colours=(1, 2, 3), b1="a", c_x=1)
        result = solve_finite(instance)
        assert result.colouring["a"] != 1

    def test_excluded_colour_leaves_one_choice(self, path3):
        instance = free_instance(path3, b1="a", c_x=1)
        with pytest.raises(ListSizeError):
            solve_finite(instance)

    def test_short_list(self, k2):
        instance = SolveInstance(
            graph=k2, frozen=PartialColouring(), lists=ListSystem({"a": [1], "b": [1, 2]})
        )
        with pytest.raises(ListSizeError):
            solve_finite(instance)

    def test_frozen_and_free_overlap(self, k2):
        instance = SolveInstance(
            graph=k2,
            frozen=PartialColouring({"a": 1}),
            lists=ListSystem(default=[1, 2]),
            free=("a", "b"),
        )
        with pytest.raises(PreconditionError) as exc_info:
            solve_finite(instance)
        assert exc_info.value.code == "frozen_free_overlap"

    @pytest.mark.parametrize("seed", range(40))
    def test_random_graphs(self, seed):
        graph = random_graph(seed, 6 + seed % 5)
        frozen = {v: 1 + graph.index(v) % 3 for v in graph.vertex_ids[:2]}
        instance = SolveInstance(
            graph=graph,
            frozen=PartialColouring(frozen),
            lists=ListSystem(default=[1, 2, 3]),
        )
        result = solve_finite(instance)
        for v in instance.free:
            same, diff = recount(graph, result.colouring, v)
            assert same <= diff
        assert find_improving_move(instance, result.colouring) is None

    def test_exhaustive_is_not_worse(self):
        for seed in range(20):
            instance = free_instance(random_graph(seed, 7), colours=(1, 2, 3))
            local = solve_finite(instance)
            best = exhaustive_max_cross(instance)
            assert best.objective >= local.objective
            assert best.locally_optimal

    def test_deterministic(self, c5):
        first = solve_finite(free_instance(c5, colours=(1, 2, 3)))
        second = solve_finite(free_instance(c5, colours=(1, 2, 3)))
        assert first == second

    def test_lowest_colour_start(self, k2):
        """Prove that b starts at the lowest colour left once cX is removed, and keeps it."""
        instance = SolveInstance(
            graph=k2,
            frozen=PartialColouring({"a": 1}),
            lists=ListSystem({"b": [1, 2, 3]}),
            b1="b",
            c_x=1,
        )
        result = solve_finite(instance)
        assert result.colouring.as_dict() == {"a": 1, "b": 2}
        assert result.iterations == 0


def sublist_instance(seed) -> SolveInstance:
    """Random graph with two frozen vertices, 2-lists on the free ones and cX taken from b1."""
    rng = random.Random(seed)
    graph = random_graph(seed, 5 + seed % 8)
    vertices = graph.vertex_ids
    frozen = {v: rng.randint(1, 4) for v in vertices[:2]}
    free = vertices[2:]
    lists = {v: rng.sample(range(1, 5), 2) for v in free}
    b1, c_x = free[0], rng.randint(1, 4)
    lists[b1] = [c_x, *rng.sample([c for c in range(1, 5) if c != c_x], 2)]
    return SolveInstance(
        graph=graph, frozen=PartialColouring(frozen), lists=ListSystem(lists), b1=b1, c_x=c_x
    )


class TestSublistInstances:
    @pytest.mark.parametrize("chunk", range(10))
    def test_thousand_instances(self, chunk):
        for seed in range(100 * chunk, 100 * (chunk + 1)):
            instance = sublist_instance(seed)
            result = solve_finite(instance)
            colouring = result.colouring
            assert colouring[instance.b1] != instance.c_x
            assert all(colouring[v] == c for v, c in instance.frozen.items())
            for v in instance.free:
                assert colouring[v] in instance.lists[v]
                same, diff = recount(instance.graph, colouring, v)
                assert same <= diff, (seed, v)


class TestLocalOptimality:
    @pytest.mark.parametrize("graph", list(connected_graphs(6)), ids=repr)
    def test_no_single_recolouring_gains(self, graph):
        instance = free_instance(graph, colours=(1, 2, 3))
        result = solve_finite(instance)
        assignment = dict(result.colouring)
        for v in instance.free:
            for colour in (1, 2, 3):
                recoloured = PartialColouring({**assignment, v: colour})
                gain = cross_edge_count(graph, recoloured) - result.objective
                assert gain == recolour_gain(graph, assignment, v, colour)
                assert gain <= 0


class TestExhaustive:
    def test_c5(self, c5):
        result = exhaustive_max_cross(free_instance(c5))
        assert result.objective == 4
        assert result.method == "exhaustive"

    def test_guard(self, c5):
        with pytest.raises(GuardExceededError):
            exhaustive_max_cross(free_instance(c5), guard=8)


class TestAudit:
    def test_unhappy_vertex(self, path3):
        instance = free_instance(path3)
        colouring = PartialColouring({"a": 1, "b": 1, "c": 1})
        result = SolveResult(colouring, objective=0, locally_optimal=False)
        with pytest.raises(VerificationError) as exc_info:
            audit_solve_result(instance, result)
        assert exc_info.value.code == "unhappy_vertex"

    def test_objective_mismatch(self, k2):
        instance = free_instance(k2)
        colouring = PartialColouring({"a": 1, "b": 2})
        with pytest.raises(VerificationError) as exc_info:
            audit_solve_result(instance, SolveResult(colouring, objective=0))
        assert exc_info.value.code == "objective_mismatch"

    def test_frozen_changed(self, k2):
        instance = SolveInstance(
            graph=k2, frozen=PartialColouring({"a": 1}), lists=ListSystem({"b": [1, 2]})
        )
        colouring = PartialColouring({"a": 2, "b": 1})
        with pytest.raises(VerificationError) as exc_info:
            audit_solve_result(instance, SolveResult(colouring, objective=1))
        assert exc_info.value.code == "frozen_changed"


def test_recolour_gain(triangle):
    colouring = {"a": 1, "b": 1, "c": 1}
    assert recolour_gain(triangle, colouring, "a", 2) == 2
    assert recolour_gain(triangle, colouring, "a", 1) == 0


class TestUnfriendlyPartition:
    @pytest.mark.parametrize("seed", range(10))
    def test_everyone_happy(self, seed):
        graph = random_graph(seed, 10, p=0.5)
        result = unfriendly_partition(graph)
        assert set(result.colouring.values()) <= {1, 2}
        assert is_majority_colouring(graph, result.colouring) == (True, None)
        assert 2 * result.objective >= graph.size

    def test_one_colour(self, k2):
        with pytest.raises(PreconditionError):
            unfriendly_partition(k2, colours=1)


class TestExistsMajorityListColouring:
    def test_k2_same_singleton(self, k2):
        assert exists_majority_list_colouring(k2, ListSystem({"a": [1], "b": [1]})) is None

    def test_k2_distinct_singletons(self, k2):
        colouring = exists_majority_list_colouring(k2, ListSystem({"a": [1], "b": [2]}))
        assert colouring.as_dict() == {"a": 1, "b": 2}

    def test_c5(self, c5):
        colouring = exists_majority_list_colouring(c5, ListSystem(default=[1, 2]))
        assert colouring is not None
        assert is_majority_colouring(c5, colouring) == (True, None)

    def test_triangle_single_colour(self, triangle):
        assert exists_majority_list_colouring(triangle, ListSystem(default=[1])) is None
        colouring = exists_majority_list_colouring(triangle, ListSystem(default=[1, 2]))
        assert is_majority_colouring(triangle, colouring) == (True, None)

    def test_guard(self, k4):
        with pytest.raises(GuardExceededError):
            exists_majority_list_colouring(k4, ListSystem(default=[1, 2, 3]), guard=10)


class TestChoosabilityOracle:
    @pytest.mark.parametrize("graph", list(connected_graphs(4)), ids=repr)
    def test_two_lists_suffice_on_small_graphs(self, graph):
        verdict = majority_choosable_oracle(graph, 2, 8)
        assert verdict.choosable, verdict.witness

    def test_single_lists_fail_on_k2(self, k2):
        verdict = majority_choosable_oracle(k2, 1, 2)
        assert not verdict.choosable
        assert verdict.witness.as_dict() == {"a": [1], "b": [1]}

    def test_k4_three_lists(self, k4):
        assert majority_choosable_oracle(k4, 3, 4).choosable

    def test_sampled(self, c5):
        verdict = majority_choosable_oracle(c5, 2, 6, mode="sampled", samples=50, seed=1)
        assert verdict.choosable
        assert verdict.systems_checked == 50

    def test_process_pool_agrees(self, c4):
        serial = majority_choosable_oracle(c4, 2, 4)
        pooled = majority_choosable_oracle(c4, 2, 4, workers=2)
        assert serial == pooled

    def test_exhaustive_order_guard(self, c5):
        with pytest.raises(GuardExceededError):
            majority_choosable_oracle(c5, 2, 4)

    def test_invalid_palette(self, k2):
        with pytest.raises(PreconditionError):
            majority_choosable_oracle(k2, 3, 2)

    @pytest.mark.parametrize("graph", list(connected_graphs(4)), ids=repr)
    def test_solver_agrees_with_oracle(self, graph):
        assert majority_choosable_oracle(graph, 2, 4).choosable
        for lists in canonical_list_systems(graph.vertex_ids, 2, 4):
            instance = SolveInstance(graph=graph, frozen=PartialColouring(), lists=lists)
            result = solve_finite(instance)
            assert is_majority_colouring(graph, result.colouring) == (True, None)

    def test_canonical_systems_are_distinct(self):
        systems = list(canonical_list_systems(["a", "b"], 1, 2))
        # Either both vertices share a colour or they do not.
        assert [s.as_dict() for s in systems] == [{"a": [1], "b": [2]}, {"a": [1], "b": [1]}]


def test_k4_with_three_colours(k4):
    result = solve_finite(free_instance(k4, colours=(1, 2, 3)))
    assert is_majority_colouring(k4, result.colouring) == (True, None)
