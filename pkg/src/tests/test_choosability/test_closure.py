import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majority_choosability.choosability.closure import (
    SaturationStatus,
    boundary_degree_check,
    closure,
    elimination_order,
    elimination_violation,
    is_closed,
    is_saturated,
    nbly,
    saturate,
)
from majority_choosability.choosability.exceptions import PreconditionError
from majority_choosability.choosability.graphs import Card
from tests.utils import brute_force_closure, brute_force_is_closed, random_graph, random_subset

# Seeded corpus of small graphs with a random vertex set each.
CORPUS = [(seed, 4 + seed % 9) for seed in range(200)]


def corpus_instance(seed, n):
    graph = random_graph(seed, n)
    return graph, random_subset(seed + 1000, graph.vertex_ids)


class TestNbly:
    def test_path(self, path3):
        assert nbly(path3, {"a", "c"}) == {"b"}

    def test_empty_set(self, c5):
        assert nbly(c5, set()) == frozenset()

    def test_star_centre(self, star3):
        assert nbly(star3, {"c"}) == {"x", "y", "z"}

    def test_lazy_star(self, star_generator):
        # Leaves only have the centre as neighbour.
        assert nbly(star_generator, {"c"}, horizon=5) == {f"l{i}" for i in range(5)}


class TestIsClosed:
    def test_c4_single_vertex(self, c4):
        assert is_closed(c4, {"a"})

    def test_path_witness(self, path3):
        verdict = is_closed(path3, {"a", "c"})
        assert not verdict
        assert verdict.witness == "b"

    def test_whole_vertex_set(self, k4):
        assert is_closed(k4, k4.vertex_ids)

    def test_lazy_not_exhaustive(self, star_generator):
        verdict = is_closed(star_generator, {"c"}, horizon=3)
        assert not verdict
        assert verdict.witness == "l0"

    def test_lazy_path(self, path_generator):
        verdict = is_closed(path_generator, {"v0", "v1"})
        assert verdict
        assert verdict.exhaustive

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 5000))
    def test_intersection_of_closed_sets(self, seed):
        graph = random_graph(seed, 8)
        first = closure(graph, random_subset(seed, graph.vertex_ids))[0]
        second = closure(graph, random_subset(seed + 1, graph.vertex_ids))[0]
        assert is_closed(graph, first & second)


class TestClosure:
    def test_path(self, path3):
        closed, trace = closure(path3, {"a", "c"})
        assert closed == {"a", "b", "c"}
        assert trace.boundary == {"b"}
        assert trace.absorbed_at == {"b": 1}
        assert trace.complete

    def test_empty(self, c5):
        closed, trace = closure(c5, set())
        assert closed == frozenset()
        assert len(trace.stages) == 1

    @pytest.mark.parametrize(["seed", "n"], CORPUS[:50])
    def test_finite_degrees_close_in_one_stage(self, seed, n):
        # A vertex next to a newly absorbed one already lies in the previous stage.
        graph, A = corpus_instance(seed, n)
        _, trace = closure(graph, A)
        assert len(trace.stages) <= 2

    @settings(max_examples=200, deadline=None)
    @given(index=st.integers(0, len(CORPUS) - 1), extra=st.integers(0, 10_000))
    def test_extensive_idempotent_monotone(self, index, extra):
        graph, A = corpus_instance(*CORPUS[index])
        closed = closure(graph, A)[0]
        assert A <= closed
        assert closure(graph, closed)[0] == closed
        larger = A | random_subset(extra, graph.vertex_ids)
        assert closed <= closure(graph, larger)[0]

    @pytest.mark.parametrize(["seed", "n"], CORPUS)
    def test_matches_brute_force(self, seed, n):
        graph, A = corpus_instance(seed, n)
        closed, trace = closure(graph, A)
        assert closed == brute_force_closure(graph, A)
        assert brute_force_is_closed(graph, closed)

    def test_budget_exhausted(self, path3):
        closed, trace = closure(path3, {"a", "c"}, budget=2)
        assert closed == {"a", "c"}
        assert not trace.complete

    def test_lazy_tree(self, tree_generator):
        # All three neighbours of t.0 are in the set.
        leaves = {"t.0.0", "t.0.1"}
        closed, trace = closure(tree_generator, {"t"} | leaves)
        assert trace.complete
        assert closed == {"t", "t.0"} | leaves


class TestEliminationOrder:
    def test_path(self, path3):
        assert elimination_order(path3, {"a", "c"}).order == ("b",)

    def test_closed_set(self, c4):
        assert elimination_order(c4, {"a"}).order == ()

    def test_violation(self, path3):
        assert elimination_violation(path3, {"a"}, ["b"]) == "b"
        assert elimination_violation(path3, {"a", "c"}, ["b"]) is None

    @pytest.mark.parametrize(["seed", "n"], CORPUS)
    def test_corpus(self, seed, n):
        graph, A = corpus_instance(seed, n)
        order = elimination_order(graph, A)
        assert elimination_violation(graph, A, order) is None
        assert set(order) == brute_force_closure(graph, A) - A
        assert boundary_degree_check(graph, A).passed


class TestBoundaryDegreeCheck:
    def test_path(self, path3):
        report = boundary_degree_check(path3, {"a", "c"})
        assert report.passed
        assert report.verdicts == {"b": True}

    def test_closed_is_vacuous(self, c4):
        report = boundary_degree_check(c4, {"a"})
        assert report.passed
        assert report.verdicts == {}


class TestSaturate:
    def test_path(self, path_generator):
        result = saturate(path_generator, set(), {"v0"}, budget=100)
        assert result.b_star == {f"v{i}" for i in range(100)}
        assert result.generation["v37"] == 37
        assert not result.complete

    def test_star_from_leaf(self, star_generator):
        result = saturate(star_generator, set(), {"l0"}, budget=20)
        assert result.generation["c"] == 1
        assert result.generation["l1"] == 2
        assert len(result.b_star) == 20
        assert result.rounds == 2

    def test_fixpoint(self, path3):
        result = saturate(path3, {"a"}, {"b", "c"})
        assert result.b_star == {"b", "c"}
        assert result.rounds == 0
        assert result.complete

    def test_finite_mu(self, path3):
        with pytest.raises(PreconditionError) as exc_info:
            saturate(path3, set(), {"a"}, mu=Card.of(3))
        assert exc_info.value.code == "finite_mu"

    def test_lazy_needs_budget(self, path_generator):
        with pytest.raises(PreconditionError) as exc_info:
            saturate(path_generator, set(), {"v0"})
        assert exc_info.value.code == "budget"

    def test_excludes_A(self, path_generator):
        result = saturate(path_generator, {"v3"}, {"v0"}, budget=100)
        assert result.b_star == {"v0", "v1", "v2"}
        assert result.complete


class TestIsSaturated:
    def test_no_outside_neighbours(self, path3):
        assert is_saturated(path3, set(), {"a", "b", "c"}).status is SaturationStatus.SATURATED

    def test_k4_single_vertex(self, k4):
        verdict = is_saturated(k4, set(), {"a"})
        assert verdict.status is SaturationStatus.VIOLATED
        assert verdict.witness == "a"
        assert verdict.counters == {"outside": 3, "inside": 0, "size": 1}

    def test_truncated_star_within_horizon(self, star_generator):
        result = saturate(star_generator, set(), {"l0"}, budget=50)
        verdict = is_saturated(
            star_generator, set(), result.b_star, horizon=100, complete=result.complete
        )
        assert verdict.status is SaturationStatus.SATURATED
        assert verdict.within_horizon
        assert verdict.as_dict()["withinHorizon"] is True
        assert verdict.counters == {"pending": 51, "checked": 50}

    def test_saturate_output_on_finite_graph(self, c5):
        result = saturate(c5, {"a"}, {"c"})
        assert result.b_star == {"b", "c", "d", "e"}
        assert is_saturated(c5, {"a"}, result.b_star)
