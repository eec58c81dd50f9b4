import dataclasses
from itertools import islice

import pytest

from majority_choosability.choosability.exceptions import (
    HypothesisError,
    PreconditionError,
    VerificationError,
)
from majority_choosability.choosability.generators import instantiate_generator
from majority_choosability.choosability.graphs import ListSystem, PartialColouring, Verdict
from majority_choosability.choosability.runner import (
    RunConfig,
    audit_certificate,
    build_instances,
    certify,
    compare_prefixes,
    diagonal_extract,
    enumerate_B,
    run_prefix,
    solve_instances,
)


def config(graph, x, c_x=1, horizon=30, prefix=10, **kwargs) -> RunConfig:
    return RunConfig(
        graph=graph,
        lists=ListSystem(default=[1, 2, 3]),
        x=x,
        c_x=c_x,
        horizon=horizon,
        prefix=prefix,
        neighbour_horizon=kwargs.pop("neighbour_horizon", 100),
        **kwargs,
    )


class TestEnumerateB:
    def test_path(self, path_generator):
        assert list(islice(enumerate_B(path_generator, frozenset(), "v0"), 4)) == [
            "v0",
            "v1",
            "v2",
            "v3",
        ]

    def test_path_from_the_middle(self, path_generator):
        order = list(islice(enumerate_B(path_generator, frozenset({"v0"}), "v3"), 5))
        assert order[0] == "v3"
        assert set(order) == {"v1", "v2", "v3", "v4", "v5"}

    def test_star_does_not_block(self, star_generator):
        order = list(islice(enumerate_B(star_generator, frozenset(), "l4"), 4))
        assert order == ["l4", "c", "l0", "l1"]

    def test_finite_graph_runs_out(self, path3):
        assert list(enumerate_B(path3, frozenset({"a"}), "c")) == ["c", "b"]


class TestBuildInstances:
    def test_nested_path_instances(self, path_generator):
        batch = build_instances(config(path_generator, "v0", horizon=5, prefix=5))
        assert batch.b_order == ("v0", "v1", "v2", "v3", "v4")
        assert batch.sizes() == [1, 2, 3, 4, 5]
        assert batch[2].graph.edges() == [("v0", "v1"), ("v1", "v2")]
        assert batch.sublists["v0"] == {2, 3}
        assert batch.tracked_sets == {}

    def test_frozen_part(self, path_generator):
        A = frozenset({"v0"})
        cfg = config(path_generator, "v1", horizon=4, prefix=2, A=A)
        batch = build_instances(cfg)
        assert batch[0].frozen.as_dict() == {"v0": 1}
        assert batch[0].graph.vertex_ids == ("v0", "v1")

    def test_star_tracks_centre(self, star_generator):
        batch = build_instances(config(star_generator, "c", horizon=20, prefix=5))
        assert batch.tracked_sets == {"c": "N(c)"}
        assert "N(c)" in batch.table.set_names

    def test_prefix_larger_than_horizon(self, path_generator):
        with pytest.raises(PreconditionError) as exc_info:
            build_instances(config(path_generator, "v0", horizon=3, prefix=4))
        assert exc_info.value.code == "prefix_horizon"

    def test_finite_graph(self, path3):
        with pytest.raises(HypothesisError) as exc_info:
            build_instances(config(path3, "a"))
        assert exc_info.value.code == "b_finite"

    def test_a_not_closed(self, path_generator):
        cfg = config(path_generator, "v5", A=frozenset({"v0", "v2"}))
        with pytest.raises(HypothesisError) as exc_info:
            build_instances(cfg)
        assert exc_info.value.code == "a_not_closed"

    def test_a_closed_certified_skips_check(self, path_generator):
        cfg = config(path_generator, "v5", A=frozenset({"v0", "v2"}), a_closed_certified=True)
        assert cfg.validate() is cfg

    def test_x_in_A(self, path_generator):
        with pytest.raises(PreconditionError):
            build_instances(config(path_generator, "v0", A=frozenset({"v0"})))

    def test_cx_not_in_list(self, path_generator):
        with pytest.raises(HypothesisError):
            build_instances(config(path_generator, "v0", c_x=7))


class TestDiagonalExtract:
    def test_agrees_with_last_colouring(self):
        colourings = [
            PartialColouring({"b1": 2}),
            PartialColouring({"b1": 3, "b2": 2}),
            PartialColouring({"b1": 2, "b2": 3, "b3": 2}),
        ]
        extraction = diagonal_extract(colourings, ["b1", "b2", "b3"], 3)
        assert extraction.colours == {"b1": 2, "b2": 3, "b3": 2}
        assert [step["survivors"] for step in extraction.trace] == [2, 1, 1]

    def test_majority_loses_to_latest_index(self):
        colourings = [PartialColouring({"b": colour}) for colour in (1, 1, 2)]
        assert diagonal_extract(colourings, ["b"], 1).colours == {"b": 2}

    def test_prefix_too_long(self):
        with pytest.raises(PreconditionError):
            diagonal_extract([PartialColouring({"b": 1})], ["b", "c"], 2)


class TestCertify:
    def test_path_prefix(self, path_generator):
        colouring = PartialColouring({"v0": 2, "v1": 1, "v2": 2})
        verdicts = certify(path_generator, colouring, ["v0", "v1", "v2"], horizon=10)
        assert verdicts["v0"].verdict is Verdict.HAPPY
        assert verdicts["v1"].verdict is Verdict.HAPPY
        # v3 is not coloured yet.
        assert verdicts["v2"].verdict is Verdict.PENDING

    def test_unhappy(self, path_generator):
        colouring = PartialColouring({"v0": 1, "v1": 1, "v2": 1})
        verdicts = certify(path_generator, colouring, ["v1"], horizon=10)
        assert verdicts["v1"].verdict is Verdict.UNHAPPY
        assert (verdicts["v1"].same, verdicts["v1"].diff) == (2, 0)

    def test_star_centre_stays_pending(self, star_generator):
        colouring = PartialColouring({"c": 1, **{f"l{i}": 2 for i in range(5)}})
        verdict = certify(star_generator, colouring, ["c"], horizon=5)["c"]
        assert verdict.verdict is Verdict.PENDING
        assert verdict.guaranteed_opposite is None


class TestRunPrefix:
    @pytest.fixture(scope="class")
    def path_certificate(self):
        return run_prefix(config(instantiate_generator({"family": "path"}), "v0"))

    def test_path(self, path_certificate):
        assert path_certificate.gx_differs_from_cx
        assert path_certificate.order == tuple(f"v{i}" for i in range(10))
        assert path_certificate.summary()["unhappy"] == 0
        assert path_certificate.verdicts["v9"].verdict is Verdict.PENDING
        assert all(
            path_certificate.verdicts[f"v{i}"].verdict is Verdict.HAPPY for i in range(9)
        )
        assert path_certificate.instance_sizes == tuple(range(1, 31))

    def test_certificate_document(self, path_certificate):
        data = path_certificate.as_dict()
        assert data["gxDiffersFromCx"] is True
        assert data["sublists"]["v0"] == [2, 3]
        assert data["summary"] == {"happy": 9, "unhappy": 0, "pending": 1}
        assert len(data["configHash"]) == 64

    def test_tree(self, tree_generator):
        certificate = run_prefix(config(tree_generator, "t", horizon=40, prefix=5))
        assert certificate.summary()["unhappy"] == 0
        assert certificate.verdicts["t"].verdict is Verdict.HAPPY

    def test_star(self, star_generator):
        certificate = run_prefix(config(star_generator, "c", horizon=30, prefix=5))
        centre = certificate.verdicts["c"]
        assert centre.verdict is Verdict.PENDING
        assert centre.guaranteed_opposite is not None
        assert certificate.colouring["c"] != 1
        assert certificate.summary()["unhappy"] == 0

    def test_star_opposite_count_grows_with_horizon(self, star_generator):
        centres = [
            run_prefix(config(star_generator, "c", horizon=n, prefix=5)).verdicts["c"]
            for n in (30, 60)
        ]
        assert centres[0].guaranteed_opposite is not None
        assert centres[0].guaranteed_opposite <= centres[1].guaranteed_opposite

    def test_with_closed_A(self, path_generator):
        cfg = config(path_generator, "v2", A=frozenset({"v0"}), h=PartialColouring({"v0": 3}))
        certificate = run_prefix(cfg)
        assert certificate.colouring["v0"] == 3
        assert certificate.order[0] == "v2"
        assert certificate.summary()["unhappy"] == 0

    def test_deterministic(self, grid_generator):
        first = run_prefix(config(grid_generator, "0,0", horizon=20, prefix=5))
        second = run_prefix(config(grid_generator, "0,0", horizon=20, prefix=5))
        assert first.as_dict() == second.as_dict()

    def test_threads_agree(self, grid_generator):
        serial = run_prefix(config(grid_generator, "0,0", horizon=20, prefix=5))
        threaded = run_prefix(config(grid_generator, "0,0", horizon=20, prefix=5, threads=4))
        assert serial.as_dict() == threaded.as_dict()

    def test_compare_horizon(self, path_generator):
        certificate = run_prefix(config(path_generator, "v0", horizon=20), compare_horizon=40)
        stabilization = certificate.stabilization
        assert stabilization["horizons"] == [20, 40]
        assert stabilization["identical"] is (stabilization["firstDifference"] is None)

    def test_audit_rejects_excluded_colour(self, path_certificate, path_generator):
        tampered = dataclasses.replace(path_certificate, c_x=path_certificate.colouring["v0"])
        with pytest.raises(VerificationError) as exc_info:
            audit_certificate(path_generator, tampered)
        assert exc_info.value.code == "excluded_colour"

    def test_audit_rejects_wrong_verdict(self, path_certificate, path_generator):
        verdicts = dict(path_certificate.verdicts)
        verdicts["v1"] = dataclasses.replace(verdicts["v1"], verdict=Verdict.UNHAPPY)
        tampered = dataclasses.replace(path_certificate, verdicts=verdicts)
        with pytest.raises(VerificationError) as exc_info:
            audit_certificate(path_generator, tampered)
        assert exc_info.value.code == "unsound"


class TestLargeHorizon:
    """Horizon 500 with a prefix of 50, compared against horizon 1000."""

    @pytest.mark.parametrize(
        ["spec", "x"],
        [
            ({"family": "path"}, "v0"),
            ({"family": "regular-tree", "params": {"degree": 3}}, "t"),
            ({"family": "star-aleph0"}, "c"),
        ],
    )
    def test_no_unhappy_vertex(self, spec, x, caplog):
        graph = instantiate_generator(spec)
        cfg = config(graph, x, horizon=500, prefix=50, neighbour_horizon=1000)
        certificate = run_prefix(cfg, compare_horizon=1000)

        assert certificate.gx_differs_from_cx
        assert certificate.summary()["unhappy"] == 0
        assert len(certificate.order) == 50
        stabilization = certificate.stabilization
        assert stabilization["horizons"] == [500, 1000]
        warned = [r for r in caplog.records if r.getMessage().startswith("Prefix differs")]
        if stabilization["identical"]:
            assert not warned
        else:
            assert f"at index {stabilization['firstDifference']}" in warned[0].getMessage()


def test_solve_instances_are_audited(path_generator):
    batch = build_instances(config(path_generator, "v0", horizon=8, prefix=3))
    results = solve_instances(batch)
    assert [r.colouring.domain for r in results] == [
        frozenset(batch.b_order[:n]) for n in range(1, 9)
    ]


def test_compare_prefixes():
    assert compare_prefixes([1, 2, 3], [1, 2, 3]) is None
    assert compare_prefixes([1, 2, 3], [1, 3, 3]) == 1
