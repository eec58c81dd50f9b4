from __future__ import annotations

from pathlib import Path

import pytest

from majority_choosability.choosability.generators import instantiate_generator
from majority_choosability.choosability.graphs import FiniteGraph, ListSystem
from tests.utils import graph_from_edges, write_json

HERE = Path(__file__).parent


@pytest.fixture()
def k2() -> FiniteGraph:
    return graph_from_edges(["ab"])


@pytest.fixture()
def triangle() -> FiniteGraph:
    return graph_from_edges(["ab", "bc", "ac"])


@pytest.fixture()
def path3() -> FiniteGraph:
    """The path a - b - c."""
    return graph_from_edges(["ab", "bc"])


@pytest.fixture()
def c4() -> FiniteGraph:
    return graph_from_edges(["ab", "bc", "cd", "da"])


@pytest.fixture()
def c5() -> FiniteGraph:
    return graph_from_edges(["ab", "bc", "cd", "de", "ea"])


@pytest.fixture()
def k4() -> FiniteGraph:
    return graph_from_edges(["ab", "ac", "ad", "bc", "bd", "cd"])


@pytest.fixture()
def star3() -> FiniteGraph:
    """K_{1,3} with centre c and leaves x, y, z."""
    return graph_from_edges(["cx", "cy", "cz"])


@pytest.fixture()
def path_generator():
    """The one-way infinite path v0 - v1 - v2 - ..."""
    return instantiate_generator({"family": "path"})


@pytest.fixture()
def star_generator():
    """Centre ``c`` of infinite degree with leaves l0, l1, ..."""
    return instantiate_generator({"family": "star-aleph0"})


@pytest.fixture()
def tree_generator():
    return instantiate_generator({"family": "regular-tree", "params": {"degree": 3}})


@pytest.fixture()
def grid_generator():
    return instantiate_generator({"family": "grid"})


@pytest.fixture()
def three_lists() -> ListSystem:
    """Every vertex gets the list {1, 2, 3}."""
    return ListSystem(default=[1, 2, 3])


@pytest.fixture()
def json_file(tmp_path):
    """Write a JSON document to a temporary file and return its path."""

    def _write(name, data):
        return write_json(tmp_path / name, data)

    return _write
