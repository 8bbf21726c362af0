"""Test configuration and fixtures for latticefactor."""

import json
import sys
from pathlib import Path

import pytest

# Add the project source to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from latticefactor.config import Config, EngineConfig
from latticefactor.families import (
    boolean_lattice,
    hexagon_lattice,
    partition_lattice,
    pi_n_atom_partition,
    two_chains_poset,
)
from latticefactor.graph_forest import Graph, complete_graph, cycle_graph, path_graph


# Test markers
def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers",
        "slow: mark tests that run exhaustive sweeps or acceptance-sized inputs"
    )
    config.addinivalue_line(
        "markers",
        "integration: mark tests that run whole pipelines"
    )
    config.addinivalue_line(
        "markers",
        "e2e: mark tests as end-to-end tests"
    )


@pytest.fixture(scope="session")
def pi3():
    """Partition lattice of {1, 2, 3}."""
    return partition_lattice(3)


@pytest.fixture(scope="session")
def pi4():
    """Partition lattice of {1, 2, 3, 4}."""
    return partition_lattice(4)


@pytest.fixture(scope="session")
def pi4_partition(pi4):
    """Atoms grouped by larger entry: ({12}, {13, 23}, {14, 24, 34})."""
    return pi_n_atom_partition(4, pi4)


@pytest.fixture(scope="session")
def boolean3():
    return boolean_lattice(3)


@pytest.fixture(scope="session")
def hexagon():
    """Two disjoint chains of length three glued at 0̂ and 1̂."""
    return hexagon_lattice()


@pytest.fixture
def two_chains():
    return two_chains_poset()


@pytest.fixture
def engine_config() -> EngineConfig:
    """Small budgets so that fallbacks are exercised quickly."""
    return EngineConfig(product_budget=2000, isomorphism_budget=200)


@pytest.fixture
def triangle() -> Graph:
    return complete_graph(3)


@pytest.fixture
def path3() -> Graph:
    """Path 1 - 2 - 3."""
    return path_graph(3)


@pytest.fixture
def bent_path() -> Graph:
    """Path 1 - 3 - 2: vertex 3 sees two earlier, non-adjacent neighbours."""
    return Graph.from_edges(3, [(1, 3), (2, 3)])


@pytest.fixture
def square() -> Graph:
    return cycle_graph(4)


@pytest.fixture
def config_file(tmp_path: Path) -> Path:
    """Default configuration saved to a temporary file."""
    path = tmp_path / "config.json"
    Config().save(path)
    return path


@pytest.fixture
def write_json(tmp_path: Path):
    """Write a JSON document into the temporary directory and return its path."""
    def _write(name: str, data) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return _write
