import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import state
from graphs import Graph, PlantedCoverInstance, PlantedCoverParams

# LP solves make single examples slow, and timings vary a lot between machines.
settings.register_profile(
    "signalgame", deadline=None, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("signalgame")


@pytest.fixture(autouse=True)
def reset_truth_audit():
    state.truth_files_opened.clear()
    yield
    state.truth_files_opened.clear()


def complete_graph(n: int) -> Graph:
    return Graph.from_dense(~np.eye(n, dtype=bool))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def instance_with_cliques(n: int, cliques: list[set[int]]) -> PlantedCoverInstance:
    """An instance on an empty background whose only edges are the given cliques."""
    edges = [(u, v) for clique in cliques for u in clique for v in clique if u < v]
    return PlantedCoverInstance(
        graph=Graph.from_edges(n, edges),
        background=Graph(n),
        planted_cliques=[frozenset(c) for c in cliques],
        params=PlantedCoverParams(n, 0.5, max(len(c) for c in cliques), len(cliques)),
        seed=0)
