import itertools
from pathlib import Path

import numpy as np
import pytest

from ssatune import kernels
from ssatune.ising import IsingModel, WeightedGraph

FIXTURES = Path(__file__).parent / "fixtures"

BACKENDS = ["python"] + (["cython"] if kernels.compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def triangle():
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], name="triangle")


def brute_force_maxcut(graph):
    """Exhaustive maximum cut; node 0 is pinned to side 0 (cut is sign-symmetric)."""
    n = graph.n
    states = np.array(list(itertools.product((0, 1), repeat=n - 1)), dtype=np.int8)
    sides = np.hstack([np.zeros((len(states), 1), dtype=np.int8), states])
    crossing = sides[:, graph.u] != sides[:, graph.v]
    cuts = crossing.astype(np.float64) @ graph.w
    return float(cuts.max())


def dense_energy(J, h, sigma):
    """O(n^2) double loop, each unordered pair once."""
    n = len(h)
    e = 0.0
    for i in range(n):
        e -= h[i] * sigma[i]
        for j in range(i + 1, n):
            e -= J[i][j] * sigma[i] * sigma[j]
    return e


def random_model(n, seed, density=0.6, integer=False, with_h=True):
    rng = np.random.default_rng(seed)
    if integer:
        J = rng.integers(-3, 4, size=(n, n)).astype(float)
    else:
        J = rng.normal(size=(n, n))
    J = np.triu(J * (rng.random((n, n)) < density), 1)
    J = J + J.T
    h = (rng.integers(-2, 3, n).astype(float) if integer else rng.normal(size=n)) if with_h else np.zeros(n)
    return IsingModel.from_dense(J, h), J, h


def random_spins(n, rng):
    return rng.choice(np.array([-1, 1], dtype=np.int8), size=n)


def random_graph(n, seed, weights=(-1.0, 0.0, 1.0), density=0.5):
    rng = np.random.default_rng(seed)
    u, v = np.triu_indices(n, 1)
    keep = rng.random(len(u)) < density
    w = rng.choice(np.asarray(weights), size=int(keep.sum()))
    return WeightedGraph(n, u[keep], v[keep], w, name=f"r{n}_{seed}")


def g1_degree_profile():
    """800 nodes, degrees in [27, 67]: circulant of degree 27 plus a 40-leaf star on node 0."""
    n = 800
    edges = set()
    for i in range(n):
        for off in list(range(1, 14)) + [400]:
            j = (i + off) % n
            edges.add((min(i, j), max(i, j)))
    for j in range(100, 140):
        edges.add((0, j))
    u, v = np.array(sorted(edges)).T
    return WeightedGraph(n, u, v, np.ones(len(u)))


# Acceptance summary: test_acceptance.py appends (criterion, status, message).
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, msg in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {num}: {status} {msg}")
