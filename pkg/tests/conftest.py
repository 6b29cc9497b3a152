import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure project root (containing src/) is on path
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.ingestion import graph_from_triples  # noqa: E402

# Four vertices by position: tl/tr on top, bl/br below; ids follow label
# order, so bl=0, br=1, tl=2, tr=3.
SQUARE_TRIPLES = [
    ("tl", "tr", 1),
    ("tr", "br", -1),
    ("br", "bl", 1),
    ("bl", "tl", 1),
    ("tl", "br", -1),
]

DATA_DIR = ROOT / "tests" / "data"


@pytest.fixture
def square():
    return graph_from_triples(SQUARE_TRIPLES)


@pytest.fixture
def square_file():
    return DATA_DIR / "square.txt"


@pytest.fixture
def triangle():
    """One negative edge: unbalanced, frustration index 1"""
    return graph_from_triples([("a", "b", 1), ("b", "c", 1), ("a", "c", -1)])


@pytest.fixture
def k5():
    return graph_from_triples(
        [(i, j, 1) for i in range(1, 6) for j in range(i + 1, 6)]
    )


def random_connected_graph(rng: np.random.Generator, n: int, extra: int):
    """Random tree on n vertices plus up to ``extra`` more edges, random signs"""
    triples = {}
    for v in range(1, n):
        u = int(rng.integers(v))
        triples[(u, v)] = 1 if rng.random() < 0.5 else -1
    for _ in range(extra):
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        triples.setdefault((u, v), 1 if rng.random() < 0.5 else -1)
    return graph_from_triples([(u, v, s) for (u, v), s in triples.items()])


def small_random_graphs(count: int = 100, max_vertices: int = 7, seed: int = 20240611):
    rng = np.random.default_rng(seed)
    graphs = []
    for _ in range(count):
        n = int(rng.integers(2, max_vertices + 1))
        graphs.append(random_connected_graph(rng, n, int(rng.integers(0, n + 2))))
    return graphs


@pytest.fixture(scope="session")
def random_graphs():
    return small_random_graphs()


@pytest.fixture(scope="session")
def eight_vertex_graphs():
    return small_random_graphs(30, max_vertices=8, seed=7)
