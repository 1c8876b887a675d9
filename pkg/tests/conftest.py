import numpy as np
import pytest

from starcount.instances import gen_complete, gen_erdos_renyi, gen_star, gen_table
from starcount.oracle import Graph


@pytest.fixture
def p3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4():
    return gen_complete(4)


def small_corpus():
    """Graphs (n <= 100) and tables (<= 100 labels) used by exhaustive checks."""
    rng = np.random.default_rng(2024)
    items = []
    for i in range(30):
        n = int(rng.integers(5, 101))
        m = int(rng.integers(1, min(n * (n - 1) // 2, 4 * n) + 1))
        items.append((f"er-{i}", gen_erdos_renyi(n, m, seed=1000 + i)))
    items += [("star-30", gen_star(30, 5)), ("k10", gen_complete(10)),
              ("p3", Graph.from_edges(3, [(0, 1), (1, 2)]))]
    for i in range(20):
        labels = int(rng.integers(1, 101))
        counts = rng.integers(1, 60, size=labels)
        if i % 4 == 0:
            counts[0] = 500
        items.append((f"table-{i}", gen_table(counts.tolist())))
    return items
