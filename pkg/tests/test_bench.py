import math

import pytest

from starcount.bench import budget_spread, rows_to_csv, run_bench, skew_table, theoretical_budget
from starcount.errors import InvalidArgumentError
from starcount.exact import exact_star_count


def test_skew_table_shape():
    t = skew_table(100, 400, 50)
    assert t.n == 100 and t.rows == 400 and t.counts[0] == 50
    assert set(t.counts[1:].tolist()) <= {3, 4}


def test_skew_table_infeasible():
    with pytest.raises(InvalidArgumentError):
        skew_table(100, 50, 2)


def test_budget_formula():
    # W log n loglog n / (eps^2 sqrt(S)) with n = 16: 4 * 2 = 8
    assert theoretical_budget(100, 16, 2, 0.5, 400) == pytest.approx(100 * 8 / (0.25 * 20))
    assert theoretical_budget(100, 16, 2, 0.5, 0) == math.inf


def test_rows_sorted_and_deterministic():
    sweep = {"p": 2, "epsilon": 0.5, "tables": [
        {"id": "b", "n": 60, "W": 300, "heavy": 40},
        {"id": "a", "n": 60, "W": 300, "heavy": 100},
    ], "graphs": [{"id": "c", "family": "er", "params": {"n": 50, "m": 150}, "seed": 2}]}
    rows = run_bench(sweep, trials=2, seed=5)
    assert [(r.instance, r.seed) for r in rows] == [("a", 5), ("a", 6), ("b", 5), ("b", 6), ("c", 5), ("c", 6)]
    assert rows_to_csv(rows) == rows_to_csv(run_bench(sweep, trials=2, seed=5))
    for r in rows:
        assert r.wall_time is None
        assert r.exact > 0 and r.queries > 0


def test_exact_column_matches_oracle():
    rows = run_bench({"p": 2, "epsilon": 0.5, "tables": [{"id": "x", "n": 40, "W": 200, "heavy": 20}]})
    assert rows[0].exact == exact_star_count(skew_table(40, 200, 20), 2)


def test_spread():
    rows = run_bench({"p": 2, "epsilon": 0.5, "tables": [
        {"id": f"h{h}", "n": 200, "W": 800, "heavy": h} for h in (5, 100, 500)
    ]})
    assert 1 <= budget_spread(rows) < 50
