"""Query-count sweeps against the O(W log n log log n / (eps^2 S_p^(1/p))) budget.

A sweep is a JSON-compatible dict::

    {"p": 2, "epsilon": 0.25,
     "tables": [{"id": "skew-2", "n": 20000, "W": 40000, "heavy": 2}, ...],
     "graphs": [{"id": "er", "family": "er", "params": {...}, "seed": 1}, ...]}

Each table entry is a column with ``n`` labels and ``W`` rows in which one
label holds ``heavy`` rows and the rest are spread as evenly as possible.
Rows come back sorted by (instance id, seed), so output bytes do not depend
on execution order.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import time

from .errors import InvalidArgumentError
from .estimator import EstimatorParams, count_stars
from .exact import exact_star_count
from .instances import GeneratorSpec, gen_table
from .oracle import as_weighted_oracle, make_rng

BENCH_FIELDS = [
    "instance", "n", "W", "p", "epsilon", "exact", "estimate", "rel_error",
    "queries", "budget", "budget_ratio", "iterations", "seed", "wall_time",
]


@dataclasses.dataclass
class BenchRow:
    instance: str
    n: int
    W: int
    p: int
    epsilon: float
    exact: int
    estimate: float
    rel_error: float | None
    queries: int
    budget: float
    budget_ratio: float
    iterations: int
    seed: int
    wall_time: float | None = None

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def theoretical_budget(W: int, n: int, p: int, epsilon: float, s_p: int) -> float:
    """W log n log log n / (eps^2 S_p^(1/p)), logs base 2; inf when S_p = 0."""
    if s_p <= 0:
        return math.inf
    n = max(n, 4)
    return W * math.log2(n) * math.log2(math.log2(n)) / (epsilon**2 * s_p ** (1.0 / p))


def skew_table(n: int, W: int, heavy: int):
    """Column of n labels and W rows; label 0 holds ``heavy`` rows."""
    rest = W - heavy
    if n < 1 or heavy < 1 or rest < n - 1 or (n == 1 and rest):
        raise InvalidArgumentError(f"cannot spread {rest} rows over {n - 1} labels")
    counts = [heavy]
    if n > 1:
        base, extra = divmod(rest, n - 1)
        counts += [base + 1] * extra + [base] * (n - 1 - extra)
    return gen_table(counts)


def default_sweep() -> dict:
    """Fixed n = 20000, W = 40000; S_2 runs from about 2e4 to 2e8."""
    return {
        "p": 2,
        "epsilon": 0.25,
        "tables": [
            {"id": f"skew-{h:05d}", "n": 20000, "W": 40000, "heavy": h}
            for h in (2, 300, 2000, 6300, 20001)
        ],
    }


def _instances(sweep: dict):
    for entry in sweep.get("tables", []):
        yield entry["id"], skew_table(entry["n"], entry["W"], entry["heavy"])
    for entry in sweep.get("graphs", []):
        spec = GeneratorSpec(entry["family"], entry.get("params", {}), entry.get("seed", 0))
        yield entry["id"], spec.build()


def run_bench(sweep: dict | None = None, trials: int = 1, seed: int = 0, timing: bool = False) -> list[BenchRow]:
    sweep = default_sweep() if sweep is None else sweep
    p = int(sweep.get("p", 2))
    eps = float(sweep.get("epsilon", 0.25))
    rows = []
    for inst_id, source in _instances(sweep):
        exact = exact_star_count(source, p)
        for t in range(trials):
            trial_seed = seed + t
            oracle = as_weighted_oracle(source)
            params = EstimatorParams(p, eps, seed=trial_seed)
            start = time.perf_counter()
            report = count_stars(oracle, params, rng=make_rng(trial_seed))
            elapsed = time.perf_counter() - start
            W = oracle.total_weight()
            budget = theoretical_budget(W, oracle.n_items, p, params.epsilon, exact)
            queries = report.ledger.total()
            rows.append(BenchRow(
                instance=inst_id, n=oracle.n_items, W=W, p=p, epsilon=params.epsilon,
                exact=exact, estimate=report.estimate,
                rel_error=abs(report.estimate - exact) / exact if exact else None,
                queries=queries, budget=budget,
                budget_ratio=queries / budget if budget not in (0, math.inf) else math.nan,
                iterations=report.iterations, seed=trial_seed,
                wall_time=round(elapsed, 6) if timing else None,
            ))
    rows.sort(key=lambda r: (r.instance, r.seed))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        d = row.as_dict()
        writer.writerow({k: ("" if d[k] is None else repr(d[k]) if isinstance(d[k], float) else d[k]) for k in BENCH_FIELDS})
    return buf.getvalue()


def budget_spread(rows) -> float:
    """max over rows of queries/budget divided by the min."""
    ratios = [r.budget_ratio for r in rows if math.isfinite(r.budget_ratio)]
    return max(ratios) / min(ratios)
