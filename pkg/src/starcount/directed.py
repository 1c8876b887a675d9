"""Directed 2-paths and two-table join sizes under a bounded degree ratio.

For a vertex v let l(v) = in(v) * out(v); the number of directed 2-paths is
L = sum l(v). When every non-isolated vertex has 1/r <= in/out <= r, a
vertex can be drawn with probability sqrt(l(v)) / L' (L' = sum sqrt(l)) by
rejection: take the tail u of a uniform arc (so u is drawn in proportion to
out(u)) and keep it with probability sqrt(in(u) / (r out(u))). Then
Y = sqrt(l(v)) * L' is unbiased for L.

The same machinery estimates a join size sum x_i y_i between two columns,
with x as in-degree and y as out-degree (see :func:`join_size_exact_mapping`).
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .errors import EmptySourceError, InvalidArgumentError, RatioViolationError
from .estimator import EstimateReport, EstimatorParams, count_stars
from .oracle import IN, OUT, Graph, QueryLedger, TableColumn, as_weighted_oracle, make_rng


class DigraphOracle:
    """Arc-tail sampling plus in/out degree lookups on a directed graph.

    Draws are unmetered; callers :meth:`charge` the attempts they actually
    use (one random-edge query and two degree queries each).
    """

    def __init__(self, graph: Graph, ledger: QueryLedger | None = None):
        if not graph.directed:
            raise InvalidArgumentError("need a directed graph")
        self.graph = graph
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.n_items = graph.n

    def draw(self, rng, size):
        if self.graph.m == 0:
            raise EmptySourceError("graph has no arcs")
        tails = self.graph.tails[rng.integers(self.graph.m, size=size)]
        return tails, self.graph.degrees(IN)[tails], self.graph.degrees(OUT)[tails]

    def charge(self, attempts: int) -> None:
        self.ledger.random_edge_queries += attempts
        self.ledger.degree_queries += 2 * attempts

    def degree_scan(self):
        """(in, out) degree arrays; a full scan, for validation only."""
        return self.graph.degrees(IN), self.graph.degrees(OUT)


class JoinOracle:
    """Two columns viewed as a digraph: in(i) = x_i, out(i) = y_i.

    Items are the union of both label sets. Sampling a uniform row of the
    second column draws label i with probability y_i / |rows|, the analogue
    of taking a uniform arc's tail.
    """

    def __init__(self, t_in: TableColumn, t_out: TableColumn, ledger: QueryLedger | None = None):
        self.t_in = t_in
        self.t_out = t_out
        self.ledger = ledger if ledger is not None else QueryLedger()
        labels = list(t_out.labels)
        seen = set(labels)
        labels.extend(lab for lab in t_in.labels if lab not in seen)
        self.labels = labels
        self.n_items = len(labels)
        self._x = np.array([t_in.count_of(lab) for lab in labels], dtype=np.int64)
        self._y = np.array([t_out.count_of(lab) for lab in labels], dtype=np.int64)

    def draw(self, rng, size):
        if self.t_out.rows == 0:
            raise EmptySourceError("second column has no rows")
        # t_out's labels come first in the union, so its indices carry over
        items = self.t_out.row_to_label(rng.integers(self.t_out.rows, size=size))
        return items, self._x[items], self._y[items]

    def charge(self, attempts: int) -> None:
        self.ledger.row_samples += attempts
        self.ledger.magnitude_queries += 2 * attempts

    def degree_scan(self):
        return self._x, self._y


def join_size_exact_mapping(t1: TableColumn, t2: TableColumn) -> JoinOracle:
    """View a join of ``t1`` and ``t2`` as a digraph whose L is sum x_i y_i.

    Labels missing from one column count 0 there and contribute nothing.
    """
    return JoinOracle(t1, t2)


def _as_directed_oracle(source):
    if isinstance(source, (DigraphOracle, JoinOracle)):
        return source
    if isinstance(source, Graph):
        return DigraphOracle(source)
    raise InvalidArgumentError(f"cannot sample 2-paths from {type(source).__name__}")


def check_ratio_bound(source, r: float) -> dict:
    """Full scan of 1/r <= in/out <= r over non-isolated vertices.

    Returns ``{"above": [...], "below": [...], "sinks": [...], "sources": [...]}``:
    vertices with in > r*out (these make the sampler fail), in*r < out
    (under-sampled but harmless), and those with out = 0 or in = 0 only.
    """
    oracle = _as_directed_oracle(source)
    ind, outd = (np.asarray(a) for a in oracle.degree_scan())
    both = (ind > 0) & (outd > 0)
    return {
        "above": np.flatnonzero(both & (ind > r * outd)).tolist(),
        "below": np.flatnonzero(both & (r * ind < outd)).tolist(),
        "sinks": np.flatnonzero((ind > 0) & (outd == 0)).tolist(),
        "sources": np.flatnonzero((ind == 0) & (outd > 0)).tolist(),
    }


def max_degree_ratio(source) -> float:
    """Smallest r for which the graph satisfies the ratio bound."""
    oracle = _as_directed_oracle(source)
    ind, outd = (np.asarray(a, dtype=float) for a in oracle.degree_scan())
    both = (ind > 0) & (outd > 0)
    if not both.any():
        return 1.0
    ratio = ind[both] / outd[both]
    return float(max(ratio.max(), (1 / ratio).max(), 1.0))


@dataclasses.dataclass
class SqrtSample:
    items: np.ndarray
    l_values: np.ndarray
    attempts: int

    @property
    def rejected(self) -> int:
        return self.attempts - len(self.items)


def sqrt_weighted_batch(source, r: float, count: int, rng=None, max_attempts: int | None = None) -> SqrtSample:
    """``count`` vertices drawn i.i.d. with probability sqrt(l(v)) / L'.

    Only attempts up to the ``count``-th acceptance are charged to the ledger.
    Raises :class:`RatioViolationError` on a drawn tail with in > r * out.
    """
    if r < 1:
        raise InvalidArgumentError(f"r must be >= 1, got {r}")
    oracle = _as_directed_oracle(source)
    rng = make_rng(rng)
    if max_attempts is None:
        max_attempts = max(1000, int(100 * r * count) + 1000)
    items, lvals = [], []
    have = attempts = 0
    while have < count:
        if attempts >= max_attempts:
            oracle.charge(attempts)
            raise InvalidArgumentError(
                f"no acceptance after {attempts} attempts; is every l(v) zero?"
            )
        size = min(max(64, int(1.5 * math.sqrt(r) * (count - have)) + 16), max_attempts - attempts)
        tails, ind, outd = oracle.draw(rng, size)
        u = rng.random(size)
        accept = u * u * r * outd < ind
        used = size
        if have + int(accept.sum()) >= count:
            used = int(np.flatnonzero(accept)[count - have - 1]) + 1
        bad = ind[:used] > r * outd[:used]
        if bad.any():
            i = int(np.argmax(bad))
            oracle.charge(attempts + i + 1)
            raise RatioViolationError(int(tails[i]), int(ind[i]), int(outd[i]), r)
        acc = np.flatnonzero(accept[:used])
        items.append(tails[acc])
        lvals.append(ind[acc] * outd[acc])
        have += len(acc)
        attempts += used
    oracle.charge(attempts)
    return SqrtSample(np.concatenate(items), np.concatenate(lvals), attempts)


def sqrt_weighted_sample(source, r: float, rng=None) -> tuple[int, int]:
    """One vertex with probability sqrt(l(v)) / L', and its l(v)."""
    s = sqrt_weighted_batch(source, r, 1, rng)
    return int(s.items[0]), int(s.l_values[0])


@dataclasses.dataclass
class Path2Report:
    estimate: float
    l_prime: float
    r: float
    epsilon: float
    k: int
    accepted: int
    rejected: int
    ledger: QueryLedger
    seed: int | None = None
    l_prime_source: str = "supplied"
    warnings: list = dataclasses.field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "L_prime": self.l_prime,
            "L_prime_source": self.l_prime_source,
            "r": self.r,
            "epsilon": self.epsilon,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "queries": self.ledger.as_dict(),
            "seed": self.seed,
            "warnings": list(self.warnings),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def path2_sample_count(n: int, epsilon: float) -> int:
    """k = ceil(3 sqrt(n) / eps^2)."""
    return max(1, math.ceil(3 * math.sqrt(n) / epsilon**2))


def estimate_path2(source, r: float, epsilon: float, l_prime: float, rng=None, *,
                   seed: int | None = None, validate: bool = False, strict: bool = False,
                   trials: int = 1, l_prime_source: str = "supplied") -> Path2Report:
    """(1 +- eps)-approximation of L with probability 2/3, from O(r sqrt(n)) queries.

    ``l_prime`` must be L' = sum sqrt(l(v)); the estimator does not compute
    it. L' = 0 means L = 0 and returns 0 without sampling. With
    ``validate`` the degree sequence is scanned first and ratio-bound
    violations are reported as warnings (or raised, with ``strict``).
    ``trials > 1`` returns the median of that many independent averages.
    """
    oracle = _as_directed_oracle(source)
    if not 0 < epsilon:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    if l_prime < 0 or math.isnan(l_prime):
        raise InvalidArgumentError(f"L' must be nonnegative, got {l_prime}")
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if rng is None:
        rng = seed
    rng = make_rng(rng)
    before = oracle.ledger.copy()
    warnings = []
    if validate or strict:
        found = check_ratio_bound(oracle, r)
        for kind in ("above", "below", "sinks", "sources"):
            if found[kind]:
                warnings.append(f"ratio bound r={r} violated ({kind}): vertices {found[kind][:10]}")
        if strict and warnings:
            ind, outd = oracle.degree_scan()
            v = next(found[kind][0] for kind in ("above", "below", "sinks", "sources") if found[kind])
            raise RatioViolationError(v, int(ind[v]), int(outd[v]), r)
    k = path2_sample_count(oracle.n_items, epsilon)
    report = Path2Report(0.0, float(l_prime), r, epsilon, k, 0, 0, QueryLedger(), seed,
                         l_prime_source, warnings)
    if l_prime == 0:
        return report
    means = []
    for _ in range(trials):
        s = sqrt_weighted_batch(oracle, r, k, rng)
        means.append(float(np.mean(np.sqrt(s.l_values.astype(float)))) * l_prime)
        report.accepted += len(s.items)
        report.rejected += s.rejected
    report.estimate = float(np.median(means))
    report.ledger = oracle.ledger - before
    return report


def exactly_in_out_stars(graph: Graph, p: int, side: str, params: EstimatorParams, rng=None) -> EstimateReport:
    """S_p over in-degrees (``side="in"``) or out-degrees (``side="out"``)."""
    if not graph.directed:
        raise InvalidArgumentError("need a directed graph")
    if side not in (IN, OUT):
        raise InvalidArgumentError(f"side must be 'in' or 'out', got {side!r}")
    if params.p != p:
        params = dataclasses.replace(params, p=p, warnings=list(params.warnings))
    return count_stars(as_weighted_oracle(graph, side), params, rng=rng)
