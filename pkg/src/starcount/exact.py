"""Brute-force ground truth, in exact integer arithmetic.

Nothing here is clever on purpose: these scans are the reference the
estimators are checked against.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from fractions import Fraction

from .errors import InvalidArgumentError
from .oracle import IN, OUT, UNDIRECTED, Graph, TableColumn

ENUMERATION_LIMIT = 10**7


def _magnitudes(source, side=UNDIRECTED):
    if isinstance(source, TableColumn):
        return source.counts.tolist()
    if isinstance(source, Graph):
        return source.degrees(side).tolist()
    return [int(x) for x in source]


def exact_star_count(source, p: int, side: str | None = None) -> int:
    """S_p = sum of C(x, p) over the degrees (or counts) of ``source``.

    ``source`` may be a graph, a table column, or a plain sequence of
    magnitudes. Directed graphs need ``side`` ("in" or "out").
    """
    if p < 2:
        raise InvalidArgumentError(f"p must be >= 2, got {p}")
    if isinstance(source, Graph) and side is None:
        side = UNDIRECTED
    return sum(math.comb(x, p) for x in _magnitudes(source, side))


def exact_star_count_by_enumeration(graph: Graph, p: int) -> int:
    """Count p-stars by listing every p-subset of every neighborhood.

    Refuses (``InvalidArgumentError``) when more than ``ENUMERATION_LIMIT``
    subsets would be listed.
    """
    if graph.directed:
        raise InvalidArgumentError("enumeration is defined for undirected graphs")
    if p < 2:
        raise InvalidArgumentError(f"p must be >= 2, got {p}")
    budget = 0
    for d in graph.degrees().tolist():
        budget += math.comb(d, p)
        if budget > ENUMERATION_LIMIT:
            raise InvalidArgumentError(f"enumeration would exceed {ENUMERATION_LIMIT} subsets")
    stars = set()
    for center in range(graph.n):
        leaves = sorted(graph.neighbors(center).tolist())
        for subset in itertools.combinations(leaves, p):
            stars.add((center, subset))
    return len(stars)


def exact_path2_count(graph: Graph) -> int:
    """L = sum of in-degree times out-degree over all vertices."""
    if not graph.directed:
        raise InvalidArgumentError("directed 2-paths need a directed graph")
    ind, outd = graph.degrees(IN).tolist(), graph.degrees(OUT).tolist()
    return sum(a * b for a, b in zip(ind, outd))


def exact_path2_by_enumeration(graph: Graph) -> int:
    """Count arc pairs (u, v), (v, w) by walking adjacency lists.

    A 2-cycle u -> v -> u counts as a path, as it does in sum in * out.
    """
    if not graph.directed:
        raise InvalidArgumentError("directed 2-paths need a directed graph")
    total = 0
    for v in range(graph.n):
        ins = graph.neighbors(v, IN).tolist()
        outs = graph.neighbors(v, OUT).tolist()
        total += sum(1 for u in ins for w in outs)
    return total


def exact_join_cardinality(t1: TableColumn, t2: TableColumn) -> int:
    """sum over shared labels of x_i * y_i."""
    return sum(int(c) * t2.count_of(lab) for lab, c in zip(t1.labels, t1.counts.tolist()))


def exact_self_join_cardinality(t: TableColumn) -> int:
    """sum of x_i^2, the row count of the equi-join of a column with itself."""
    return sum(c * c for c in t.counts.tolist())


def self_join_to_s2(cardinality: int, rows: int) -> int:
    """Convert sum x_i^2 to S_2 = sum C(x_i, 2) = (sum x^2 - sum x) / 2."""
    return (cardinality - rows) // 2


def l_prime(graph: Graph) -> float:
    """L' = sum of sqrt(in-degree * out-degree)."""
    ind, outd = graph.degrees(IN).tolist(), graph.degrees(OUT).tolist()
    return math.fsum(math.sqrt(a * b) for a, b in zip(ind, outd))


@dataclasses.dataclass
class ExactCounts:
    n: int
    m: int
    star_counts: dict
    path2: int | None = None
    self_join_cardinality: int | None = None
    degree_histogram: dict = dataclasses.field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "S_p": {str(p): v for p, v in self.star_counts.items()},
            "degree_histogram": {str(d): c for d, c in sorted(self.degree_histogram.items())},
        }
        if self.path2 is not None:
            out["L"] = self.path2
        if self.self_join_cardinality is not None:
            out["self_join_cardinality"] = self.self_join_cardinality
        return out


def exact_counts(source, ps=(2,)) -> ExactCounts:
    """Gather every exact quantity this package knows about ``source``."""
    if isinstance(source, TableColumn):
        hist: dict = {}
        for c in source.counts.tolist():
            hist[c] = hist.get(c, 0) + 1
        return ExactCounts(
            n=source.n, m=source.rows,
            star_counts={p: exact_star_count(source, p) for p in ps},
            self_join_cardinality=exact_self_join_cardinality(source),
            degree_histogram=hist,
        )
    side = OUT if source.directed else UNDIRECTED
    hist = {}
    for d in source.degrees(side).tolist():
        hist[d] = hist.get(d, 0) + 1
    return ExactCounts(
        n=source.n, m=source.m,
        star_counts={p: exact_star_count(source, p, side) for p in ps},
        path2=exact_path2_count(source) if source.directed else None,
        degree_histogram=hist,
    )


# --------------------------------------------------------------------------
# Inequalities relating n, m and S_p
# --------------------------------------------------------------------------


def binomial_real(z, p: int) -> Fraction:
    """C(z, p) for rational z: falling factorial over p!, zero below p - 1.

    Cutting to zero below the largest root keeps the function convex and in
    agreement with the integer binomial (which is zero for d < p).
    """
    z = Fraction(z)
    if z <= p - 1:
        return Fraction(0)
    num = Fraction(1)
    for j in range(p):
        num *= z - j
    return num / math.factorial(p)


@dataclasses.dataclass
class BoundCheck:
    name: str
    applicable: bool
    holds: bool | None
    lhs: object = None
    rhs: object = None


@dataclasses.dataclass
class JensenReport:
    n: int
    m: int
    p: int
    s_p: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks if c.applicable)


def validate_jensen_bounds(graph: Graph, p: int) -> JensenReport:
    """Check the convexity bounds between n, m and S_p, exactly.

    (a) S_p >= n C(2m/n, p) whenever 2m/n >= p - 1;
    (b) if 2m/n >= p then m <= p n^(1-1/p) S_p^(1/p) / 2,
        checked as (2m)^p <= p^p n^(p-1) S_p;
    (c) if S_p <= n then m <= n p / 2.
    """
    if graph.directed:
        raise InvalidArgumentError("the degree-sum bounds are stated for undirected graphs")
    n, m = graph.n, graph.m
    s = exact_star_count(graph, p)
    checks = []
    avg = Fraction(2 * m, n) if n else Fraction(0)
    applicable = n > 0 and avg >= p - 1
    rhs = n * binomial_real(avg, p) if applicable else None
    checks.append(BoundCheck("jensen", applicable, s >= rhs if applicable else None, s, rhs))
    applicable = n > 0 and avg >= p
    if applicable:
        lhs, rhs = (2 * m) ** p, p**p * n ** (p - 1) * s
        checks.append(BoundCheck("edges_vs_stars", True, lhs <= rhs, lhs, rhs))
    else:
        checks.append(BoundCheck("edges_vs_stars", False, None))
    applicable = s <= n
    checks.append(BoundCheck("rare_stars", applicable, 2 * m <= n * p if applicable else None, 2 * m, n * p))
    return JensenReport(n, m, p, s, checks)
