"""Test graphs and tables, including the lower-bound constructions.

Port representations
--------------------
A representation gives every vertex ``v`` a row of ``deg(v)`` ports and pairs
ports up with a fixed-point-free involution; port ``(v, s)`` paired with
``(u, t)`` makes ``u`` the ``s``-th neighbor of ``v``. Two families are
built here:

* the *slab* table: ``n1`` vertices of degree ``d1`` where, for slab ``j``
  (columns ``2j-1, 2j`` in 1-based terms), cell ``(i, 2j-1)`` is paired with
  ``(i + j mod n1, 2j)``; plus ``n2`` isolated vertices;
* the *planted* table: the slab table with a ``d2 x n2`` window starting at
  cell ``(x, 2y-1)`` handed over to ``n2`` new vertices of degree ``d2``
  (transposed), and the cut slab edges re-paired at distance ``j + d2``.

Row and column indices follow the 1-based convention internally; graphs are
materialized with 0-based vertex ids (row ``i`` becomes vertex ``i - 1``,
planted vertex ``a`` becomes ``n1 + a - 1``).
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from typing import Iterable

import numpy as np

from .errors import ConstraintError, InvalidArgumentError, ParseError
from .oracle import Graph, TableColumn, make_rng


# --------------------------------------------------------------------------
# Regular graphs and the S_p <= n family
# --------------------------------------------------------------------------


def gen_circulant_regular(n: int, d: int) -> Graph:
    """d-regular circulant graph: i ~ i +- 1..floor(d/2), plus i ~ i + n/2 for odd d."""
    if not n > d >= 1:
        raise ConstraintError("n > d >= 1", f"need n > d >= 1, got n={n}, d={d}")
    if (n * d) % 2:
        raise ConstraintError("n*d even", f"n*d must be even for a {d}-regular graph on {n} vertices")
    edges = []
    for i in range(n):
        for j in range(1, d // 2 + 1):
            edges.append((i, (i + j) % n))
    if d % 2:
        half = n // 2
        edges.extend((i, i + half) for i in range(half))
    return Graph.from_edges(n, edges)


def _bounded_degree_edges(vertices: list[int], d: int) -> list[tuple[int, int]]:
    """Edges of a d-regular circulant on ``vertices``.

    When ``len(vertices) * d`` is odd no d-regular graph exists; the last
    vertex is then left isolated and the rest made d-regular, so the maximum
    degree is still ``d``.
    """
    size = len(vertices)
    if d == 0 or size == 0:
        return []
    if (size * d) % 2:
        vertices = vertices[:-1]
        size -= 1
        if size == 0:
            return []
    if size <= d:
        raise ConstraintError(
            "part size > p-1", f"a part of {size} vertices cannot carry a {d}-regular graph"
        )
    local = gen_circulant_regular(size, d)
    return [(vertices[u], vertices[v]) for u, v in local.edges()]


def _ceil_root(s: int, p: int) -> int:
    """Smallest integer a with a**p >= s."""
    a = max(0, int(round(s ** (1.0 / p))) - 1)
    while a**p < s:
        a += 1
    return a


def gen_theorem41_pair(n: int, p: int, s: int) -> tuple[Graph, Graph]:
    """Two graphs that look alike outside a small hidden vertex set S.

    ``|S| = ceil(s^(1/p)) + 1``. The first graph puts a (p-1)-regular graph on
    S and on V \\ S, so it has no p-stars. The second puts a star with
    ``ceil(s^(1/p))`` leaves on S instead, giving C(ceil(s^(1/p)), p) stars.
    S is the first ``|S|`` vertex ids and has no edges to the rest.
    When a part has an odd number of vertices and p-1 is odd, one vertex
    of that part stays isolated.
    """
    if p < 2:
        raise ConstraintError("p >= 2")
    if not s > (p + 1) ** p:
        raise ConstraintError("s > (p+1)^p", f"need s > {(p + 1) ** p}, got s={s}")
    a = _ceil_root(s, p)
    size_s = a + 1
    if size_s > n:
        raise ConstraintError("|S| <= n", f"|S| = {size_s} exceeds n = {n}")
    inside = list(range(size_s))
    outside = list(range(size_s, n))
    rest = _bounded_degree_edges(outside, p - 1)
    g1 = Graph.from_edges(n, _bounded_degree_edges(inside, p - 1) + rest)
    star = [(0, leaf) for leaf in range(1, size_s)]
    g2 = Graph.from_edges(n, star + rest)
    return g1, g2


# --------------------------------------------------------------------------
# Port representations
# --------------------------------------------------------------------------


def check_port_constraints(n1: int, d1: int, n2: int, d2: int) -> None:
    """Raise :class:`ConstraintError` naming the first violated constraint."""
    checks = [
        ("n1, d1, n2, d2 positive", min(n1, d1, n2, d2) > 0),
        ("d1 even", d1 % 2 == 0),
        ("n2 even", n2 % 2 == 0),
        ("n2 <= d1", n2 <= d1),
        ("d1 <= 2*d2", d1 <= 2 * d2),
        ("d1 + 2*d2 < n1", d1 + 2 * d2 < n1),
    ]
    for name, ok in checks:
        if not ok:
            raise ConstraintError(name, f"constraint violated: {name} (n1={n1}, d1={d1}, n2={n2}, d2={d2})")


@dataclasses.dataclass
class PortRepresentation:
    """Explicit pairing of ports ``(row, slot)``, both 1-based.

    Rows ``1..n1`` are the degree-``d1`` vertices; rows ``n1+1..n1+n2`` are
    the extra vertices, isolated unless ``planted`` is set.
    """

    n1: int
    d1: int
    n2: int
    d2: int
    planted: tuple[int, int] | None
    matching: dict

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def degree(self, row: int) -> int:
        if row <= self.n1:
            return self.d1
        return self.d2 if self.planted is not None else 0

    def validate(self) -> None:
        """Check involution, full coverage, no loops, no parallel edges."""
        expected = {(i, s) for i in range(1, self.n + 1) for s in range(1, self.degree(i) + 1)}
        if set(self.matching) != expected:
            raise AssertionError("matching does not cover exactly the ports")
        pairs = set()
        for port, other in self.matching.items():
            if self.matching.get(other) != port or other == port:
                raise AssertionError(f"port {port} is not properly paired")
            if port[0] == other[0]:
                raise AssertionError(f"self-loop at row {port[0]}")
            if port < other:
                key = (min(port[0], other[0]), max(port[0], other[0]))
                if key in pairs:
                    raise AssertionError(f"parallel edge between rows {key}")
                pairs.add(key)

    def edge_set(self) -> set:
        """Edges as 0-based ``(min, max)`` vertex pairs."""
        return {
            (min(a[0], b[0]) - 1, max(a[0], b[0]) - 1)
            for a, b in self.matching.items()
            if a < b
        }

    def to_graph(self) -> Graph:
        """Materialize; the ``s``-th port of a row is its ``s``-th neighbor."""
        adjacency = [
            [self.matching[(i, s)][0] - 1 for s in range(1, self.degree(i) + 1)]
            for i in range(1, self.n + 1)
        ]
        return Graph.from_adjacency(adjacency)


def _pair(matching, a, b):
    matching[a] = b
    matching[b] = a


def slab_representation(n1: int, d1: int, n2: int = 0) -> PortRepresentation:
    """Slab table: cell (i, 2j-1) paired with (i+j mod n1, 2j)."""
    if d1 % 2:
        raise ConstraintError("d1 even", f"d1 must be even, got {d1}")
    if not 0 < d1 < n1:
        raise ConstraintError("0 < d1 < n1", f"need 0 < d1 < n1, got d1={d1}, n1={n1}")
    if n2 < 0:
        raise ConstraintError("n2 >= 0")
    matching: dict = {}
    for j in range(1, d1 // 2 + 1):
        for i in range(1, n1 + 1):
            _pair(matching, (i, 2 * j - 1), ((i - 1 + j) % n1 + 1, 2 * j))
    return PortRepresentation(n1, d1, n2, 0, None, matching)


def planted_representation(n1: int, d1: int, n2: int, d2: int, x: int, y: int) -> PortRepresentation:
    """Slab table with ``n2`` degree-``d2`` vertices hidden at offset (x, 2y-1).

    ``x`` ranges over ``1..n1`` and ``y`` over ``1..d1/2``. The window spans
    rows ``x .. x+d2-1`` and slabs ``y .. y+n2/2-1``, both cyclically.
    """
    check_port_constraints(n1, d1, n2, d2)
    if not 1 <= x <= n1:
        raise ConstraintError("1 <= x <= n1", f"x={x} outside 1..{n1}")
    if not 1 <= y <= d1 // 2:
        raise ConstraintError("1 <= y <= d1/2", f"y={y} outside 1..{d1 // 2}")

    def row(i):
        return (i - 1) % n1 + 1

    window_rows = {row(x + t) for t in range(d2)}
    window_slabs = [(y - 1 + t) % (d1 // 2) + 1 for t in range(n2 // 2)]
    matching: dict = {}
    for j in range(1, d1 // 2 + 1):
        if j not in window_slabs:
            for i in range(1, n1 + 1):
                _pair(matching, (i, 2 * j - 1), (row(i + j), 2 * j))
            continue
        for i in range(1, n1 + 1):
            if i in window_rows:
                continue
            partner = row(i + j)
            if partner in window_rows:
                # skip over the window
                partner = row(i + j + d2)
            _pair(matching, (i, 2 * j - 1), (partner, 2 * j))
    # green cell (a, b) of the new rows <-> window cell (b, a), transposed
    columns = [c for j in window_slabs for c in (2 * j - 1, 2 * j)]
    for a in range(1, n2 + 1):
        for b in range(1, d2 + 1):
            _pair(matching, (n1 + a, b), (row(x + b - 1), columns[a - 1]))
    return PortRepresentation(n1, d1, n2, d2, (x, y), matching)


def planted_window(rep: PortRepresentation) -> set:
    """Cells of the window extended by d1/2 rows above and below."""
    x, y = rep.planted
    n1, d1 = rep.n1, rep.d1
    slabs = [(y - 1 + t) % (d1 // 2) + 1 for t in range(rep.n2 // 2)]
    cols = [c for j in slabs for c in (2 * j - 1, 2 * j)]
    rows = {(x - 1 + t) % n1 + 1 for t in range(-(d1 // 2), rep.d2 + d1 // 2)}
    return {(r, c) for r in rows for c in cols}


def gen_slab_representation(n1: int, d1: int, n2: int = 0) -> Graph:
    """Graph of :func:`slab_representation`: n1 vertices of degree d1, n2 isolated."""
    return slab_representation(n1, d1, n2).to_graph()


def gen_planted_representation(n1: int, d1: int, n2: int, d2: int, x: int, y: int) -> Graph:
    """Graph of :func:`planted_representation`."""
    return planted_representation(n1, d1, n2, d2, x, y).to_graph()


def slab_pair_star_counts(n1: int, d1: int, n2: int, d2: int, p: int) -> tuple[int, int]:
    """(s1, s2): S_p of the slab graph and of any planted graph."""
    s1 = n1 * math.comb(d1, p)
    return s1, s1 + n2 * math.comb(d2, p)


def gen_lemma_c5_params(n: int, p: int, s: int, case: int, gap: int = 2) -> tuple[int, int, int, int]:
    """Concrete (n1, d1, n2, d2) for the two large-S_p lower-bound regimes.

    Case 1 (s up to n^p): n2 = 2 and d2 about s^(1/p). Case 2 (s beyond
    n^p): n2 about s / n^p and d2 as large as the constraints allow. In
    both, d1 is the even number nearest above (s/n)^(1/p). Then d2 and n2 are
    raised until ``s2 >= gap * s1``; raising stops at the constraint
    boundary, and failing to reach the gap is an error. The result always
    passes :func:`check_port_constraints`.
    """
    if case not in (1, 2):
        raise InvalidArgumentError(f"case must be 1 or 2, got {case}")
    if n < 8 or s < 1:
        raise ConstraintError("n >= 8, s >= 1", f"no feasible parameters for n={n}, s={s}")
    d1 = max(2, 2 * math.ceil(_ceil_root(max(1, s // n), p) / 2))
    if case == 1:
        n2 = 2
        d2_target = _ceil_root(s, p)
    else:
        n2 = max(2, 2 * math.ceil(s / n**p / 2))
        d2_target = n
    while True:
        if n2 > d1:
            raise ConstraintError("n2 <= d1", f"cannot reach s2 >= {gap}*s1 at n={n}, p={p}, s={s}")
        n1 = n - n2
        cap = (n1 - d1 - 1) // 2
        d2 = max(d1 // 2, min(d2_target, cap))
        s1, s2 = slab_pair_star_counts(n1, d1, n2, d2, p)
        while s2 < gap * s1 and d2 < cap:
            d2 += 1
            s1, s2 = slab_pair_star_counts(n1, d1, n2, d2, p)
        if s2 >= gap * s1:
            break
        n2 += 2
    check_port_constraints(n1, d1, n2, d2)
    return n1, d1, n2, d2


# --------------------------------------------------------------------------
# Directed families
# --------------------------------------------------------------------------


def gen_bipartite_backedge(n: int, with_backedge: bool = False, t: int | None = None,
                           s: int | None = None, seed=None) -> Graph:
    """Complete bipartite digraph S -> T, optionally with one arc T -> S.

    S is ``0..n/2-1`` and T is ``n/2..n-1``. Missing ``t``/``s`` are drawn
    from ``seed``. Without the back arc there are no directed 2-paths; with
    it there are exactly n.
    """
    if n < 2 or n % 2:
        raise InvalidArgumentError(f"n must be even and >= 2, got {n}")
    half = n // 2
    edges = [(u, v) for u in range(half) for v in range(half, n)]
    if with_backedge:
        rng = make_rng(seed)
        if t is None:
            t = int(rng.integers(half, n))
        if s is None:
            s = int(rng.integers(0, half))
        if not (half <= t < n and 0 <= s < half):
            raise InvalidArgumentError(f"back arc ({t}, {s}) must go from T to S")
        edges.append((t, s))
    return Graph.from_edges(n, edges, directed=True)


def gen_ratio_digraph(n: int, r: float, seed=None, cycles: int = 4, extra_arcs: int | None = None,
                      min_cycle: int = 3) -> Graph:
    """Random digraph whose in/out degree ratio stays within [1/r, r].

    Arc-disjoint directed cycles on random vertex subsets give a balanced
    base (in-degree equals out-degree). Single arcs are then added between
    vertices that already lie on a cycle, each one kept only if both
    endpoints stay within the ratio bound. With r = 1 no arc survives and
    the result is Eulerian.
    """
    if r < 1:
        raise InvalidArgumentError(f"r must be >= 1, got {r}")
    if n < min_cycle:
        raise InvalidArgumentError(f"n must be >= {min_cycle}")
    rng = make_rng(seed)
    arcs: list = []
    present: set = set()
    indeg = np.zeros(n, dtype=np.int64)
    outdeg = np.zeros(n, dtype=np.int64)
    for _ in range(cycles):
        for _attempt in range(50):
            size = int(rng.integers(min_cycle, n + 1))
            order = rng.permutation(n)[:size].tolist()
            cyc = [(order[i], order[(i + 1) % size]) for i in range(size)]
            if not any(a in present for a in cyc):
                break
        else:
            continue
        for u, v in cyc:
            arcs.append((u, v))
            present.add((u, v))
            outdeg[u] += 1
            indeg[v] += 1
    active = np.flatnonzero(outdeg > 0)
    if extra_arcs is None:
        extra_arcs = n
    added = 0
    for _ in range(20 * extra_arcs):
        if added >= extra_arcs or r == 1 or len(active) < 2:
            break
        u, v = (int(a) for a in rng.choice(active, size=2, replace=False))
        if (u, v) in present:
            continue
        if outdeg[u] + 1 > r * indeg[u] or indeg[v] + 1 > r * outdeg[v]:
            continue
        arcs.append((u, v))
        present.add((u, v))
        outdeg[u] += 1
        indeg[v] += 1
        added += 1
    return Graph.from_edges(n, arcs, directed=True)


# --------------------------------------------------------------------------
# General fixtures and ingestion
# --------------------------------------------------------------------------


def gen_erdos_renyi(n: int, m: int, seed=None) -> Graph:
    """Uniformly random simple graph with exactly m edges (G(n, m))."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise InvalidArgumentError(f"m={m} infeasible for n={n} (max {total})")
    rng = make_rng(seed)
    if 2 * m > total:
        codes = rng.choice(total, size=m, replace=False)
        iu, ju = np.triu_indices(n, k=1)
        return Graph.from_edges(n, np.column_stack([iu[codes], ju[codes]]))
    chosen: dict = {}
    while len(chosen) < m:
        need = m - len(chosen)
        u = rng.integers(n, size=2 * need + 8)
        v = rng.integers(n, size=2 * need + 8)
        for a, b in zip(u.tolist(), v.tolist()):
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if key not in chosen:
                chosen[key] = None
                if len(chosen) == m:
                    break
    return Graph.from_edges(n, list(chosen))


def gen_star(leaves: int, isolated: int = 0) -> Graph:
    """Star K_{1,leaves} centred at vertex 0, plus isolated vertices."""
    return Graph.from_edges(leaves + 1 + isolated, [(0, i) for i in range(1, leaves + 1)])


def gen_complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def gen_table(counts: Iterable[int], labels: Iterable | None = None) -> TableColumn:
    counts = list(counts)
    labels = list(range(len(counts))) if labels is None else list(labels)
    return TableColumn(labels, counts)


def relabel(graph: Graph, seed=None) -> Graph:
    """Apply a uniformly random vertex permutation."""
    return graph.relabel(make_rng(seed).permutation(graph.n))


def load_edge_list(path) -> Graph:
    """Read ``u v`` lines (0-based). A first line ``#directed`` marks a digraph.

    Other lines starting with ``#`` and blank lines are ignored. The vertex
    count is one more than the largest id unless a ``#n <count>`` line sets it.
    """
    directed = False
    n = None
    edges = []
    seen: set = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            if text.startswith("#"):
                if text == "#directed" and not edges:
                    directed = True
                elif text.startswith("#n "):
                    try:
                        n = int(text[3:])
                    except ValueError:
                        raise ParseError(f"bad vertex count {text!r}", path, lineno) from None
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {text!r}", path, lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer vertex id in {text!r}", path, lineno) from None
            if u < 0 or v < 0:
                raise ParseError("negative vertex id", path, lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", path, lineno)
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(f"duplicate edge ({u}, {v})", path, lineno)
            seen.add(key)
            edges.append((u, v))
    top = max((max(e) for e in edges), default=-1) + 1
    if n is None:
        n = top
    elif n < top:
        raise ParseError(f"vertex id {top - 1} exceeds declared count {n}", path)
    return Graph.from_edges(n, edges, directed=directed)


def write_edge_list(graph: Graph, path_or_file) -> None:
    """Write in the format :func:`load_edge_list` reads."""
    out = []
    if graph.directed:
        out.append("#directed")
    out.append(f"#n {graph.n}")
    out.extend(f"{u} {v}" for u, v in graph.edges())
    text = "\n".join(out) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_csv(path, column: str) -> TableColumn:
    """Every non-empty cell of ``column`` is a label occurrence."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise ParseError(f"no column named {column!r}", path, 1)
        values = [row[column] for row in reader if row.get(column) not in (None, "")]
    return TableColumn.from_values(values)


# --------------------------------------------------------------------------
# Generator specs
# --------------------------------------------------------------------------

FAMILIES = {
    "circulant": lambda seed, n, d: gen_circulant_regular(n, d),
    "er": lambda seed, n, m: gen_erdos_renyi(n, m, seed),
    "star": lambda seed, leaves, isolated=0: gen_star(leaves, isolated),
    "complete": lambda seed, n: gen_complete(n),
    "slab": lambda seed, n1, d1, n2=0: gen_slab_representation(n1, d1, n2),
    "planted": lambda seed, n1, d1, n2, d2, x, y: gen_planted_representation(n1, d1, n2, d2, x, y),
    "hidden_empty": lambda seed, n, p, s: gen_theorem41_pair(n, p, s)[0],
    "hidden_star": lambda seed, n, p, s: gen_theorem41_pair(n, p, s)[1],
    "bipartite": lambda seed, n, backedge=False, t=None, s=None: gen_bipartite_backedge(n, backedge, t, s, seed),
    "ratio_digraph": lambda seed, n, r, cycles=4, extra_arcs=None: gen_ratio_digraph(n, r, seed, cycles, extra_arcs),
}


@dataclasses.dataclass
class GeneratorSpec:
    """A named family, its parameters and a seed; enough to rebuild a graph."""

    family: str
    params: dict = dataclasses.field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(
                f"unknown family {self.family!r}; choose from {', '.join(sorted(FAMILIES))}"
            )

    def build(self) -> Graph:
        try:
            return FAMILIES[self.family](self.seed, **self.params)
        except TypeError as exc:
            raise InvalidArgumentError(f"bad parameters for {self.family!r}: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSpec":
        try:
            data = json.loads(text)
            return cls(data["family"], data.get("params", {}), data.get("seed", 0))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad generator spec: {exc}") from None
