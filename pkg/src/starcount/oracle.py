"""Query access to graphs and table columns.

A :class:`Graph` is immutable adjacency data. Queries against it go through
a :class:`GraphOracle`, which owns a :class:`QueryLedger` so that every
degree, neighbor and random-edge query is counted. Tables work the same
way through :class:`TableOracle`.

Estimators never see the backends directly: they receive a
:class:`WeightedOracle`, whose contract is "return an item with probability
magnitude / W, together with its magnitude". For an undirected graph the
items are vertices, the magnitude is the degree and ``W = 2m``; for a table
column the items are labels, the magnitude is the label's row count and
``W`` is the number of rows.

Vertex ids are dense 0-based integers. Neighbor lists keep the insertion
order of whatever built the graph, so "the i-th neighbor" is stable.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import EmptySourceError, InvalidArgumentError

UNDIRECTED = "undirected"
IN = "in"
OUT = "out"

_SIDES = (UNDIRECTED, IN, OUT)


def make_rng(seed=None) -> np.random.Generator:
    """Return a PCG64 generator; generators pass through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclasses.dataclass
class QueryLedger:
    """Per-type query counters. Counters only ever grow."""

    degree_queries: int = 0
    neighbor_queries: int = 0
    random_edge_queries: int = 0
    magnitude_queries: int = 0
    row_samples: int = 0

    def total(self) -> int:
        return (
            self.degree_queries
            + self.neighbor_queries
            + self.random_edge_queries
            + self.magnitude_queries
            + self.row_samples
        )

    def copy(self) -> "QueryLedger":
        return dataclasses.replace(self)

    def __add__(self, other: "QueryLedger") -> "QueryLedger":
        return QueryLedger(
            *(a + b for a, b in zip(dataclasses.astuple(self), dataclasses.astuple(other)))
        )

    def __sub__(self, other: "QueryLedger") -> "QueryLedger":
        return QueryLedger(
            *(a - b for a, b in zip(dataclasses.astuple(self), dataclasses.astuple(other)))
        )

    def as_dict(self) -> dict:
        return {
            "degree": self.degree_queries,
            "neighbor": self.neighbor_queries,
            "random_edge": self.random_edge_queries,
            "magnitude": self.magnitude_queries,
            "row_samples": self.row_samples,
        }


def merge_ledgers(ledgers: Iterable[QueryLedger]) -> QueryLedger:
    total = QueryLedger()
    for ledger in ledgers:
        total = total + ledger
    return total


# --------------------------------------------------------------------------
# Graph
# --------------------------------------------------------------------------


def _csr(n: int, rows: np.ndarray, cols: np.ndarray):
    """Group ``cols`` by ``rows`` keeping the original relative order."""
    order = np.argsort(rows, kind="stable")
    counts = np.bincount(rows, minlength=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, cols[order].astype(np.int64), counts.astype(np.int64)


class Graph:
    """Immutable simple graph, undirected or directed.

    Build with :meth:`from_edges` or :meth:`from_adjacency`; both reject
    self-loops and parallel edges. ``tails``/``heads`` form the flat edge
    index used for uniform edge selection (each undirected edge appears once).
    """

    __slots__ = (
        "n", "directed", "tails", "heads",
        "_out_ptr", "_out_idx", "_out_deg",
        "_in_ptr", "_in_idx", "_in_deg", "_ends",
    )

    def __init__(self, n, directed, tails, heads, out_csr, in_csr=None):
        self.n = int(n)
        self.directed = bool(directed)
        self.tails = tails
        self.heads = heads
        self._out_ptr, self._out_idx, self._out_deg = out_csr
        if in_csr is None:
            in_csr = out_csr
        self._in_ptr, self._in_idx, self._in_deg = in_csr
        for arr in (tails, heads, self._out_ptr, self._out_idx, self._out_deg,
                    self._in_ptr, self._in_idx, self._in_deg):
            arr.flags.writeable = False
        self._ends = None

    def endpoints(self) -> np.ndarray:
        """Edge endpoints interleaved: entry 2e is tails[e], 2e+1 is heads[e]."""
        if self._ends is None:
            ends = np.column_stack([self.tails, self.heads]).reshape(-1)
            ends.flags.writeable = False
            self._ends = ends
        return self._ends

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges, directed: bool = False) -> "Graph":
        """Build from an edge sequence; list order fixes neighbor order.

        For an undirected edge ``(u, v)`` the endpoint ``v`` is appended to
        ``u``'s list and ``u`` to ``v``'s, at the edge's position.
        """
        n = int(n)
        if n < 0:
            raise InvalidArgumentError(f"vertex count must be nonnegative, got {n}")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2) if len(edges) else np.zeros((0, 2), np.int64)
        tails, heads = arr[:, 0].copy(), arr[:, 1].copy()
        if len(arr):
            lo, hi = int(arr.min()), int(arr.max())
            if lo < 0 or hi >= n:
                raise InvalidArgumentError(f"edge endpoint out of range [0, {n})")
        _check_simple_edges(n, tails, heads, directed)
        if directed:
            out_csr = _csr(n, tails, heads)
            in_csr = _csr(n, heads, tails)
            return cls(n, True, tails, heads, out_csr, in_csr)
        # interleave so the i-th edge contributes to both lists at position i
        rows = np.empty(2 * len(tails), dtype=np.int64)
        cols = np.empty_like(rows)
        rows[0::2], cols[0::2] = tails, heads
        rows[1::2], cols[1::2] = heads, tails
        return cls(n, False, tails, heads, _csr(n, rows, cols))

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]]) -> "Graph":
        """Build an undirected graph from explicit neighbor lists.

        Lists are kept verbatim, so port order in the input becomes neighbor
        order. Symmetry and simplicity are checked.
        """
        n = len(adjacency)
        counts = np.array([len(a) for a in adjacency], dtype=np.int64)
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        idx = np.fromiter((int(v) for a in adjacency for v in a), dtype=np.int64, count=int(ptr[-1]))
        rows = np.repeat(np.arange(n, dtype=np.int64), counts)
        if len(idx) and (idx.min() < 0 or idx.max() >= n):
            raise InvalidArgumentError(f"neighbor id out of range [0, {n})")
        if np.any(rows == idx):
            bad = int(rows[np.argmax(rows == idx)])
            raise InvalidArgumentError(f"self-loop at vertex {bad}")
        fwd = rows * n + idx
        if len(np.unique(fwd)) != len(fwd):
            raise InvalidArgumentError("parallel edge in adjacency lists")
        if not np.array_equal(np.sort(fwd), np.sort(idx * n + rows)):
            raise InvalidArgumentError("adjacency lists are not symmetric")
        keep = rows < idx
        return cls(n, False, rows[keep].copy(), idx[keep].copy(), (ptr, idx, counts))

    # -- plain accessors (unmetered; for construction, scans and oracles) --

    @property
    def m(self) -> int:
        return len(self.tails)

    def degrees(self, side: str = UNDIRECTED) -> np.ndarray:
        _check_side(self, side)
        return self._in_deg if side == IN else self._out_deg

    def neighbors(self, v: int, side: str = UNDIRECTED) -> np.ndarray:
        _check_side(self, side)
        if side == IN:
            return self._in_idx[self._in_ptr[v]:self._in_ptr[v + 1]]
        return self._out_idx[self._out_ptr[v]:self._out_ptr[v + 1]]

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.tails.tolist(), self.heads.tolist()))

    def edge_set(self) -> set:
        """Edges as a set; undirected edges are normalized to ``(min, max)``."""
        if self.directed:
            return set(self.edges())
        return {(min(u, v), max(u, v)) for u, v in self.edges()}

    def relabel(self, perm) -> "Graph":
        """Same graph with vertex ``v`` renamed ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise InvalidArgumentError("relabeling must be a permutation of [0, n)")
        return Graph.from_edges(self.n, np.column_stack([perm[self.tails], perm[self.heads]]), self.directed)

    def check_invariants(self) -> None:
        """Full scan of simplicity, symmetry and edge-count invariants."""
        _check_simple_edges(self.n, self.tails, self.heads, self.directed)
        if self.directed:
            if int(self._out_deg.sum()) != self.m or int(self._in_deg.sum()) != self.m:
                raise AssertionError("degree sums disagree with edge index")
            return
        if int(self._out_deg.sum()) != 2 * self.m:
            raise AssertionError("degree sum is not twice the edge count")
        fwd = set()
        for v in range(self.n):
            nb = self.neighbors(v).tolist()
            if v in nb or len(set(nb)) != len(nb):
                raise AssertionError(f"vertex {v} has a loop or repeated neighbor")
            fwd.update((v, u) for u in nb)
        if any((u, v) not in fwd for v, u in fwd):
            raise AssertionError("adjacency is not symmetric")

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind})"


def _check_side(g: Graph, side: str) -> None:
    if side not in _SIDES:
        raise InvalidArgumentError(f"unknown side {side!r}")
    if g.directed == (side == UNDIRECTED):
        raise InvalidArgumentError(
            f"side {side!r} does not match a {'directed' if g.directed else 'undirected'} graph"
        )


def _check_simple_edges(n, tails, heads, directed):
    loops = tails == heads
    if np.any(loops):
        v = int(tails[np.argmax(loops)])
        raise InvalidArgumentError(f"self-loop at vertex {v}")
    if directed:
        keys = tails * max(n, 1) + heads
    else:
        keys = np.minimum(tails, heads) * max(n, 1) + np.maximum(tails, heads)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    if np.any(counts > 1):
        i = int(first[np.argmax(counts > 1)])
        raise InvalidArgumentError(f"parallel edge ({int(tails[i])}, {int(heads[i])})")


# --------------------------------------------------------------------------
# Table column
# --------------------------------------------------------------------------


class TableColumn:
    """Multiset of labels with positive counts.

    ``rows`` is the total row count W. Row ``j`` (0-based) belongs to the
    label whose cumulative count first exceeds ``j``.
    """

    __slots__ = ("labels", "counts", "_cum", "_index")

    def __init__(self, labels: Sequence[Hashable], counts: Sequence[int]):
        labels = list(labels)
        counts = np.asarray(counts, dtype=np.int64)
        if len(labels) != len(counts):
            raise InvalidArgumentError("labels and counts differ in length")
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError("labels must be distinct")
        if len(counts) and counts.min() < 1:
            raise InvalidArgumentError("every label count must be at least 1")
        self.labels = labels
        self.counts = counts
        self.counts.flags.writeable = False
        self._cum = np.cumsum(counts)
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def from_values(cls, values: Iterable[Hashable]) -> "TableColumn":
        """Ingest raw cell values; first-appearance order fixes label order."""
        tally: dict = {}
        for val in values:
            tally[val] = tally.get(val, 0) + 1
        return cls(list(tally), list(tally.values()))

    @property
    def rows(self) -> int:
        return int(self._cum[-1]) if len(self._cum) else 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def row_to_label(self, rows) -> np.ndarray:
        """Label indices for the given 0-based row numbers."""
        return np.searchsorted(self._cum, rows, side="right")

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidArgumentError(f"unknown label {label!r}") from None

    def count_of(self, label) -> int:
        i = self._index.get(label)
        return 0 if i is None else int(self.counts[i])

    def __repr__(self):
        return f"TableColumn(labels={self.n}, rows={self.rows})"


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


class GraphOracle:
    """Metered query access to a :class:`Graph` (degree, neighbor, random edge)."""

    def __init__(self, graph: Graph, ledger: QueryLedger | None = None):
        self.graph = graph
        self.ledger = ledger if ledger is not None else QueryLedger()

    def _vertex(self, v) -> int:
        v = int(v)
        if not 0 <= v < self.graph.n:
            raise InvalidArgumentError(f"unknown vertex id {v}")
        return v

    def degree_query(self, v: int, side: str = UNDIRECTED) -> int:
        v = self._vertex(v)
        deg = self.graph.degrees(side)
        self.ledger.degree_queries += 1
        return int(deg[v])

    def neighbor_query(self, v: int, i: int, side: str = UNDIRECTED):
        """The ``i``-th (1-based) neighbor of ``v``, or ``None`` past the end."""
        v = self._vertex(v)
        if i < 1:
            raise InvalidArgumentError(f"neighbor index must be >= 1, got {i}")
        nb = self.graph.neighbors(v, side)
        self.ledger.neighbor_queries += 1
        return int(nb[i - 1]) if i <= len(nb) else None

    def random_edge_query(self, rng) -> tuple[int, int]:
        tails, heads = self.random_edges(rng, 1)
        return int(tails[0]), int(heads[0])

    def random_edges(self, rng, size: int):
        """``size`` independent uniform edges as ``(tails, heads)`` arrays."""
        m = self.graph.m
        if m == 0:
            raise EmptySourceError("random edge query on a graph with no edges")
        idx = make_rng(rng).integers(m, size=size)
        self.ledger.random_edge_queries += size
        return self.graph.tails[idx], self.graph.heads[idx]

    def degree_batch(self, vertices: np.ndarray, side: str = UNDIRECTED) -> np.ndarray:
        deg = self.graph.degrees(side)[vertices]
        self.ledger.degree_queries += len(vertices)
        return deg

    def weighted_vertex_sample(self, rng) -> tuple[int, int]:
        """One vertex drawn with probability deg(v)/2m, with its degree."""
        v, d = self.weighted_vertex_batch(rng, 1)
        return int(v[0]), int(d[0])

    def weighted_vertex_batch(self, rng, size: int):
        g = self.graph
        if g.directed:
            raise InvalidArgumentError("weighted vertex sampling needs an undirected graph; use a side oracle")
        if g.m == 0:
            raise EmptySourceError("weighted vertex sample on a graph with no edges")
        # one draw in [0, 2m) picks the edge (x // 2) and the endpoint (x % 2)
        x = make_rng(rng).integers(2 * g.m, size=size)
        self.ledger.random_edge_queries += size
        v = g.endpoints()[x]
        return v, self.degree_batch(v)


class TableOracle:
    """Metered access to a :class:`TableColumn`: row samples and count lookups."""

    def __init__(self, table: TableColumn, ledger: QueryLedger | None = None):
        self.table = table
        self.ledger = ledger if ledger is not None else QueryLedger()

    def magnitude_query(self, item: int) -> int:
        if not 0 <= int(item) < self.table.n:
            raise InvalidArgumentError(f"unknown label index {item}")
        self.ledger.magnitude_queries += 1
        return int(self.table.counts[int(item)])

    def table_sample(self, rng) -> tuple[Hashable, int]:
        """A label drawn with probability count/W, and its count."""
        idx, counts = self.table_batch(rng, 1)
        return self.table.labels[int(idx[0])], int(counts[0])

    def table_batch(self, rng, size: int):
        if self.table.rows == 0:
            raise EmptySourceError("row sample from an empty table")
        rows = make_rng(rng).integers(self.table.rows, size=size)
        self.ledger.row_samples += size
        idx = self.table.row_to_label(rows)
        self.ledger.magnitude_queries += size
        return idx, self.table.counts[idx]


class WeightedOracle:
    """Magnitude-proportional sampling over a fixed set of items.

    Subclasses implement :meth:`sample_batch`, :meth:`_magnitudes` and
    :meth:`star_count_ceiling`. Item ids are dense integers in
    ``[0, n_items)``.
    """

    ledger: QueryLedger
    n_items: int

    def total_weight(self) -> int:
        raise NotImplementedError

    def sample_batch(self, rng, size: int):
        """``size`` draws as ``(items, magnitudes)`` arrays; metered."""
        raise NotImplementedError

    def sample(self, rng) -> tuple[int, int]:
        items, mags = self.sample_batch(rng, 1)
        return int(items[0]), int(mags[0])

    def magnitude(self, item: int) -> int:
        raise NotImplementedError

    def star_count_ceiling(self, p: int) -> int:
        """Largest S_p any source with this item count and weight could have."""
        raise NotImplementedError

    def _magnitudes(self) -> np.ndarray:
        raise NotImplementedError

    def magnitudes(self) -> np.ndarray:
        """Every item's magnitude. A full scan for verification, not metered."""
        return np.asarray(self._magnitudes(), dtype=np.int64)


class _GraphWeightedOracle(WeightedOracle):
    def __init__(self, graph: Graph, side: str, ledger: QueryLedger | None):
        _check_side(graph, side)
        self.graph = graph
        self.side = side
        self.queries = GraphOracle(graph, ledger)
        self.ledger = self.queries.ledger
        self.n_items = graph.n

    def total_weight(self) -> int:
        return 2 * self.graph.m if self.side == UNDIRECTED else self.graph.m

    def sample_batch(self, rng, size):
        if self.side == UNDIRECTED:
            return self.queries.weighted_vertex_batch(rng, size)
        tails, heads = self.queries.random_edges(rng, size)
        # a uniform arc's head is drawn in proportion to in-degree, its tail to out-degree
        v = heads if self.side == IN else tails
        return v, self.queries.degree_batch(v, self.side)

    def magnitude(self, item):
        return self.queries.degree_query(item, self.side)

    def star_count_ceiling(self, p):
        n = self.graph.n
        return n * math.comb(n - 1, p) if n >= 1 else 0

    def _magnitudes(self):
        return self.graph.degrees(self.side)


class _TableWeightedOracle(WeightedOracle):
    def __init__(self, table: TableColumn, ledger: QueryLedger | None):
        self.table = table
        self.queries = TableOracle(table, ledger)
        self.ledger = self.queries.ledger
        self.n_items = table.n

    def total_weight(self):
        return self.table.rows

    def sample_batch(self, rng, size):
        return self.queries.table_batch(rng, size)

    def magnitude(self, item):
        return self.queries.magnitude_query(item)

    def star_count_ceiling(self, p):
        # every label holds at least one row, so one label holds at most W - n + 1
        n, w = self.table.n, self.table.rows
        return math.comb(w - n + 1, p) if n else 0

    def _magnitudes(self):
        return self.table.counts


def as_weighted_oracle(source, side: str | None = None, ledger: QueryLedger | None = None) -> WeightedOracle:
    """Wrap a graph or table column behind the :class:`WeightedOracle` contract.

    ``side`` selects in- or out-degree for directed graphs; undirected graphs
    and tables take no side.
    """
    if isinstance(source, Graph):
        if side is None:
            if source.directed:
                raise InvalidArgumentError("directed graphs need side='in' or side='out'")
            side = UNDIRECTED
        if source.m == 0:
            raise EmptySourceError("graph has no edges")
        return _GraphWeightedOracle(source, side, ledger)
    if isinstance(source, TableColumn):
        if side is not None:
            raise InvalidArgumentError("table columns take no side")
        if source.rows == 0:
            raise EmptySourceError("table has no rows")
        return _TableWeightedOracle(source, ledger)
    raise InvalidArgumentError(f"cannot build an oracle over {type(source).__name__}")
