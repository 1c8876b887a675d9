import math

import numpy as np
import pytest
from scipy import stats

from starcount.directed import (
    DigraphOracle,
    check_ratio_bound,
    estimate_path2,
    exactly_in_out_stars,
    join_size_exact_mapping,
    max_degree_ratio,
    path2_sample_count,
    sqrt_weighted_batch,
    sqrt_weighted_sample,
)
from starcount.errors import InvalidArgumentError, RatioViolationError
from starcount.estimator import EstimatorParams
from starcount.exact import exact_join_cardinality, exact_path2_count, l_prime
from starcount.instances import gen_bipartite_backedge, gen_ratio_digraph, gen_table
from starcount.oracle import Graph


def directed_cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=True)


class TestSampler:
    def test_balanced_accepts_every_attempt(self):
        g = gen_ratio_digraph(50, 1, seed=0, cycles=5)
        s = sqrt_weighted_batch(g, 1, 5000, np.random.default_rng(0))
        assert s.attempts == 5000 and s.rejected == 0

    def test_ratio_four_vertex_always_accepted(self):
        # vertex 0 has in 4, out 1, so with r = 4 it is kept with probability
        # sqrt(4 / (4 * 1)) = 1. sqrt(l): 2 at vertices 0 and 5, 1 at 1..4, L' = 8.
        # Tails are drawn from 9 arcs and kept with total probability 8 / (9 * 2).
        arcs = [(i, 0) for i in range(1, 5)] + [(0, 5)] + [(5, i) for i in range(1, 5)]
        g = Graph.from_edges(6, arcs, directed=True)
        s = sqrt_weighted_batch(g, 4, 40_000, np.random.default_rng(1))
        assert np.mean(s.items == 0) == pytest.approx(0.25, abs=0.01)
        assert s.attempts / 40_000 == pytest.approx(18 / 8, rel=0.02)

    def test_law_chi2(self):
        g = gen_ratio_digraph(30, 3, seed=5, cycles=6)
        sq = np.sqrt(g.degrees("in") * g.degrees("out"))
        s = sqrt_weighted_batch(g, 3, 100_000, np.random.default_rng(2))
        observed = np.bincount(s.items, minlength=30)
        keep = sq > 0
        assert observed[~keep].sum() == 0
        assert stats.chisquare(observed[keep], 100_000 * sq[keep] / sq.sum()).pvalue > 0.01

    def test_ratio_violation_names_vertex(self):
        # vertex 0: in 3, out 1, above r = 2; it is the tail of 1 arc in 4
        g = Graph.from_edges(4, [(1, 0), (2, 0), (3, 0), (0, 1)], directed=True)
        with pytest.raises(RatioViolationError) as info:
            sqrt_weighted_batch(g, 2, 200, np.random.default_rng(0))
        assert info.value.vertex == 0

    def test_attempts_charged(self):
        g = gen_ratio_digraph(100, 2, seed=1)
        oracle = DigraphOracle(g)
        s = sqrt_weighted_batch(oracle, 2, 300, np.random.default_rng(0))
        assert oracle.ledger.random_edge_queries == s.attempts
        assert oracle.ledger.degree_queries == 2 * s.attempts

    def test_single_sample(self):
        g = directed_cycle(6)
        v, lv = sqrt_weighted_sample(g, 1, np.random.default_rng(0))
        assert 0 <= v < 6 and lv == 1

    def test_rejects_small_r(self):
        with pytest.raises(InvalidArgumentError):
            sqrt_weighted_batch(directed_cycle(4), 0.5, 1)


class TestRatioScan:
    def test_classifies(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 1), (3, 1)], directed=True)
        found = check_ratio_bound(g, 2)
        assert found["above"] == [1]
        assert found["sources"] == [0, 3]
        assert found["sinks"] == []
        assert max_degree_ratio(g) == 3

    def test_balanced(self):
        assert max_degree_ratio(directed_cycle(5)) == 1


class TestEstimatePath2:
    @pytest.mark.parametrize("n", [5, 40])
    def test_cycle_exact(self, n):
        g = directed_cycle(n)
        report = estimate_path2(g, 1, 0.2, l_prime(g), np.random.default_rng(0))
        assert report.estimate == n == exact_path2_count(g)

    def test_single_arc_zero_without_sampling(self):
        g = Graph.from_edges(2, [(0, 1)], directed=True)
        report = estimate_path2(g, 1, 0.2, l_prime(g), np.random.default_rng(0))
        assert report.estimate == 0 and report.ledger.total() == 0

    def test_negative_l_prime(self):
        with pytest.raises(InvalidArgumentError):
            estimate_path2(directed_cycle(3), 1, 0.2, -1.0)

    def test_sample_count(self):
        assert path2_sample_count(100, 0.5) == 120
        assert path2_sample_count(5000, 0.2) == math.ceil(75 * math.sqrt(5000))

    def test_accuracy(self):
        g = gen_ratio_digraph(2000, 2, seed=3, cycles=6)
        L, lp = exact_path2_count(g), l_prime(g)
        hits = sum(
            abs(estimate_path2(g, 2, 0.2, lp, np.random.default_rng(s)).estimate - L) <= 0.2 * L
            for s in range(30)
        )
        assert hits >= 20

    def test_validate_warns(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 1), (3, 1)], directed=True)
        report = estimate_path2(g, 3, 0.5, l_prime(g), np.random.default_rng(0), validate=True)
        assert any("sources" in w for w in report.warnings)
        with pytest.raises(RatioViolationError):
            estimate_path2(g, 3, 0.5, l_prime(g), np.random.default_rng(0), strict=True)

    def test_report_fields(self):
        g = directed_cycle(10)
        d = estimate_path2(g, 1, 0.3, 10.0, seed=4).to_dict()
        assert set(d) == {"estimate", "L_prime", "L_prime_source", "r", "epsilon", "accepted",
                          "rejected", "queries", "seed", "warnings"}
        assert d["seed"] == 4

    def test_reproducible(self):
        g = gen_ratio_digraph(300, 2, seed=8)
        a = estimate_path2(g, 2, 0.3, l_prime(g), seed=9)
        b = estimate_path2(g, 2, 0.3, l_prime(g), seed=9)
        assert a.to_json() == b.to_json()

    def test_bipartite_degenerate(self):
        assert exact_path2_count(gen_bipartite_backedge(20)) == 0
        assert exact_path2_count(gen_bipartite_backedge(20, True, seed=1)) == 20


class TestJoin:
    def test_mapping_l_is_join_size(self):
        t1 = gen_table([2, 3], ["a", "b"])
        t2 = gen_table([1, 4], ["a", "b"])
        oracle = join_size_exact_mapping(t1, t2)
        x, y = oracle.degree_scan()
        assert int(np.dot(x, y)) == 14 == exact_join_cardinality(t1, t2)

    def test_disjoint_labels(self):
        oracle = join_size_exact_mapping(gen_table([2], ["a"]), gen_table([5], ["b"]))
        x, y = oracle.degree_scan()
        assert int(np.dot(x, y)) == 0

    def test_estimate_self_join(self):
        counts = np.random.default_rng(0).integers(1, 30, size=200).tolist()
        t = gen_table(counts)
        oracle = join_size_exact_mapping(t, t)
        truth = sum(c * c for c in counts)
        lp = float(sum(counts))
        hits = sum(
            abs(estimate_path2(oracle, 1, 0.2, lp, np.random.default_rng(s)).estimate - truth) <= 0.2 * truth
            for s in range(15)
        )
        assert hits >= 10
        assert oracle.ledger.row_samples > 0 and oracle.ledger.magnitude_queries == 2 * oracle.ledger.row_samples


class TestInOutStars:
    def test_bipartite(self):
        g = Graph.from_edges(6, [(u, v) for u in range(3) for v in range(3, 6)], directed=True)
        params = EstimatorParams(2, 0.1)
        out = exactly_in_out_stars(g, 2, "out", params, np.random.default_rng(0))
        inn = exactly_in_out_stars(g, 2, "in", params, np.random.default_rng(0))
        assert out.estimate == 9 and inn.estimate == 9

    def test_cycle_zero(self):
        r = exactly_in_out_stars(directed_cycle(5), 2, "in", EstimatorParams(2, 0.1), 0)
        assert r.estimate == 0

    def test_needs_directed(self, p3):
        with pytest.raises(InvalidArgumentError):
            exactly_in_out_stars(p3, 2, "in", EstimatorParams(2, 0.1))
