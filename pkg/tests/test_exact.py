import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starcount.errors import InvalidArgumentError
from starcount.exact import (
    binomial_real,
    exact_counts,
    exact_join_cardinality,
    exact_path2_by_enumeration,
    exact_path2_count,
    exact_self_join_cardinality,
    exact_star_count,
    exact_star_count_by_enumeration,
    l_prime,
    self_join_to_s2,
    validate_jensen_bounds,
)
from starcount.instances import (
    gen_circulant_regular,
    gen_complete,
    gen_erdos_renyi,
    gen_ratio_digraph,
    gen_star,
    gen_table,
)
from starcount.oracle import Graph


class TestStarCount:
    def test_small_values(self, p3, k4):
        assert exact_star_count(p3, 2) == 1
        assert exact_star_count(k4, 2) == 12
        assert exact_star_count(gen_star(5), 3) == 10

    def test_enumeration_values(self, p3):
        assert exact_star_count_by_enumeration(p3, 2) == 1
        assert exact_star_count_by_enumeration(gen_complete(5), 2) == 30

    def test_low_degree_zero(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
        assert exact_star_count(g, 3) == 0 == exact_star_count_by_enumeration(g, 3)

    def test_sequence_and_table(self):
        assert exact_star_count([3, 1], 2) == 3
        assert exact_star_count(gen_table([3, 1]), 2) == 3
        assert exact_star_count(gen_table([1, 1, 1]), 2) == 0

    def test_directed_side(self):
        cyc = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)], directed=True)
        assert exact_star_count(cyc, 2, "in") == exact_star_count(cyc, 2, "out") == 0
        kb = Graph.from_edges(6, [(u, v) for u in range(3) for v in range(3, 6)], directed=True)
        assert exact_star_count(kb, 2, "out") == 9
        assert exact_star_count(kb, 2, "in") == 9

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**31 - 1), st.integers(2, 4))
    def test_enumeration_agrees(self, n, seed, p):
        m = int(np.random.default_rng(seed).integers(0, n * (n - 1) // 2 + 1))
        g = gen_erdos_renyi(n, m, seed=seed)
        assert exact_star_count(g, p) == exact_star_count_by_enumeration(g, p)

    def test_enumeration_guard(self):
        with pytest.raises(InvalidArgumentError):
            exact_star_count_by_enumeration(gen_star(400), 4)

    def test_bad_p(self, p3):
        with pytest.raises(InvalidArgumentError):
            exact_star_count(p3, 1)


class TestPaths:
    def test_single_arc(self):
        g = Graph.from_edges(2, [(0, 1)], directed=True)
        assert exact_path2_count(g) == 0 == exact_path2_by_enumeration(g)

    @pytest.mark.parametrize("n", [3, 7, 20])
    def test_cycle(self, n):
        g = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=True)
        assert exact_path2_count(g) == n == exact_path2_by_enumeration(g)
        assert l_prime(g) == n

    def test_enumeration_agrees(self):
        for seed in range(10):
            g = gen_ratio_digraph(60, 3, seed=seed)
            assert exact_path2_count(g) == exact_path2_by_enumeration(g)

    def test_two_cycle_counts(self):
        g = Graph.from_edges(2, [(0, 1), (1, 0)], directed=True)
        assert exact_path2_count(g) == 2

    def test_needs_direction(self, p3):
        with pytest.raises(InvalidArgumentError):
            exact_path2_count(p3)


class TestJoins:
    def test_join(self):
        t1 = gen_table([2, 3], ["a", "b"])
        t2 = gen_table([1, 4], ["a", "b"])
        assert exact_join_cardinality(t1, t2) == 14

    def test_disjoint(self):
        assert exact_join_cardinality(gen_table([2], ["a"]), gen_table([5], ["b"])) == 0

    def test_self_join_identity(self):
        t = gen_table([3, 1])
        card = exact_self_join_cardinality(t)
        assert card == exact_join_cardinality(t, t) == 10
        assert self_join_to_s2(card, t.rows) == 3 == exact_star_count(t, 2)


class TestExactCounts:
    def test_graph(self, p3):
        d = exact_counts(p3, [2, 3]).to_dict()
        assert d == {"n": 3, "m": 2, "S_p": {"2": 1, "3": 0}, "degree_histogram": {"1": 2, "2": 1}}
        json.dumps(d)

    def test_digraph_has_l(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)], directed=True)
        assert exact_counts(g).to_dict()["L"] == 1

    def test_table(self):
        d = exact_counts(gen_table([3, 1])).to_dict()
        assert d["S_p"] == {"2": 3} and d["self_join_cardinality"] == 10 and d["m"] == 4


class TestJensen:
    def test_binomial_real(self):
        assert binomial_real(5, 2) == 10
        assert binomial_real(Fraction(5, 2), 2) == Fraction(15, 8)
        assert binomial_real(Fraction(1, 2), 2) == 0

    @pytest.mark.parametrize("n", [4, 7, 12])
    def test_complete_tight(self, n):
        report = validate_jensen_bounds(gen_complete(n), 2)
        jensen = report.checks[0]
        assert report.passed and jensen.applicable and jensen.lhs == jensen.rhs

    def test_matching(self):
        g = Graph.from_edges(10, [(2 * i, 2 * i + 1) for i in range(5)])
        report = validate_jensen_bounds(g, 2)
        rare = next(c for c in report.checks if c.name == "rare_stars")
        assert report.s_p == 0 and rare.applicable and rare.holds

    @pytest.mark.parametrize("seed", range(15))
    def test_er_graphs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 120))
        g = gen_erdos_renyi(n, int(rng.integers(0, min(5 * n, n * (n - 1) // 2) + 1)), seed=seed)
        for p in (2, 3, 4):
            assert validate_jensen_bounds(g, p).passed

    def test_star_edges_vs_stars(self):
        report = validate_jensen_bounds(gen_star(50), 2)
        assert report.passed
        assert not report.checks[1].applicable

    def test_jensen_is_sharp_on_regular(self):
        # brute force: a regular graph meets n C(2m/n, p) with equality
        for n, d in ((10, 3), (9, 4)):
            g = gen_circulant_regular(n, d)
            jensen = validate_jensen_bounds(g, 3).checks[0]
            assert jensen.lhs == jensen.rhs == n * math.comb(d, 3)
