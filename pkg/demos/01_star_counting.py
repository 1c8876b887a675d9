"""
Counting p-stars from degree and random-edge queries
====================================================

A p-star is a vertex together with p of its neighbors, so a graph has
S_p = sum over v of C(deg(v), p) of them. This walk-through estimates S_2
on a random graph while only asking the oracle for random edges and degrees.
"""

import numpy as np

from starcount import EstimatorParams, as_weighted_oracle, count_stars, exact_star_count
from starcount.instances import gen_erdos_renyi

# A G(n, m) graph with 3000 vertices and 12000 edges.
g = gen_erdos_renyi(3000, 12000, seed=1)
truth = exact_star_count(g, 2)
print("exact S_2:", truth)

# The oracle hands out endpoints of uniform random edges, i.e. vertices
# drawn in proportion to their degree. Every query is counted.
oracle = as_weighted_oracle(g)
report = count_stars(oracle, EstimatorParams(p=2, epsilon=0.1), rng=np.random.default_rng(0))
print("estimate:   %.0f  (relative error %.3f)" % (report.estimate, abs(report.estimate - truth) / truth))
print("iterations:", report.iterations)
print("queries:   ", report.ledger.as_dict())

# Each iteration halves the running guess until the median estimate agrees
# with it. The rounds are kept on the report.
for rnd in report.rounds[-3:]:
    print("  guess %.3g  k=%d  median %.0f" % (rnd.guess, rnd.k, rnd.median))

# A regular graph is the easy case: every sample gives the same value, so
# whichever round stops returns S_p exactly. For the complete graph the
# starting guess n C(n-1, p) is already right and one round suffices.
from starcount.instances import gen_circulant_regular, gen_complete

reg = gen_circulant_regular(500, 6)
r = count_stars(as_weighted_oracle(reg), EstimatorParams(2, 0.1), rng=0)
print("6-regular, n=500:", r.estimate, "==", exact_star_count(reg, 2), "after", r.iterations, "rounds")
r = count_stars(as_weighted_oracle(gen_complete(40)), EstimatorParams(2, 0.1), rng=0)
print("K_40:", r.estimate, "after", r.iterations, "round")
