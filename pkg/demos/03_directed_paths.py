"""
Directed 2-paths under a bounded in/out degree ratio
====================================================

A vertex v is the middle of in(v) * out(v) directed 2-paths. When every
vertex has in/out within [1/r, r] a rejection sampler draws v with
probability proportional to sqrt(in(v) out(v)), and averaging
sqrt(l(v)) * L' estimates the total L.
"""

import numpy as np

from starcount.directed import estimate_path2, max_degree_ratio, sqrt_weighted_batch
from starcount.exact import exact_path2_count, l_prime
from starcount.instances import gen_bipartite_backedge, gen_ratio_digraph

g = gen_ratio_digraph(4000, 2, seed=1, cycles=6)
print("arcs:", g.m, " worst in/out ratio:", max_degree_ratio(g))

L = exact_path2_count(g)
lp = l_prime(g)  # the estimator takes L' as an input
report = estimate_path2(g, r=2, epsilon=0.2, l_prime=lp, rng=np.random.default_rng(0))
print("exact L: %d  estimate: %.0f" % (L, report.estimate))
print("accepted %d, rejected %d" % (report.accepted, report.rejected))

# Rejection cost grows with r but stays below r attempts per sample.
for r in (1, 2, 4, 8):
    h = gen_ratio_digraph(1000, r, seed=r, cycles=6)
    s = sqrt_weighted_batch(h, r, 10_000, np.random.default_rng(r))
    print("r=%d: %.2f attempts per accepted sample" % (r, s.attempts / 10_000))

# Without the ratio bound, few queries cannot tell these two apart:
# a complete bipartite S -> T has no 2-paths, one back arc adds n of them.
print("L without back arc:", exact_path2_count(gen_bipartite_backedge(100)))
print("L with back arc:   ", exact_path2_count(gen_bipartite_backedge(100, True, seed=0)))
