"""
Pairs of graphs that are hard to tell apart
===========================================

Lower bounds come from pairs of graphs with very different star counts
that look alike to an algorithm making few queries. This script builds the
two kinds used here and checks their counts exactly.
"""

from starcount.exact import exact_star_count
from starcount.instances import (
    gen_lemma_c5_params,
    gen_theorem41_pair,
    slab_pair_star_counts,
    planted_representation,
    slab_representation,
)

# Small S_p: a hidden set S carries either nothing or one star.
f1, f2 = gen_theorem41_pair(1000, 2, 100)
print("pair 1: S_2 =", exact_star_count(f1, 2), "vs", exact_star_count(f2, 2))

# Large S_p: a d1-regular "slab" graph, and the same graph with a few
# high-degree vertices spliced into a window of its port table.
n1, d1, n2, d2 = 64, 8, 4, 16
slab = slab_representation(n1, d1, n2)
planted = planted_representation(n1, d1, n2, d2, x=60, y=3)  # the window wraps around
planted.validate()
shared = len(slab.edge_set() & planted.edge_set())
print("slab edges %d, planted edges %d, shared %d" % (
    len(slab.edge_set()), len(planted.edge_set()), shared))
print("star counts (s1, s2):", slab_pair_star_counts(n1, d1, n2, d2, 2))
print("planted S_2 by brute force:", exact_star_count(planted.to_graph(), 2))

# Concrete parameters for a target S_p.
params = gen_lemma_c5_params(1024, 2, 4096, case=1)
print("n=1024, s=4096 ->", params, "star counts", slab_pair_star_counts(*params, 2))
