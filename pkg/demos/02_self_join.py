"""
Self-join size of a table column
================================

For a column whose label i occurs x_i times, S_2 = sum C(x_i, 2) counts the
unordered pairs of rows sharing a label. Sampling uniform rows plays the
role of sampling random edges, so the same estimator applies.
"""

import numpy as np

from starcount import EstimatorParams, self_join_estimate
from starcount.exact import exact_self_join_cardinality, exact_star_count, self_join_to_s2
from starcount.instances import gen_table

# Zipf-like counts: a few heavy labels and a long tail.
rng = np.random.default_rng(3)
counts = np.minimum(rng.zipf(1.6, size=5000), 4000)
table = gen_table(counts.tolist())
print("rows:", table.rows, " labels:", table.n)

s2 = exact_star_count(table, 2)
card = exact_self_join_cardinality(table)
# The equi-join row count sum x_i^2 and S_2 differ by the diagonal.
assert self_join_to_s2(card, table.rows) == s2
print("exact S_2:", s2, " join cardinality:", card)

report = self_join_estimate(table, EstimatorParams(2, 0.1), rng=7)
print("estimate: %.0f  using %d row samples over %d rounds" % (
    report.estimate, report.ledger.row_samples, report.iterations))

# The constants in the sample sizes (18 per sample batch, 40 for the median)
# are generous, so at this size the sampler reads more rows than a scan
# would. The point is how the count grows with the table: multiplying every
# label's count by 4 multiplies W by 4 and S_2 by about 16, so the sample
# size k ~ W / sqrt(S_2) barely moves.
bigger = gen_table((4 * counts).tolist())
r2 = self_join_estimate(bigger, EstimatorParams(2, 0.1), rng=7)
print("4x the rows: %d row samples (was %d)" % (r2.ledger.row_samples, report.ledger.row_samples))
