"""
Measured queries against the theoretical budget
===============================================

The number of queries should scale like W / S_p^(1/p) (up to log factors).
Here the column size W and label count n stay fixed while one heavy label
pushes S_2 up by four orders of magnitude.
"""

from starcount.bench import budget_spread, default_sweep, rows_to_csv, run_bench

sweep = default_sweep()
# Three of the five instances keep the demo quick.
sweep["tables"] = sweep["tables"][::2]
rows = run_bench(sweep, trials=1, seed=0)
print(rows_to_csv(rows))
for r in rows:
    print("%s  S_2=%-10d queries=%-9d queries/budget=%.3f" % (r.instance, r.exact, r.queries, r.budget_ratio))
print("spread of the ratio: %.2f" % budget_spread(rows))
