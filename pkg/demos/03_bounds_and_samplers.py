"""
Upper bounds and the random deletion arguments
==============================================
"""

import numpy as np

from flashbow.bounds import build_table, emit_table
from flashbow.construct import grid_coloring
from flashbow.structure import (decompose, deletion_expectation_bound, deletion_probability,
                                deletion_trials, forward_max_ordering, half_domination_holds,
                                strongly_robust_vertices, window_trials)
from flashbow.model import random_tournament

# bound table for l = 3; every number is an exact integer
print(emit_table(build_table(3, 6)))

# for large l the closed forms take over
tb = build_table(100, 4)
print([(r.k, r.best, r.best_source) for r in tb.rows])

# deletion sampler: at most one vertex survives, and on average not too few
ct = grid_coloring(3, 3)
print("p =", deletion_probability(3))
batch = deletion_trials(ct, 3, 20_000, seed=0)
print("max survivors", batch.sizes.max(), "mean", batch.sizes.mean(),
      "bound", deletion_expectation_bound(ct, 3))

# window sampler with m = 2
batch = window_trials(ct, 3, 2, 2000, seed=0)
print("mean window survivors", batch.sizes.mean())

# robustness and the pivot decomposition
rep = strongly_robust_vertices(ct, 3)
print("strongly robust:", rep.strongly_robust())
dec = decompose(ct, 3, 2)
print("pivot", dec.pivot, "U", sorted(dec.U), "checks", dec.checks)

# orderings that keep many edges forward
t = random_tournament(12, seed=5)
order = forward_max_ordering(t, seed=5)
print(order, half_domination_holds(t, order))
print(np.array(t.adj, dtype=int)[np.ix_(np.array(order) - 1, np.array(order) - 1)])
