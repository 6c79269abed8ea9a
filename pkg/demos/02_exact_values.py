"""
Exact thresholds by exhaustive search
=====================================

Colourings are enumerated up to relabelling of colours (restricted-growth
strings), pruned as soon as a prefix already holds a flash or a rainbow.
"""

from flashbow.construct import reversed_edge_tournament
from flashbow.search import (adversarial_scan, compute_f, compute_t, count_canonical_colorings,
                             forcing_check)

# the enumerator alone produces the Bell numbers
print([count_canonical_colorings(e).leaves for e in range(1, 9)])

for l, k in [(2, 2), (3, 2), (4, 2), (2, 3)]:
    out = compute_f(l, k)
    last = out.history[-1]
    print(f"f({l},{k}) = {out.value}   forced at n={last.n} after {last.stats.nodes} nodes")

out = compute_t(2, 2)
print(f"t(2,2) = {out.value}, both tournaments on 3 vertices force")

# a 3-cycle is already forced for (2,3), one vertex below the transitive threshold
res = forcing_check(reversed_edge_tournament(3), 2, 3)
print(res.status, res.stats)

for entry in adversarial_scan(2, 3):
    print(entry.size, entry.tournament.edges(), "reversed-edge" if entry.is_reversed_edge else "")
