"""
Colourings with no long flash and no long rainbow
=================================================

Build the grid colouring, look at its colours, and confirm with the detectors
that it avoids l-flashes and k-rainbows.  Then colour a non-transitive
tournament with the antichain labels.
"""

import numpy as np

from flashbow import longest_flash, longest_rainbow, serialize
from flashbow.construct import antichain_coloring, antichain_labels, grid_coloring, grid_labels
from flashbow.model import random_tournament

# four vertices labelled (1,1) (1,2) (2,1) (2,2); an edge gets the first coordinate that increases
g = grid_coloring(2, 3)
print(grid_labels(2, 3))
print(serialize(g))

# the colour matrix itself (0 on the diagonal and on backward pairs)
print(g.colors)

length, cert = longest_flash(g)
print("longest flash:", length, cert)
length, cert = longest_rainbow(g, 3)
print("longest rainbow:", length, cert)

# bigger grids stay clean: flash l-1, rainbow k-1
for l, k in [(3, 3), (4, 3), (3, 4), (6, 5)]:
    ct = grid_coloring(l, k)
    print(f"grid({l},{k}): n={ct.n:5d}  flash={longest_flash(ct).length}  rainbow={longest_rainbow(ct, k).length}")

# the middle layer of the grid is an antichain, so any tournament on it can be coloured
labels = antichain_labels(4, 3)
print(labels)
t = random_tournament(len(labels), seed=11)
ct = antichain_coloring(t, 4, 3)
print(np.array(t.adj, dtype=int))
print("flash", longest_flash(ct).length, "rainbow", longest_rainbow(ct, 3).length)
