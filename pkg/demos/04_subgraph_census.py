"""Counting small ordered patterns.

The k-subsets of the nodes split into covers, each a partition of the node
set into n/k blocks.  Within one cover the blocks are disjoint, so the
pattern counts behave like independent trials; summing over covers gives
the total count and its deviation envelope.
"""
import math

from krgraph import random_graph
from krgraph.census import all_patterns_present, baranyai_covers, k_threshold, subgraph_census

n, k = 12, 3
fam = baranyai_covers(n, k)
print(f"{math.comb(n, k)} triples of {n} nodes split into {fam.h} covers of {fam.N} blocks")
print("first cover:", fam.covers[0])

G = random_graph(24, 5)
fam24 = baranyai_covers(24, 3)
for r in subgraph_census(G, 3, fam24):
    print(f"pattern {r.H.code:03b}: {r.total:4d} (expected {r.expected:.0f}, envelope +-{r.bound:.1f})")

thr = k_threshold(64)
ok, missing = all_patterns_present(random_graph(64, 7), thr.k)
print(f"n=64: every {thr.k}-node pattern present: {ok}")
