"""Typical shape of a random graph on 64 nodes.

Most pairs share about n/4 neighbours, so the diameter is 2, and the graph
is highly connected.  Cliques stay small, around log2 of n times a constant.
"""
import math

import numpy as np

from krgraph import random_graph, spawn_seeds
from krgraph.topology import common_neighbor_counts, diameter, max_clique, node_connectivity

n = 64
rows = []
for s in spawn_seeds(2026, 10):
    G = random_graph(n, s)
    cn = common_neighbor_counts(G)[np.triu_indices(n, 1)]
    rows.append((diameter(G), node_connectivity(G), max_clique(G), cn.min(), cn.mean()))

print("diam  kappa  clique  min-common  mean-common")
for d, k, w, lo, mu in rows:
    print(f"{d:>4}  {k:>5}  {w:>6}  {lo:>10}  {mu:>11.2f}")
print(f"reference: n/4 = {n / 4:g}, (n-2)/4 = {(n - 2) / 4:g}, 2 log2 n = {2 * math.log2(n):g}")
