"""How far is a graph from incompressible?

True Kolmogorov complexity is out of reach, but any lossless compressor
gives an upper bound on description length.  Structured graphs compress
well; seeded random graphs barely compress at all.
"""
import numpy as np

from krgraph import Graph, estimate_deficiency, random_graph, spawn_seeds
from krgraph.incompressibility import random_fraction_bound

n = 128
for name, G in [("empty", Graph.empty(n)), ("complete", Graph.complete(n)),
                ("cycle", Graph.cycle(n)), ("random", random_graph(n, 1))]:
    est = estimate_deficiency(G, "zlib")
    print(f"{name:>8}: {est.encoded_len} bits -> {est.compressed_len} compressed, "
          f"delta_hat = {est.delta_hat}")

# with calibration, the compressor's overhead on random input is credited back
vals = [estimate_deficiency(random_graph(n, s), calibrate=True).delta_hat for s in spawn_seeds(3, 20)]
print("calibrated delta_hat over 20 random graphs:", int(np.median(vals)), "(median)")

for d in (1, 2, 8):
    print(f"at least {random_fraction_bound(d):.4f} of all graphs are {d}-random")
