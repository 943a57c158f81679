"""From labeled to unlabeled graphs.

Walk every encoding in increasing order, keeping each one that is not a
relabeling of an earlier graph.  The number kept is the number of
isomorphism classes, which an orbit-counting formula gives independently.
"""
from krgraph import canonical_form, random_graph
from krgraph.enumeration import (
    automorphisms, burnside_g, canonical_index, enumerate_unlabeled,
)

print(" n   enumerated  burnside  E_n")
for n in range(1, 8):
    reps, counts = enumerate_unlabeled(n)
    print(f"{n:2d} {len(reps):12d} {burnside_g(n):9d}  {float(counts.E_n):.4f}")

for n in range(8, 13):
    print(f"{n:2d} {'':>12} {burnside_g(n):9d}")

G = random_graph(7, 11)
idx, bits = canonical_index(G)
print(f"a 7-node graph needs 21 bits labeled, but only {bits} to name its class (#{idx})")
print("canonical form:", canonical_form(G).code, "aut size:", automorphisms(G).aut_size)
