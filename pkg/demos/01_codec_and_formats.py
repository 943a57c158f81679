"""Encoding graphs as bitstrings.

A labeled graph on n nodes is the C(n,2)-bit string of its upper triangle,
read row by row.  This walks through the codec, relabeling, and the two
text formats.
"""
from krgraph import (
    Graph, Permutation, apply_permutation, edge_index, encode, from_graph6, induced_pattern,
    random_graph, to_graph6, to_native,
)

path = Graph.from_edges(3, [(1, 2), (2, 3)])
print("path 1-2-3 encodes as", encode(path))
print("pair (3,4) of a 4-node graph sits at bit", edge_index(3, 4, 4))

# relabeling permutes bit positions; swapping 1 and 2 moves the path's middle node
swapped = apply_permutation(path, Permutation((2, 1, 3)))
print("after swapping nodes 1 and 2:", encode(swapped))

# the 5-cycle restricted to nodes 1,2,3 is again a path
print("C5 on {1,2,3}:", encode(induced_pattern(Graph.cycle(5), [1, 2, 3])))

G = random_graph(8, seed=42)
print("random 8-node graph:", to_native(G), "/ graph6:", to_graph6(G))
assert from_graph6(to_graph6(G)) == G
