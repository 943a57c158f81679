"""Kolmogorov-random graph toolkit: codec, compression proxies, topology,
subgraph census, and exact automorphism / unlabeled-graph counting."""
from .graph import (
    RNG_ID, Graph, PatternGraph, Permutation, apply_permutation, bit_permutation, decode,
    degree, degree_sequence, edge_index, encode, from_graph6, from_native, induced_pattern,
    num_pairs, parse_graph, random_graph, spawn_seeds, to_graph6, to_native,
)
from .incompressibility import (
    BlockStatParams, BoundReport, DeficiencyEstimate, block_counts, block_deviation_bound,
    check_block_frequency, count_aligned, count_block, estimate_deficiency, prefix_surrogate,
    random_fraction_bound,
)
from .topology import (
    DISCONNECTED, TwoPathProfile, common_neighbor_counts, diameter, max_clique,
    node_connectivity, two_path_count,
)
from .census import (
    CensusResult, CoverFamily, all_patterns_present, baranyai_covers,
    count_occurrences, count_occurrences_in_cover, frequency_bound, k_threshold, subgraph_census,
    pattern_K_surrogate,
)
from .enumeration import (
    AutReport, LimitExceeded, UnlabeledCounts, aut_bound, automorphism_group, automorphisms,
    burnside_g, canonical_form, canonical_index, enumerate_unlabeled, moved_class,
    prob_class_bound, rigidity_deficiency_check,
)

__version__ = "0.1.0"
