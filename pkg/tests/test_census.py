import itertools
import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import exact_count_variance as _exact_count_variance

from krgraph import Graph, induced_pattern, num_pairs, random_graph, spawn_seeds
from krgraph.census import (
    CoverFamily, all_patterns_present, baranyai_covers, count_occurrences,
    count_occurrences_in_cover, cover_block_string, frequency_bound, k_threshold,
    pattern_K_surrogate, subgraph_census,
)

DIVISIBLE = [(n, k) for n in range(1, 13) for k in range(1, 5) if k <= n and n % k == 0]


def _perfect_matchings(nodes):
    if not nodes:
        yield []
        return
    a, rest = nodes[0], nodes[1:]
    for b in rest:
        for m in _perfect_matchings([x for x in rest if x != b]):
            yield [(a, b)] + m


def _brute_count(G: Graph, H: Graph) -> int:
    return sum(induced_pattern(G, S) == H for S in itertools.combinations(range(1, G.n + 1), H.n))


@st.composite
def graphs(draw, min_n=2, max_n=9):
    n = draw(st.integers(min_n, max_n))
    return Graph(n, draw(st.integers(0, (1 << num_pairs(n)) - 1)))


# -- covers -----------------------------------------------------------------

@pytest.mark.parametrize("n,k", DIVISIBLE)
def test_cover_family_invariants(n, k):
    fam = baranyai_covers(n, k)
    fam.validate()
    seen = [tuple(S) for cover in fam.covers for S in cover]
    assert sorted(seen) == list(itertools.combinations(range(1, n + 1), k))
    for cover in fam.covers:
        assert sorted(v for S in cover for v in S) == list(range(1, n + 1))
    assert fam.h * fam.N == math.comb(n, k) and fam.N == n // k
    assert baranyai_covers(n, k) == fam


def test_cover_trivial_cases():
    assert baranyai_covers(5, 5).covers == (((1, 2, 3, 4, 5),),)
    assert baranyai_covers(4, 1).covers == (((1,), (2,), (3,), (4,)),)


def test_k4_pairs_are_the_unique_one_factorisation():
    # K4 has exactly 3 perfect matchings; they must be the 3 covers
    matchings = {frozenset(m) for m in _perfect_matchings([1, 2, 3, 4])}
    assert len(matchings) == 3
    covers = {frozenset(tuple(S) for S in c) for c in baranyai_covers(4, 2).covers}
    assert covers == matchings


def test_cover_errors():
    with pytest.raises(ValueError):
        baranyai_covers(10, 3)
    with pytest.raises(ValueError):
        baranyai_covers(40, 4, limit=1000)
    with pytest.raises(ValueError):
        baranyai_covers(4, 0)


def test_validate_catches_corruption():
    fam = baranyai_covers(6, 2)
    bad = CoverFamily(6, 2, fam.covers[:-1] + (fam.covers[0],))
    with pytest.raises(ValueError):
        bad.validate()


def test_cover_json_round_trip():
    fam = baranyai_covers(9, 3)
    doc = json.loads(fam.to_json())
    assert doc["n"] == 9 and doc["k"] == 3 and len(doc["covers"]) == fam.h
    assert CoverFamily.from_dict(doc) == fam


# -- occurrence counts ------------------------------------------------------

def test_count_examples():
    edge, non_edge = Graph.complete(2), Graph.empty(2)
    for n in range(2, 8):
        assert count_occurrences(Graph.complete(n), edge) == math.comb(n, 2)
        assert count_occurrences(Graph.complete(n), non_edge) == 0
    assert count_occurrences(Graph.cycle(5), Graph.complete(3)) == 0
    with pytest.raises(ValueError):
        count_occurrences(Graph.complete(3), Graph.complete(4))


@settings(max_examples=80)
@given(graphs(), st.data())
def test_count_matches_brute_force(G, data):
    k = data.draw(st.integers(1, min(G.n, 4)))
    H = Graph(k, data.draw(st.integers(0, (1 << num_pairs(k)) - 1)))
    assert count_occurrences(G, H) == _brute_count(G, H)
    assert count_occurrences(G, H) == count_occurrences(G.complement(), H.complement())


@settings(max_examples=60)
@given(graphs(max_n=10), st.integers(1, 4))
def test_counts_over_patterns_partition_subsets(G, k):
    if k > G.n:
        return
    res = subgraph_census(G, k)
    assert sum(r.total for r in res) == math.comb(G.n, k)
    assert [r.H.code for r in res] == list(range(1 << num_pairs(k)))


def test_per_cover_examples():
    for n, k in [(6, 2), (6, 3), (8, 4)]:
        fam = baranyai_covers(n, k)
        for i in range(fam.h):
            assert count_occurrences_in_cover(Graph.complete(n), Graph.complete(k), fam, i) == fam.N
            assert count_occurrences_in_cover(Graph.empty(n), Graph.complete(k), fam, i) == 0
    fam = baranyai_covers(4, 2)
    G = Graph.from_edges(4, [(1, 2)])
    assert sorted(count_occurrences_in_cover(G, Graph.complete(2), fam, i) for i in range(3)) == [0, 0, 1]


def test_per_cover_errors():
    fam = baranyai_covers(6, 2)
    with pytest.raises(IndexError):
        count_occurrences_in_cover(Graph.empty(6), Graph.empty(2), fam, fam.h)
    with pytest.raises(ValueError):
        count_occurrences_in_cover(Graph.empty(8), Graph.empty(2), fam, 0)
    with pytest.raises(ValueError):
        count_occurrences_in_cover(Graph.empty(6), Graph.empty(3), fam, 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(6, 2), (6, 3), (8, 2), (8, 4), (9, 3), (12, 3)]), st.integers(0, 2**32))
def test_per_cover_counts_sum_to_total(nk, seed):
    n, k = nk
    fam = baranyai_covers(n, k)
    G = random_graph(n, seed)
    for r in subgraph_census(G, k, fam):
        assert sum(r.per_cover) == r.total
        assert r.per_cover == [count_occurrences_in_cover(G, r.H, fam, i) for i in range(fam.h)]


def test_cover_block_string():
    fam = baranyai_covers(6, 3)
    G = random_graph(6, 4)
    s = cover_block_string(G, fam, 0)
    expected = "".join(
        "".join(str(b) for b in induced_pattern(G, list(S)).bits) for S in fam.covers[0])
    assert s == expected and len(s) == fam.N * 3


# -- bounds -----------------------------------------------------------------

def _mp_frequency_bound(n, k, K_H, delta=0, c=0, lemma=False):
    mpmath.mp.dps = 40
    total = mpmath.binomial(n, k)
    h = total / (n // k)
    p = mpmath.mpf(2) ** -(k * (k - 1) // 2)
    log2e = mpmath.log(mpmath.e, 2)
    if lemma:
        l = k * (k - 1) // 2
        alpha = (K_H + mpmath.log(max(1, l), 2) + delta + mpmath.log(h, 2) + c) * 3 * l / log2e
    else:
        alpha = (K_H + delta + mpmath.log(h, 2) + c) * 3 / log2e
    return total * mpmath.sqrt(alpha * mpmath.mpf(k) / n * p)


def test_frequency_bound_example():
    b = frequency_bound(16, 2, 1)
    assert b == pytest.approx(float(_mp_frequency_bound(16, 2, 1)), rel=1e-12)
    assert round(b, 1) == 95.8


@pytest.mark.parametrize("n,k,K,delta,c", [(24, 3, 5.3, 2, 1), (12, 4, 10, 0, 0), (30, 5, 7, 3, 0.5)])
def test_frequency_bound_variants_against_mpmath(n, k, K, delta, c):
    for variant, lemma in [("theorem", False), ("lemma", True)]:
        got = frequency_bound(n, k, K, delta, c, variant)
        assert got == pytest.approx(float(_mp_frequency_bound(n, k, K, delta, c, lemma)), rel=1e-12)


def test_frequency_bound_degenerate_and_errors():
    n = 5
    alpha = (3.0 + 0 + 0) * 3 / math.log2(math.e)
    assert frequency_bound(n, n, 3.0) == pytest.approx(math.sqrt(alpha * 2.0 ** -10))
    with pytest.raises(ValueError):
        frequency_bound(10, 3, 1)
    with pytest.raises(ValueError):
        frequency_bound(10, 2, 1, variant="other")


@given(st.sampled_from([(16, 2), (24, 3), (12, 4), (64, 4)]), st.floats(0, 40), st.floats(0, 40),
       st.floats(0, 40), st.sampled_from(["theorem", "lemma"]))
def test_frequency_bound_monotone(nk, K, delta, c, variant):
    n, k = nk
    base = frequency_bound(n, k, K, delta, c, variant)
    assert frequency_bound(n, k, K, delta + 1, c, variant) > base
    assert frequency_bound(n, k, K + 1, delta, c, variant) > base
    assert frequency_bound(n, k, K, delta, c + 1, variant) > base


def test_census_result_fields():
    fam = baranyai_covers(24, 3)
    res = subgraph_census(random_graph(24, 8), 3, fam, c=1.0)
    assert len(res) == 8
    for r in res:
        assert r.p == 1 / 8 and r.expected == math.comb(24, 3) / 8
        assert r.bound == frequency_bound(24, 3, pattern_K_surrogate(3), 0, 1.0)
        assert r.within == (abs(r.total - r.expected) <= r.bound)
        assert json.loads(json.dumps(r.to_dict()))["pattern"] == format(r.H.code, "03b")


def test_exact_count_variance_small_case():
    # n=4, k=2: the 6 edge indicators are independent
    assert _exact_count_variance(4, 2) == pytest.approx([1.5, 1.5])
    # brute force over all 64 graphs on 4 nodes for k=3
    counts = np.array([[r.total for r in subgraph_census(Graph(4, c), 3)] for c in range(64)])
    assert _exact_count_variance(4, 3) == pytest.approx(list(counts.var(axis=0)))


def test_census_mean_matches_expectation():
    samples, n = 1000, 24
    for k in (2, 3):
        totals = np.array([[r.total for r in subgraph_census(random_graph(n, s), k)]
                           for s in spawn_seeds(100 + k, samples)])
        p = 2.0 ** -num_pairs(k)
        var = np.array(_exact_count_variance(n, k))
        assert np.all(np.abs(totals.mean(axis=0) - math.comb(n, k) * p) <= 3 * np.sqrt(var / samples))
        # overlapping subsets are positively correlated, so the spread exceeds C(n,k) p (1-p)
        assert np.allclose(totals.var(axis=0) / var, 1, atol=0.15)


# -- all patterns -----------------------------------------------------------

def test_all_patterns_examples():
    ok, missing = all_patterns_present(Graph.complete(6), 2)
    assert not ok and missing == [Graph.empty(2)]
    ok, missing = all_patterns_present(Graph.path(4), 2)
    assert ok and missing == []
    with pytest.raises(ValueError):
        all_patterns_present(random_graph(20, 1), 6, limit=1000)


def test_all_patterns_monte_carlo_at_64():
    hits = sum(all_patterns_present(random_graph(64, s), 3)[0] for s in spawn_seeds(64, 100))
    print(f"all 8 three-node patterns present in {hits}/100 random graphs at n=64")
    assert hits >= 95


# -- threshold --------------------------------------------------------------

@pytest.mark.parametrize("n,k", [(2, 1), (256, 4), (64, 3), (3, 1), (4, 2), (255, 3), (2**25, 7)])
def test_k_threshold_examples(n, k):
    t = k_threshold(n)
    assert t.k == k
    assert t.K_surrogate == pattern_K_surrogate(k)


def test_k_threshold_matches_float_formula():
    for n in range(2, 5000):
        exact = k_threshold(n).k
        approx = math.sqrt(2 * math.log2(n))
        # floats can only disagree right at a perfect square
        if abs(approx - round(approx)) > 1e-9:
            assert exact == math.floor(approx)
    with pytest.raises(ValueError):
        k_threshold(1)
