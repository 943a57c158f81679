"""Automorphism groups, canonical forms and unlabeled graph counting.

Everything here works on small graphs exactly: group orders, ``g_n`` and
the expected automorphism-group size ``E_n`` are arbitrary-precision
integers or :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import bisect
import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graph import Graph, Permutation, _index_matrix, _pair_table, num_pairs, relabel_by_order


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


ENUM_LIMIT = _env_int("KRGRAPH_LIMIT_ENUM", 7)
AUT_LIMIT = _env_int("KRGRAPH_LIMIT_AUT", 10)
BURNSIDE_LIMIT = _env_int("KRGRAPH_LIMIT_BURNSIDE", 32)


class LimitExceeded(ValueError):
    """Requested size is beyond a configured exhaustive-search limit."""


def _check_limit(n: int, limit: int, what: str) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > limit:
        raise LimitExceeded(f"{what} is limited to n <= {limit}, got n={n}")


# -- partition refinement ---------------------------------------------------


def _refine(rows: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    Fragments of a split cell are ordered by neighbour count into the
    splitting cell, so the result commutes with relabeling.
    """
    cells = [c[:] for c in cells]
    while True:
        for splitter in cells:
            if len(splitter) == len(rows):
                mask = (1 << len(rows)) - 1
            else:
                mask = 0
                for v in splitter:
                    mask |= 1 << v
            new: list[list[int]] = []
            split = False
            for c in cells:
                if len(c) == 1:
                    new.append(c)
                    continue
                groups: dict[int, list[int]] = {}
                for v in c:
                    groups.setdefault((rows[v] & mask).bit_count(), []).append(v)
                if len(groups) == 1:
                    new.append(c)
                else:
                    split = True
                    new.extend(groups[key] for key in sorted(groups))
            if split:
                cells = new
                break
        else:
            return cells


def _individualize(cells: list[list[int]], t: int, v: int) -> list[list[int]]:
    rest = [u for u in cells[t] if u != v]
    return cells[:t] + [[v], rest] + cells[t + 1:]


def _invariant(rows: tuple[int, ...], cells: list[list[int]]) -> tuple:
    masks = []
    for c in cells:
        m = 0
        for v in c:
            m |= 1 << v
        masks.append(m)
    # sizes plus the quotient matrix of the (equitable) partition
    return tuple(len(c) for c in cells), tuple(
        (rows[c[0]] & m).bit_count() for c in cells for m in masks)


def _target(cells: list[list[int]]) -> int | None:
    for t, c in enumerate(cells):
        if len(c) > 1:
            return t
    return None


def _leaf_key(rows: tuple[int, ...], order: list[int]) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(order)}
    key = []
    for v in order:
        r, m = rows[v], 0
        while r:
            low = r & -r
            m |= 1 << pos[low.bit_length() - 1]
            r ^= low
        key.append(m)
    return tuple(key)


@dataclass
class _Search:
    n: int
    base: list[int]
    transversals: list[dict[int, tuple[int, ...]]]
    generators: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def elements(self) -> np.ndarray:
        """Every group element as a row of 0-based images."""
        E = np.arange(self.n, dtype=np.int8)[None, :]
        for trans in reversed(self.transversals):
            us = np.array(list(trans.values()), dtype=np.int8)
            E = us[:, E].reshape(-1, self.n)
        return E


def _compose(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(g[x] for x in h)


def _aut_search(G: Graph) -> _Search:
    """Automorphism group via individualization-refinement with a stabilizer chain.

    Walks the leftmost branch to a first leaf, then bottom-up computes the
    orbit of each base point under its pointwise stabilizer, searching a
    sibling subtree only when the generators found so far do not already
    reach it.  The group order is the product of those orbit lengths.
    """
    n = G.n
    rows = G.rows
    path = [_refine(rows, [list(range(n))])]
    base: list[int] = []
    while (t := _target(path[-1])) is not None:
        v = min(path[-1][t])
        base.append(v)
        path.append(_refine(rows, _individualize(path[-1], t, v)))
    invs = [_invariant(rows, p) for p in path]
    zeta = [c[0] for c in path[-1]]
    zeta_key = _leaf_key(rows, zeta)

    def find(cells, depth):
        if _invariant(rows, cells) != invs[depth]:
            return None
        t = _target(cells)
        if t is None:
            order = [c[0] for c in cells]
            if _leaf_key(rows, order) != zeta_key:
                return None
            g = [0] * n
            for a, b in zip(zeta, order):
                g[a] = b
            return tuple(g)
        for w in sorted(cells[t]):
            found = find(_refine(rows, _individualize(cells, t, w)), depth + 1)
            if found is not None:
                return found
        return None

    def orbit(v, gens):
        trans = {v: tuple(range(n))}
        queue = [v]
        while queue:
            x = queue.pop()
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = _compose(g, trans[x])
                    queue.append(y)
        return trans

    gens: list[tuple[int, ...]] = []
    transversals: list[dict] = [{}] * len(base)
    for lvl in reversed(range(len(base))):
        cells = path[lvl]
        t = _target(cells)
        v = base[lvl]
        trans = orbit(v, gens)
        excluded: set[int] = set()
        for w in sorted(cells[t]):
            if w in trans or w in excluded:
                continue
            g = find(_refine(rows, _individualize(cells, t, w)), lvl + 1)
            if g is None:
                excluded |= orbit(w, gens).keys()
            else:
                gens.append(g)
                trans = orbit(v, gens)
        transversals[lvl] = dict(sorted(trans.items()))
    return _Search(n, base, transversals, gens)


@dataclass
class AutReport:
    aut_size: int
    moved: int
    rigid: bool
    orbit_size: int
    generators: list[Permutation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"aut_size": self.aut_size, "moved": self.moved, "rigid": self.rigid,
                "orbit_size": self.orbit_size,
                "generators": [list(g.mapping) for g in self.generators]}


def automorphisms(G: Graph, limit: int = AUT_LIMIT) -> AutReport:
    """Exact automorphism group order, largest moved-node count, and rigidity."""
    _check_limit(G.n, limit, "automorphism search")
    s = _aut_search(G)
    order = s.order
    if order == 1:
        moved = 0
    else:
        E = s.elements()
        moved = int((E != np.arange(G.n)).sum(axis=1).max())
    return AutReport(
        aut_size=order, moved=moved, rigid=order == 1,
        orbit_size=math.factorial(G.n) // order,
        generators=[Permutation.from_zero_based(g) for g in s.generators],
    )


def automorphism_group(G: Graph, limit: int = AUT_LIMIT) -> list[Permutation]:
    """All automorphisms of ``G`` as permutations."""
    _check_limit(G.n, limit, "automorphism search")
    return [Permutation.from_zero_based(row) for row in _aut_search(G).elements()]


def moved_class(G: Graph, limit: int = AUT_LIMIT) -> int:
    """Largest number of nodes moved by a single automorphism (0 iff rigid, never 1)."""
    return automorphisms(G, limit).moved


def is_automorphism(G: Graph, perm: Permutation) -> bool:
    from .graph import apply_permutation
    return apply_permutation(G, perm) == G


def aut_bound(n: int, m: int) -> int:
    """``n**m``, an upper bound on the group order of a graph whose automorphisms move ``m`` nodes."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    return n ** m


@dataclass(frozen=True)
class ProbBound:
    value: float
    vacuous: bool

    def __float__(self) -> float:
        return self.value


def prob_class_bound(n: int, m: int) -> ProbBound:
    """``2^(-m(n/2 - 3m/8 - log2 n))``; flagged vacuous when it is not below 1."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    value = 2.0 ** (-m * (n / 2 - 3 * m / 8 - math.log2(n)))
    return ProbBound(value, not value < 1)


# -- canonical form ---------------------------------------------------------


def _canonical_order(G: Graph, limit: int) -> list[int]:
    """Relabeling (new label -> old 0-based node) giving the lexicographically least encoding.

    Builds the labeling one row at a time: the next node must come from the
    first cell of the ordered partition induced by the rows already fixed, and
    only the candidates minimizing the new row survive.  Candidates in the
    same orbit of the pointwise stabilizer of the chosen prefix give equal
    completions, so only one per orbit is kept.
    """
    _check_limit(G.n, limit, "canonical form")
    n = G.n
    rows = G.rows
    search = _aut_search(G)
    E = search.elements() if search.order > 1 else None

    # state: (prefix, cells, stabilizer rows)
    states = [([], [list(range(n))], E)]
    for _ in range(n):
        best_row = None
        nxt = []
        for prefix, cells, stab in states:
            first = cells[0]
            if stab is not None and len(stab) > 1:
                reps, seen = [], set()
                for u in sorted(first):
                    if u in seen:
                        continue
                    reps.append(u)
                    seen.update(int(x) for x in np.unique(stab[:, u]))
            else:
                reps = sorted(first)
            for u in reps:
                rest = [[x for x in first if x != u]] + cells[1:]
                row: list[int] = []
                new_cells = []
                for c in rest:
                    if not c:
                        continue
                    zeros = [x for x in c if not rows[u] >> x & 1]
                    ones = [x for x in c if rows[u] >> x & 1]
                    row.extend([0] * len(zeros) + [1] * len(ones))
                    new_cells.extend(part for part in (zeros, ones) if part)
                key = tuple(row)
                if best_row is None or key < best_row:
                    best_row, nxt = key, []
                if key == best_row:
                    sub = None if stab is None else stab[stab[:, u] == u]
                    nxt.append((prefix + [u], new_cells, sub))
        states = nxt
    return states[0][0]


def canonical_form(G: Graph, limit: int = AUT_LIMIT) -> Graph:
    """Lexicographically minimal encoding over all relabelings of ``G``."""
    return relabel_by_order(G, _canonical_order(G, limit))


# -- exhaustive enumeration -------------------------------------------------


@lru_cache(maxsize=None)
def _permutation_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    iu, ju = _pair_table(n)
    Q = _index_matrix(n)[perms[:, iu], perms[:, ju]]
    return perms, Q


@dataclass
class LabeledClasses:
    """Every labeled graph on ``n`` nodes, grouped into isomorphism classes."""

    n: int
    reps: np.ndarray        # canonical (least) code of each class, ascending
    aut_size: np.ndarray    # group order per class
    moved: np.ndarray       # largest moved-node count per class
    class_of: np.ndarray    # class index of every code 0 .. 2^N - 1

    @property
    def orbit_size(self) -> np.ndarray:
        return math.factorial(self.n) // self.aut_size


@lru_cache(maxsize=None)
def labeled_classes(n: int, limit: int = ENUM_LIMIT) -> LabeledClasses:
    """Walk all ``2^C(n,2)`` encodings in increasing order, keeping each graph
    not reachable by relabeling an earlier one and marking its whole orbit.
    """
    _check_limit(n, limit, "exhaustive enumeration")
    N = num_pairs(n)
    perms, Q = _permutation_tables(n)
    weights = np.left_shift(np.int64(1), (N - 1 - Q).astype(np.int64))
    moved_by = (perms != np.arange(n)).sum(axis=1)
    class_of = np.full(1 << N, -1, dtype=np.int32)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    reps, auts, moved = [], [], []
    pos = 0
    total = 1 << N
    while pos < total:
        free = np.flatnonzero(class_of[pos:pos + 65536] < 0)
        if not len(free):
            pos += 65536
            continue
        code = pos + int(free[0])
        bits = (np.int64(code) >> shifts) & 1
        images = (weights * bits).sum(axis=1)
        fixed = images == code
        class_of[images] = len(reps)
        reps.append(code)
        auts.append(int(fixed.sum()))
        moved.append(int(moved_by[fixed].max()))
        pos = code + 1
    return LabeledClasses(n, np.array(reps, dtype=np.int64), np.array(auts, dtype=np.int64),
                          np.array(moved, dtype=np.int64), class_of)


@dataclass
class UnlabeledCounts:
    n: int
    g_n: int
    E_n: Fraction
    lower: Fraction
    upper: Fraction
    per_m_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def within_bounds(self) -> bool:
        return self.lower <= self.g_n <= self.upper

    def to_dict(self) -> dict:
        return {"n": self.n, "g_n": str(self.g_n), "E_n": _frac_str(self.E_n),
                "lower": _frac_str(self.lower), "upper": _frac_str(self.upper),
                "per_m_histogram": {str(m): c for m, c in sorted(self.per_m_histogram.items())}}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def unlabeled_counts(n: int, g_n: int, per_m_histogram: dict[int, int] | None = None) -> UnlabeledCounts:
    """Exact ``E_n`` and the two-sided estimate ``2^C(n,2)/n! (1 + 4n^4/2^n)`` for a known ``g_n``."""
    lower = Fraction(2 ** num_pairs(n), math.factorial(n))
    upper = lower * (1 + Fraction(4 * n ** 4, 2 ** n))
    E_n = Fraction(g_n * math.factorial(n), 2 ** num_pairs(n))
    return UnlabeledCounts(n, g_n, E_n, lower, upper, dict(per_m_histogram or {}))


def enumerate_unlabeled(n: int, limit: int = ENUM_LIMIT) -> tuple[list[Graph], UnlabeledCounts]:
    """One representative (the least encoding) per isomorphism class, plus exact counts."""
    lc = labeled_classes(n, limit)
    reps = [Graph(n, int(c)) for c in lc.reps]
    hist: dict[int, int] = {}
    for m, size in zip(lc.moved.tolist(), lc.orbit_size.tolist()):
        hist[m] = hist.get(m, 0) + size
    return reps, unlabeled_counts(n, len(reps), hist)


def canonical_index(G: Graph, limit: int = ENUM_LIMIT) -> tuple[int, int]:
    """Rank of ``G``'s class among enumerated representatives, and ``ceil(log2 g_n)``."""
    lc = labeled_classes(G.n, limit)
    rep = int(lc.reps[lc.class_of[G.code]])
    idx = bisect.bisect_left(lc.reps.tolist(), rep)
    g = len(lc.reps)
    return idx, (g - 1).bit_length()


# -- Burnside oracle --------------------------------------------------------


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def pair_cycles(cycle_type: tuple[int, ...]) -> int:
    """Cycles induced on unordered node pairs by a permutation of the given cycle type."""
    total = sum(c // 2 for c in cycle_type)
    for a, b in itertools.combinations(cycle_type, 2):
        total += math.gcd(a, b)
    return total


def burnside_g(n: int, limit: int = BURNSIDE_LIMIT) -> int:
    """Exact number of unlabeled graphs by averaging fixed points over cycle types."""
    _check_limit(n, limit, "Burnside count")
    total = Fraction(0)
    for lam in _partitions(n):
        z = 1
        for part, mult in ((p, lam.count(p)) for p in set(lam)):
            z *= part ** mult * math.factorial(mult)
        total += Fraction(2 ** pair_cycles(lam), z)
    if total.denominator != 1:
        raise ArithmeticError("orbit count is not an integer")
    return total.numerator


# -- rigidity ---------------------------------------------------------------


@dataclass(frozen=True)
class RigidityReport:
    rigid: bool
    aut_size: int
    delta_hat: float
    threshold: float
    below_threshold: bool

    @property
    def falsification_candidate(self) -> bool:
        """Deficiency estimate is under the rigidity threshold, yet the graph is not rigid."""
        return self.below_threshold and not self.rigid

    def to_dict(self) -> dict:
        return {"rigid": self.rigid, "aut_size": self.aut_size, "delta_hat": self.delta_hat,
                "threshold": self.threshold, "below_threshold": self.below_threshold,
                "falsification_candidate": self.falsification_candidate}


def rigidity_threshold(n: int) -> float:
    return n + math.log2(n) + 2


def rigidity_deficiency_check(G: Graph, delta_hat: float, limit: int = AUT_LIMIT) -> RigidityReport:
    """Compare rigidity with whether the deficiency estimate is at most ``n + log2 n + 2``.

    ``delta_hat`` is a compressor proxy, so a flagged combination is a
    diagnostic rather than a contradiction.
    """
    rep = automorphisms(G, limit)
    thr = rigidity_threshold(G.n)
    return RigidityReport(rep.rigid, rep.aut_size, delta_hat, thr, delta_hat <= thr)


def labeled_graph_count(n: int) -> int:
    return 2 ** num_pairs(n)


def is_isomorphic(G: Graph, H: Graph, limit: int = AUT_LIMIT) -> bool:
    return G.n == H.n and canonical_form(G, limit) == canonical_form(H, limit)

