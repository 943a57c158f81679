"""Ordered labeled subgraph census, Baranyai cover partitions and frequency bounds."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Graph, num_pairs
from .incompressibility import LOG2E, prefix_surrogate

DEFAULT_SUBSET_LIMIT = 2_000_000
DEFAULT_PATTERN_LIMIT = 1 << 16


@dataclass(frozen=True)
class CoverFamily:
    """Partition of all ``k``-subsets of ``{1..n}`` into ``h`` perfect covers of ``N = n/k`` blocks."""

    n: int
    k: int
    covers: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def N(self) -> int:
        return self.n // self.k

    @property
    def h(self) -> int:
        return len(self.covers)

    @cached_property
    def subset_cover(self) -> np.ndarray:
        """Cover index of each ``k``-subset, aligned with :func:`subsets` order."""
        rank = {s: r for r, s in enumerate(itertools.combinations(range(1, self.n + 1), self.k))}
        out = np.full(len(rank), -1, dtype=np.intp)
        for i, cover in enumerate(self.covers):
            for s in cover:
                out[rank[s]] = i
        return out

    def validate(self) -> None:
        """Raise ``ValueError`` unless every invariant of a cover partition holds."""
        n, k = self.n, self.k
        if k < 1 or n % k:
            raise ValueError(f"k={k} does not divide n={n}")
        everyone = set(range(1, n + 1))
        seen: set[tuple[int, ...]] = set()
        for i, cover in enumerate(self.covers):
            if len(cover) != self.N:
                raise ValueError(f"cover {i} has {len(cover)} blocks, expected {self.N}")
            union: set[int] = set()
            for s in cover:
                if len(s) != k or list(s) != sorted(set(s)) or not set(s) <= everyone:
                    raise ValueError(f"cover {i} has malformed block {s}")
                if union & set(s):
                    raise ValueError(f"cover {i} blocks overlap")
                union |= set(s)
                if s in seen:
                    raise ValueError(f"subset {s} appears in more than one cover")
                seen.add(s)
            if union != everyone:
                raise ValueError(f"cover {i} does not cover every node")
        if len(seen) != math.comb(n, k) or self.h * self.N != math.comb(n, k):
            raise ValueError("not every k-subset is covered")

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "N": self.N, "h": self.h,
                "covers": [[list(s) for s in c] for c in self.covers]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "CoverFamily":
        fam = cls(int(d["n"]), int(d["k"]),
                  tuple(tuple(tuple(int(x) for x in s) for s in c) for c in d["covers"]))
        fam.validate()
        return fam


def _comb(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


def baranyai_covers(n: int, k: int, limit: int = DEFAULT_SUBSET_LIMIT) -> CoverFamily:
    """Constructive Baranyai partition via one integral max-flow per node.

    Nodes are added one at a time.  After ``t`` nodes each cover holds ``N``
    (possibly empty) disjoint blocks, and every ``S ⊆ {1..t}`` occurs as a
    block exactly ``C(n-t, k-|S|)`` times over all covers.  Placing node
    ``t+1`` so that this stays true is a flow problem (one unit per cover,
    ``C(n-t-1, k-|S|-1)`` units into block type ``S``) with a fractional
    solution, hence an integral one.
    """
    if k < 1 or n < 1 or n % k:
        raise ValueError(f"k={k} must be a positive divisor of n={n}")
    total = math.comb(n, k)
    if total > limit:
        raise ValueError(f"C({n},{k}) = {total} exceeds subset limit {limit}")
    N = n // k
    h = total // N
    covers: list[list[tuple[int, ...]]] = [[() for _ in range(N)] for _ in range(h)]

    for t in range(n):
        kinds = sorted({s for c in covers for s in c if _comb(n - t - 1, k - len(s) - 1) > 0},
                       key=lambda s: (len(s), s))
        kind_id = {s: i for i, s in enumerate(kinds)}
        M = len(kinds)
        src, sink = 0, h + M + 1
        rows, cols, caps = [], [], []
        for i, c in enumerate(covers):
            rows.append(src); cols.append(1 + i); caps.append(1)
            for s in sorted(set(c) & kind_id.keys(), key=kind_id.get):
                rows.append(1 + i); cols.append(1 + h + kind_id[s]); caps.append(1)
        for s, j in kind_id.items():
            rows.append(1 + h + j); cols.append(sink); caps.append(_comb(n - t - 1, k - len(s) - 1))
        net = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(sink + 1, sink + 1))
        res = maximum_flow(net, src, sink, method="dinic")
        if res.flow_value != h:
            raise RuntimeError(f"no integral placement for node {t + 1} (flow {res.flow_value} < {h})")
        flow = res.flow.tocsr()
        for i, c in enumerate(covers):
            start, end = flow.indptr[1 + i], flow.indptr[2 + i]
            targets = [j for j, f in zip(flow.indices[start:end], flow.data[start:end]) if f > 0]
            chosen = kinds[targets[0] - 1 - h]
            c[c.index(chosen)] = chosen + (t + 1,)

    fam = CoverFamily(n, k, tuple(sorted(tuple(sorted(c)) for c in covers)))
    return fam


# -- occurrence counting ----------------------------------------------------


@lru_cache(maxsize=32)
def subsets(n: int, k: int) -> np.ndarray:
    """All ``k``-subsets of ``0..n-1`` in lexicographic order, shape ``(C(n,k), k)``."""
    arr = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)),
                      dtype=np.intp, count=math.comb(n, k) * k)
    arr = arr.reshape(-1, k)
    arr.flags.writeable = False
    return arr


def pattern_codes(G: Graph, S: np.ndarray) -> np.ndarray:
    """Code of the induced ordered pattern on each row of the 0-based subset array ``S``."""
    S = np.asarray(S, dtype=np.intp)
    A = G.adjacency
    k = S.shape[1]
    codes = np.zeros(len(S), dtype=np.int64)
    for a, b in itertools.combinations(range(k), 2):
        codes = (codes << 1) | A[S[:, a], S[:, b]]
    return codes


def _check_k(G: Graph, k: int, limit: int) -> None:
    if not 1 <= k <= G.n:
        raise ValueError(f"pattern size {k} must be in 1..{G.n}")
    if math.comb(G.n, k) > limit:
        raise ValueError(f"C({G.n},{k}) exceeds subset limit {limit}")
    if num_pairs(k) > 62:
        raise ValueError("patterns above 11 nodes do not fit the census encoding")


def count_occurrences(G: Graph, H: Graph, limit: int = DEFAULT_SUBSET_LIMIT) -> int:
    """``#H(G)``: number of ``k``-subsets whose ordered induced subgraph equals ``H``."""
    _check_k(G, H.n, limit)
    return int(np.count_nonzero(pattern_codes(G, subsets(G.n, H.n)) == H.code))


def _check_family(G: Graph, H: Graph, family: CoverFamily) -> None:
    if (family.n, family.k) != (G.n, H.n):
        raise ValueError(f"cover family is for (n={family.n}, k={family.k}), "
                         f"not (n={G.n}, k={H.n})")


def count_occurrences_in_cover(G: Graph, H: Graph, family: CoverFamily, i: int) -> int:
    """``#H(G, i)``: occurrences of ``H`` among the disjoint blocks of cover ``i``."""
    _check_family(G, H, family)
    if not 0 <= i < family.h:
        raise IndexError(f"cover index {i} outside 0..{family.h - 1}")
    S = np.asarray(family.covers[i], dtype=np.intp) - 1
    return int(np.count_nonzero(pattern_codes(G, S) == H.code))


def cover_block_string(G: Graph, family: CoverFamily, i: int) -> str:
    """Concatenated ``C(k,2)``-bit encodings of the blocks of cover ``i``."""
    k = family.k
    S = np.asarray(family.covers[i], dtype=np.intp) - 1
    width = num_pairs(k)
    if width == 0:
        return ""
    return "".join(format(int(c), f"0{width}b") for c in pattern_codes(G, S))


# -- bounds -----------------------------------------------------------------


def pattern_K_surrogate(k: int, c_K: float = 0.0) -> float:
    """Stand-in for ``K(H|n)``: ``C(k,2) + 2 log2 C(k,2) + c_K``."""
    return prefix_surrogate(num_pairs(k), c_K)


def frequency_bound(n: int, k: int, K_H: float, delta: float = 0.0, c: float = 0.0,
                    variant: str = "theorem") -> float:
    """Envelope ``C(n,k) sqrt(alpha (k/n) p)`` on ``|#H(G) - C(n,k) p|``.

    ``variant="theorem"`` uses ``alpha = (K_H + delta + log2 h + c) 3 / log e``;
    ``variant="lemma"`` applies the block-frequency lemma to each cover string
    with block length ``l = C(k,2)``, giving
    ``alpha = (K_H + log2 l + delta + log2 h + c) 3 l / log e``.
    """
    if k < 1 or n % k:
        raise ValueError(f"k={k} must be a positive divisor of n={n}")
    if min(K_H, delta, c) < 0:
        raise ValueError("K_H, delta and c must be nonnegative")
    total = math.comb(n, k)
    log_h = math.log2(total / (n // k))
    p = 2.0 ** -num_pairs(k)
    if variant == "theorem":
        alpha = (K_H + delta + log_h + c) * 3 / LOG2E
    elif variant == "lemma":
        l = num_pairs(k)
        alpha = (K_H + math.log2(max(1, l)) + delta + log_h + c) * 3 * l / LOG2E
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return total * math.sqrt(alpha * (k / n) * p)


@dataclass
class CensusResult:
    H: Graph
    total: int
    per_cover: list[int] = field(default_factory=list)
    p: float = 0.0
    expected: float = 0.0
    bound: float | None = None

    @property
    def within(self) -> bool | None:
        if self.bound is None:
            return None
        return abs(self.total - self.expected) <= self.bound

    def to_dict(self) -> dict:
        from .graph import encode
        return {"pattern": encode(self.H), "k": self.H.n, "total": self.total,
                "per_cover": list(self.per_cover), "p": self.p, "expected": self.expected,
                "bound": self.bound, "within": self.within}


def subgraph_census(G: Graph, k: int, family: CoverFamily | None = None, *, delta: float = 0.0,
           c: float = 0.0, c_K: float = 0.0, K_H: float | None = None, variant: str = "theorem",
           limit: int = DEFAULT_SUBSET_LIMIT) -> list[CensusResult]:
    """Census of every ``k``-node pattern in ``G``, in increasing pattern-code order.

    With a cover family, per-cover counts and the frequency bound are filled
    in; without one (e.g. when ``k`` does not divide ``n``) only totals are.
    """
    _check_k(G, k, limit)
    npat = 1 << num_pairs(k)
    codes = pattern_codes(G, subsets(G.n, k))
    p = 2.0 ** -num_pairs(k)
    expected = math.comb(G.n, k) * p
    totals = np.bincount(codes, minlength=npat)
    per_cover = None
    bound = None
    if family is not None:
        if (family.n, family.k) != (G.n, k):
            raise ValueError("cover family does not match (n, k)")
        idx = family.subset_cover
        per_cover = np.bincount(idx * npat + codes, minlength=family.h * npat).reshape(family.h, npat)
        kh = pattern_K_surrogate(k, c_K) if K_H is None else K_H
        bound = frequency_bound(G.n, k, kh, delta, c, variant)
    out = []
    for code in range(npat):
        out.append(CensusResult(
            H=Graph(k, code), total=int(totals[code]),
            per_cover=[] if per_cover is None else per_cover[:, code].tolist(),
            p=p, expected=expected, bound=bound))
    return out


def all_patterns_present(G: Graph, k: int, limit: int = DEFAULT_PATTERN_LIMIT,
                         subset_limit: int = DEFAULT_SUBSET_LIMIT) -> tuple[bool, list[Graph]]:
    """Whether every one of the ``2**C(k,2)`` ordered patterns occurs; also the missing ones."""
    npat = 1 << num_pairs(k) if num_pairs(k) < 63 else None
    if npat is None or npat > limit:
        raise ValueError(f"2^C({k},2) patterns exceed enumeration limit {limit}")
    _check_k(G, k, subset_limit)
    totals = np.bincount(pattern_codes(G, subsets(G.n, k)), minlength=npat)
    missing = [Graph(k, int(c)) for c in np.flatnonzero(totals == 0)]
    return not missing, missing


@dataclass(frozen=True)
class Threshold:
    k: int
    K_surrogate: float


def k_threshold(n: int, c_K: float = 0.0) -> Threshold:
    """``floor(sqrt(2 log2 n))`` computed exactly, with its pattern-complexity surrogate."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k = 1
    # k^2 <= 2 log2 n  <=>  2^(k^2) <= n^2
    while 1 << ((k + 1) * (k + 1)) <= n * n:
        k += 1
    return Threshold(k, pattern_K_surrogate(k, c_K))
