"""Topological verifiers: common neighbours, diameter, node connectivity, clique number."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Graph

DISCONNECTED = "disconnected"


@dataclass(frozen=True)
class TwoPathProfile:
    i: int
    j: int
    count: int
    e_ij: str


def two_path_count(G: Graph, i: int, j: int) -> TwoPathProfile:
    """Paths of length 2 between ``i`` and ``j``, i.e. their common neighbours.

    ``e_ij`` interleaves the bits of ``(i,k)`` and ``(j,k)`` for every other
    node ``k`` in increasing order; the count equals the number of aligned
    ``11`` blocks in it.
    """
    n = G.n
    if i == j:
        raise ValueError("need two distinct nodes")
    for v in (i, j):
        if not 1 <= v <= n:
            raise ValueError(f"node {v} out of range 1..{n}")
    A = G.adjacency
    others = [k for k in range(n) if k not in (i - 1, j - 1)]
    pairs = np.stack([A[i - 1, others], A[j - 1, others]], axis=1).ravel()
    e_ij = "".join("1" if b else "0" for b in pairs)
    count = (G.rows[i - 1] & G.rows[j - 1]).bit_count()
    return TwoPathProfile(i, j, count, e_ij)


def common_neighbor_counts(G: Graph) -> np.ndarray:
    """``(n, n)`` matrix of common-neighbour counts (diagonal holds degrees)."""
    A = G.adjacency.astype(np.int64)
    return A @ A


def eccentricities(G: Graph) -> list[int | None]:
    """BFS eccentricity of each node over bitset rows; ``None`` if something is unreachable."""
    rows = G.rows
    full = (1 << G.n) - 1
    out: list[int | None] = []
    for s in range(G.n):
        seen = frontier = 1 << s
        depth = 0
        while seen != full:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= rows[low.bit_length() - 1]
                f ^= low
            nxt &= ~seen
            if not nxt:
                break
            seen |= nxt
            frontier = nxt
            depth += 1
        out.append(depth if seen == full else None)
    return out


def diameter(G: Graph):
    """Largest shortest-path distance, or :data:`DISCONNECTED`."""
    ecc = eccentricities(G)
    if any(e is None for e in ecc):
        return DISCONNECTED
    return max(ecc)


# -- connectivity -----------------------------------------------------------


def _split_network(G: Graph) -> csr_matrix:
    # node v -> in-copy v, out-copy v+n; unit capacity on each in->out arc
    n = G.n
    iu, ju = np.nonzero(np.triu(G.adjacency, k=1))
    src = np.concatenate([np.arange(n), iu + n, ju + n])
    dst = np.concatenate([np.arange(n) + n, ju, iu])
    cap = np.ones(len(src), dtype=np.int32)
    return csr_matrix((cap, (src, dst)), shape=(2 * n, 2 * n))


def local_node_connectivity(G: Graph, s: int, t: int, _net: csr_matrix | None = None) -> int:
    """Maximum number of internally node-disjoint ``s``-``t`` paths (0-based ``s``, ``t``)."""
    net = _split_network(G) if _net is None else _net
    return int(maximum_flow(net, s + G.n, t, method="dinic").flow_value)


def node_connectivity(G: Graph) -> int:
    """Largest ``k`` such that ``G`` is ``k``-connected (``n-1`` for complete graphs).

    Follows Esfahanian and Hakimi: with ``v`` of minimum degree, a minimum
    separator either misses ``v`` (so separates ``v`` from a non-neighbour)
    or contains it (so separates two non-adjacent neighbours of ``v``).
    Each local value is a unit-capacity max-flow, i.e. a Menger path count.
    """
    n = G.n
    if n < 2:
        raise ValueError("connectivity needs at least 2 nodes")
    rows = G.rows
    degs = [r.bit_count() for r in rows]
    best = min(degs)
    if best == n - 1:
        return n - 1
    if best == 0:
        return 0
    net = _split_network(G)
    v = degs.index(best)
    nbrs = [u for u in range(n) if rows[v] >> u & 1]
    for w in range(n):
        if w != v and not rows[v] >> w & 1 and (rows[v] & rows[w]).bit_count() < best:
            best = min(best, local_node_connectivity(G, v, w, net))
    for a_pos, x in enumerate(nbrs):
        for y in nbrs[a_pos + 1:]:
            if best <= (rows[x] & rows[y]).bit_count():
                continue  # common neighbours already give that many paths
            if not rows[x] >> y & 1:
                best = min(best, local_node_connectivity(G, x, y, net))
    return best


# -- maximum clique ---------------------------------------------------------


def max_clique(G: Graph) -> int:
    """Exact clique number by bitset branch and bound with greedy-colouring bounds."""
    n = G.n
    # relabel by non-increasing degree so early colour classes are large
    order = sorted(range(n), key=lambda v: -G.rows[v].bit_count())
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        r = G.rows[v]
        m = 0
        while r:
            low = r & -r
            m |= 1 << pos[low.bit_length() - 1]
            r ^= low
        adj.append(m)

    best = 1

    def colour(P: int, kmin: int):
        verts, cols = [], []
        U = P
        k = 0
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~adj[v] & ~low
                U &= ~low
                if k >= kmin:
                    verts.append(v)
                    cols.append(k)
        return verts, cols

    def expand(size: int, P: int):
        nonlocal best
        verts, cols = colour(P, best - size + 1)
        for idx in range(len(verts) - 1, -1, -1):
            if size + cols[idx] <= best:
                return
            v = verts[idx]
            newP = P & adj[v]
            if newP:
                expand(size + 1, newP)
            elif size + 1 > best:
                best = size + 1
            P &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best
