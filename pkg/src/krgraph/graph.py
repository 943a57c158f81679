"""Labeled simple graphs and their canonical bitstring codec.

A graph on nodes ``1..n`` is stored as a single Python integer holding its
``n(n-1)/2`` edge bits.  Edges are ordered row-major lexicographically,
``(1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n)``, and edge index 0 is the
most significant bit, so the integer value read in binary *is* the encoding
string.  Node labels are 1-based throughout the public API; bit positions
are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

RNG_ID = f"numpy-{np.__version__}/PCG64"


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """0-based position of edge ``(i, j)`` in the encoding of an ``n``-node graph."""
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def _pair_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    # 0-based endpoints of every edge index, in encoding order
    iu, ju = np.triu_indices(n, k=1)
    return iu.astype(np.intp), ju.astype(np.intp)


@lru_cache(maxsize=None)
def _index_matrix(n: int) -> np.ndarray:
    # (n, n) table of edge indices over 0-based node pairs, -1 on the diagonal
    m = np.full((n, n), -1, dtype=np.intp)
    iu, ju = _pair_table(n)
    idx = np.arange(len(iu), dtype=np.intp)
    m[iu, ju] = idx
    m[ju, iu] = idx
    return m


def _bits_to_int(bits: np.ndarray) -> int:
    if len(bits) == 0:
        return 0
    packed = np.packbits(bits.astype(np.uint8))
    value = int.from_bytes(packed.tobytes(), "big")
    return value >> (8 * len(packed) - len(bits))


def _int_to_bits(code: int, length: int) -> np.ndarray:
    if length == 0:
        return np.zeros(0, dtype=np.uint8)
    nbytes = (length + 7) // 8
    raw = (code << (8 * nbytes - length)).to_bytes(nbytes, "big")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:length]


@dataclass(frozen=True)
class Graph:
    """Labeled simple undirected graph on nodes ``1..n``.

    ``code`` is the encoding read as a binary number (edge 0 most significant).
    Two graphs are equal iff ``n`` and ``code`` agree.
    """

    n: int
    code: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one node")
        if self.code < 0 or self.code >> num_pairs(self.n):
            raise ValueError(f"code does not fit in {num_pairs(self.n)} bits")

    # -- construction --------------------------------------------------

    @classmethod
    def from_bits(cls, n: int, bits) -> "Graph":
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise ValueError("bitstring may only contain '0' and '1'")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(bits, dtype=np.uint8)
        if n < 1:
            raise ValueError("a graph needs at least one node")
        if len(arr) != num_pairs(n):
            raise ValueError(f"expected {num_pairs(n)} bits for n={n}, got {len(arr)}")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(n, _bits_to_int(arr))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        N = num_pairs(n)
        code = 0
        for a, b in edges:
            if a == b:
                raise ValueError("loops are not allowed")
            i, j = min(a, b), max(a, b)
            code |= 1 << (N - 1 - edge_index(i, j, n))
        return cls(n, code)

    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T) or np.any(np.diag(a)):
            raise ValueError("adjacency matrix must be symmetric with zero diagonal")
        iu, ju = _pair_table(a.shape[0])
        return cls.from_bits(a.shape[0], (a[iu, ju] != 0).astype(np.uint8))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, 0)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, (1 << num_pairs(n)) - 1)

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(v, v + 1) for v in range(1, n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError("a cycle needs at least 3 nodes")
        return cls.from_edges(n, [(v, v % n + 1) for v in range(1, n + 1)])

    # -- views ---------------------------------------------------------

    @property
    def num_bits(self) -> int:
        return num_pairs(self.n)

    @cached_property
    def bits(self) -> np.ndarray:
        out = _int_to_bits(self.code, self.num_bits)
        out.flags.writeable = False
        return out

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Read-only ``(n, n)`` 0/1 matrix over 0-based node indices."""
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        iu, ju = _pair_table(self.n)
        a[iu, ju] = self.bits
        a[ju, iu] = self.bits
        a.flags.writeable = False
        return a

    @cached_property
    def rows(self) -> tuple[int, ...]:
        """Neighbourhood bitsets; bit ``u`` of ``rows[v]`` is set iff 0-based ``u ~ v``."""
        return tuple(_bits_to_int(row[::-1]) for row in self.adjacency)

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        i, j = min(i, j), max(i, j)
        return bool(self.code >> (self.num_bits - 1 - edge_index(i, j, self.n)) & 1)

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = _pair_table(self.n)
        on = np.flatnonzero(self.bits)
        return [(int(iu[e]) + 1, int(ju[e]) + 1) for e in on]

    def edge_count(self) -> int:
        return self.code.bit_count()

    def complement(self) -> "Graph":
        return Graph(self.n, self.code ^ ((1 << self.num_bits) - 1))

    def __str__(self) -> str:
        return to_native(self)


PatternGraph = Graph
"""A graph on ``k`` nodes used as an ordered labeled pattern; same encoding as :class:`Graph`."""


def encode(G: Graph) -> str:
    return format(G.code, f"0{G.num_bits}b") if G.num_bits else ""


def decode(n: int, bits) -> Graph:
    return Graph.from_bits(n, bits)


# -- permutations -----------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``{1..n}``; ``mapping[i-1]`` is the image of ``i``."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        object.__setattr__(self, "mapping", m)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError(f"not a permutation of 1..{len(m)}: {m}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, arr: Sequence[int]) -> "Permutation":
        return cls(tuple(int(x) + 1 for x in arr))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        m = list(range(1, n + 1))
        m[a - 1], m[b - 1] = b, a
        return cls(tuple(m))

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.mapping[x - 1] for x in other.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.mapping, start=1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def moved(self) -> int:
        return sum(1 for i, x in enumerate(self.mapping, start=1) if i != x)

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.mapping, dtype=np.intp) - 1


def bit_permutation(perm: Permutation) -> np.ndarray:
    """Edge-index image table ``Q`` with ``encode(π(G))[Q[e]] == encode(G)[e]``."""
    n = perm.n
    iu, ju = _pair_table(n)
    p = perm.zero_based()
    return _index_matrix(n)[p[iu], p[ju]]


def apply_permutation(G: Graph, perm: Permutation) -> Graph:
    """Relabel ``G`` so that ``(π(i), π(j))`` is an edge iff ``(i, j)`` was."""
    if perm.n != G.n:
        raise ValueError(f"permutation on {perm.n} points applied to graph on {G.n} nodes")
    out = np.zeros(G.num_bits, dtype=np.uint8)
    out[bit_permutation(perm)] = G.bits
    return Graph(G.n, _bits_to_int(out))


def relabel_by_order(G: Graph, order: Sequence[int]) -> Graph:
    """Graph whose node ``a`` is old 0-based node ``order[a-1]``."""
    o = np.asarray(order, dtype=np.intp)
    iu, ju = _pair_table(G.n)
    return Graph(G.n, _bits_to_int(G.adjacency[o[iu], o[ju]]))


def induced_pattern(G: Graph, S: Sequence[int]) -> Graph:
    """Ordered labeled subgraph on the sorted node set ``S``, relabeled ``1..k``."""
    S = list(S)
    if not S:
        raise ValueError("subset must be nonempty")
    if any(b <= a for a, b in zip(S, S[1:])):
        raise ValueError("subset must be strictly increasing")
    if S[0] < 1 or S[-1] > G.n:
        raise ValueError(f"subset out of range 1..{G.n}")
    idx = np.asarray(S, dtype=np.intp) - 1
    k = len(S)
    iu, ju = _pair_table(k)
    return Graph(k, _bits_to_int(G.adjacency[idx[iu], idx[ju]]))


# -- degrees ----------------------------------------------------------------


def degree(G: Graph, v: int) -> int:
    if not 1 <= v <= G.n:
        raise ValueError(f"node {v} out of range 1..{G.n}")
    return G.rows[v - 1].bit_count()


def degree_sequence(G: Graph) -> list[int]:
    return [r.bit_count() for r in G.rows]


# -- random graphs ----------------------------------------------------------


def random_graph(n: int, seed) -> Graph:
    """Uniform random labeled graph: each edge bit an independent fair coin.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts (an int or a
    ``SeedSequence``); the bit stream is drawn from PCG64, so identical seeds
    give identical graphs.  Use :func:`spawn_seeds` for independent streams.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=num_pairs(n), dtype=np.uint8)
    return Graph(n, _bits_to_int(bits))


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """``count`` independent child streams of ``seed`` (SeedSequence spawning)."""
    return np.random.SeedSequence(seed).spawn(count)


# -- text formats -----------------------------------------------------------


def to_native(G: Graph) -> str:
    """``"<n>:<hex>"``, bits right-padded with zeros to a whole number of hex digits."""
    N = G.num_bits
    digits = -(-N // 4)
    if digits == 0:
        return f"{G.n}:"
    return f"{G.n}:{G.code << (4 * digits - N):0{digits}x}"


def from_native(text: str) -> Graph:
    text = text.strip()
    head, sep, hexpart = text.partition(":")
    if not sep:
        raise ValueError("native format is '<n>:<hex>'")
    try:
        n = int(head)
    except ValueError:
        raise ValueError(f"bad node count {head!r}") from None
    if n < 1:
        raise ValueError("n must be >= 1")
    N = num_pairs(n)
    digits = -(-N // 4)
    if len(hexpart) != digits:
        raise ValueError(f"expected {digits} hex digits for n={n}, got {len(hexpart)}")
    if digits == 0:
        return Graph(n, 0)
    try:
        value = int(hexpart, 16)
    except ValueError:
        raise ValueError(f"bad hex payload {hexpart!r}") from None
    pad = 4 * digits - N
    if value & ((1 << pad) - 1):
        raise ValueError("nonzero padding bits")
    return Graph(n, value >> pad)


def _graph6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in range(30, -1, -6)])


def _graph6_order_map(n: int) -> np.ndarray:
    # edge indices of the graph6 bit stream: column-major upper triangle
    jj, ii = np.triu_indices(n, k=1)  # jj < ii; graph6 walks column ii, row jj
    order = np.lexsort((jj, ii))
    return _index_matrix(n)[jj[order], ii[order]]


def to_graph6(G: Graph) -> str:
    n = G.n
    stream = G.bits[_graph6_order_map(n)]
    pad = (-len(stream)) % 6
    stream = np.concatenate([stream, np.zeros(pad, dtype=np.uint8)])
    groups = stream.reshape(-1, 6) @ (1 << np.arange(5, -1, -1))
    return (_graph6_size(n) + bytes((groups + 63).astype(np.uint8).tolist())).decode("ascii")


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii")
    if not data or any(b < 63 or b > 126 for b in data):
        raise ValueError("not a graph6 string")
    if data[0] != 126:
        n, body = data[0] - 63, data[1:]
    elif len(data) >= 4 and data[1] != 126:
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    elif len(data) >= 8:
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        body = data[8:]
    else:
        raise ValueError("truncated graph6 size field")
    if n < 1:
        raise ValueError("graph6 graph with zero nodes is not supported")
    N = num_pairs(n)
    if len(body) != -(-N // 6):
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {-(-N // 6)}")
    vals = np.frombuffer(body, dtype=np.uint8) - 63
    stream = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).astype(np.uint8).ravel()
    if stream[N:].any():
        raise ValueError("nonzero graph6 padding bits")
    bits = np.zeros(N, dtype=np.uint8)
    if N:
        bits[_graph6_order_map(n)] = stream[:N]
    return Graph(n, _bits_to_int(bits))


def parse_graph(text: str) -> Graph:
    """Read either the native ``n:hex`` form or graph6."""
    s = text.strip()
    if ":" in s and s.split(":", 1)[0].isdigit():
        return from_native(s)
    return from_graph6(s)
