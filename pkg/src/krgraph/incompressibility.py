"""Computable stand-ins for randomness deficiency, and block-frequency bounds.

Exact Kolmogorov complexity is uncomputable; a lossless compressor gives an
upper bound on description length, so ``encoded_len - compressed_len`` is a
one-sided proxy for how far a graph falls short of being incompressible.
All logarithms are base 2 and ``log e`` means ``log2(e)``.
"""
from __future__ import annotations

import bz2
import lzma
import math
import sys
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .graph import Graph

LOG2E = math.log2(math.e)


# -- block counting ---------------------------------------------------------


def _as_bitstring(x) -> str:
    if isinstance(x, str):
        s = x
    else:
        s = "".join("1" if b else "0" for b in np.asarray(x).ravel())
    if set(s) - {"0", "1"}:
        raise ValueError("bitstrings may only contain '0' and '1'")
    return s


def count_block(x, y, wrap: bool = True) -> int:
    """Number of (possibly overlapping) start positions where ``y`` occurs in ``x``.

    With ``wrap`` the string is read cyclically, so every one of the
    ``len(x)`` positions is a candidate start.
    """
    x, y = _as_bitstring(x), _as_bitstring(y)
    if not y:
        raise ValueError("empty pattern")
    if len(y) > len(x):
        raise ValueError("pattern longer than string")
    hay = x + x[: len(y) - 1] if wrap else x
    starts = len(x) if wrap else len(x) - len(y) + 1
    return sum(1 for p in range(starts) if hay.startswith(y, p))


def block_counts(x: np.ndarray, l: int, wrap: bool = True) -> np.ndarray:
    """Counts of all ``2**l`` blocks of length ``l`` in 0/1 array ``x``, indexed by value (MSB first)."""
    x = np.asarray(x, dtype=np.int64)
    n = len(x)
    if not 1 <= l <= n:
        raise ValueError("need 1 <= l <= len(x)")
    hay = np.concatenate([x, x[: l - 1]]) if wrap else x
    starts = n if wrap else n - l + 1
    vals = np.zeros(starts, dtype=np.int64)
    for t in range(l):
        vals = (vals << 1) | hay[t: t + starts]
    return np.bincount(vals, minlength=1 << l)


def count_aligned(x, y) -> int:
    """Occurrences of ``y`` among the non-overlapping aligned blocks of ``x``."""
    x, y = _as_bitstring(x), _as_bitstring(y)
    if not y:
        raise ValueError("empty pattern")
    l = len(y)
    return sum(1 for p in range(0, len(x) - l + 1, l) if x[p: p + l] == y)


# -- bound evaluators -------------------------------------------------------


def prefix_surrogate(length: int, c_K: float = 0.0) -> float:
    """Upper-bound-style stand-in for ``K(y|n)`` of an explicit ``length``-bit string."""
    return length + 2 * math.log2(max(1, length)) + c_K


@dataclass(frozen=True)
class BlockStatParams:
    n: int
    l: int
    K_y: float
    delta: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        for name in ("n", "l", "K_y", "delta", "c"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.l < 1:
            raise ValueError("block length must be >= 1")

    @property
    def p(self) -> float:
        return 2.0 ** -self.l

    @property
    def precondition_ok(self) -> bool:
        # block length at most log2 of the string length
        return self.n >= 1 and self.l <= math.log2(self.n)


@dataclass
class BoundReport:
    """A bound evaluated next to an (optional) observed statistic."""

    bound: float
    alpha: float
    expected: float
    precondition_ok: bool = True
    observed: float | None = None
    params: dict = field(default_factory=dict)

    @property
    def within(self) -> bool | None:
        if self.observed is None:
            return None
        return abs(self.observed - self.expected) <= self.bound

    def __float__(self) -> float:
        return self.bound

    def to_dict(self) -> dict:
        d = asdict(self)
        d["within"] = self.within
        return d


def block_alpha(params: BlockStatParams) -> float:
    return (params.K_y + math.log2(params.l) + params.delta + params.c) * 3 * params.l / LOG2E


def block_deviation_bound(params: BlockStatParams) -> BoundReport:
    """``sqrt(alpha p n)`` envelope on ``|#y(x) - p n|`` for a ``delta``-deficient string.

    A block length above ``log2 n`` is flagged on the report rather than
    rejected; the arithmetic is still well defined.
    """
    alpha = block_alpha(params)
    return BoundReport(
        bound=math.sqrt(alpha * params.p * params.n),
        alpha=alpha,
        expected=params.p * params.n,
        precondition_ok=params.precondition_ok,
        params=asdict(params),
    )


def check_block_frequency(x, y, delta: float = 0.0, c: float = 0.0, c_K: float = 0.0) -> BoundReport:
    """Count cyclic occurrences of ``y`` in ``x`` and compare with the deviation bound."""
    x, y = _as_bitstring(x), _as_bitstring(y)
    params = BlockStatParams(n=len(x), l=len(y), K_y=prefix_surrogate(len(y), c_K), delta=delta, c=c)
    rep = block_deviation_bound(params)
    rep.observed = count_block(x, y, wrap=True)
    rep.params["c_K"] = c_K
    return rep


def random_fraction_bound(delta: float) -> float:
    """Lower bound on the fraction of labeled graphs that are ``delta``-random."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return 1.0 - 2.0 ** -delta


def short_description_count(length: int, delta: int) -> int:
    """Number of binary descriptions shorter than ``length - delta`` bits."""
    return max(0, (1 << max(0, length - delta)) - 1)


# -- compression proxy ------------------------------------------------------


@dataclass(frozen=True)
class Compressor:
    name: str
    version: str
    compress: Callable[[bytes], bytes]

    @property
    def id(self) -> str:
        return f"{self.name}-{self.version}"


_PY = f"py{sys.version_info.major}.{sys.version_info.minor}"

COMPRESSORS: dict[str, Compressor] = {
    "zlib": Compressor("zlib", zlib.ZLIB_RUNTIME_VERSION, lambda b: zlib.compress(b, 9)),
    "bz2": Compressor("bz2", _PY, lambda b: bz2.compress(b, 9)),
    "lzma": Compressor("lzma", _PY, lambda b: lzma.compress(b, preset=9 | lzma.PRESET_EXTREME)),
}


def get_compressor(compressor_id: str) -> Compressor:
    name = compressor_id.split("-", 1)[0]
    comp = COMPRESSORS.get(name)
    if comp is None or (name != compressor_id and compressor_id != comp.id):
        raise ValueError(f"unknown compressor {compressor_id!r}; choose from {sorted(COMPRESSORS)}")
    return comp


def _packed(bits: np.ndarray) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def compressed_bits(bits: np.ndarray, compressor_id: str = "zlib") -> int:
    return 8 * len(get_compressor(compressor_id).compress(_packed(bits)))


def calibration_offset(length: int, compressor_id: str = "zlib", trials: int = 16) -> int:
    """Median compressor overhead in bits on uniform random strings of ``length`` bits.

    The reference strings come from a fixed seed, so the offset is a
    deterministic function of ``(compressor, length)``.
    """
    rng = np.random.default_rng([length, 0x5EED])
    over = [compressed_bits(rng.integers(0, 2, length, dtype=np.uint8), compressor_id) - length
            for _ in range(trials)]
    return int(np.median(over))


@dataclass(frozen=True)
class DeficiencyEstimate:
    n: int
    encoded_len: int
    compressed_len: int
    delta_hat: int
    compressor_id: str
    calibration_offset: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_deficiency(G: Graph, compressor_id: str = "zlib", calibrate: bool = False) -> DeficiencyEstimate:
    """Compression-based estimate of the randomness deficiency of ``E(G)``.

    ``delta_hat = max(0, encoded_len - (compressed_len - offset))`` where the
    offset is the compressor's measured overhead on random input when
    ``calibrate`` is set and 0 otherwise.  Larger means more compressible.
    """
    comp = get_compressor(compressor_id)
    N = G.num_bits
    clen = compressed_bits(G.bits, compressor_id)
    offset = calibration_offset(N, compressor_id) if calibrate else 0
    return DeficiencyEstimate(
        n=G.n,
        encoded_len=N,
        compressed_len=clen,
        delta_hat=max(0, N - (clen - offset)),
        compressor_id=comp.id,
        calibration_offset=offset,
    )
