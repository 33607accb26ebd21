"""Exact scalar moment-cumulant transforms for the four independences.

Moments and cumulants are exact rational sequences indexed 1..K.  The
defining identity, for every kind, is the lattice sum

    m_n = sum over partitions pi in the kind's family of
          weight(pi) * prod over blocks V of c_{|V|}

with family = all partitions (classical), non-crossing (free and monotone)
or interval partitions (boolean), weight = 1 except in the monotone case
where it is 1 / nesting-forest-factorial(pi).  The implementations below
evaluate that sum through first-block recursions (and, for the monotone
kind, a block-count-resolved dynamic program over the nesting forest);
tests cross-check them against literal enumeration of the lattices.

Additive convolution works by transforming to cumulants, adding, and
transforming back; cumulant additivity holds for identically distributed
summands in all four kinds, and for arbitrary pairs except the monotone
one, which is therefore rejected in ``convolve``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .errors import (
    DimensionError,
    DomainError,
    SizeLimitError,
    UnsupportedKindError,
)
from .measures import SpectralMeasure
from .partitions import SetPartition, _blocks_cross

Kind = Literal["classical", "free", "boolean", "monotone"]

KINDS: tuple[Kind, ...] = ("classical", "free", "boolean", "monotone")

ORDER_CAP_CLASSICAL = 12
ORDER_CAP_NONCROSSING = 14
WORD_CAP = 20
MEASURE_MOMENT_CAP = 20

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _coerce(values) -> tuple:
    out = []
    for v in values:
        out.append(Fraction(v) if isinstance(v, (int, Fraction)) else float(v))
    return tuple(out)


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_1..m_K; entry k-1 of ``values`` is m_k."""

    values: tuple

    @classmethod
    def of(cls, values) -> "MomentSequence":
        values = _coerce(values)
        if not values:
            raise DomainError("moment sequence needs at least one entry")
        return cls(values)

    @property
    def order(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def moment(self, k: int):
        return self.values[k - 1]


@dataclass(frozen=True)
class CumulantSequence:
    """Cumulants c_1..c_K of one of the four kinds."""

    kind: Kind
    values: tuple

    @classmethod
    def of(cls, kind: Kind, values) -> "CumulantSequence":
        _check_kind(kind)
        values = _coerce(values)
        if not values:
            raise DomainError("cumulant sequence needs at least one entry")
        return cls(kind, values)

    @property
    def order(self) -> int:
        return len(self.values)

    def cumulant(self, k: int):
        return self.values[k - 1]


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise UnsupportedKindError(f"unknown cumulant kind {kind!r}")


def _check_order(K: int, kind: Kind) -> None:
    cap = ORDER_CAP_CLASSICAL if kind == "classical" else ORDER_CAP_NONCROSSING
    if K > cap:
        raise SizeLimitError(f"order {K} exceeds cap {cap} for kind {kind!r}")


def _expand_classical(c: Sequence, K: int) -> list:
    # m_n = sum_k C(n-1, k-1) c_k m_{n-k}, conditioning on the block of
    # element 1 in the full partition lattice.
    m = [_ONE] + [_ZERO] * K
    for n in range(1, K + 1):
        m[n] = sum(
            math.comb(n - 1, k - 1) * c[k - 1] * m[n - k] for k in range(1, n + 1)
        )
    return m[1:]


def _expand_boolean(c: Sequence, K: int) -> list:
    # Interval partitions: the block of 1 is an initial run.
    m = [_ONE] + [_ZERO] * K
    for n in range(1, K + 1):
        m[n] = sum(c[k - 1] * m[n - k] for k in range(1, n + 1))
    return m[1:]


def _expand_free(c: Sequence, K: int) -> list:
    # Non-crossing partitions: the block of 1 has size k and its legs cut
    # the rest into k independently partitioned gaps.
    m = [_ONE] + [_ZERO] * K
    for n in range(1, K + 1):
        total = _ZERO
        for k in range(1, n + 1):
            u = n - k
            # gaps[j][v]: ways to fill j gaps with v elements in total
            row = [_ONE] + [_ZERO] * u
            for _ in range(k):
                row = [
                    sum(row[v - j] * m[j] for j in range(0, v + 1)) for v in range(u + 1)
                ]
            total += c[k - 1] * row[u]
        m[n] = total
    return m[1:]


def _expand_monotone(c: Sequence, K: int) -> list:
    # Dynamic program over the nesting forest of non-crossing partitions.
    # g[u][k] accumulates, over NC partitions of [u] with k blocks, the
    # product of block cumulants divided by the nesting-forest factorial.
    # The block containing 1 (size s, a forest root) holds k_in descendant
    # blocks in its s-1 inner gaps, contributing subtree factor 1+k_in;
    # whatever follows its last leg is an independent forest.
    g = [[_ZERO] * (K + 1) for _ in range(K + 1)]
    g[0][0] = _ONE
    # gaps[j][u][k]: j ordered gaps holding u elements and k blocks in total
    gaps = [[[_ZERO] * (K + 1) for _ in range(K + 1)] for _ in range(K)]
    gaps[0][0][0] = _ONE
    for n in range(1, K + 1):
        u_new = n - 1
        for j in range(1, K):
            acc = gaps[j][u_new]
            for u1 in range(0, u_new + 1):
                prev = gaps[j - 1][u_new - u1]
                for k1 in range(0, u1 + 1):
                    w = g[u1][k1]
                    if not w:
                        continue
                    for k2 in range(0, u_new - u1 + 1):
                        if prev[k2]:
                            acc[k1 + k2] += w * prev[k2]
        for s in range(1, n + 1):
            cs = c[s - 1]
            if not cs:
                continue
            for t in range(0, n - s + 1):
                u_in = n - s - t
                inner = gaps[s - 1][u_in] if s >= 1 else None
                for k_in in range(0, u_in + 1):
                    w_in = inner[k_in]
                    if not w_in:
                        continue
                    factor = cs * w_in / (1 + k_in)
                    g_t = g[t]
                    g_n = g[n]
                    for k_aft in range(0, t + 1):
                        if g_t[k_aft]:
                            g_n[k_in + k_aft + 1] += factor * g_t[k_aft]
    return [sum(g[n]) for n in range(1, K + 1)]


_EXPANDERS = {
    "classical": _expand_classical,
    "free": _expand_free,
    "boolean": _expand_boolean,
    "monotone": _expand_monotone,
}


def cumulants_to_moments(c: CumulantSequence) -> MomentSequence:
    """Evaluate the moment-cumulant lattice sum for the sequence's kind."""
    _check_order(c.order, c.kind)
    return MomentSequence(tuple(_EXPANDERS[c.kind](c.values, c.order)))


def moments_to_cumulants(m: MomentSequence, kind: Kind) -> CumulantSequence:
    """Invert the lattice sum; exact inverse of ``cumulants_to_moments``.

    The coefficient of c_n in m_n is 1 for every kind (the one-block
    partition has weight one), so the cumulants solve order by order.
    """
    _check_kind(kind)
    _check_order(m.order, kind)
    K = m.order
    expand = _EXPANDERS[kind]
    c: list = []
    for n in range(1, K + 1):
        predicted = expand(c + [_ZERO], n)[n - 1]
        c.append(m.values[n - 1] - predicted)
    return CumulantSequence(kind, tuple(c))


def convolve(a: MomentSequence, b: MomentSequence, kind: Kind) -> MomentSequence:
    """Moments of the additive convolution via cumulant additivity.

    Monotone convolution of two distinct distributions is not cumulant
    additive, so kind='monotone' is rejected; use iid_convolve_rescaled
    for monotone sums of identically distributed variables.
    """
    _check_kind(kind)
    if kind == "monotone":
        raise UnsupportedKindError(
            "monotone cumulants are additive only for identically distributed "
            "summands; binary monotone convolution is unsupported"
        )
    if a.order != b.order:
        raise DimensionError(f"orders differ: {a.order} vs {b.order}")
    ca = moments_to_cumulants(a, kind)
    cb = moments_to_cumulants(b, kind)
    summed = CumulantSequence(kind, tuple(x + y for x, y in zip(ca.values, cb.values)))
    return cumulants_to_moments(summed)


def iid_convolve_rescaled(m: MomentSequence, N: int, kind: Kind) -> MomentSequence:
    """Moments of N^(-1/2) (X_1 + ... + X_N) for centered i.i.d. X ~ m.

    Order-k cumulants scale by N^(1 - k/2).  Odd-order factors are rational
    only when N is a perfect square; a nonzero odd cumulant with non-square
    N cannot be represented exactly and raises DomainError.
    """
    _check_kind(kind)
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    if m.values[0] != 0:
        raise DomainError("input moments must be centered (m_1 = 0)")
    c = moments_to_cumulants(m, kind)
    root = math.isqrt(N)
    square = root * root == N
    scaled = []
    for k, ck in enumerate(c.values, start=1):
        if k % 2 == 0:
            factor = Fraction(N) ** (1 - k // 2)
        elif ck == 0:
            factor = _ZERO
        elif square:
            factor = Fraction(root) ** (2 - k)
        else:
            raise DomainError(
                f"odd-order cumulant c_{k} != 0 with non-square N={N}: "
                "scaling factor N^(1-k/2) is irrational"
            )
        scaled.append(factor * ck)
    return cumulants_to_moments(CumulantSequence(kind, tuple(scaled)))


def monotone_moment_partition(word: Sequence[int]) -> SetPartition:
    """Non-crossing partition attached to a word of algebra indices.

    Positions of the lowest index form the first block; positions of each
    next index are grouped left to right into maximal runs that do not
    cross any block already placed.
    """
    word = list(word)
    if len(word) > WORD_CAP:
        raise SizeLimitError(f"word length {len(word)} exceeds cap {WORD_CAP}")
    if not word:
        raise DomainError("empty word")
    if any(not isinstance(j, int) or j < 1 for j in word):
        raise DomainError("indices must be positive integers")
    placed: list[tuple[int, ...]] = []
    for idx in sorted(set(word)):
        positions = [i + 1 for i, j in enumerate(word) if j == idx]
        current = [positions[0]]
        fresh: list[tuple[int, ...]] = []
        for pos in positions[1:]:
            candidate = tuple(current + [pos])
            if any(_blocks_cross(candidate, b) for b in placed):
                fresh.append(tuple(current))
                current = [pos]
            else:
                current.append(pos)
        fresh.append(tuple(current))
        placed.extend(fresh)
    return SetPartition.from_blocks(len(word), placed)


def moments_of_measure(mu: SpectralMeasure, K: int) -> MomentSequence:
    """m_k = sum of w * lambda^k over atoms, k = 1..K.

    Exact rationals when every atom is rational; floats (flagged through
    MomentSequence.exact) otherwise.  Complex atoms are rejected.
    """
    if not (1 <= K <= MEASURE_MOMENT_CAP):
        raise SizeLimitError(f"K must be in 1..{MEASURE_MOMENT_CAP}, got {K}")
    if not mu.is_real:
        raise DomainError("measure has complex atoms; real support required")
    atoms = [(v.real if isinstance(v, complex) else v, w) for v, w in mu.atoms]
    values = []
    for k in range(1, K + 1):
        values.append(sum(w * v**k for v, w in atoms))
    return MomentSequence.of(values)
