"""Set-partition lattices: enumeration, order, Mobius functions, nesting forests.

The three families handled here are the full partition lattice, the
non-crossing partitions and the interval partitions of {1..n}, ordered by
reverse refinement.  Mobius values are obtained by inverting the zeta
function of the actually-enumerated poset, so they are oracle-grade rather
than closed-form; the closed forms only appear in tests as cross-checks.

Hard caps: enumeration stops at n = 12 (Bell(12) is ~4.2M) and Mobius
computations at n = 8.  Exceeding a cap raises SizeLimitError, never
truncates.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Literal

import numpy as np

from .errors import DimensionError, DomainError, PosetOrderError, SizeLimitError

Family = Literal["all", "noncrossing", "interval"]

FAMILIES: tuple[Family, ...] = ("all", "noncrossing", "interval")

ENUMERATION_CAP = 12
MOBIUS_CAP = 8

Blocks = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, slots=True)
class SetPartition:
    """A partition of {1..n} into disjoint nonempty blocks.

    Canonical form: each block sorted ascending, blocks sorted by minimum.
    Instances are immutable and hashable.
    """

    n: int
    blocks: Blocks

    @classmethod
    def from_blocks(cls, n: int, blocks) -> "SetPartition":
        """Validate and canonicalize an iterable of iterables of ints."""
        if n < 1:
            raise DomainError(f"ground set size must be >= 1, got {n}")
        blocks = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in blocks):
            raise DomainError("empty block")
        canon = tuple(sorted(blocks, key=lambda b: b[0]))
        seen: set[int] = set()
        for b in canon:
            for v in b:
                if not (1 <= v <= n):
                    raise DomainError(f"element {v} outside 1..{n}")
                if v in seen:
                    raise DomainError(f"element {v} appears twice")
                seen.add(v)
        if len(seen) != n:
            raise DomainError(f"blocks cover {len(seen)} of {n} elements")
        return cls(n, canon)

    @classmethod
    def bottom(cls, n: int) -> "SetPartition":
        """The all-singletons partition 0_n."""
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def top(cls, n: int) -> "SetPartition":
        """The one-block partition 1_n."""
        return cls(n, (tuple(range(1, n + 1)),))

    def block_of(self) -> dict[int, int]:
        """Map each element to the index of its block."""
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    def block_sizes(self) -> tuple[int, ...]:
        """Sorted multiset of block sizes."""
        return tuple(sorted(len(b) for b in self.blocks))

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def is_noncrossing(p: SetPartition) -> bool:
    """True iff no quadruple a<b<c<d has a,c and b,d in two distinct blocks."""
    for (i, v), (j, w) in combinations(enumerate(p.blocks), 2):
        if _blocks_cross(v, w):
            return False
    return True


def _blocks_cross(v: tuple[int, ...], w: tuple[int, ...]) -> bool:
    # Two blocks cross iff their merged sorted labels alternate v/w at least
    # three times (v..w..v..w pattern or its mirror).
    merged = sorted([(x, 0) for x in v] + [(x, 1) for x in w])
    changes = sum(1 for a, b in zip(merged, merged[1:]) if a[1] != b[1])
    return changes >= 3


def is_interval(p: SetPartition) -> bool:
    """True iff every block is a contiguous run of integers."""
    return all(b[-1] - b[0] + 1 == len(b) for b in p.blocks)


def classify(p: SetPartition) -> dict[str, bool]:
    """Return {'is_noncrossing': ..., 'is_interval': ...} for a partition."""
    nc = is_noncrossing(p)
    iv = nc and is_interval(p)
    return {"is_noncrossing": nc, "is_interval": iv}


def in_family(p: SetPartition, family: Family) -> bool:
    if family == "all":
        return True
    if family == "noncrossing":
        return is_noncrossing(p)
    if family == "interval":
        return is_interval(p) and is_noncrossing(p)
    raise DomainError(f"unknown family {family!r}")


def leq(p: SetPartition, q: SetPartition) -> bool:
    """Reverse refinement order: every block of p lies inside a block of q."""
    if p.n != q.n:
        raise DimensionError(f"ground sets differ: {p.n} vs {q.n}")
    owner = q.block_of()
    for b in p.blocks:
        first = owner[b[0]]
        if any(owner[v] != first for v in b[1:]):
            return False
    return True


def _rgs_partitions(n: int) -> Iterator[Blocks]:
    # Restricted-growth-string recursion over all set partitions.
    def rec(i: int, blocks: list[list[int]]):
        if i > n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def _noncrossing_partitions(elems: tuple[int, ...]) -> Iterator[Blocks]:
    # The block of the least element splits the remaining elements into
    # independent segments; recurse on each segment.
    if not elems:
        yield ()
        return
    first, rest = elems[0], elems[1:]
    for k in range(len(rest) + 1):
        for tail in combinations(rest, k):
            block = (first,) + tail
            legs = list(block) + [None]
            segments = []
            j = 0
            for a, b in zip(legs, legs[1:]):
                seg = []
                while j < len(rest) and (b is None or rest[j] < b):
                    if rest[j] > a and rest[j] not in tail:
                        seg.append(rest[j])
                    j += 1
                segments.append(tuple(seg))
            yield from _combine_segments(block, segments, 0, ())


def _combine_segments(block, segments, idx, acc) -> Iterator[Blocks]:
    if idx == len(segments):
        yield (block,) + acc
        return
    for sub in _noncrossing_partitions(segments[idx]):
        yield from _combine_segments(block, segments, idx + 1, acc + sub)


def _interval_partitions(n: int) -> Iterator[Blocks]:
    # Interval partitions of [n] are compositions of n.
    def rec(start: int, acc: tuple):
        if start > n:
            yield acc
            return
        for end in range(start, n + 1):
            yield from rec(end + 1, acc + (tuple(range(start, end + 1)),))

    yield from rec(1, ())


def enumerate_partitions(n: int, family: Family = "all") -> list[SetPartition]:
    """All partitions of {1..n} in a family, sorted block-min-lexicographically.

    Raises SizeLimitError for n outside 1..12; the full lattice at n = 12
    already holds ~4.2M partitions, so expect that call to be slow.
    """
    if not (1 <= n <= ENUMERATION_CAP):
        raise SizeLimitError(f"enumeration supports 1 <= n <= {ENUMERATION_CAP}, got {n}")
    if family == "all":
        raw = _rgs_partitions(n)
    elif family == "noncrossing":
        raw = _noncrossing_partitions(tuple(range(1, n + 1)))
    elif family == "interval":
        raw = _interval_partitions(n)
    else:
        raise DomainError(f"unknown family {family!r}")
    canon = sorted(tuple(sorted(blocks, key=lambda b: b[0])) for blocks in raw)
    return [SetPartition(n, blocks) for blocks in canon]


def _pair_mask(p: SetPartition) -> int:
    # Bit i*n+j set iff elements i+1, j+1 share a block (i < j); subset test
    # on these masks is the reverse-refinement order.
    mask = 0
    n = p.n
    for b in p.blocks:
        for i, j in combinations(b, 2):
            mask |= 1 << ((i - 1) * n + (j - 1))
    return mask


@functools.lru_cache(maxsize=32)
def _poset(family: Family, n: int):
    elems = enumerate_partitions(n, family)
    # For n <= 8 the pair masks occupy at most n*n-n bits < 64.
    masks = np.array([_pair_mask(p) for p in elems], dtype=np.uint64)
    leq_mat = (masks[:, None] & ~masks[None, :]) == 0
    index = {p: i for i, p in enumerate(elems)}
    # Topological order for refinement: more blocks first.
    topo = sorted(range(len(elems)), key=lambda i: -len(elems[i].blocks))
    return elems, index, leq_mat, topo


@functools.lru_cache(maxsize=4096)
def _mobius_row(family: Family, p: SetPartition) -> np.ndarray:
    # mu(p, r) for every r in the up-set of p, via zeta inversion
    # mu(p, r) = -sum_{p <= s < r} mu(p, s).
    elems, index, leq_mat, topo = _poset(family, p.n)
    ip = index[p]
    upset = leq_mat[ip, :]
    mu = np.zeros(len(elems), dtype=np.int64)
    for r in topo:
        if not upset[r]:
            continue
        if r == ip:
            mu[r] = 1
        else:
            below = upset & leq_mat[:, r]
            below[r] = False
            mu[r] = -int(mu[below].sum())
    return mu


def mobius(family: Family, p: SetPartition, q: SetPartition) -> int:
    """Mobius function of the family's poset on the interval [p, q].

    Computed by inverting the zeta matrix of the enumerated poset (the
    recursion mu(p,q) = -sum_{p <= s < q} mu(p,s)), exactly over integers.
    Requires n <= 8.
    """
    if p.n != q.n:
        raise DimensionError(f"ground sets differ: {p.n} vs {q.n}")
    if p.n > MOBIUS_CAP:
        raise SizeLimitError(f"Mobius computation capped at n <= {MOBIUS_CAP}, got {p.n}")
    if not in_family(p, family):
        raise PosetOrderError(f"{p} is not in family {family!r}")
    if not in_family(q, family):
        raise PosetOrderError(f"{q} is not in family {family!r}")
    if not leq(p, q):
        raise PosetOrderError(f"{p} is not <= {q}")
    _, index, _, _ = _poset(family, p.n)
    return int(_mobius_row(family, p)[index[q]])


def nesting_forest(p: SetPartition) -> list[int]:
    """Parent index per block in the nesting forest (-1 for roots).

    Block W is a child of V when V is the innermost block with
    min V < min W <= max W < max V.  Requires p non-crossing.
    """
    if not is_noncrossing(p):
        raise DomainError(f"{p} is crossing; nesting forest undefined")
    parents = []
    for i, w in enumerate(p.blocks):
        best = -1
        best_min = -1
        for j, v in enumerate(p.blocks):
            if j != i and v[0] < w[0] and w[-1] < v[-1] and v[0] > best_min:
                best, best_min = j, v[0]
        parents.append(best)
    return parents


def nesting_forest_factorial(p: SetPartition) -> int:
    """Product over blocks of the size of the nesting-forest subtree rooted there."""
    parents = nesting_forest(p)
    k = len(parents)
    children: list[list[int]] = [[] for _ in range(k)]
    for i, par in enumerate(parents):
        if par >= 0:
            children[par].append(i)
    sizes = [0] * k
    # Blocks sorted by min nest outside-in, so children always follow parents;
    # accumulate subtree sizes in reverse.
    for i in reversed(range(k)):
        sizes[i] = 1 + sum(sizes[c] for c in children[i])
    result = 1
    for s in sizes:
        result *= s
    return result
