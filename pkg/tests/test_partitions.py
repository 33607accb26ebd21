import math
import random

import pytest

from conftest import brute_force_classify
from nctopo.errors import DimensionError, DomainError, PosetOrderError, SizeLimitError
from nctopo.partitions import (
    SetPartition,
    classify,
    enumerate_partitions,
    in_family,
    leq,
    mobius,
    nesting_forest_factorial,
)


def bell_numbers(k: int) -> list[int]:
    # Bell triangle recurrence, independent of the enumeration code.
    bell = [1]
    row = [1]
    for _ in range(k - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        bell.append(row[-1])
    return bell


def test_counts_match_closed_forms():
    bells = bell_numbers(9)
    for n in range(1, 9):
        assert len(enumerate_partitions(n, "all")) == bells[n - 1]
        catalan = math.comb(2 * n, n) // (n + 1)
        assert len(enumerate_partitions(n, "noncrossing")) == catalan
        assert len(enumerate_partitions(n, "interval")) == 2 ** (n - 1)


def test_enumeration_order_is_sorted_and_unique():
    for family in ("all", "noncrossing", "interval"):
        parts = enumerate_partitions(5, family)
        keys = [p.blocks for p in parts]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


def test_enumeration_caps():
    with pytest.raises(SizeLimitError):
        enumerate_partitions(0, "all")
    with pytest.raises(SizeLimitError):
        enumerate_partitions(13, "interval")


def test_singleton_interval():
    assert enumerate_partitions(1, "interval") == [SetPartition(1, ((1,),))]


def test_classify_examples():
    p = SetPartition.from_blocks(4, [[1, 3], [2, 4]])
    assert classify(p) == {"is_noncrossing": False, "is_interval": False}
    p = SetPartition.from_blocks(8, [[1, 3, 4, 6], [2, 8], [5, 7]])
    assert classify(p) == {"is_noncrossing": False, "is_interval": False}
    p = SetPartition.from_blocks(4, [[1, 2], [3, 4]])
    assert classify(p) == {"is_noncrossing": True, "is_interval": True}


def test_classify_against_brute_force():
    for n in range(1, 7):
        for p in enumerate_partitions(n, "all"):
            nc, iv = brute_force_classify(p.blocks)
            got = classify(p)
            assert got["is_noncrossing"] == nc, p
            assert got["is_interval"] == (nc and iv), p


def test_classify_brute_force_random_n7():
    rng = random.Random(77)
    parts = enumerate_partitions(7, "all")
    for p in rng.sample(parts, 120):
        nc, iv = brute_force_classify(p.blocks)
        assert classify(p) == {"is_noncrossing": nc, "is_interval": nc and iv}


def test_interval_implies_noncrossing():
    for n in range(1, 8):
        for p in enumerate_partitions(n, "interval"):
            assert classify(p)["is_noncrossing"]


def test_leq_examples():
    assert leq(SetPartition.bottom(3), SetPartition.top(3))
    p = SetPartition.from_blocks(3, [[1, 2], [3]])
    q = SetPartition.from_blocks(3, [[1, 3], [2]])
    assert not leq(p, q)
    assert not leq(q, p)
    p = SetPartition.from_blocks(4, [[1], [2], [3, 4]])
    q = SetPartition.from_blocks(4, [[1, 2], [3, 4]])
    assert leq(p, q)
    with pytest.raises(DimensionError):
        leq(SetPartition.bottom(3), SetPartition.bottom(4))


def test_mobius_examples():
    assert mobius("interval", SetPartition.bottom(4), SetPartition.top(4)) == -1
    assert mobius("noncrossing", SetPartition.bottom(4), SetPartition.top(4)) == -5
    assert mobius("all", SetPartition.bottom(3), SetPartition.top(3)) == 2


def test_mobius_full_interval_closed_forms():
    # 0_n -> 1_n: (-1)^(n-1) (n-1)! on the full lattice, signed Catalan on
    # non-crossing partitions, alternating signs on interval partitions.
    for n in range(1, 7):
        bot, top = SetPartition.bottom(n), SetPartition.top(n)
        assert mobius("all", bot, top) == (-1) ** (n - 1) * math.factorial(n - 1)
        catalan = math.comb(2 * (n - 1), n - 1) // n
        assert mobius("noncrossing", bot, top) == (-1) ** (n - 1) * catalan
        assert mobius("interval", bot, top) == (-1) ** (n - 1)


@pytest.mark.parametrize("family,n", [("all", 5), ("noncrossing", 6), ("interval", 6)])
def test_zeta_mobius_identity(family, n):
    # sum_{p <= r <= q} mu(r, q) is 1 when p = q and 0 otherwise.
    parts = [p for p in enumerate_partitions(n, family)]
    for q in parts:
        below = [p for p in parts if leq(p, q)]
        for p in below:
            total = sum(mobius(family, r, q) for r in below if leq(p, r))
            assert total == (1 if p == q else 0)


def test_mobius_errors():
    p = SetPartition.from_blocks(3, [[1, 2], [3]])
    q = SetPartition.from_blocks(3, [[1, 3], [2]])
    with pytest.raises(PosetOrderError):
        mobius("all", p, q)
    crossing = SetPartition.from_blocks(4, [[1, 3], [2, 4]])
    with pytest.raises(PosetOrderError):
        mobius("noncrossing", crossing, SetPartition.top(4))
    with pytest.raises(SizeLimitError):
        mobius("all", SetPartition.bottom(9), SetPartition.top(9))


def test_nesting_forest_factorial_examples():
    cases = [
        ([[1, 2], [3, 4]], 1),
        ([[1, 4], [2, 3]], 2),
        ([[1, 6], [2, 3], [4, 5]], 3),
        ([[1, 2, 3, 4]], 1),
        ([[1, 8], [2, 5], [3, 4], [6, 7]], 8),  # chain of depth 3 plus sibling
    ]
    for blocks, expected in cases:
        n = max(max(b) for b in blocks)
        p = SetPartition.from_blocks(n, blocks)
        assert nesting_forest_factorial(p) == expected


def test_nesting_forest_rejects_crossing():
    p = SetPartition.from_blocks(4, [[1, 3], [2, 4]])
    with pytest.raises(DomainError):
        nesting_forest_factorial(p)


def test_from_blocks_validation():
    with pytest.raises(DomainError):
        SetPartition.from_blocks(3, [[1, 2]])  # misses 3
    with pytest.raises(DomainError):
        SetPartition.from_blocks(3, [[1, 2], [2, 3]])  # overlap
    with pytest.raises(DomainError):
        SetPartition.from_blocks(2, [[1, 2], []])  # empty block
    with pytest.raises(DomainError):
        SetPartition.from_blocks(2, [[1, 2, 3]])  # out of range


def test_in_family_consistency():
    for n in range(1, 6):
        nc = set(p.blocks for p in enumerate_partitions(n, "noncrossing"))
        iv = set(p.blocks for p in enumerate_partitions(n, "interval"))
        for p in enumerate_partitions(n, "all"):
            assert in_family(p, "noncrossing") == (p.blocks in nc)
            assert in_family(p, "interval") == (p.blocks in iv)
