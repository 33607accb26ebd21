"""Shared test fixtures: reference complexes and random generators."""

from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest

from nctopo.simplicial import SimplicialComplex, from_facets

# Minimal 6-vertex triangulation of the real projective plane: 15 edges,
# 10 triangles, every edge in exactly two triangles, Euler characteristic 1.
RP2_FACETS = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]


@pytest.fixture(scope="session")
def rp2() -> SimplicialComplex:
    return from_facets(RP2_FACETS)


def random_complex(rng: random.Random, max_vertices: int = 7) -> SimplicialComplex:
    """Downward closure of a few random facets on up to max_vertices vertices."""
    n = rng.randint(1, max_vertices)
    vertices = list(range(1, n + 1))
    facets = [tuple(vertices)] if n <= 2 else []
    for _ in range(rng.randint(1, 5)):
        size = rng.randint(1, min(n, 4))
        facets.append(tuple(sorted(rng.sample(vertices, size))))
    # Make sure every vertex appears so labels stay 1..n.
    facets.extend((v,) for v in vertices)
    return from_facets(facets)


def random_cloud(rng: random.Random, n_points: int, dim: int = 2) -> np.ndarray:
    return np.array(
        [[rng.uniform(-1.0, 1.0) for _ in range(dim)] for _ in range(n_points)]
    )


def brute_force_classify(blocks: tuple[tuple[int, ...], ...]) -> tuple[bool, bool]:
    """Literal quadruple/triple scans from the definitions."""
    owner = {v: i for i, b in enumerate(blocks) for v in b}
    n = sum(len(b) for b in blocks)
    noncrossing = True
    for a, b, c, d in combinations(range(1, n + 1), 4):
        if owner[a] == owner[c] and owner[b] == owner[d] and owner[a] != owner[b]:
            noncrossing = False
            break
    interval = True
    for a, b, c in combinations(range(1, n + 1), 3):
        if owner[a] == owner[c] and owner[b] != owner[a]:
            interval = False
            break
    return noncrossing, interval
