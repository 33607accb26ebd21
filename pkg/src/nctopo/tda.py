"""Cech and Vietoris-Rips machinery: filtrations, Betti curves, persistence.

Radius convention: balls of radius t, so an edge enters when the pairwise
distance drops to 2t.  Many TDA libraries use the diameter scale instead;
halve or double accordingly when comparing.

Betti curves are computed per scale through exact GF(2) boundary ranks (or
the spectral engine), independently of the persistence pairing, which does
the usual GF(2) column reduction of the filtration-ordered boundary matrix;
agreement of bar counts with curve values is a consistency contract the
tests enforce rather than an identity used by the code.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import (
    CoverageError,
    DomainError,
    PartialResultError,
    SizeLimitError,
)
from .simplicial import Face, SimplicialComplex
from .snf import betti_snf
from .spectra import betti_spectral

SIMPLEX_CAP = 200_000
COMPLEX_MAXDIM_CAP = 3
CURVE_MAXDIM_CAP = 2
AUGMENT_CAP = 512

Engine = Literal["gf2", "spectral"]
ComplexType = Literal["rips", "cech"]


@dataclass(frozen=True)
class PointCloud:
    """Points in R^D (D in {1,2,3}) plus provenance metadata."""

    points: np.ndarray
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (1, 2, 3):
            raise DomainError(f"points must be (N, D) with D in 1..3, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points contain non-finite coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


def _pairwise_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def min_enclosing_ball(points: Sequence[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest ball containing up to four points in R^D, D <= 3.

    Enumerates the candidate support sets (pairs, triples, quadruples),
    solving each circumcenter inside the affine hull; the smallest
    candidate covering every point wins.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise DomainError("need at least one point")
    if len(pts) == 1:
        return pts[0], 0.0
    if len(pts) > 4:
        raise DomainError("supports at most four points")
    best: tuple[np.ndarray, float] | None = None
    for k in range(2, len(pts) + 1):
        for support in combinations(pts, k):
            ball = _circumball(support)
            if ball is None:
                continue
            center, radius = ball
            if best is not None and radius >= best[1]:
                continue
            slack = 1e-9 * max(radius, 1.0)
            if all(np.linalg.norm(p - center) <= radius + slack for p in pts):
                best = (center, radius)
    if best is None:
        raise DomainError("degenerate point set")
    return best


def _circumball(support: Sequence[np.ndarray]) -> tuple[np.ndarray, float] | None:
    # Equidistant point inside the affine hull of the support points.
    p0 = support[0]
    if len(support) == 2:
        center = (support[0] + support[1]) / 2.0
    else:
        V = np.stack([p - p0 for p in support[1:]], axis=0)
        rhs = 0.5 * (V**2).sum(axis=1)
        gram = V @ V.T
        try:
            y = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError:
            return None
        center = p0 + V.T @ y
    radius = max(np.linalg.norm(p - center) for p in support)
    return center, radius


def _clique_expansion(
    n: int, neighbor_masks: list[int], maxdim: int, cap: int
) -> list[list[Face]]:
    # Levels of cliques of the edge graph, vertices labeled 1..n.  Each face
    # carries the bitmask of higher-indexed common neighbors and extends
    # only by those, so every clique appears exactly once.
    levels: list[list[tuple[Face, int]]] = [
        [((i + 1,), neighbor_masks[i] & -(1 << (i + 1))) for i in range(n)]
    ]
    total = n
    for _r in range(1, maxdim + 1):
        nxt: list[tuple[Face, int]] = []
        for face, ext in levels[-1]:
            m = ext
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                new_ext = ext & neighbor_masks[v] & -(1 << (v + 1))
                nxt.append((face + (v + 1,), new_ext))
                total += 1
                if total > cap:
                    raise SizeLimitError(
                        f"simplex count exceeded cap {cap} during clique expansion"
                    )
        if not nxt:
            break
        levels.append(nxt)
    return [[face for face, _ in level] for level in levels]


def _edge_masks(dist: np.ndarray, threshold: float) -> list[int]:
    n = dist.shape[0]
    masks = []
    for i in range(n):
        bits = 0
        row = dist[i]
        for j in range(n):
            if j != i and row[j] <= threshold:
                bits |= 1 << j
        masks.append(bits)
    return masks


def vietoris_rips(cloud: PointCloud, t: float, maxdim: int = 2) -> SimplicialComplex:
    """Clique complex of the graph with edges at pairwise distance <= 2t."""
    if t < 0:
        raise DomainError(f"scale t must be >= 0, got {t}")
    if not (0 <= maxdim <= COMPLEX_MAXDIM_CAP):
        raise DomainError(f"maxdim must be in 0..{COMPLEX_MAXDIM_CAP}, got {maxdim}")
    dist = _pairwise_distances(cloud.points)
    masks = _edge_masks(dist, 2.0 * t)
    levels = _clique_expansion(cloud.size, masks, maxdim, SIMPLEX_CAP)
    return SimplicialComplex(tuple(tuple(sorted(level)) for level in levels))


def cech(cloud: PointCloud, t: float, maxdim: int = 2) -> SimplicialComplex:
    """Nerve of radius-t balls: a simplex enters once its vertices fit in a
    ball of radius t (minimal enclosing ball test; equivalent to the balls
    having a common point)."""
    if t < 0:
        raise DomainError(f"scale t must be >= 0, got {t}")
    if not (0 <= maxdim <= COMPLEX_MAXDIM_CAP):
        raise DomainError(f"maxdim must be in 0..{COMPLEX_MAXDIM_CAP}, got {maxdim}")
    dist = _pairwise_distances(cloud.points)
    masks = _edge_masks(dist, 2.0 * t)
    levels = _clique_expansion(cloud.size, masks, maxdim, SIMPLEX_CAP)
    pts = cloud.points
    kept: list[tuple[Face, ...]] = [tuple(levels[0])]
    alive = set(levels[0])
    for level in levels[1:]:
        faces = []
        for face in level:
            if any(face[:k] + face[k + 1 :] not in alive for k in range(len(face))):
                continue
            if len(face) > 2:
                _, radius = min_enclosing_ball([pts[v - 1] for v in face])
                if radius > t:
                    continue
            faces.append(face)
        if not faces:
            break
        kept.append(tuple(sorted(faces)))
        alive = set(faces)
    return SimplicialComplex(tuple(kept))


@dataclass(frozen=True)
class Filtration:
    """Simplices with birth scales, sorted by (birth, dimension, vertices)."""

    simplices: tuple[tuple[float, Face], ...]
    maxdim: int

    def __post_init__(self):
        order = list(self.simplices)
        if order != sorted(order, key=lambda bf: (bf[0], len(bf[1]), bf[1])):
            raise DomainError("filtration must be sorted by (birth, dim, verts)")
        birth = {f: b for b, f in order}
        for b, f in order:
            for k in range(len(f)):
                if len(f) > 1:
                    sub = f[:k] + f[k + 1 :]
                    if sub not in birth or birth[sub] > b:
                        raise DomainError(f"face {sub} of {f} born late or missing")

    @property
    def thresholds(self) -> tuple[float, ...]:
        return tuple(sorted({b for b, _ in self.simplices}))

    def complex_at(self, t: float) -> SimplicialComplex:
        levels: dict[int, list[Face]] = {}
        for b, f in self.simplices:
            if b <= t:
                levels.setdefault(len(f) - 1, []).append(f)
        top = max(levels) if levels else 0
        return SimplicialComplex(
            tuple(tuple(sorted(levels.get(r, ()))) for r in range(top + 1))
        )


def rips_filtration(cloud: PointCloud, t_max: float, maxdim: int = 2) -> Filtration:
    """Vietoris-Rips filtration up to scale t_max; simplex birth is half the
    longest pairwise distance among its vertices."""
    dist = _pairwise_distances(cloud.points)
    masks = _edge_masks(dist, 2.0 * t_max)
    levels = _clique_expansion(cloud.size, masks, maxdim, SIMPLEX_CAP)
    entries: list[tuple[float, Face]] = []
    for r, level in enumerate(levels):
        for face in level:
            if r == 0:
                birth = 0.0
            else:
                birth = max(dist[a - 1, b - 1] for a, b in combinations(face, 2)) / 2.0
            entries.append((birth, face))
    entries.sort(key=lambda bf: (bf[0], len(bf[1]), bf[1]))
    return Filtration(tuple(entries), maxdim)


def cech_filtration(cloud: PointCloud, t_max: float, maxdim: int = 2) -> Filtration:
    """Cech filtration up to t_max; simplex birth is its enclosing-ball radius."""
    dist = _pairwise_distances(cloud.points)
    masks = _edge_masks(dist, 2.0 * t_max)
    levels = _clique_expansion(cloud.size, masks, maxdim, SIMPLEX_CAP)
    pts = cloud.points
    entries: list[tuple[float, Face]] = []
    alive: set[Face] = set()
    for r, level in enumerate(levels):
        for face in level:
            if r == 0:
                entries.append((0.0, face))
                alive.add(face)
                continue
            if any(face[:k] + face[k + 1 :] not in alive for k in range(len(face))):
                continue
            if r == 1:
                birth = dist[face[0] - 1, face[1] - 1] / 2.0
            else:
                _, birth = min_enclosing_ball([pts[v - 1] for v in face])
            if birth <= t_max:
                entries.append((birth, face))
                alive.add(face)
    entries.sort(key=lambda bf: (bf[0], len(bf[1]), bf[1]))
    return Filtration(tuple(entries), maxdim)


@dataclass(frozen=True)
class PersistencePairs:
    """Per-dimension (birth, death) bars; death is inf for essential classes."""

    bars: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        for dim_bars in self.bars:
            for b, d in dim_bars:
                if not b < d:
                    raise DomainError(f"bar [{b}, {d}) is empty or reversed")

    def count_alive(self, dim: int, t: float) -> int:
        if dim >= len(self.bars):
            return 0
        return sum(1 for b, d in self.bars[dim] if b <= t < d)


def persistence_pairs(filtration: Filtration) -> PersistencePairs:
    """Standard GF(2) column reduction of the filtration boundary matrix.

    Zero-persistence pairs (equal birth and death) are dropped; unpaired
    creators become infinite bars.
    """
    simplices = filtration.simplices
    if len(simplices) > SIMPLEX_CAP:
        raise SizeLimitError(f"filtration exceeds {SIMPLEX_CAP} simplices")
    index = {f: i for i, (_, f) in enumerate(simplices)}
    reduced: list[int] = []
    low_owner: dict[int, int] = {}
    killed: set[int] = set()
    for j, (_, face) in enumerate(simplices):
        col = 0
        if len(face) > 1:
            for k in range(len(face)):
                col |= 1 << index[face[:k] + face[k + 1 :]]
        while col:
            low = col.bit_length() - 1
            owner = low_owner.get(low)
            if owner is None:
                break
            col ^= reduced[owner]
        reduced.append(col)
        if col:
            low = col.bit_length() - 1
            low_owner[low] = j
            killed.add(low)
    maxdim = max(len(f) - 1 for _, f in simplices)
    bars: list[list[tuple[float, float]]] = [[] for _ in range(maxdim + 1)]
    for low, j in low_owner.items():
        birth = simplices[low][0]
        death = simplices[j][0]
        if birth < death:
            bars[len(simplices[low][1]) - 1].append((birth, death))
    for j, (_birth, face) in enumerate(simplices):
        if reduced[j] == 0 and j not in killed:
            bars[len(face) - 1].append((_birth, float("inf")))
    return PersistencePairs(tuple(tuple(sorted(dim_bars)) for dim_bars in bars))


@dataclass(frozen=True)
class BettiCurves:
    """Betti numbers per dimension over a scale grid."""

    grid: tuple[float, ...]
    curves: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for curve in self.curves:
            if len(curve) != len(self.grid):
                raise DomainError("curve length does not match grid")
            if any(v < 0 for v in curve):
                raise DomainError("negative Betti value")

    def at(self, t: float) -> tuple[int, ...]:
        i = self.grid.index(t)
        return tuple(curve[i] for curve in self.curves)


def _critical_radii(
    cloud: PointCloud, t_max: float, complex_type: ComplexType
) -> list[float]:
    dist = _pairwise_distances(cloud.points)
    n = cloud.size
    radii = {float(dist[i, j]) / 2.0 for i in range(n) for j in range(i + 1, n)}
    if complex_type == "cech":
        pts = cloud.points
        for face in combinations(range(n), 3):
            if max(dist[a, b] for a, b in combinations(face, 2)) / 2.0 <= t_max:
                _, r = min_enclosing_ball([pts[v] for v in face])
                radii.add(float(r))
    return sorted(r for r in radii if r <= t_max)


def betti_curves(
    cloud: PointCloud,
    grid: Sequence[float],
    maxdim: int = 2,
    engine: Engine = "gf2",
    complex_type: ComplexType = "rips",
    augment_grid: bool | str = "auto",
) -> BettiCurves:
    """Betti numbers beta_0..beta_maxdim of the growing complex over a grid.

    Complexes are built one dimension above maxdim so the top homology rank
    is correct.  With augment_grid enabled ('auto' or True), exact critical
    radii below max(grid) join the evaluation grid so short-lived features
    cannot fall between grid points; 'auto' skips augmentation once the
    critical set exceeds AUGMENT_CAP values.

    On a size-cap failure partway through, raises PartialResultError whose
    ``partial`` carries the completed prefix.
    """
    grid = [float(t) for t in grid]
    if not grid or sorted(grid) != grid:
        raise DomainError("grid must be a nonempty ascending list")
    if not (0 <= maxdim <= CURVE_MAXDIM_CAP):
        raise DomainError(f"curve maxdim must be in 0..{CURVE_MAXDIM_CAP}")
    if engine not in ("gf2", "spectral"):
        raise DomainError(f"unknown engine {engine!r}")
    if complex_type not in ("rips", "cech"):
        raise DomainError(f"unknown complex type {complex_type!r}")
    eval_grid = list(grid)
    if augment_grid is True or augment_grid == "auto":
        critical = _critical_radii(cloud, max(grid), complex_type)
        if augment_grid is True or len(critical) <= AUGMENT_CAP:
            eval_grid = sorted(set(grid) | set(critical))
    build = vietoris_rips if complex_type == "rips" else cech
    rows: list[tuple[int, ...]] = []
    for t in eval_grid:
        try:
            X = build(cloud, t, maxdim=min(maxdim + 1, COMPLEX_MAXDIM_CAP))
            if engine == "gf2":
                betti = betti_snf(X, ring="gf2")
            else:
                betti = betti_spectral(X)
        except SizeLimitError as exc:
            done = len(rows)
            partial = BettiCurves(
                tuple(eval_grid[:done]),
                tuple(
                    tuple(row[d] if d < len(row) else 0 for row in rows)
                    for d in range(maxdim + 1)
                ),
            )
            raise PartialResultError(
                f"cap exceeded at t={t}: {exc}", partial=partial, failed_at=t
            ) from exc
        rows.append(betti)
    curves = tuple(
        tuple(row[d] if d < len(row) else 0 for row in rows) for d in range(maxdim + 1)
    )
    return BettiCurves(tuple(eval_grid), curves)


def histogram(samples: Sequence[float], bins: Sequence[float]) -> tuple[Fraction, ...]:
    """Exact normalized bin weights; bins are [b_i, b_{i+1}), the last closed.

    Raises CoverageError when a sample falls outside [bins[0], bins[-1]].
    """
    samples = list(samples)
    if not samples:
        raise DomainError("need at least one sample")
    edges = [float(b) for b in bins]
    if len(edges) < 2 or sorted(edges) != edges or len(set(edges)) != len(edges):
        raise DomainError("bins must be at least two strictly ascending breakpoints")
    counts = [0] * (len(edges) - 1)
    for x in samples:
        if x < edges[0] or x > edges[-1]:
            raise CoverageError(f"sample {x} outside bin range [{edges[0]}, {edges[-1]}]")
        idx = min(bisect.bisect_right(edges, x) - 1, len(counts) - 1)
        counts[idx] += 1
    total = len(samples)
    return tuple(Fraction(c, total) for c in counts)
