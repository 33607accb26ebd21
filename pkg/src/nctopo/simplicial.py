"""Abstract simplicial complexes and their graded boundary/incidence matrices.

Faces are stored per dimension as lexicographically sorted tuples of
vertex labels 1..n0, and every matrix here is dense and exact (Python
integers in object arrays).  Row/column indexing of graded matrices is
fixed by that face order, grades concatenated ascending.

Sign convention: the boundary of an r-face drops its k-th vertex (0-based,
ascending order) with sign (-1)^(r-k).  This differs from the textbook
(-1)^k by a global sign per grade, which leaves dd = 0, Laplacians and
homology untouched; it is the convention the test suite's reference
matrices are written in.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParseError

Face = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite abstract simplicial complex, downward closed.

    ``faces[r]`` lists the r-dimensional faces as strictly increasing
    vertex tuples, lexicographically sorted.  Vertex labels are 1..n0.
    """

    faces: tuple[tuple[Face, ...], ...]

    def __post_init__(self):
        if not self.faces or not self.faces[0]:
            raise DomainError("complex needs at least one vertex")
        vertices = {f[0] for f in self.faces[0]}
        if vertices != set(range(1, len(self.faces[0]) + 1)):
            raise DomainError("vertex labels must be exactly 1..n0")
        for r, level in enumerate(self.faces):
            if r > 0 and not level:
                raise DomainError(f"no faces in dimension {r} <= dim")
            if list(level) != sorted(set(level)):
                raise DomainError(f"faces of dimension {r} not sorted/unique")
            for f in level:
                if len(f) != r + 1 or list(f) != sorted(set(f)):
                    raise DomainError(f"bad face {f} in dimension {r}")
        # Downward closure.
        for r in range(1, len(self.faces)):
            lower = set(self.faces[r - 1])
            for f in self.faces[r]:
                for sub in combinations(f, r):
                    if sub not in lower:
                        raise DomainError(f"missing face {sub} of {f}")

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    @property
    def counts(self) -> tuple[int, ...]:
        """Face counts (n_0, ..., n_d)."""
        return tuple(len(level) for level in self.faces)

    @property
    def total_faces(self) -> int:
        return sum(self.counts)

    def index_of(self, r: int) -> dict[Face, int]:
        """Face -> position within its grade."""
        return {f: i for i, f in enumerate(self.faces[r])}

    def facets(self) -> list[Face]:
        """Maximal faces, ordered by dimension then lexicographically."""
        out: list[Face] = []
        for r, level in enumerate(self.faces):
            if r == self.dim:
                out.extend(level)
                continue
            above = self.faces[r + 1]
            covered = {sub for f in above for sub in combinations(f, r + 1)}
            out.extend(f for f in level if f not in covered)
        return sorted(out, key=lambda f: (len(f), f))


def from_facets(facets: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Build the downward closure of the given facets.

    Vertices are relabeled to 1..n0 in order of first appearance, scanning
    the facets as given.
    """
    facets = [tuple(f) for f in facets]
    if not facets:
        raise DomainError("facet list is empty")
    relabel: dict[int, int] = {}
    for f in facets:
        if not f:
            raise DomainError("empty facet")
        for v in f:
            if not isinstance(v, int) or v < 1:
                raise DomainError(f"vertex labels must be positive integers, got {v!r}")
            if v not in relabel:
                relabel[v] = len(relabel) + 1
    levels: list[set[Face]] = []
    for f in facets:
        new = tuple(sorted(relabel[v] for v in f))
        if len(set(new)) != len(new):
            raise DomainError(f"facet {f} repeats a vertex")
        r = len(new) - 1
        while len(levels) <= r:
            levels.append(set())
        for k in range(1, len(new) + 1):
            for sub in combinations(new, k):
                levels[k - 1].add(sub)
    return SimplicialComplex(tuple(tuple(sorted(level)) for level in levels))


@dataclass(frozen=True)
class GradedMatrix:
    """Square matrix over the chain grading (n_0, ..., n_d) with block access."""

    grading: tuple[int, ...]
    entries: np.ndarray
    exact: bool = True

    def __post_init__(self):
        n = sum(self.grading)
        if self.entries.shape != (n, n):
            raise DomainError(
                f"entries shape {self.entries.shape} does not match grading sum {n}"
            )

    def _offsets(self) -> list[int]:
        offs = [0]
        for n in self.grading:
            offs.append(offs[-1] + n)
        return offs

    def block(self, i: int, j: int) -> np.ndarray:
        """The (i, j) block P_i M P_j as an (n_i x n_j) array."""
        d = len(self.grading) - 1
        if not (0 <= i <= d and 0 <= j <= d):
            raise DomainError(f"block ({i}, {j}) outside grading 0..{d}")
        o = self._offsets()
        return self.entries[o[i] : o[i + 1], o[j] : o[j + 1]]

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.grading != other.grading:
            raise DomainError("grading mismatch")
        return GradedMatrix(
            self.grading, self.entries @ other.entries, self.exact and other.exact
        )


def boundary_operator(X: SimplicialComplex, r: int) -> np.ndarray:
    """The signed boundary matrix of grade r, shape (n_{r-1} x n_r), exact ints."""
    if not (1 <= r <= X.dim):
        raise DomainError(f"boundary grade {r} outside 1..{X.dim}")
    rows = X.index_of(r - 1)
    out = np.zeros((len(X.faces[r - 1]), len(X.faces[r])), dtype=object)
    for col, f in enumerate(X.faces[r]):
        for k in range(r + 1):
            sub = f[:k] + f[k + 1 :]
            out[rows[sub], col] = (-1) ** (r - k)
    return out


def boundary_matrix(X: SimplicialComplex) -> GradedMatrix:
    """All boundary operators assembled above the block diagonal; J @ J = 0."""
    n = X.total_faces
    entries = np.zeros((n, n), dtype=object)
    gm = GradedMatrix(X.counts, entries)
    o = gm._offsets()
    for r in range(1, X.dim + 1):
        entries[o[r - 1] : o[r], o[r] : o[r + 1]] = boundary_operator(X, r)
    return gm


def incidence_matrix(X: SimplicialComplex) -> GradedMatrix:
    """Entrywise absolute value of the boundary matrix."""
    gm = boundary_matrix(X)
    return GradedMatrix(gm.grading, np.abs(gm.entries), exact=True)


def adjacency_degree(
    X: SimplicialComplex, i: int, direction: str
) -> tuple[np.ndarray, np.ndarray]:
    """Degree (diagonal) and adjacency parts of the grade-i incidence Gram block.

    direction='up' counts shared cofaces of dimension i+1, direction='down'
    shared faces of dimension i-1.  Both are returned exactly.
    """
    if direction not in ("up", "down"):
        raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")
    if direction == "up":
        if i >= X.dim:
            raise DomainError(f"no grade above {i} in a {X.dim}-dimensional complex")
        b = np.abs(boundary_operator(X, i + 1))
        gram = b @ b.T
    else:
        if i < 1:
            raise DomainError("grade 0 has no faces below it")
        if i > X.dim:
            raise DomainError(f"grade {i} outside 0..{X.dim}")
        b = np.abs(boundary_operator(X, i))
        gram = b.T @ b
    diag = np.diag(np.diag(gram))
    return diag, gram - diag


def write_complex_text(X: SimplicialComplex) -> str:
    """Canonical facet-per-line text; re-reading reproduces the complex."""
    facets = X.facets()
    # from_facets relabels by first appearance; prepend singleton lines when
    # the facet order alone would permute the labels.
    seen: list[int] = []
    for f in facets:
        for v in f:
            if v not in seen:
                seen.append(v)
    if seen != sorted(seen):
        facets = [(v,) for v in range(1, len(X.faces[0]) + 1)] + [
            f for f in facets if len(f) > 1
        ]
    lines = ["# simplicial complex: one facet per line"]
    lines.extend(" ".join(map(str, f)) for f in facets)
    return "\n".join(lines) + "\n"


def parse_complex_text(text: str) -> SimplicialComplex:
    """Inverse of write_complex_text; '#' starts a comment."""
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            verts = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if any(v < 1 for v in verts):
            raise ParseError(f"vertex labels must be >= 1, got {line!r}", lineno)
        facets.append(verts)
    if not facets:
        raise ParseError("no facets found in file")
    return from_facets(facets)


def read_complex_file(path) -> SimplicialComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex_text(fh.read())


def write_complex_file(X: SimplicialComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_complex_text(X))


def hollow_tetrahedron() -> SimplicialComplex:
    """The 2-sphere triangulation on four vertices; counts (4, 6, 4)."""
    return from_facets([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])
