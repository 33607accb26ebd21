"""Exact Smith normal forms over the integers and over GF(2).

The integer route uses arbitrary-precision arithmetic with
smallest-nonzero-pivot selection to limit coefficient growth; correctness
is purely algebraic (A = S D T with unimodular S, T and a divisor chain
d1 | d2 | ... | dk).  The GF(2) route is plain Gaussian elimination with
tracked transforms.

Betti numbers come out of boundary ranks: beta_i = n_i - rank d_i -
rank d_{i+1}.  Note the rank may genuinely differ between the two rings in
the presence of even torsion (the projective plane is the canonical
witness), so betti_snf always computes the requested ring rather than
assuming ring independence.  Torsion coefficients of H_i are the >1
divisors of the integer Smith form of d_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, NumericalError, SizeLimitError
from .simplicial import SimplicialComplex, boundary_operator

Ring = Literal["integers", "gf2"]

RINGS: tuple[Ring, ...] = ("integers", "gf2")
SNF_SIZE_CAP = 2000


@dataclass(frozen=True)
class SmithDecomposition:
    """A = S @ D @ T with S, T invertible over the ring, D diagonal.

    ``divisors`` lists the nonzero diagonal entries d1 | d2 | ... | dk;
    over GF(2) they are all ones.
    """

    ring: Ring
    S: np.ndarray
    D: np.ndarray
    T: np.ndarray
    rank: int
    divisors: tuple[int, ...]


def _check_matrix(A) -> list[list[int]]:
    M = [[int(x) for x in row] for row in A]
    if not M or not M[0]:
        raise DomainError("matrix must be nonempty")
    if any(len(row) != len(M[0]) for row in M):
        raise DomainError("ragged matrix")
    if len(M) > SNF_SIZE_CAP or len(M[0]) > SNF_SIZE_CAP:
        raise SizeLimitError(f"matrix exceeds {SNF_SIZE_CAP}x{SNF_SIZE_CAP} cap")
    return M


def _smith_integers(M: list[list[int]]) -> SmithDecomposition:
    n, m = len(M), len(M[0])
    D = [row[:] for row in M]
    # Maintain A = S @ D @ T: every elementary row op E on D (D <- E D)
    # multiplies S by E^{-1} on the right, column ops symmetrically on T.
    S = [[int(i == j) for j in range(n)] for i in range(n)]
    T = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_add(dst, src, q):  # D[dst] -= q * D[src]
        Dd, Ds = D[dst], D[src]
        for j in range(m):
            Dd[j] -= q * Ds[j]
        for i in range(n):  # S[:, src] += q * S[:, dst]
            S[i][src] += q * S[i][dst]

    def col_add(dst, src, q):  # D[:, dst] -= q * D[:, src]
        for i in range(n):
            D[i][dst] -= q * D[i][src]
        Ts, Td = T[src], T[dst]
        for j in range(m):  # T[src, :] += q * T[dst, :]
            Ts[j] += q * Td[j]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        for r in range(n):
            S[r][i], S[r][j] = S[r][j], S[r][i]

    def col_swap(i, j):
        for r in range(n):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        T[i], T[j] = T[j], T[i]

    def row_negate(i):
        D[i] = [-x for x in D[i]]
        for r in range(n):
            S[r][i] = -S[r][i]

    def find_pivot(t):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = abs(D[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 1:
                        return best
        return best

    t = 0
    while True:
        best = find_pivot(t)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)
        if D[t][t] < 0:
            row_negate(t)
        # Clear row and column t; restart whenever a remainder produces a
        # smaller candidate pivot.
        while True:
            dirty = False
            for i in range(t + 1, n):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_add(i, t, q)
                    if D[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_add(j, t, q)
                    if D[t][j]:
                        col_swap(t, j)
                        dirty = True
            if D[t][t] < 0:
                row_negate(t)
            if not dirty:
                break
        # Divisibility fix-up: the pivot must divide the rest of the block.
        offender = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if D[i][j] % D[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, -1)  # fold the offending row into row t
            continue
        t += 1

    divisors = tuple(D[i][i] for i in range(min(n, m)) if i < t)
    for a, b in zip(divisors, divisors[1:]):
        if b % a:
            raise NumericalError(f"divisor chain violated: {a} does not divide {b}")
    return SmithDecomposition(
        ring="integers",
        S=np.array(S, dtype=object),
        D=np.array(D, dtype=object),
        T=np.array(T, dtype=object),
        rank=t,
        divisors=divisors,
    )


def _smith_gf2(M: list[list[int]]) -> SmithDecomposition:
    n, m = len(M), len(M[0])
    D = np.array(M, dtype=np.uint8) & 1
    S = np.eye(n, dtype=np.uint8)
    T = np.eye(m, dtype=np.uint8)
    t = 0
    for _ in range(min(n, m)):
        rows, cols = np.nonzero(D[t:, t:])
        if len(rows) == 0:
            break
        pi, pj = t + rows[0], t + cols[0]
        D[[t, pi], :] = D[[pi, t], :]
        S[:, [t, pi]] = S[:, [pi, t]]
        D[:, [t, pj]] = D[:, [pj, t]]
        T[[t, pj], :] = T[[pj, t], :]
        for i in range(n):
            if i != t and D[i, t]:
                D[i, :] ^= D[t, :]
                S[:, t] ^= S[:, i]
        for j in range(m):
            if j != t and D[t, j]:
                D[:, j] ^= D[:, t]
                T[t, :] ^= T[j, :]
        t += 1
    return SmithDecomposition(
        ring="gf2", S=S, D=D, T=T, rank=t, divisors=(1,) * t
    )


def smith_normal_form(A, ring: Ring = "integers") -> SmithDecomposition:
    """Smith normal form of an integer matrix over Z or GF(2)."""
    M = _check_matrix(A)
    if ring == "integers":
        return _smith_integers(M)
    if ring == "gf2":
        return _smith_gf2(M)
    raise DomainError(f"unknown ring {ring!r}")


def rank_gf2_columns(columns: list[int], *_unused) -> int:
    """Rank over GF(2) of columns given as bitmask integers."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                rank += 1
                break
            col ^= other
    return rank


def rank_gf2(A) -> int:
    """Rank over GF(2) of an integer matrix."""
    M = np.asarray(A)
    cols = []
    for j in range(M.shape[1]):
        bits = 0
        for i in np.nonzero(M[:, j] % 2)[0]:
            bits |= 1 << int(i)
        cols.append(bits)
    return rank_gf2_columns(cols)


def rank_rational(A) -> int:
    """Exact rank over the rationals of an integer matrix (Gauss on Fractions)."""
    M = [[Fraction(int(x)) for x in row] for row in A]
    n, m = len(M), len(M[0])
    rank = 0
    row = 0
    for col in range(m):
        pivot = next((i for i in range(row, n) if M[i][col]), None)
        if pivot is None:
            continue
        M[row], M[pivot] = M[pivot], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for i in range(n):
            if i != row and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[row])]
        rank += 1
        row += 1
        if row == n:
            break
    return rank


def boundary_rank(X: SimplicialComplex, r: int, ring: Ring) -> int:
    """Rank of the grade-r boundary operator over the requested ring."""
    if not (1 <= r <= X.dim):
        return 0
    if ring == "gf2":
        index = X.index_of(r - 1)
        cols = []
        for f in X.faces[r]:
            bits = 0
            for k in range(r + 1):
                bits |= 1 << index[f[:k] + f[k + 1 :]]
            cols.append(bits)
        return rank_gf2_columns(cols)
    if ring == "integers":
        return rank_rational(boundary_operator(X, r))
    raise DomainError(f"unknown ring {ring!r}")


def betti_snf(X: SimplicialComplex, ring: Ring = "integers") -> tuple[int, ...]:
    """Exact Betti numbers over the chosen coefficients.

    The integers route reports ranks over the rationals (= integer Smith
    ranks); the gf2 route reports GF(2) homology dimensions.
    """
    d = X.dim
    ranks = [boundary_rank(X, r, ring) for r in range(0, d + 2)]
    return tuple(X.counts[i] - ranks[i] - ranks[i + 1] for i in range(d + 1))


def torsion_coefficients(X: SimplicialComplex, i: int) -> list[int]:
    """Torsion of the i-th homology group: >1 divisors of SNF of d_{i+1}."""
    if not (0 <= i <= X.dim - 1):
        raise DomainError(f"torsion defined for 0 <= i <= {X.dim - 1}, got {i}")
    snf = smith_normal_form(boundary_operator(X, i + 1), ring="integers")
    return [d for d in snf.divisors if d > 1]
