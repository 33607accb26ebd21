"""Dense symmetric eigensolving, combinatorial Laplacians, spectral Betti numbers.

``eigh`` runs cyclic Jacobi sweeps, which keep the eigenbasis orthonormal
by construction and are easy to audit; above JACOBI_SIZE_LIMIT it switches
to LAPACK (numpy.linalg.eigh) because sweep cost grows cubically, and both
paths are held to the same reconstruction and orthonormality guarantees.
The Jacobi path stays available at any size through ``eigh_jacobi``.

The grade-i Laplacian block is d_i^T d_i + d_{i+1} d_{i+1}^T; the weight of
its zero eigenvalue, times 1/n_i, recovers the i-th Betti number, which is
what ``betti_spectral`` reads off (the exact Smith-normal-form route in
``nctopo.snf`` is the cross-check).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NumericalError, SizeLimitError, ToleranceError
from .measures import SpectralMeasure
from .simplicial import GradedMatrix, SimplicialComplex, boundary_operator

EIGH_SIZE_CAP = 4096
JACOBI_SIZE_LIMIT = 128
MAX_SWEEPS = 100
SYMMETRY_RTOL = 1e-12
RECONSTRUCTION_RTOL = 1e-9
DEFAULT_EIGH_TOL = 1e-11
ZERO_ATOM_RTOL = 1e-8
BETTI_RESIDUE_MAX = 0.01


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Per-grade spectral measures (mu_0, ..., mu_d) of the Laplacian blocks."""

    measures: tuple[SpectralMeasure, ...]
    grading: tuple[int, ...]

    def __post_init__(self):
        if len(self.measures) != len(self.grading):
            raise DomainError("one measure per grade required")
        for mu in self.measures:
            for v, _ in mu.atoms:
                if v < -1e-9:
                    raise DomainError(f"Laplacian atom {v} below zero")


def _as_float_symmetric(M, tol: float = SYMMETRY_RTOL) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    scale = max(np.linalg.norm(A), 1.0)
    if np.linalg.norm(A - A.T) > tol * scale:
        raise DomainError("matrix is not symmetric within tolerance")
    return (A + A.T) / 2.0


def eigh_jacobi(M, tol: float = DEFAULT_EIGH_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for real symmetric matrices.

    Sweeps rotate every (p, q) pair until the off-diagonal Frobenius norm
    drops below tol * ||M||; raises NumericalError after MAX_SWEEPS.
    """
    A = _as_float_symmetric(M)
    n = A.shape[0]
    Q = np.eye(n)
    scale = max(np.linalg.norm(A), 1.0)
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t = t / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                A[:, [p, q]] = A[:, [p, q]] @ rot
                A[[p, q], :] = rot.T @ A[[p, q], :]
                A[p, q] = A[q, p] = 0.0
                Q[:, [p, q]] = Q[:, [p, q]] @ rot
    else:
        raise NumericalError(f"Jacobi sweeps did not converge in {MAX_SWEEPS} sweeps")
    order = np.argsort(np.diag(A), kind="stable")
    return np.diag(A)[order].copy(), Q[:, order].copy()


def eigh(M, tol: float = DEFAULT_EIGH_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    Jacobi up to JACOBI_SIZE_LIMIT, LAPACK beyond; both paths are verified
    against the reconstruction bound ||M - Q diag(w) Q^T|| <= 1e-9 ||M||.
    """
    A = _as_float_symmetric(M)
    n = A.shape[0]
    if n > EIGH_SIZE_CAP:
        raise SizeLimitError(f"matrix size {n} exceeds cap {EIGH_SIZE_CAP}")
    if n <= JACOBI_SIZE_LIMIT:
        w, Q = eigh_jacobi(A, tol)
    else:
        w, Q = np.linalg.eigh(A)
    scale = max(np.linalg.norm(A), 1.0)
    resid = np.linalg.norm(A - (Q * w) @ Q.T)
    ortho = np.linalg.norm(Q.T @ Q - np.eye(n))
    if resid > RECONSTRUCTION_RTOL * scale or ortho > RECONSTRUCTION_RTOL * max(n, 1):
        raise NumericalError(
            f"eigendecomposition failed validation: resid={resid:.2e} ortho={ortho:.2e}"
        )
    return w, Q


def laplacian(X: SimplicialComplex) -> GradedMatrix:
    """Block-diagonal combinatorial Laplacian, exact integer entries."""
    n = X.total_faces
    entries = np.zeros((n, n), dtype=object)
    gm = GradedMatrix(X.counts, entries)
    o = gm._offsets()
    d = X.dim
    for i in range(d + 1):
        block = np.zeros((X.counts[i], X.counts[i]), dtype=object)
        if i >= 1:
            b = boundary_operator(X, i)
            block = block + b.T @ b
        if i < d:
            b = boundary_operator(X, i + 1)
            block = block + b @ b.T
        entries[o[i] : o[i + 1], o[i] : o[i + 1]] = block
    return gm


def _zero_threshold(eigenvalues: np.ndarray, tol: float | None) -> float:
    if tol is not None:
        return tol
    top = float(eigenvalues[-1]) if len(eigenvalues) else 0.0
    return ZERO_ATOM_RTOL * max(top, 1.0)


def laplacian_spectrum(X: SimplicialComplex, tol: float | None = None) -> LaplacianSpectrum:
    """Uniform-weight spectral measure of each Laplacian block.

    Eigenvalues below the zero threshold (tol, default 1e-8 times the
    largest eigenvalue of the block, at least 1) are clamped to exact zero.
    """
    L = laplacian(X)
    measures = []
    for i, ni in enumerate(X.counts):
        w, _ = eigh(np.asarray(L.block(i, i), dtype=float))
        cut = _zero_threshold(w, tol)
        values = [0 if abs(v) <= cut else float(v) for v in w]
        pairs = [(v, Fraction(1, ni)) for v in values]
        measures.append(SpectralMeasure.from_pairs(pairs))
    return LaplacianSpectrum(tuple(measures), X.counts)


def betti_spectral(X: SimplicialComplex, tol: float | None = None) -> tuple[int, ...]:
    """Betti numbers from the zero-atom weights of the Laplacian spectrum.

    beta_i = n_i * mu_i({0}); the rounding residue must stay below 0.01,
    otherwise an eigenvalue sits too close to the zero threshold and a
    ToleranceError is raised instead of guessing.
    """
    spectrum = laplacian_spectrum(X, tol)
    betti = []
    for i, mu in enumerate(spectrum.measures):
        raw = X.counts[i] * mu.weight_at(0, tol=0.0)
        nearest = round(raw)
        if abs(raw - nearest) >= BETTI_RESIDUE_MAX:
            raise ToleranceError(
                f"grade {i}: kernel weight {raw} is not close to an integer"
            )
        betti.append(int(nearest))
    return tuple(betti)


def rooted_spectral_measure(M, j: int) -> SpectralMeasure:
    """Spectral measure of a symmetric matrix seen from coordinate j (1-based).

    Atom weights are the squared coefficients of e_j in the orthonormal
    eigenbasis, so they sum to one.
    """
    A = _as_float_symmetric(M)
    if not (1 <= j <= A.shape[0]):
        raise DomainError(f"index {j} outside 1..{A.shape[0]}")
    w, Q = eigh(A)
    weights = Q[j - 1, :] ** 2
    total = float(weights.sum())
    pairs = [(float(v), float(a) / total) for v, a in zip(w, weights) if a > 0]
    return SpectralMeasure.from_pairs(pairs)


def spectral_measure(M, tol: float = 1e-7) -> SpectralMeasure:
    """Global (trace-state) spectral measure: uniform weight per eigenvalue."""
    A = _as_float_symmetric(M)
    w, _ = eigh(A)
    return SpectralMeasure.from_samples([float(v) for v in w], tolerance=tol)


def tensor_independent_pair(A, B) -> tuple[np.ndarray, np.ndarray]:
    """Kronecker embeddings (A x I_m, I_n x B) acting on the product space.

    The spectrum of the sum (product) of the pair consists of all pairwise
    sums (products) of eigenvalues, realizing classically independent
    variables with the two spectral distributions.
    """
    A = _as_float_symmetric(A)
    B = _as_float_symmetric(B)
    n, m = A.shape[0], B.shape[0]
    if n * m > EIGH_SIZE_CAP:
        raise SizeLimitError(f"product size {n * m} exceeds cap {EIGH_SIZE_CAP}")
    return np.kron(A, np.eye(m)), np.kron(np.eye(n), B)


def spectrum_lines(spectrum: LaplacianSpectrum) -> list[str]:
    """Structured text export: one line per (grade, eigenvalue, multiplicity)."""
    lines = []
    for i, mu in enumerate(spectrum.measures):
        ni = spectrum.grading[i]
        for value, weight in mu.atoms:
            mult = round(ni * weight)
            lines.append(f"{i} {float(value):.12g} {mult}")
    return lines
