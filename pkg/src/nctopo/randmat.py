"""Deterministic random-matrix samplers and repulsive point clouds.

Randomness is counter-based and fully reproducible across platforms: the
i-th raw word for (seed, stream) is

    mix64(mix64(seed * G + stream * S) + (i + 1) * G)

with G = 0x9E3779B97F4A7C15, S = 0xD1B54A32D192ED03 and mix64 the SplitMix64
finalizer; uniforms take the top 53 bits, and Gaussians come from
Box-Muller on consecutive uniform pairs.  Every sampler is a pure function
of its parameters and seed.

Ginibre matrices have i.i.d. standard complex Gaussian entries scaled by
1/sqrt(N); their eigenvalues fill the unit disk uniformly with repulsion,
which is what the disk/torus cloud generators exploit.  Haar unitaries are
the polar part C (C*C)^(-1/2) of a Ginibre matrix, and randomly conjugated
diagonals D1 + U D2 U* realize the free additive convolution empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, SizeLimitError
from .measures import SpectralMeasure
from .spectra import eigh
from .tda import PointCloud

GINIBRE_SIZE_CAP = 2000
EIG_GENERAL_SIZE_CAP = 1200
CLOUD_SIZE_CAP = 1200
FREE_CONV_SIZE_CAP = 800

_G = np.uint64(0x9E3779B97F4A7C15)
_S = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U53 = float(2**-53)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, count: int, stream: int = 0) -> np.ndarray:
    """``count`` doubles in [0, 1), deterministic in (seed, stream, index)."""
    with np.errstate(over="ignore"):
        base = _mix64(
            np.uint64(seed % 2**64) * _G + np.uint64(stream % 2**64) * _S
        )
        idx = np.arange(1, count + 1, dtype=np.uint64)
        words = _mix64(base + idx * _G)
    return (words >> np.uint64(11)).astype(np.float64) * _U53


def normals(seed: int, count: int, stream: int = 0) -> np.ndarray:
    """Standard Gaussians via Box-Muller on consecutive uniform pairs."""
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs, stream)
    u1 = u[0::2] + _U53  # keep log() off zero
    u2 = u[1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix with an optional validated structure tag."""

    entries: np.ndarray
    structure: str | None = None

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DomainError(f"expected square matrix, got shape {M.shape}")
        object.__setattr__(self, "entries", M)
        n = M.shape[0]
        if self.structure == "hermitian":
            if np.linalg.norm(M - M.conj().T) > 1e-10 * max(np.linalg.norm(M), 1.0):
                raise DomainError("hermitian tag on a non-hermitian matrix")
        elif self.structure == "unitary":
            if np.linalg.norm(M.conj().T @ M - np.eye(n)) > 1e-8 * math.sqrt(n):
                raise DomainError("unitary tag on a non-unitary matrix")
        elif self.structure not in (None, "ginibre"):
            raise DomainError(f"unknown structure tag {self.structure!r}")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def ginibre(N: int, seed: int) -> ComplexMatrix:
    """N x N i.i.d. standard complex Gaussian entries scaled by 1/sqrt(N)."""
    if not (1 <= N <= GINIBRE_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{GINIBRE_SIZE_CAP}, got {N}")
    g = normals(seed, 2 * N * N)
    z = (g[0::2] + 1j * g[1::2]) / math.sqrt(2.0)
    return ComplexMatrix(z.reshape(N, N) / math.sqrt(N), structure="ginibre")


def wigner(N: int, seed: int) -> ComplexMatrix:
    """Hermitian (C + C*) / sqrt(2) of a Ginibre matrix; semicircle ensemble."""
    C = ginibre(N, seed).entries
    return ComplexMatrix((C + C.conj().T) / math.sqrt(2.0), structure="hermitian")


def _entries(M) -> np.ndarray:
    return M.entries if isinstance(M, ComplexMatrix) else np.asarray(M, dtype=complex)


def eig_hermitian(M) -> tuple[np.ndarray, np.ndarray]:
    """Real eigenvalues (ascending) and a unitary eigenbasis of a Hermitian matrix.

    Works through the real symmetric embedding [[Re, -Im], [Im, Re]] of twice
    the size and the dense symmetric solver; each complex eigenvalue shows up
    twice in the embedding, so the doubled spectrum is paired off and the
    complex eigenbasis is rebuilt per eigenvalue cluster.
    """
    A = _entries(M)
    n = A.shape[0]
    scale = max(np.linalg.norm(A), 1.0)
    if np.linalg.norm(A - A.conj().T) > 1e-10 * scale:
        raise DomainError("matrix is not hermitian within tolerance")
    A = (A + A.conj().T) / 2.0
    x, y = A.real, A.imag
    emb = np.block([[x, -y], [y, x]])
    w2, q2 = eigh(emb)
    # Adjacent sorted eigenvalues pair up; average each pair.
    w = (w2[0::2] + w2[1::2]) / 2.0
    gap = 1e-8 * scale
    values = np.empty(n)
    vectors = np.empty((n, n), dtype=complex)
    filled = 0
    start = 0
    while start < 2 * n:
        stop = start
        while stop < 2 * n and w2[stop] - w2[start] <= gap:
            stop += 1
        m = (stop - start) // 2
        if m * 2 != stop - start:
            raise NumericalError("embedded spectrum did not pair up")
        cand = q2[:n, start:stop] + 1j * q2[n:, start:stop]
        # 2m candidates span an m-dimensional complex eigenspace.
        u, s, _ = np.linalg.svd(cand, full_matrices=False)
        if s[m - 1] < 0.1:
            raise NumericalError("eigenspace extraction failed")
        values[filled : filled + m] = w2[start:stop:2]
        vectors[:, filled : filled + m] = u[:, :m]
        filled += m
        start = stop
    if filled != n:
        raise NumericalError(f"recovered {filled} of {n} eigenvectors")
    resid = np.linalg.norm(A @ vectors - vectors * values)
    ortho = np.linalg.norm(vectors.conj().T @ vectors - np.eye(n))
    if resid > 1e-8 * scale * math.sqrt(n) or ortho > 1e-8 * math.sqrt(n):
        raise NumericalError(
            f"hermitian eigensolve validation failed: resid={resid:.2e} ortho={ortho:.2e}"
        )
    return values, vectors


def eig_general(M, tol: float = 1e-6) -> np.ndarray:
    """All complex eigenvalues of a general square matrix, validated.

    Each extracted pair must satisfy ||(M - lambda I) v|| <= tol * ||M|| and
    the eigenvalue sum must match the trace to 1e-6 * N.
    """
    A = _entries(M)
    n = A.shape[0]
    if n > EIG_GENERAL_SIZE_CAP:
        raise SizeLimitError(f"size {n} exceeds cap {EIG_GENERAL_SIZE_CAP}")
    values, vectors = np.linalg.eig(A)
    scale = max(np.linalg.norm(A), 1.0)
    resid = np.linalg.norm(A @ vectors - vectors * values, axis=0)
    if np.any(resid > tol * scale):
        raise NumericalError(f"eigenpair residual {resid.max():.2e} above {tol:.1e}")
    if abs(values.sum() - np.trace(A)) > 1e-6 * n * scale:
        raise NumericalError("eigenvalue sum does not match trace")
    order = np.lexsort((values.imag, values.real))
    return values[order]


def haar_unitary(N: int, seed: int) -> ComplexMatrix:
    """Haar-distributed unitary: the polar part C (C*C)^(-1/2) of a Ginibre C.

    Resamples with the next seed (at most three attempts) if C*C is
    numerically singular.
    """
    if not (1 <= N <= EIG_GENERAL_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{EIG_GENERAL_SIZE_CAP}, got {N}")
    for attempt in range(3):
        C = ginibre(N, seed + attempt).entries
        H = C.conj().T @ C
        w, V = eig_hermitian(ComplexMatrix(H, structure="hermitian"))
        if w.min() >= 1e-12:
            U = C @ (V * (1.0 / np.sqrt(w))) @ V.conj().T
            return ComplexMatrix(U, structure="unitary")
    raise NumericalError(f"C*C numerically singular for three seeds from {seed}")


def _haar_unitary_qr(N: int, seed: int) -> ComplexMatrix:
    # Cross-check oracle: QR of a Ginibre matrix with the phase of diag(R)
    # fixed; same Haar distribution by a different construction.
    C = ginibre(N, seed).entries
    Q, R = np.linalg.qr(C)
    d = np.diag(R)
    Q = Q * (d / np.abs(d))
    return ComplexMatrix(Q, structure="unitary")


def repulsive_disk_cloud(N: int, seed: int) -> PointCloud:
    """Eigenvalues of a Ginibre matrix as 2D points: uniform on the unit disk
    with eigenvalue repulsion (circular law)."""
    if not (1 <= N <= CLOUD_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{CLOUD_SIZE_CAP}, got {N}")
    values = eig_general(ginibre(N, seed))
    pts = np.column_stack([values.real, values.imag])
    return PointCloud(pts, {"generator": "disk-repulsive", "seed": seed, "n": N})


def repulsive_circle_cloud(N: int, seed: int) -> PointCloud:
    """Eigenvalues of a Haar unitary as 2D points: uniform on the unit circle
    with repulsion."""
    if not (1 <= N <= CLOUD_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{CLOUD_SIZE_CAP}, got {N}")
    values = eig_general(haar_unitary(N, seed))
    pts = np.column_stack([values.real, values.imag])
    return PointCloud(pts, {"generator": "circle-repulsive", "seed": seed, "n": N})


def _torus_point(theta: np.ndarray, phi: np.ndarray, R: float, r: float) -> np.ndarray:
    ring = R + r * np.cos(phi)
    return np.column_stack([ring * np.cos(theta), ring * np.sin(theta), r * np.sin(phi)])


_TORUS_BULK_RADIUS = 0.9  # disk radius whose inscribed square feeds the torus map


def torus_cloud(
    N: int, R: float, r: float, mode: str = "independent", seed: int = 0
) -> PointCloud:
    """Area-uniform samples on the torus of radii R > r, by acceptance-rejection.

    Candidate (theta, phi) pairs come from i.i.d. uniforms (independent mode)
    or from rescaled disk-eigenvalue coordinates (repulsive mode: Ginibre
    eigenvalues inside the square inscribed in the spectral bulk, with both
    Cartesian coordinates rescaled to [0, 2pi); the rescaling is isometric up
    to scale, so the eigenvalue repulsion survives on the angle square).  A
    candidate survives with probability proportional to the area density
    R + r cos(phi); the accept coin is an auxiliary uniform stream in both
    modes.  When the repulsive mode runs out of candidates it requests a
    larger eigenvalue batch internally.  Surplus accepted points are dropped
    as a deterministically shuffled subset; truncating in eigenvalue order
    would cut a spatial band out of the surface.
    """
    if not (R > r > 0):
        raise DomainError(f"need R > r > 0, got R={R}, r={r}")
    if not (1 <= N <= CLOUD_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{CLOUD_SIZE_CAP}, got {N}")
    if mode not in ("independent", "repulsive"):
        raise DomainError(f"mode must be 'independent' or 'repulsive', got {mode!r}")
    half = _TORUS_BULK_RADIUS / math.sqrt(2.0)
    square_fraction = (2.0 * half) ** 2 / math.pi
    thetas: list[float] = []
    phis: list[float] = []
    batch = 0
    coin_offset = 0
    while len(thetas) < N:
        missing = N - len(thetas)
        if mode == "independent":
            want = max(2 * missing, 64)
            u = uniforms(seed, 2 * want, stream=10 + batch)
            theta = 2.0 * math.pi * u[0::2]
            phi = 2.0 * math.pi * u[1::2]
        else:
            want = int(missing * (R + r) / R / square_fraction * 1.1) + 16
            want = min(max(want, 64), EIG_GENERAL_SIZE_CAP)
            values = eig_general(ginibre(want, seed + batch))
            inside = (np.abs(values.real) <= half) & (np.abs(values.imag) <= half)
            theta = (values.real[inside] / half + 1.0) * math.pi
            phi = (values.imag[inside] / half + 1.0) * math.pi
        coin = uniforms(seed, len(theta), stream=1000 + coin_offset)
        coin_offset += 1
        keep = coin * (R + r) <= R + r * np.cos(phi)
        thetas.extend(theta[keep])
        phis.extend(phi[keep])
        batch += 1
        if batch > 64:
            raise NumericalError("acceptance-rejection failed to fill the cloud")
    theta = np.array(thetas)
    phi = np.array(phis)
    if len(theta) > N:
        order = np.argsort(uniforms(seed, len(theta), stream=2000), kind="stable")
        theta = theta[order][:N]
        phi = phi[order][:N]
    return PointCloud(
        _torus_point(theta, phi, R, r),
        {"generator": f"torus-{mode}", "seed": seed, "R": R, "r": r, "n": N},
    )


def _atom_multiplicities(mu: SpectralMeasure, N: int) -> np.ndarray:
    diag = []
    counts = [int(math.floor(w * N)) for _, w in mu.atoms]
    largest = max(range(len(counts)), key=lambda i: mu.atoms[i][1])
    counts[largest] += N - sum(counts)
    for (value, _), c in zip(mu.atoms, counts):
        diag.extend([float(value)] * c)
    return np.array(diag)


def free_convolution_sample(
    mu1: SpectralMeasure, mu2: SpectralMeasure, N: int, seed: int
) -> SpectralMeasure:
    """Empirical spectral measure of D1 + U D2 U* with U Haar unitary.

    D1, D2 are diagonal with atom multiplicities floor(w N) (remainder to
    the largest atom); as N grows this realizes the free additive
    convolution of the two measures.
    """
    if not (1 <= N <= FREE_CONV_SIZE_CAP):
        raise SizeLimitError(f"N must be in 1..{FREE_CONV_SIZE_CAP}, got {N}")
    if not (mu1.is_real and mu2.is_real):
        raise DomainError("free convolution sampling needs real atomic measures")
    d1 = _atom_multiplicities(mu1, N)
    d2 = _atom_multiplicities(mu2, N)
    U = haar_unitary(N, seed).entries
    A = np.diag(d1) + U @ np.diag(d2) @ U.conj().T
    w, _ = eig_hermitian(ComplexMatrix(A, structure="hermitian"))
    return SpectralMeasure.from_samples([float(v) for v in w])


def semicircle_samples(count: int, seed: int, stream: int = 7) -> np.ndarray:
    """I.i.d. draws from the standard semicircle on [-2, 2] by inverse CDF.

    The CDF is inverted by bisection to 1e-10; this is the independent
    reference ensemble against which eigenvalue repulsion is compared.
    """
    u = uniforms(seed, count, stream=stream)
    out = np.empty(count)
    for i, target in enumerate(u):
        lo, hi = -2.0, 2.0
        while hi - lo > 1e-10:
            mid = (lo + hi) / 2.0
            cdf = 0.5 + (mid * math.sqrt(4.0 - mid * mid) / 2.0 + 2.0 * math.asin(mid / 2.0)) / (
                2.0 * math.pi
            )
            if cdf < target:
                lo = mid
            else:
                hi = mid
        out[i] = (lo + hi) / 2.0
    return out
