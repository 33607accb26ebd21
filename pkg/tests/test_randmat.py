import math

import numpy as np
import pytest

from nctopo.cumulants import convolve, moments_of_measure
from nctopo.errors import DomainError, SizeLimitError
from nctopo.measures import SpectralMeasure, bernoulli_pm1
from nctopo.randmat import (
    ComplexMatrix,
    _haar_unitary_qr,
    eig_general,
    eig_hermitian,
    free_convolution_sample,
    ginibre,
    haar_unitary,
    normals,
    repulsive_circle_cloud,
    repulsive_disk_cloud,
    semicircle_samples,
    torus_cloud,
    uniforms,
    wigner,
)


def test_uniforms_deterministic_and_in_range():
    a = uniforms(42, 1000)
    b = uniforms(42, 1000)
    assert np.array_equal(a, b)
    assert np.all((a >= 0) & (a < 1))
    assert not np.array_equal(a, uniforms(43, 1000))
    assert not np.array_equal(a, uniforms(42, 1000, stream=1))


def test_normals_moments():
    g = normals(7, 200_000)
    assert abs(g.mean()) < 0.01
    assert abs(g.var() - 1.0) < 0.02
    assert abs((g**3).mean()) < 0.03
    assert abs((g**4).mean() - 3.0) < 0.1


def test_ginibre_determinism_and_scaling():
    N = 500
    C = ginibre(N, 11)
    assert np.array_equal(C.entries, ginibre(N, 11).entries)
    mean_sq = float(np.mean(np.abs(C.entries) ** 2))
    # entries have variance 1/N; the empirical mean over N^2 of them is
    # within 3 standard deviations of 1/N
    assert abs(mean_sq * N - 1.0) < 3.0 / N


def test_wigner_is_exactly_hermitian():
    W = wigner(100, 5)
    assert W.structure == "hermitian"
    assert np.array_equal(W.entries, W.entries.conj().T)
    assert abs(np.trace(W.entries).real) / 100 < 0.1


@pytest.mark.parametrize("seed", [1, 2])
def test_wigner_semicircle_moments(seed):
    w, _ = eig_hermitian(wigner(500, seed))
    m2 = float(np.mean(w**2))
    m4 = float(np.mean(w**4))
    m6 = float(np.mean(w**6))
    assert abs(m2 - 1.0) < 0.05
    assert abs(m4 - 2.0) < 0.15
    assert abs(m6 - 5.0) < 0.5


def test_eig_hermitian_small_cases():
    w, _ = eig_hermitian(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    w, _ = eig_hermitian(np.array([[0, 1j], [-1j, 0]]))
    assert np.allclose(w, [-1, 1])
    w, _ = eig_hermitian(np.diag([2.5, -0.5]))
    assert np.allclose(w, [-0.5, 2.5])


def test_eig_hermitian_reconstruction_with_multiplicities():
    rng = np.random.default_rng(3)
    # random unitary conjugation of a spectrum with repeats
    H = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    Q, _ = np.linalg.qr(H)
    lam = np.array([1.0, 1.0, 1.0, 2.0, 2.0, -1.0, 0.0, 0.0])
    A = (Q * lam) @ Q.conj().T
    w, V = eig_hermitian(A)
    assert np.allclose(np.sort(w), np.sort(lam), atol=1e-9)
    assert np.linalg.norm(A @ V - V * w) < 1e-8
    assert np.linalg.norm(V.conj().T @ V - np.eye(8)) < 1e-9


def test_eig_hermitian_rejects_nonhermitian():
    with pytest.raises(DomainError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_general_examples():
    vals = eig_general(np.diag([1.0, 2.0j]))
    assert np.allclose(vals, [2j, 1])  # lexicographic by (real, imag)
    companion = np.array([[0.0, 1.0], [1.0, 0.0]])  # z^2 - 1
    vals = eig_general(companion)
    assert np.allclose(sorted(v.real for v in vals), [-1, 1])


def test_eig_general_trace_identity():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
    vals = eig_general(A)
    assert abs(vals.sum() - np.trace(A)) < 1e-8 * 50


def test_haar_unitary_properties():
    N = 200
    U = haar_unitary(N, 3)
    assert U.structure == "unitary"
    assert np.linalg.norm(U.entries.conj().T @ U.entries - np.eye(N)) <= 1e-8 * math.sqrt(N)
    vals = eig_general(U)
    assert np.max(np.abs(np.abs(vals) - 1.0)) <= 1e-6


@pytest.mark.parametrize("maker", [haar_unitary, _haar_unitary_qr])
def test_haar_eigenvalue_arcs_uniform(maker):
    # Both the polar and the QR construction spread eigenvalue arguments
    # evenly: each of 8 arcs holds N/8 +- 5 sqrt(N) points (repulsion makes
    # the actual deviation far smaller).
    N = 400
    U = maker(N, 17)
    args = np.mod(np.angle(eig_general(U)), 2 * math.pi)
    counts, _ = np.histogram(args, bins=8, range=(0.0, 2 * math.pi))
    assert all(abs(c - N / 8) <= 5 * math.sqrt(N) for c in counts)
    assert all(abs(c - N / 8) <= 18 for c in counts)


def test_disk_cloud_circular_law():
    cloud = repulsive_disk_cloud(500, 1)
    radii = np.linalg.norm(cloud.points, axis=1)
    inside_half = float(np.mean(radii <= 0.5))
    assert 0.20 <= inside_half <= 0.30
    assert float(np.mean(radii <= 1.05)) >= 0.99
    again = repulsive_disk_cloud(500, 1)
    assert np.array_equal(cloud.points, again.points)


def test_circle_cloud_on_circle():
    cloud = repulsive_circle_cloud(150, 4)
    radii = np.linalg.norm(cloud.points, axis=1)
    assert np.max(np.abs(radii - 1.0)) < 1e-6


def test_torus_cloud_on_surface():
    for mode in ("independent", "repulsive"):
        cloud = torus_cloud(300, 2.0, 1.0, mode, 8)
        x, y, z = cloud.points.T
        err = (np.sqrt(x**2 + y**2) - 2.0) ** 2 + z**2 - 1.0
        assert np.max(np.abs(err)) < 1e-9
        assert cloud.metadata["generator"] == f"torus-{mode}"


def test_torus_cloud_area_density_first_moment():
    # Under the area measure, cos(phi) has mean r/(2R): the numerator
    # integral of cos * (R + r cos) is pi r, the normalizer 2 pi R.
    R, r = 2.0, 1.0
    quad_phi = np.linspace(0.0, 2 * math.pi, 20001)
    dens = R + r * np.cos(quad_phi)
    oracle = np.trapezoid(np.cos(quad_phi) * dens, quad_phi) / np.trapezoid(dens, quad_phi)
    assert abs(oracle - r / (2 * R)) < 1e-9
    cloud = torus_cloud(1200, R, r, "independent", 2)
    cos_phi = np.sqrt(cloud.points[:, 0] ** 2 + cloud.points[:, 1] ** 2) - R
    sigma = float(np.std(cos_phi)) / math.sqrt(len(cos_phi))
    assert abs(float(cos_phi.mean()) - oracle) < 3 * sigma + 1e-3


def test_torus_cloud_determinism_and_validation():
    a = torus_cloud(100, 2.0, 1.0, "repulsive", 5)
    b = torus_cloud(100, 2.0, 1.0, "repulsive", 5)
    assert np.array_equal(a.points, b.points)
    with pytest.raises(DomainError):
        torus_cloud(10, 1.0, 2.0, "independent", 1)
    with pytest.raises(DomainError):
        torus_cloud(10, 2.0, 1.0, "clustered", 1)
    with pytest.raises(SizeLimitError):
        torus_cloud(1300, 2.0, 1.0, "independent", 1)


def test_free_convolution_translation_by_point_mass():
    mu1 = bernoulli_pm1()
    mu2 = SpectralMeasure.point_mass(3)
    out = free_convolution_sample(mu1, mu2, 64, 2)
    assert abs(out.weight_at(2.0) - 0.5) < 1e-9
    assert abs(out.weight_at(4.0) - 0.5) < 1e-9
    assert abs(sum(w for _, w in out.atoms) - 1.0) < 1e-12


def test_free_convolution_matches_exact_free_moments():
    mu = bernoulli_pm1()
    out = free_convolution_sample(mu, mu, 500, 1)
    K = 6
    exact = convolve(moments_of_measure(mu, K), moments_of_measure(mu, K), "free")
    empirical = [
        sum(float(w) * float(v) ** k for v, w in out.atoms) for k in range(1, K + 1)
    ]
    for emp, ex in zip(empirical, exact.values):
        assert abs(emp - float(ex)) < 0.1


def test_semicircle_sampler_matches_cdf():
    samples = semicircle_samples(4000, 3)
    assert np.all(np.abs(samples) <= 2.0)
    xs = np.sort(samples)

    def cdf(x):
        return 0.5 + (x * math.sqrt(4 - x * x) / 2 + 2 * math.asin(x / 2)) / (2 * math.pi)

    emp = (np.arange(len(xs)) + 0.5) / len(xs)
    sup = max(abs(cdf(x) - e) for x, e in zip(xs, emp))
    assert sup < 0.03


def test_superconvergence_witness():
    # Repulsive eigenvalues of one Wigner matrix hug the semicircle law
    # tighter than the same number of i.i.d. semicircle draws, seed-batched.
    def cdf(x):
        x = min(max(x, -2.0), 2.0)
        return 0.5 + (x * math.sqrt(4 - x * x) / 2 + 2 * math.asin(x / 2)) / (2 * math.pi)

    def ks(values):
        xs = np.sort(values)
        n = len(xs)
        return max(
            max(abs(cdf(x) - i / n), abs(cdf(x) - (i + 1) / n))
            for i, x in enumerate(xs)
        )

    wins = 0
    for seed in range(1, 11):
        w, _ = eig_hermitian(wigner(500, seed))
        if ks(w) < ks(semicircle_samples(500, seed)):
            wins += 1
    assert wins >= 8


def test_structure_tag_validation():
    with pytest.raises(DomainError):
        ComplexMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), structure="hermitian")
    with pytest.raises(DomainError):
        ComplexMatrix(np.eye(2) * 2, structure="unitary")
    with pytest.raises(DomainError):
        ComplexMatrix(np.eye(2), structure="special")


def test_ginibre_size_cap():
    with pytest.raises(SizeLimitError):
        ginibre(2001, 1)
    with pytest.raises(SizeLimitError):
        eig_general(np.zeros((1300, 1300)))
