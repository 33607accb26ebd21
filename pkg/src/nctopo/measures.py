"""Finite atomic spectral measures on the real line or complex plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

DEFAULT_MERGE_TOL = 1e-7


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite atomic probability measure: (value, weight) pairs.

    Atoms are distinct after merging within ``tolerance``; weights sum to one
    within 1e-12 (exactly, when all weights are rational).
    """

    atoms: tuple[tuple[object, object], ...]
    tolerance: float = DEFAULT_MERGE_TOL

    def __post_init__(self):
        total = sum(w for _, w in self.atoms)
        if abs(total - 1) > 1e-12:
            raise DomainError(f"atom weights sum to {total}, expected 1")
        for _, w in self.atoms:
            if w <= 0:
                raise DomainError(f"non-positive atom weight {w}")

    @classmethod
    def from_pairs(cls, pairs, tolerance: float = DEFAULT_MERGE_TOL) -> "SpectralMeasure":
        """Build a measure, merging atom values that agree within tolerance."""
        merged: list[list] = []
        for value, weight in sorted(pairs, key=lambda vw: (_sort_key(vw[0]))):
            if merged and abs(value - merged[-1][0]) <= tolerance:
                # Weighted mean keeps merged atoms centered.
                v0, w0 = merged[-1]
                merged[-1][0] = (v0 * w0 + value * weight) / (w0 + weight)
                merged[-1][1] = w0 + weight
            else:
                merged.append([value, weight])
        return cls(tuple((v, w) for v, w in merged), tolerance)

    @classmethod
    def from_samples(cls, values, tolerance: float = DEFAULT_MERGE_TOL) -> "SpectralMeasure":
        """Empirical measure with equal weights on the given values."""
        values = list(values)
        w = Fraction(1, len(values))
        return cls.from_pairs([(v, w) for v in values], tolerance)

    @classmethod
    def point_mass(cls, value) -> "SpectralMeasure":
        return cls(((value, Fraction(1)),))

    @property
    def exact(self) -> bool:
        return all(_is_rational(v) and _is_rational(w) for v, w in self.atoms)

    @property
    def is_real(self) -> bool:
        return all(not isinstance(v, complex) or v.imag == 0 for v, _ in self.atoms)

    def weight_at(self, value, tol: float | None = None):
        """Total weight of atoms within tol of ``value`` (default: merge tolerance)."""
        tol = self.tolerance if tol is None else tol
        return sum(w for v, w in self.atoms if abs(v - value) <= tol)

    def shifted(self, c) -> "SpectralMeasure":
        return SpectralMeasure(tuple((v + c, w) for v, w in self.atoms), self.tolerance)


def _sort_key(v):
    if isinstance(v, complex):
        return (v.real, v.imag)
    return (v, 0.0)


def bernoulli_pm1() -> SpectralMeasure:
    """The symmetric two-point measure (delta_{-1} + delta_{+1}) / 2."""
    return SpectralMeasure(((Fraction(-1), Fraction(1, 2)), (Fraction(1), Fraction(1, 2))))
