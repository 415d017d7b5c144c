"""Families of polynomials and weak* diagnostics for their zero measures.

The Chebyshev roots 2 + 2 cos((2k - 1) pi / (2n)) are the exact
(2k - 1)/(2n) quantiles of the arcsine law on [0, 4], so their KS distance to
it is 1/(2n).  The escaping family z^p - p! pushes every root out to modulus
(p!)^(1/p), so the zero measures lose all mass on compacts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .intpoly import IntPolynomial
from .means import power_sums
from .potential import CompactSetModel, CountingMeasure, equilibrium_cdf, equilibrium_moment_exact
from .realroots import RootMultiset

REAL_TOL = 1e-9
SYMMETRY_TOL = 1e-9
DEFAULT_RHO_SCALE = 2.0 ** -20
CSV_HEADER = ("n", "ks", "gap_m1", "gap_m2", "gap_m3", "gap_m4", "mass_R")


def counting_measure(roots: RootMultiset) -> CountingMeasure:
    """tau_n: weight 1/n at every certified root."""
    if roots.degree == 0:
        raise DomainError("counting measure of an empty root set")
    return CountingMeasure.uniform(roots.roots, roots.source, roots.radii)


# --------------------------------------------------------------------------
# weak* diagnostics


def arcsine_cdf(model: CompactSetModel, x) -> np.ndarray:
    """Equilibrium CDF of a segment; a DomainError for disks."""
    if model.kind != "interval":
        raise DomainError("a CDF comparison needs a segment")
    return equilibrium_cdf(model, x)


def ks_distance(points: Sequence[float], weights: Sequence[float], model: CompactSetModel) -> float:
    """sup_x |F_hat(x) - F(x)| for the right-continuous empirical CDF F_hat.

    Tied points are merged into one jump.  If the total weight is below 1 the
    gap at +infinity counts as well.
    """
    x = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    if len(x) == 0:
        return 1.0
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    ux, start = np.unique(x, return_index=True)
    cw = np.cumsum(w)
    after = cw[np.r_[start[1:] - 1, len(x) - 1]]
    before = np.r_[0.0, after[:-1]]
    f = arcsine_cdf(model, ux)
    total = float(cw[-1])
    return float(max(np.abs(f - before).max(), np.abs(f - after).max(), abs(1.0 - total)))


@dataclass
class WeakStarReport:
    n: int
    ks: float
    gaps: dict[int, float]
    masses: dict[float, float]
    exact_gaps: dict[int, Fraction] = field(default_factory=dict)

    def csv_row(self, R: float | None = None) -> list:
        R = next(iter(self.masses)) if R is None else R
        return [self.n, self.ks] + [self.gaps.get(m, float("nan")) for m in range(1, 5)] + [self.masses[R]]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ks": self.ks,
            "moment_gaps": {str(m): g for m, g in self.gaps.items()},
            "exact_moment_gaps": {str(m): _frac(g) for m, g in self.exact_gaps.items()},
            "mass_in_disk": {f"{R:g}": v for R, v in self.masses.items()},
        }


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def weakstar_distance(mu: CountingMeasure, model: CompactSetModel, radii: Iterable[float] = (5.0,),
                      m_max: int = 4, real_tol: float = REAL_TOL) -> WeakStarReport:
    """KS distance, moment gaps and disk masses of mu against mu_E for a segment E.

    When mu is the zero counting measure of an integer polynomial the moment
    gaps come from exact power sums, so a zero gap is a proof, not a rounding
    accident.
    """
    if model.kind != "interval":
        raise DomainError("weak* diagnostics need a segment (CDFs live on the real line)")
    bad = np.abs(mu.atoms.imag) > real_tol
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DomainError(f"atom {k} = {mu.atoms[k]} is not real within {real_tol}")
    x = mu.atoms.real
    ks = ks_distance(x, mu.weights, model)
    gaps: dict[int, float] = {}
    exact: dict[int, Fraction] = {}
    exact_ok = (mu.source is not None and mu.source.degree == len(mu)
                and np.allclose(mu.weights, 1.0 / len(mu), rtol=0, atol=1e-15))
    if exact_ok:
        ps = power_sums(mu.source, m_max)
        for m in range(1, m_max + 1):
            exact[m] = abs(ps[m] / len(mu) - equilibrium_moment_exact(model, m))
            gaps[m] = float(exact[m])
    else:
        for m in range(1, m_max + 1):
            gaps[m] = abs(math.fsum(mu.weights * x ** m) - float(equilibrium_moment_exact(model, m)))
    masses = {float(R): mu.mass_in_disk(R) for R in radii}
    return WeakStarReport(len(mu), ks, gaps, masses, exact)


# --------------------------------------------------------------------------
# escaping family


def escaping_family(p: int) -> IntPolynomial:
    """z^p - p!; primality of p is not required."""
    if p < 2:
        raise DomainError("escaping family needs p >= 2")
    return IntPolynomial.monomial(p) - IntPolynomial([math.factorial(p)])


def escape_modulus(p: int) -> float:
    """(p!)^(1/p), the common modulus of the roots of z^p - p!."""
    return math.exp(math.lgamma(p + 1) / p)


# --------------------------------------------------------------------------
# discretization of a measure by points on small circles


@dataclass
class Discretization:
    measure: CountingMeasure
    counts: list[int]
    rho: list[float]
    L: int

    @property
    def displacement_bound(self) -> float:
        """max rho_j + (#atoms)/L, the Prokhorov-style distance to the input."""
        return (max(self.rho) if self.rho else 0.0) + len(self.counts) / self.L


def _partner_index(z: np.ndarray, w: np.ndarray, tol: float) -> list[int]:
    partners = []
    used = set()
    for j in range(len(z)):
        cand = [l for l in range(len(z))
                if abs(z[l] - np.conj(z[j])) <= tol * (1 + abs(z[j])) and abs(w[l] - w[j]) <= tol]
        if not cand:
            raise DomainError(f"atom {j} at {z[j]} has no conjugate partner of equal weight")
        # prefer an unused partner so duplicates pair off one-to-one
        free = [l for l in cand if l not in used or l == j]
        partners.append(free[0] if free else cand[0])
        used.add(partners[-1])
    return partners


def discretize(atoms: Sequence[tuple[complex, float]], L: int,
               rho_scale: float = DEFAULT_RHO_SCALE, tol: float = SYMMETRY_TOL) -> Discretization:
    """Replace each atom (z_j, t_j) by floor(t_j L) points of mass 1/L on a circle around z_j."""
    if not isinstance(L, (int, np.integer)) or L < 1:
        raise DomainError("L must be a positive integer")
    z = np.array([complex(a) for a, _ in atoms], dtype=complex)
    t = np.array([float(b) for _, b in atoms], dtype=float)
    if np.any(t <= 0):
        raise DomainError("atom weights must be positive")
    if math.fsum(t) > 1 + 1e-12:
        raise DomainError(f"total mass {math.fsum(t)} exceeds 1")
    partners = _partner_index(z, t, tol)
    rho = rho_scale * (1 + np.abs(z))
    for j in range(len(z)):
        others = np.abs(np.delete(z, j) - z[j])
        if len(others):
            # keep circles disjoint; the factor 0.4 leaves a visible gap
            rho[j] = min(rho[j], 0.4 * float(others.min()))
    # a real-axis centre keeps its own reflection; otherwise copy the partner
    counts = [int(math.floor(tj * L + 1e-9)) for tj in t]
    pts: list[np.ndarray] = [None] * len(z)
    for j in range(len(z)):
        k = counts[j]
        if k == 0:
            pts[j] = np.zeros(0, dtype=complex)
            continue
        if abs(z[j].imag) <= tol:
            ang = np.pi * (2 * np.arange(k) + 1) / k
            centre = complex(z[j].real, 0.0)
            pts[j] = centre + rho[j] * np.exp(1j * ang)
            # cos/sin rounding can break the exact pairing; mirror by index
            pts[j] = np.where(np.arange(k) < (k + 1) // 2, pts[j], np.conj(pts[j][::-1]))
            if k % 2:
                pts[j][k // 2] = centre - rho[j]
        elif z[j].imag > 0:
            ang = 2 * np.pi * np.arange(k) / k + 0.5
            pts[j] = z[j] + rho[j] * np.exp(1j * ang)
    for j in range(len(z)):
        if pts[j] is None:
            pts[j] = np.conj(pts[partners[j]])
    flat = np.concatenate(pts) if pts else np.zeros(0, dtype=complex)
    mu = CountingMeasure(flat, np.full(len(flat), 1.0 / L))
    return Discretization(mu, counts, [float(r) for r in rho], int(L))


def discretize_measure(atoms: Sequence[tuple[complex, float]], L: int,
                       rho_scale: float = DEFAULT_RHO_SCALE) -> CountingMeasure:
    return discretize(atoms, L, rho_scale).measure


def is_conjugate_symmetric(mu: CountingMeasure, tol: float = SYMMETRY_TOL) -> bool:
    a = np.sort_complex(np.round(mu.atoms, 12))
    b = np.sort_complex(np.round(np.conj(mu.atoms), 12))
    return len(a) == len(b) and bool(np.all(np.abs(a - b) <= tol * (1 + np.abs(a))))
