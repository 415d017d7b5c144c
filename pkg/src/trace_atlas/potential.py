"""Compact-set models, Green functions, Mahler measures and discrete energies.

Two compact sets are modelled in closed form: closed disks and real segments.
For a segment [a, b] the Green function with pole at infinity is computed
through the inverse Joukowski map w = (2z - a - b)/(b - a),

    g(z) = log|w + sqrt(w - 1) sqrt(w + 1)|,

where the product of principal square roots picks the branch with modulus
at least 1 off the cut, so g >= 0 without any branch bookkeeping.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, ExceptionalRadiusError, InfiniteEnergyError, ParseError
from .intpoly import IntPolynomial, exact_quotient, gcd
from .realroots import RootMultiset, sturm_count

QUADRATURE_NODES = 4096
EXCEPTIONAL_RADIUS_TOL = 1e-9
UNIT_CAPACITY_TOL = 1e-12


@dataclass(frozen=True)
class CompactSetModel:
    """A closed disk (``kind == "disk"``) or a real segment (``kind == "interval"``).

    Interval endpoints are kept as Fractions so that membership of algebraic
    numbers can be decided exactly with Sturm counts.
    """

    kind: str
    center: complex = 0j
    radius: float = 1.0
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(4)

    def __post_init__(self):
        if self.kind == "disk":
            if not self.radius > 0:
                raise DomainError("disk radius must be positive")
        elif self.kind == "interval":
            object.__setattr__(self, "a", Fraction(self.a))
            object.__setattr__(self, "b", Fraction(self.b))
            if not self.a < self.b:
                raise DomainError(f"interval needs a < b, got [{self.a}, {self.b}]")
        else:
            raise DomainError(f"unknown set kind {self.kind!r}")

    @classmethod
    def disk(cls, center: complex = 0j, radius: float = 1.0) -> "CompactSetModel":
        return cls("disk", center=complex(center), radius=float(radius))

    @classmethod
    def interval(cls, a=0, b=4) -> "CompactSetModel":
        return cls("interval", a=Fraction(a), b=Fraction(b))

    @classmethod
    def parse(cls, text: str) -> "CompactSetModel":
        """``disk:cx,cy,r`` or ``interval:a,b``."""
        kind, _, rest = text.strip().partition(":")
        parts = [t.strip() for t in rest.split(",")] if rest else []
        try:
            if kind == "disk" and len(parts) == 3:
                cx, cy, r = (float(t) for t in parts)
                return cls.disk(complex(cx, cy), r)
            if kind == "interval" and len(parts) == 2:
                return cls.interval(Fraction(parts[0]), Fraction(parts[1]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad number in set model {text!r}", token=text) from exc
        raise ParseError(f"set model must be 'disk:cx,cy,r' or 'interval:a,b', got {text!r}", token=text)

    @property
    def capacity(self) -> float:
        if self.kind == "disk":
            return self.radius
        return float(self.b - self.a) / 4

    @property
    def has_unit_capacity(self) -> bool:
        return abs(self.capacity - 1.0) <= UNIT_CAPACITY_TOL

    @property
    def midpoint(self) -> float:
        return float(self.a + self.b) / 2

    @property
    def halfwidth(self) -> float:
        return float(self.b - self.a) / 2

    def __str__(self) -> str:
        if self.kind == "disk":
            return f"disk:{self.center.real:g},{self.center.imag:g},{self.radius:g}"
        return f"interval:{self.a},{self.b}"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "capacity": self.capacity, "text": str(self)}
        if self.kind == "disk":
            d.update(center=[self.center.real, self.center.imag], radius=self.radius)
        else:
            d.update(a=str(self.a), b=str(self.b))
        return d


@dataclass
class CountingMeasure:
    """Finite atomic measure sum_k w_k delta_{z_k}; ``source`` is set for root measures."""

    atoms: np.ndarray
    weights: np.ndarray
    source: IntPolynomial | None = None
    radii: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.atoms = np.asarray(self.atoms, dtype=complex).reshape(-1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.atoms.shape != self.weights.shape:
            raise DomainError("atoms and weights differ in length")
        if np.any(self.weights <= 0):
            raise DomainError("atom weights must be positive")

    @classmethod
    def uniform(cls, points, source: IntPolynomial | None = None, radii=None) -> "CountingMeasure":
        pts = np.asarray(points, dtype=complex).reshape(-1)
        n = len(pts)
        w = np.full(n, 1.0 / n) if n else np.zeros(0)
        return cls(pts, w, source, None if radii is None else np.asarray(radii, dtype=float))

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def mass_in_disk(self, R: float, center: complex = 0j) -> float:
        inside = np.abs(self.atoms - center) <= R
        return math.fsum(self.weights[inside])

    def to_dict(self) -> dict:
        return {
            "atoms": [{"re": float(z.real), "im": float(z.imag), "w": float(w)}
                      for z, w in zip(self.atoms, self.weights)],
            "total_mass": self.total_mass,
        }


# --------------------------------------------------------------------------
# Green functions


def green(model: CompactSetModel, z) -> float | np.ndarray:
    """g_E(z, infinity); zero on E (including its boundary)."""
    zz = np.asarray(z, dtype=complex)
    if model.kind == "disk":
        d = np.abs(zz - model.center)
        g = np.where(d > model.radius, np.log(np.maximum(d, model.radius) / model.radius), 0.0)
    else:
        w = (zz - model.midpoint) / model.halfwidth
        j = w + np.sqrt(w - 1) * np.sqrt(w + 1)
        g = np.maximum(np.log(np.abs(j)), 0.0)
        on_segment = (zz.imag == 0) & (zz.real >= float(model.a)) & (zz.real <= float(model.b))
        g = np.where(on_segment, 0.0, g)
    return float(g) if g.ndim == 0 else g


# --------------------------------------------------------------------------
# Mahler measures


def _check_roots(p: IntPolynomial, roots: RootMultiset) -> None:
    if p.is_zero():
        raise DomainError("Mahler measure of the zero polynomial")
    if roots.degree != p.degree:
        raise DomainError(f"{roots.degree} roots supplied for a degree-{p.degree} polynomial")


def log_mahler(p: IntPolynomial, roots: RootMultiset) -> tuple[float, float]:
    """(log M(P), bound on its error) from certified roots.

    Each root moves log max(1, |alpha|) by at most r / max(1, |alpha| - r).
    """
    _check_roots(p, roots)
    mod = np.abs(roots.roots)
    val = math.log(abs(p.leading)) + math.fsum(np.log(np.maximum(mod, 1.0)))
    err = math.fsum(roots.radii / np.maximum(mod - roots.radii, 1.0))
    return val, err


def mahler(p: IntPolynomial, roots: RootMultiset) -> float:
    """M(P) = |a_n| prod max(1, |alpha_k|)."""
    return math.exp(log_mahler(p, roots)[0])


def mahler_with_error(p: IntPolynomial, roots: RootMultiset) -> tuple[float, float]:
    lv, le = log_mahler(p, roots)
    val = math.exp(lv)
    return val, val * math.expm1(le)


def _distinct_roots_in_interval(p: IntPolynomial, a: Fraction, b: Fraction) -> tuple[int, int]:
    """(distinct roots of P in [a, b], distinct roots overall), exactly."""
    q = exact_quotient(p, gcd(p, p.derivative())) if p.degree > 1 else p
    total = q.degree
    inside = 0
    for e in (a, b):
        if q.sign_at(e) == 0:
            # a rational root: divide out its linear factor so Sturm never sees it
            q = exact_quotient(q, IntPolynomial([-e.numerator, e.denominator]))
            inside += 1
    if q.degree >= 1:
        inside += sturm_count(q, a, b)
    return inside, total


def all_roots_in_interval(p: IntPolynomial, a, b) -> bool:
    """Exact test that every root of P lies in the closed segment [a, b]."""
    inside, total = _distinct_roots_in_interval(p, Fraction(a), Fraction(b))
    return inside == total


def log_generalized_mahler(p: IntPolynomial, roots: RootMultiset, model: CompactSetModel,
                           require_unit_capacity: bool = True) -> float:
    _check_roots(p, roots)
    if require_unit_capacity and not model.has_unit_capacity:
        raise DomainError(f"{model} has capacity {model.capacity}, not 1")
    lead = math.log(abs(p.leading))
    if model.kind == "interval":
        if all_roots_in_interval(p, model.a, model.b):
            return lead
        g = green(model, roots.roots)
        # certified real roots whose disk sits inside the segment contribute 0
        a, b = float(model.a), float(model.b)
        safe = roots.real & (roots.roots.real - roots.radii >= a) & (roots.roots.real + roots.radii <= b)
        g = np.where(safe, 0.0, g)
    else:
        g = green(model, roots.roots)
    return lead + math.fsum(np.atleast_1d(g))


def generalized_mahler(p: IntPolynomial, roots: RootMultiset, model: CompactSetModel,
                       require_unit_capacity: bool = True) -> float:
    """M_E(P) = |a_n| exp(sum of g_E(alpha, infinity) over roots outside E).

    For a segment with every root certified inside it (Sturm), the sum is
    empty and the result is exactly |a_n|.
    """
    return math.exp(log_generalized_mahler(p, roots, model, require_unit_capacity))


# --------------------------------------------------------------------------
# equilibrium measures


def _arcsine_cos_moment(j: int) -> Fraction:
    # (1/pi) int_0^pi cos^j = C(j, j/2) / 2^j for even j, 0 for odd j
    if j % 2:
        return Fraction(0)
    return Fraction(math.comb(j, j // 2), 1 << j)


def equilibrium_moment_exact(model: CompactSetModel, m: int) -> Fraction:
    """int x^m d mu_E for a segment with rational endpoints, as a Fraction."""
    if m < 0:
        raise DomainError("moment order must be nonnegative")
    if model.kind != "interval":
        raise DomainError("exact moments are available for segments only")
    mid = (model.a + model.b) / 2
    half = (model.b - model.a) / 2
    return sum((math.comb(m, j) * mid ** (m - j) * half ** j * _arcsine_cos_moment(j)
                for j in range(0, m + 1, 2)), Fraction(0))


def equilibrium_moment(model: CompactSetModel, m: int):
    """int z^m d mu_E.

    Segment: exact moment of the arcsine law (2^m (2m-1)!!/m! = C(2m, m) on
    [0, 4]) rounded once to float.  Disk: mu_E is uniform on the boundary
    circle, so the moment is center**m (0 for the unit disk, m >= 1).
    """
    if m < 0:
        raise DomainError("moment order must be nonnegative")
    if model.kind == "interval":
        return float(equilibrium_moment_exact(model, m))
    c = model.center ** m
    return c.real if c.imag == 0 else c


def equilibrium_quadrature(model: CompactSetModel, f, nodes: int = QUADRATURE_NODES) -> float:
    """int f d mu_E by the trapezoid rule in theta, x = mid + half cos(theta).

    For a disk the parametrisation is z = c + r e^{i theta}.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    if model.kind == "interval":
        x = model.midpoint + model.halfwidth * np.cos(theta)
    else:
        x = model.center + model.radius * np.exp(1j * theta)
    return float(np.real(np.mean(f(x))))


def equilibrium_cdf(model: CompactSetModel, x) -> np.ndarray:
    """Distribution function of the arcsine law on a segment.

    Written as (2/pi) arcsin(sqrt(u)), u = (x - a)/(b - a), mirrored above
    u = 1/2; this keeps full relative accuracy near both endpoints, where
    arccos(1 - 2u) loses digits.
    """
    if model.kind != "interval":
        raise DomainError("the equilibrium CDF is defined for segments")
    u = np.clip((np.asarray(x, dtype=float) - float(model.a)) / float(model.b - model.a), 0.0, 1.0)
    lower = (2 / np.pi) * np.arcsin(np.sqrt(u))
    upper = 1.0 - (2 / np.pi) * np.arcsin(np.sqrt(1.0 - u))
    return np.where(u <= 0.5, lower, upper)


# --------------------------------------------------------------------------
# energy


def _restricted(mu: CountingMeasure, R: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    if not R > 0:
        raise DomainError("R must be positive")
    mod = np.abs(mu.atoms)
    near = np.abs(mod - R) < tol
    if np.any(near):
        k = int(np.flatnonzero(near)[0])
        raise ExceptionalRadiusError(f"atom {k} has modulus {mod[k]!r} within {tol} of R = {R}; choose another R")
    keep = mod <= R
    return mu.atoms[keep], mu.weights[keep]


def discrete_energy(mu: CountingMeasure, R: float, tol: float = EXCEPTIONAL_RADIUS_TOL) -> float:
    """Off-diagonal energy sum_{j<k} 2 w_j w_k log(1/|z_j - z_k|) of mu restricted to |z| <= R.

    Rows are reduced in a fixed order, so the result is bit-stable.
    """
    z, w = _restricted(mu, R, tol)
    total = []
    for j in range(len(z) - 1):
        d = np.abs(z[j + 1:] - z[j])
        if np.any(d == 0):
            raise InfiniteEnergyError(f"atom {j} coincides with another atom; energy is infinite")
        total.append(-2.0 * w[j] * float(np.dot(w[j + 1:], np.log(d))))
    return math.fsum(total)


def logplus_mass(mu: CountingMeasure) -> float:
    """sum_k w_k log+ |z_k|."""
    mod = np.abs(mu.atoms)
    return math.fsum(mu.weights * np.log(np.maximum(mod, 1.0)))


@dataclass
class SandwichReport:
    R: float
    degree: int
    log_H: float
    tau_R: float
    energy: float
    lower: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.energy <= self.upper

    def to_dict(self) -> dict:
        return {
            "R": self.R, "degree": self.degree, "log_H": self.log_H, "H": math.exp(self.log_H),
            "tau_R": self.tau_R, "energy": self.energy,
            "lower": self.lower, "upper": self.upper, "holds": self.holds,
        }


def energy_sandwich(sequence: Sequence[tuple[IntPolynomial, RootMultiset]], R: float,
                    tol: float = EXCEPTIONAL_RADIUS_TOL) -> SandwichReport:
    """Check -log 2 - 2 tau log H <= I <= (1 - tau) log 4 + 2 log H at the last member.

    H is the finite surrogate max_n M(P_n)^(1/n) over the sequence; tau is the
    fraction of roots of the last member in the closed disk of radius R.
    """
    if not sequence:
        raise DomainError("energy sandwich needs at least one polynomial")
    log_h = max(log_mahler(p, r)[0] / p.degree for p, r in sequence)
    p, roots = sequence[-1]
    mu = CountingMeasure.uniform(roots.roots, p, roots.radii)
    energy = discrete_energy(mu, R, tol)
    tau = mu.mass_in_disk(R)
    lower = -math.log(2) - 2 * tau * log_h
    upper = (1 - tau) * math.log(4) + 2 * log_h
    return SandwichReport(R, p.degree, log_h, tau, energy, lower, upper)
