"""Symmetric means of the roots, read exactly off the coefficients.

With P(x) = a_n prod (x - alpha_k), the elementary symmetric functions are
sigma_m = (-1)^m a_{n-m} / a_n, the symmetric means are
S_m = sigma_m / C(n, m), and power sums p_m follow from Newton's identities.
Everything here is a Fraction; the root-based values elsewhere are only
cross-checks.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PrecisionError
from .intpoly import IntPolynomial
from .realroots import RootMultiset, in_sector


def elementary_symmetric(p: IntPolynomial, m: int) -> Fraction:
    """sigma_m of the roots; zero for m > deg P."""
    n = p.degree
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > n:
        return Fraction(0)
    sign = -1 if m % 2 else 1
    return Fraction(sign * p[n - m], p.leading)


def symmetric_mean(p: IntPolynomial, m: int) -> Fraction:
    n = p.degree
    if not 1 <= m <= n:
        raise DomainError(f"symmetric mean index m={m} outside 1..{n}")
    return elementary_symmetric(p, m) / math.comb(n, m)


def power_sums(p: IntPolynomial, m_max: int) -> list[Fraction]:
    """[p_0, p_1, ..., p_{m_max}] with p_0 = n, via Newton's identities."""
    n = p.degree
    if n < 1:
        raise DomainError("power sums of a constant polynomial")
    sig = [elementary_symmetric(p, k) for k in range(min(n, m_max) + 1)]
    ps = [Fraction(n)]
    for m in range(1, m_max + 1):
        acc = Fraction(0)
        for k in range(1, min(m - 1, n) + 1):
            term = sig[k] * ps[m - k]
            acc += term if k % 2 else -term
        if m <= n:
            term = m * sig[m]
            acc += term if m % 2 else -term
        ps.append(acc)
    return ps


def power_sum_mean(p: IntPolynomial, m: int) -> Fraction:
    """(1/n) sum alpha_k**m."""
    if m < 1:
        raise DomainError("power sum index must be >= 1")
    return power_sums(p, m)[m] / p.degree


def elementary_from_values(values: Sequence[float], m_max: int | None = None) -> list[float]:
    """e_0..e_{m_max} of a numeric tuple, by the usual O(n m) recurrence."""
    n = len(values)
    m_max = n if m_max is None else min(m_max, n)
    e = [1.0] + [0.0] * m_max
    for v in values:
        for k in range(m_max, 0, -1):
            e[k] += e[k - 1] * v
    return e


def symmetric_means_from_values(values: Sequence[float], m_max: int | None = None) -> list[float]:
    """[S_1, ..., S_{m_max}] of a numeric tuple."""
    n = len(values)
    e = elementary_from_values(values, m_max)
    return [e[k] / math.comb(n, k) for k in range(1, len(e))]


def maclaurin_chain(values: Sequence[float]) -> list[float]:
    """(S_1, S_2^(1/2), ..., S_n^(1/n)) of nonnegative numbers.

    The elementary symmetric functions are accumulated in exact rational
    arithmetic (floats are dyadic rationals), so only the final roots round.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise DomainError("Maclaurin chain of an empty tuple")
    if any(v < 0 or math.isnan(v) for v in vals):
        raise DomainError("Maclaurin inequalities need nonnegative values")
    n = len(vals)
    e = [Fraction(1)] + [Fraction(0)] * n
    for v in vals:
        fv = Fraction(v)
        for k in range(n, 0, -1):
            e[k] += e[k - 1] * fv
    out = []
    for k in range(1, n + 1):
        s = e[k] / math.comb(n, k)
        out.append(_kth_root(s, k))
    return out


def _kth_root(x: Fraction, k: int) -> float:
    if x == 0:
        return 0.0
    fx = float(x)
    if k == 1:
        return fx
    if 1e-300 < fx < 1e300:
        return fx ** (1.0 / k)
    # log-space avoids overflow of huge numerators
    lg = (math.log(x.numerator) - math.log(x.denominator)) / k
    return math.exp(lg)


@dataclass
class ConvexMean:
    value: float
    phi_of_mean: float
    jensen_ok: bool


def convex_mean(values: Sequence[float], phi: Callable[[float], float],
                check_convexity: bool = False, seed: int = 0) -> ConvexMean:
    """C^phi = (1/n) sum phi(x_k), with the Jensen diagnostic phi(mean) <= C^phi.

    ``phi`` is trusted to be convex and increasing; ``check_convexity`` runs
    random three-point midpoint checks on the input range as a debug aid.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise DomainError("convex mean of an empty tuple")
    value = math.fsum(phi(v) for v in vals) / len(vals)
    mean = math.fsum(vals) / len(vals)
    at_mean = phi(mean)
    tol = 1e-12 * max(1.0, abs(value))
    if check_convexity:
        rng = random.Random(seed)
        lo, hi = min(vals), max(vals)
        for _ in range(64):
            a, b = rng.uniform(lo, hi), rng.uniform(lo, hi)
            if phi((a + b) / 2) > (phi(a) + phi(b)) / 2 + tol:
                raise DomainError(f"phi fails midpoint convexity at ({a}, {b})")
    return ConvexMean(value, at_mean, at_mean <= value + tol)


@dataclass
class SectorBound:
    lhs: float
    rhs: float
    slack: float
    holds: bool


def sector_mean_bound(p: IntPolynomial, roots: RootMultiset, gamma: float) -> SectorBound:
    """Mean of Re(alpha) against cos(gamma) (|a_0|/|a_n|)^(1/n) for roots in W_gamma."""
    if p.constant == 0:
        raise DomainError("sector bound needs a_0 != 0")
    try:
        inside = in_sector(roots, gamma)
    except PrecisionError:
        raise
    if not inside:
        raise DomainError("roots are not all inside the sector")
    n = p.degree
    lhs = float(np.mean(roots.roots.real))
    rhs = math.cos(gamma) * math.exp((math.log(abs(p.constant)) - math.log(abs(p.leading))) / n)
    slack = float(np.mean(roots.radii)) + 1e-12 * max(1.0, abs(rhs))
    return SectorBound(lhs, rhs, slack, lhs >= rhs - slack)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class MeansReport:
    degree: int
    symmetric: dict[int, Fraction]
    power_means: dict[int, Fraction]
    chain: list[float] = field(default_factory=list)

    @property
    def arithmetic_mean(self) -> Fraction:
        return self.symmetric.get(1)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "S": {str(m): fraction_str(v) for m, v in self.symmetric.items()},
            "A_n": fraction_str(self.arithmetic_mean) if self.arithmetic_mean is not None else None,
            "power_sum_means": {str(m): fraction_str(v) for m, v in self.power_means.items()},
            "maclaurin_chain": self.chain,
        }


def means_report(p: IntPolynomial, ms: Sequence[int] | None = None) -> MeansReport:
    n = p.degree
    ms = sorted(set(ms)) if ms else list(range(1, n + 1))
    sym = {m: symmetric_mean(p, m) for m in ms if 1 <= m <= n}
    pw = power_sums(p, max(ms))
    chain = []
    if all(symmetric_mean(p, k) >= 0 for k in range(1, n + 1)):
        chain = [_kth_root(symmetric_mean(p, k), k) for k in range(1, n + 1)]
    return MeansReport(n, sym, {m: pw[m] / n for m in ms}, chain)
