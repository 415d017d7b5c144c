"""Shared oracles.  Each one reaches its answer by a route independent of the
package: sympy for exact algebra, mpmath for high-precision roots, numpy
companion eigenvalues for brute force."""
import itertools
import math
import os

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

X = sympy.Symbol("x")


def to_sympy(coeffs):
    return sympy.Poly(list(reversed(list(coeffs))), X)


def sylvester_resultant(a, b):
    """Res(A, B) as the determinant of the Sylvester matrix."""
    A = list(reversed(list(a)))
    B = list(reversed(list(b)))
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + A + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + B + [0] * (size - n - 1 - i))
    return int(sympy.Matrix(rows).det(method="bareiss"))


def mp_roots(coeffs, dps=50):
    """Roots by mpmath's Durand-Kerner at high precision."""
    with mpmath.workdps(dps):
        r = mpmath.polyroots(list(reversed(list(coeffs))), maxsteps=400, extraprec=4 * dps)
        return [complex(z) for z in r]


def mp_mahler(coeffs, dps=50):
    with mpmath.workdps(dps):
        r = mpmath.polyroots(list(reversed(list(coeffs))), maxsteps=400, extraprec=4 * dps)
        val = abs(mpmath.mpf(coeffs[-1]))
        for z in r:
            val *= max(1, abs(z))
        return float(val)


def brute_force_totally_positive(n, trace_max):
    """Unpruned search: every monic coefficient vector in the box
    |a_{n-k}| <= C(n,k) (T/n)^k + 1, filtered by numerical roots, then
    confirmed exactly with sympy (squarefree, all real roots positive)."""
    bounds = [int(math.comb(n, k) * (trace_max / n) ** k) + 1 for k in range(1, n + 1)]
    grids = [np.arange(-b, b + 1) for b in bounds]
    found = []
    # iterate over the top coefficient, batch the rest
    for a_top in grids[0]:
        rest = list(itertools.product(*grids[1:])) if n > 1 else [()]
        if not rest:
            continue
        arr = np.array(rest, dtype=float).reshape(len(rest), n - 1)
        coef = np.concatenate([np.full((len(rest), 1), float(a_top)), arr], axis=1)
        # companion matrices for x^n + c_1 x^(n-1) + ... + c_n
        comp = np.zeros((len(rest), n, n))
        comp[:, 0, :] = -coef
        if n > 1:
            comp[:, np.arange(1, n), np.arange(0, n - 1)] = 1.0
        eig = np.linalg.eigvals(comp)
        ok = (np.abs(eig.imag) < 1e-6).all(axis=1) & (eig.real > -1e-6).all(axis=1)
        ok &= (-coef[:, 0] <= trace_max + 1e-9)
        for row in coef[ok]:
            desc = [1] + [int(round(c)) for c in row]
            found.append(tuple(reversed(desc)))
    exact = set()
    for asc in found:
        p = to_sympy(asc)
        if asc[0] == 0 or -asc[-2] > trace_max:
            continue
        if sympy.degree(sympy.gcd(p, p.diff(X)), X) > 0:
            continue
        if sympy.polys.polytools.count_roots(p, 0, None) != n or any(
                r <= 0 for r in sympy.real_roots(p)):
            continue
        if len(sympy.real_roots(p)) != n:
            continue
        exact.add(asc)
    return exact


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240601)


# acceptance outcomes, appended by tests/test_acceptance.py and echoed once at the end
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
