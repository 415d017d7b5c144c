"""Real-root counting, certified complex roots and region membership.

Counting is exact (Sturm sequences over Z).  Numerical roots come from an
Aberth-Ehrlich iteration whose iterates are doubles but whose residuals are
evaluated in multiprecision arithmetic (gmpy2) with an explicit rounding-error
bound.  That matters for polynomials such as t_256, whose coefficients are
around 4**256: double-precision Horner evaluation is meaningless near the roots.

Certification uses the Weierstrass inclusion disks

    |z - z_k| <= n |P(z_k)| / |a_n prod_{j != k} (z_k - z_j)|,

whose union contains every root; a connected component made of m disks holds
exactly m roots, so pairwise disjoint disks isolate one root each.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from .errors import ConvergenceError, DomainError, EndpointRootError, PrecisionError
from .intpoly import (
    IntPolynomial,
    cauchy_bound,
    is_squarefree,
    pseudo_divmod,
    squarefree_decomposition,
    taylor_shift,
)

RADIUS_SAFETY = 1.0 + 1e-8
STURM_RECONCILE_MAX_DEGREE = 64


def default_eps(degree: int) -> float:
    return 1e-12 if degree <= 64 else 1e-9


# --------------------------------------------------------------------------
# Sturm sequences


@lru_cache(maxsize=256)
def sturm_sequence(p: IntPolynomial) -> tuple[IntPolynomial, ...]:
    """Sturm chain P, P', -rem, ... with every member scaled to be primitive.

    Pseudo-remainders are sign-corrected so that each member is a positive
    multiple of the true negated remainder; sign counts are unaffected.
    """
    if p.degree < 1:
        raise DomainError("Sturm sequence of a constant polynomial")
    seq = [p, p.derivative()]
    while True:
        a, b = seq[-2], seq[-1]
        if b.degree == 0:
            break
        _, r = pseudo_divmod(a, b)
        if r.is_zero():
            break
        power = a.degree - b.degree + 1
        mult_negative = b.leading < 0 and power % 2 == 1
        nxt = r if mult_negative else -r
        c = abs(math.gcd(*nxt.coeffs))
        if c > 1:
            nxt = nxt.divide_exact(c)
        seq.append(nxt)
    return tuple(seq)


def _sign_changes(signs) -> int:
    prev = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def sign_variations(seq, x) -> int:
    """Number of sign changes of the chain at x (x may be +/- math.inf)."""
    if x == math.inf:
        return _sign_changes((q.leading > 0) - (q.leading < 0) for q in seq)
    if x == -math.inf:
        return _sign_changes(
            ((q.leading > 0) - (q.leading < 0)) * (-1 if q.degree % 2 else 1) for q in seq
        )
    return _sign_changes(q.sign_at(x) for q in seq)


def _chain(p: IntPolynomial) -> tuple[IntPolynomial, ...]:
    seq = sturm_sequence(p)
    if seq[-1].degree != 0:
        raise DomainError(f"{p} is not squarefree; Sturm counting needs simple zeros")
    return seq


def sturm_count(p: IntPolynomial, lo, hi) -> int:
    """Exact number of distinct real roots of the squarefree P in (lo, hi].

    ``lo`` and ``hi`` are rationals (int, Fraction, or anything Fraction
    accepts exactly) or +/- math.inf.  A finite endpoint that is a root is
    rejected; perturb it and retry.
    """
    lo = lo if lo in (math.inf, -math.inf) else Fraction(lo)
    hi = hi if hi in (math.inf, -math.inf) else Fraction(hi)
    if not lo < hi:
        raise DomainError(f"empty interval ({lo}, {hi}]")
    for end in (lo, hi):
        if end not in (math.inf, -math.inf) and p.sign_at(end) == 0:
            raise EndpointRootError(f"endpoint {end} is a root of {p}; perturb it by a small rational")
    seq = _chain(p)
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def real_root_count(p: IntPolynomial) -> int:
    """Number of distinct real roots (P squarefree)."""
    seq = _chain(p)
    return sign_variations(seq, -math.inf) - sign_variations(seq, math.inf)


def is_totally_positive(p: IntPolynomial) -> bool:
    """All roots real and in [0, inf); a simple root at 0 is allowed."""
    if p.degree < 1:
        raise DomainError("total positivity of a constant polynomial")
    if not is_squarefree(p):
        raise DomainError(f"{p} has a repeated root; Z_n^s requires simple zeros")
    q, k = p.deflate_zero()
    if q.degree == 0:
        return True
    return sturm_count(q, 0, cauchy_bound(q)) == q.degree


def isolate_real_roots(p: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals (lo, hi], each holding exactly one real root."""
    seq = _chain(p)
    bound = cauchy_bound(p)
    out = []

    def split(lo, hi, vlo, vhi):
        n = vlo - vhi
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if p.sign_at(mid) == 0:
            # nudge off the root; the nudge is far below the root separation scale
            mid += (hi - lo) / 1024
        vm = sign_variations(seq, mid)
        split(lo, mid, vlo, vm)
        split(mid, hi, vm, vhi)

    split(-bound, bound, sign_variations(seq, -bound), sign_variations(seq, bound))
    return out


# --------------------------------------------------------------------------
# certified complex roots


@dataclass(frozen=True, eq=False)
class RootMultiset:
    """Certified roots of ``source``: the k-th root lies within radii[k] of roots[k].

    Entries flagged in ``real`` are certified real (imaginary part set to 0);
    the others are certified non-real.  Sorted by (re, im).
    """

    roots: np.ndarray
    radii: np.ndarray
    real: np.ndarray
    source: IntPolynomial
    eps: float = field(default=0.0)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def max_radius(self) -> float:
        return float(self.radii.max()) if len(self.radii) else 0.0

    def real_roots(self) -> np.ndarray:
        return self.roots[self.real].real

    def to_dict(self) -> dict:
        return {
            "roots": [{"re": float(z.real), "im": float(z.imag), "radius": float(r)}
                      for z, r in zip(self.roots, self.radii)],
            "real_count": int(self.real.sum()),
            "max_radius": self.max_radius,
        }


class _Evaluator:
    """P and P' in multiprecision complex arithmetic with a rounding-error bound.

    Horner in precision ``prec`` satisfies |fl(P(z)) - P(z)| <= err(z) with
    err(z) = 8 (n + 1) 2**-prec * sum |a_k| |z|**k, a deliberately loose
    version of the textbook gamma_{2n} bound for complex Horner.
    """

    def __init__(self, p: IntPolynomial):
        self.p = p
        self.n = p.degree
        self.log_abs = np.array([math.log(abs(a)) if a else -math.inf for a in p.coeffs])
        self.prec = 0
        self._coeffs = None

    def set_precision(self, prec: int) -> None:
        if prec == self.prec:
            return
        self.prec = prec
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            self._coeffs = [gmpy2.mpc(a) for a in reversed(self.p.coeffs)]

    def log_abs_sum(self, z: np.ndarray) -> np.ndarray:
        """log sum_k |a_k| |z|**k, per point."""
        lz = np.log(np.maximum(np.abs(z), np.finfo(float).tiny))
        terms = self.log_abs[None, :] + np.arange(self.n + 1)[None, :] * lz[:, None]
        return np.logaddexp.reduce(terms, axis=1)

    def precision_for(self, z: np.ndarray) -> int:
        need = float(self.log_abs_sum(z).max()) / math.log(2.0)
        return max(128, int(math.ceil(need)) + 128)

    def eval(self, z: np.ndarray, want_derivative: bool = True):
        """Returns (P(z) as mpc list, P'(z) as mpc list or None)."""
        out_p, out_d = [], []
        with gmpy2.context(gmpy2.get_context(), precision=self.prec):
            coeffs = self._coeffs
            head, tail = coeffs[0], coeffs[1:]
            for zk in z:
                x = gmpy2.mpc(complex(zk))
                pv = head
                if want_derivative:
                    dv = gmpy2.mpc(0)
                    for a in tail:
                        dv = dv * x + pv
                        pv = pv * x + a
                    out_d.append(dv)
                else:
                    for a in tail:
                        pv = pv * x + a
                out_p.append(pv)
        return out_p, (out_d if want_derivative else None)

    def log_error_bound(self, z: np.ndarray) -> np.ndarray:
        return math.log(8.0 * (self.n + 1)) - self.prec * math.log(2.0) + self.log_abs_sum(z)


def _log_abs(v) -> float:
    a = abs(v)
    if a == 0:
        return -math.inf
    return float(gmpy2.log(a))


def _inclusion_radii(z: np.ndarray, log_res: np.ndarray, lead: int) -> np.ndarray:
    n = len(z)
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        return np.full(n, math.inf)
    log_prod = np.log(diff).sum(axis=1)
    with np.errstate(over="ignore"):
        r = n * np.exp(log_res - math.log(abs(lead)) - log_prod) * RADIUS_SAFETY
    return r


def _disjoint(z: np.ndarray, r: np.ndarray) -> bool:
    if len(z) < 2:
        return True
    d = np.abs(z[:, None] - z[None, :])
    gap = d - (r[:, None] + r[None, :])
    np.fill_diagonal(gap, 1.0)
    return bool(np.all(gap > 0))


def _circle_guesses(p: IntPolynomial, c: int) -> np.ndarray:
    """Circles around c read off the Newton polygon of P(x + c).

    Each upper-hull edge of (k, log|b_k|) from k_i to k_j puts k_j - k_i
    points on a circle of radius (|b_{k_i}| / |b_{k_j}|)**(1/(k_j - k_i)).
    """
    n = p.degree
    b = taylor_shift(p, c)
    pts = [(k, math.log(abs(a))) for k, a in enumerate(b.coeffs) if a != 0]
    hull: list[tuple[int, float]] = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(q)
    out = [c + 1e-3 * np.exp(1j * (0.7 + np.arange(pts[0][0])))]
    for (k0, l0), (k1, l1) in zip(hull, hull[1:]):
        m = k1 - k0
        radius = math.exp((l0 - l1) / m)
        ang = 2 * np.pi * np.arange(m) / m + 2 * np.pi * k0 / n + 0.7
        out.append(c + radius * np.exp(1j * ang))
    return np.concatenate(out)


def _chebyshev_coefficients(p: IntPolynomial, c: int, s: int) -> list[int]:
    """Chebyshev coefficients of y -> P(c + 2**s y), as integers up to a common scale.

    The change of basis is exact, so no cancellation is inherited from the
    monomial basis; only the caller's final float conversion rounds.
    """
    n = p.degree
    b = taylor_shift(p, c).coeffs
    # q_k = b_k 2^(s k), made integral by a common factor 2^(-s n) when s < 0
    if s >= 0:
        q = [bk << (s * k) for k, bk in enumerate(b)]
    else:
        q = [bk << (-s * (n - k)) for k, bk in enumerate(b)]
    # y^k = 2^-k sum_j C(k, j) T_|k-2j|; everything scaled by 2^n
    cheb = [0] * (n + 1)
    row = [1]
    for k in range(n + 1):
        if k:
            row = [1] + [row[j - 1] + row[j] for j in range(1, k)] + [1]
        qk = q[k] << (n - k)
        if qk:
            for j, binom in enumerate(row):
                cheb[abs(k - 2 * j)] += qk * binom
    return cheb


def _to_floats(ints: list[int]) -> np.ndarray:
    top = max(abs(x).bit_length() for x in ints)
    shift = max(top - 60, 0)
    return np.array([float(x >> shift) if x >= 0 else -float((-x) >> shift) for x in ints])


def _initial_guesses(p: IntPolynomial) -> np.ndarray:
    """Starting points for the simultaneous iteration.

    Roots of the Chebyshev expansion of P on [c - 2**s, c + 2**s] (colleague
    matrix eigenvalues), c being the rounded root centroid.  The scale s is
    the one minimising max|coef| / |leading coef|, which is what governs the
    accuracy of the colleague eigenvalues.  Falls back to Newton-polygon
    circles when the eigenvalue step fails.
    """
    n = p.degree
    c = round(Fraction(-p[n - 1], n * p.leading))
    circles = _circle_guesses(p, c)
    s_hi = int(math.ceil(math.log2(max(float(np.abs(circles - c).max()), 1e-300)))) + 1
    best = None
    for s in range(s_hi, s_hi - 24, -1):
        cheb = _chebyshev_coefficients(p, c, s)
        cond = max(abs(x).bit_length() for x in cheb) - abs(cheb[-1]).bit_length()
        if best is None or cond < best[0]:
            best = (cond, s, cheb)
        elif cond > best[0] + 8:
            break
    _, s, cheb = best
    z = circles
    try:
        y = np.polynomial.chebyshev.chebroots(_to_floats(cheb))
        if len(y) == n and np.all(np.isfinite(y)):
            z = c + math.ldexp(1.0, s) * y.astype(complex)
    except np.linalg.LinAlgError:
        pass
    # distinct starting points are required by the Aberth correction
    _, first = np.unique(np.round(z, 12), return_index=True)
    if len(first) < n:
        z = z + 1e-9 * (1 + np.abs(z)) * np.exp(1j * (0.7 + np.arange(n)))
    return z


def _aberth_squarefree(p: IntPolynomial, eps: float, maxiter: int):
    """Roots of P (P(0) != 0 assumed) with radii; raises ConvergenceError."""
    n = p.degree
    coeffs = p.coeffs
    if n == 1:
        # exact rational root; radius covers the float conversion
        root = Fraction(-coeffs[0], coeffs[1])
        z = float(root)
        rad = float(abs(Fraction(z) - root)) * RADIUS_SAFETY
        return np.array([complex(z, 0.0)]), np.array([rad]), np.array([True])

    ev = _Evaluator(p)
    z = _initial_guesses(p)
    ev.set_precision(ev.precision_for(z))
    active = np.ones(n, dtype=bool)
    eps_f = np.finfo(float).eps
    for it in range(maxiter):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        ev.set_precision(max(ev.prec, ev.precision_for(z[idx])))
        pv, dv = ev.eval(z[idx])
        ratio = np.array([complex(a / d) if d != 0 else complex(math.nan) for a, d in zip(pv, dv)])
        diff = z[idx, None] - z[None, :]
        rows = np.arange(len(idx))
        diff[rows, idx] = 1.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            inv = 1.0 / diff
            inv[rows, idx] = 0.0
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        if np.any(bad):
            # landed on a critical point or collided with another iterate
            w[bad] = 1e-3 * (1 + np.abs(z[idx[bad]])) * np.exp(1j * (it + 1.0))
        z[idx] = z[idx] - w
        done = np.abs(w) <= 4 * eps_f * np.abs(z[idx])
        active[idx[done]] = False

    best = math.inf
    for _ in range(8):
        ev.set_precision(max(ev.prec, ev.precision_for(z)))
        pv, dv = ev.eval(z)
        log_val = np.array([_log_abs(v) for v in pv])
        log_err = ev.log_error_bound(z)
        log_res = np.logaddexp(log_val, log_err)
        r = _inclusion_radii(z, log_res, p.leading)
        best = min(best, float(r.max()))
        if _disjoint(z, r) and r.max() <= eps:
            return z, r, _classify_real(z, r)
        if np.any(log_err > log_val - 4):
            # rounding error is visible in the residual: buy more bits
            ev.set_precision(2 * ev.prec)
        ratio = np.array([complex(a / d) if d != 0 else 0j for a, d in zip(pv, dv)])
        z = z - np.where(np.isfinite(ratio), ratio, 0)
    raise ConvergenceError(
        f"could not certify roots of {p} to radius {eps:g}; achieved {best:g}", achieved_radius=best
    )


def _classify_real(z: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Exact real/non-real split for disjoint inclusion disks of a real polynomial.

    A disk meeting the real axis whose mirror image meets no other disk must
    contain the conjugate of its own root, i.e. the root is real.
    """
    n = len(z)
    real = np.zeros(n, dtype=bool)
    for k in range(n):
        if abs(z[k].imag) > r[k]:
            continue
        mirror = np.conj(z[k])
        d = np.abs(mirror - z) - (r[k] + r)
        d[k] = 1.0
        if np.all(d > 0):
            real[k] = True
        else:
            raise PrecisionError(f"cannot decide whether root {k} is real", index=k)
    return real


def _symmetrize(z: np.ndarray, r: np.ndarray, real: np.ndarray):
    z = z.copy()
    r = r.copy()
    z[real] = z[real].real
    upper = [k for k in range(len(z)) if not real[k] and z[k].imag > 0]
    lower = {k for k in range(len(z)) if not real[k] and z[k].imag < 0}
    for k in upper:
        target = np.conj(z[k])
        j = min(lower, key=lambda i: abs(z[i] - target))
        lower.remove(j)
        shift = abs(z[j] - target)
        z[j] = target
        r[j] = r[j] + shift
    return z, r


def all_roots(p: IntPolynomial, eps: float | None = None, maxiter: int = 500) -> RootMultiset:
    """Certified complex roots of P, each within its radius <= eps."""
    if p.degree < 1:
        raise DomainError("a constant polynomial has no roots")
    if eps is None:
        eps = default_eps(p.degree)
    if not eps > 0:
        raise DomainError("eps must be positive")
    q, zeros = p.deflate_zero()
    parts_z = [np.zeros(zeros, dtype=complex)]
    parts_r = [np.zeros(zeros)]
    parts_real = [np.ones(zeros, dtype=bool)]
    if q.degree >= 1:
        try:
            factors = [(q, 1)]
            z, r, real = _aberth_squarefree(q, eps, maxiter)
            found = [(z, r, real, 1)]
        except (ConvergenceError, PrecisionError):
            if is_squarefree(q):
                raise
            factors = squarefree_decomposition(q)
            found = [(*_aberth_squarefree(f, eps, maxiter), m) for f, m in factors]
        for z, r, real, m in found:
            z, r = _symmetrize(z, r, real)
            if m == 1 and q.degree <= STURM_RECONCILE_MAX_DEGREE and factors[0][0] is q:
                if int(real.sum()) != real_root_count(q):
                    raise ConvergenceError(f"real-root classification of {q} disagrees with Sturm count")
            parts_z += [z] * m
            parts_r += [r] * m
            parts_real += [real] * m
    z = np.concatenate(parts_z)
    r = np.concatenate(parts_r)
    real = np.concatenate(parts_real)
    order = np.lexsort((z.imag, z.real))
    return RootMultiset(z[order], r[order], real[order], p, eps)


def roots_from_values(values, radii=None, source: IntPolynomial | None = None) -> RootMultiset:
    """Wrap externally supplied points (e.g. from a test) as a RootMultiset."""
    z = np.asarray(values, dtype=complex)
    r = np.zeros(len(z)) if radii is None else np.asarray(radii, dtype=float)
    real = z.imag == 0
    return RootMultiset(z, r, real, source if source is not None else IntPolynomial([1]))


# --------------------------------------------------------------------------
# region membership


def _ray_distance(z: complex, angle: float) -> float:
    u = z * complex(math.cos(-angle), math.sin(-angle))
    if u.real <= 0:
        return abs(z)
    return abs(u.imag)


def in_sector(roots: RootMultiset, gamma: float) -> bool:
    """True iff every certified root lies in W_gamma = {|Arg z| <= gamma} (0 included).

    Raises PrecisionError when a root's uncertainty region straddles the
    sector boundary.
    """
    if not 0 < gamma < math.pi / 2:
        raise DomainError("gamma must lie in (0, pi/2)")
    for k, (z, r, is_real) in enumerate(zip(roots.roots, roots.radii, roots.real)):
        if is_real:
            lo, hi = z.real - r, z.real + r
            if lo >= 0:
                continue
            if hi < 0:
                return False
            if lo == hi == 0:
                continue
            raise PrecisionError(f"root {k} straddles 0 on the real axis", index=k)
        arg = abs(math.atan2(z.imag, z.real))
        d = min(_ray_distance(z, gamma), _ray_distance(z, -gamma))
        inside = arg <= gamma
        if d > r:
            if not inside:
                return False
            continue
        raise PrecisionError(f"root {k} straddles the boundary of the sector", index=k)
    return True
