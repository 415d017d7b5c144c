"""Exhaustive search for monic squarefree totally positive polynomials.

A monic P of degree n with positive roots reads

    P(x) = sum_k (-1)^k e_k x^(n-k),   e_0 = 1, e_k >= 1,

so the search runs over the positive integers e_1 = trace, e_2, ..., e_n.
Every node of the search tree is cut by exact tests only:

* Maclaurin: C(n,k) <= e_k <= C(n,k) (e_1/n)^k,
* Newton: S_k^2 >= S_(k-1) S_(k+1),
* Rolle: P^(n-k) depends on e_0..e_k alone and must itself have k simple
  positive roots, which a Sturm count settles.

At k = n the last test is the full certificate for P.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, NoCandidatesError
from .intpoly import IntPolynomial, discriminant, is_squarefree, pseudo_divmod
from .means import fraction_str, symmetric_mean
from .realroots import is_totally_positive, sign_variations, sturm_sequence

MAX_DEGREE = 8
MAX_TRACE = 64


@dataclass(frozen=True)
class ExtremalRecord:
    polynomial: IntPolynomial
    degree: int
    trace: int
    S: dict
    certified: bool
    rational_root: bool
    discriminant: int
    irreducible: bool | None = None
    floor_attained: bool | None = None

    @classmethod
    def build(cls, p: IntPolynomial) -> "ExtremalRecord":
        n = p.degree
        ok = is_squarefree(p) and is_totally_positive(p) and p.constant != 0
        disc = discriminant(p) if n >= 2 else 1
        return cls(p, n, -p[n - 1], {m: symmetric_mean(p, m) for m in range(1, n + 1)},
                   ok and disc != 0, has_integer_root(p), disc)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.polynomial.coeffs

    def to_dict(self) -> dict:
        d = {
            "polynomial": str(self.polynomial),
            "coeffs": ",".join(map(str, self.coeffs)),
            "degree": self.degree,
            "trace": self.trace,
            "S": {str(m): fraction_str(v) for m, v in self.S.items()},
            "certified": self.certified,
            "rational_root": self.rational_root,
            "discriminant": str(self.discriminant),
        }
        if self.irreducible is not None:
            d["irreducible"] = self.irreducible
        if self.floor_attained is not None:
            d["floor_attained"] = self.floor_attained
        return d


def has_integer_root(p: IntPolynomial) -> bool:
    """Rational-root test for a monic P (rational roots of monic P are integers)."""
    if p.constant == 0:
        return True
    a0 = abs(p.constant)
    d = 1
    while d * d <= a0:
        if a0 % d == 0:
            for c in {d, a0 // d}:
                if p(c) == 0 or p(-c) == 0:
                    return True
        d += 1
    return False


def _polynomial(e: Sequence[int]) -> IntPolynomial:
    n = len(e) - 1
    return IntPolynomial([(-1) ** (n - j) * e[n - j] for j in range(n + 1)])


def _derivative_has_simple_positive_roots(n: int, e: Sequence[int]) -> bool:
    """P^(n-k) for the prefix e_0..e_k has k simple roots in (0, inf)."""
    k = len(e) - 1
    # coefficient of x^(k-j) in P^(n-k) is (-1)^j e_j (n-j)!/(k-j)!
    q = IntPolynomial([(-1) ** (k - i) * e[k - i] * math.factorial(n - k + i) // math.factorial(i)
                       for i in range(k + 1)])
    seq = sturm_sequence.__wrapped__(q)
    if seq[-1].degree != 0:
        return False
    return sign_variations(seq, 0) - sign_variations(seq, math.inf) == k


def _subtree(n: int, prefix: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All admissible (e_0, ..., e_n) extending ``prefix``."""
    out = []
    trace = prefix[1]
    binom = [math.comb(n, k) for k in range(n + 1)]

    def rec(e: list[int]) -> None:
        k = len(e)
        if k > n:
            out.append(tuple(e))
            return
        hi = binom[k] * trace ** k // n ** k
        if k >= 2:
            # S_k <= S_(k-1)^2 / S_(k-2)
            s1 = Fraction(e[k - 1], binom[k - 1])
            s2 = Fraction(e[k - 2], binom[k - 2])
            hi = min(hi, math.floor(binom[k] * s1 * s1 / s2))
        # e_k only moves the constant term of P^(n-k), whose derivative already
        # has simple positive roots, so the admissible e_k form an interval
        seen = False
        for ek in range(binom[k], hi + 1):
            e.append(ek)
            ok = _derivative_has_simple_positive_roots(n, e)
            if ok:
                rec(e)
            e.pop()
            if seen and not ok:
                break
            seen = seen or ok

    e0 = list(prefix)
    if not all(_derivative_has_simple_positive_roots(n, e0[:k + 1]) for k in range(1, len(e0))):
        return out
    rec(e0)
    return out


def _work_items(n: int, trace_max: int) -> list[tuple[int, ...]]:
    items = []
    for t in range(n, trace_max + 1):
        if n == 1:
            items.append((1, t))
            continue
        hi = math.comb(n, 2) * t * t // (n * n)
        items.extend((1, t, e2) for e2 in range(math.comb(n, 2), hi + 1))
    return items


def _run(args: tuple[int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    return _subtree(*args)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("TRACE_ATLAS_THREADS", "1")))
    except ValueError:
        return 1


def _check_range(n: int, trace_max: int) -> None:
    if not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be in 1..{MAX_DEGREE}, got {n}")
    if not n <= trace_max <= MAX_TRACE:
        raise DomainError(f"trace_max must be in {n}..{MAX_TRACE}, got {trace_max}")


def enumerate_totally_positive(n: int, trace_max: int, threads: int | None = None) -> list[ExtremalRecord]:
    """Every monic squarefree P of degree n with roots in (0, inf) and trace <= trace_max.

    Sorted by (trace, coefficient tuple).  Work items are the (trace, e_2)
    prefixes; with ``threads`` > 1 (default from TRACE_ATLAS_THREADS) they
    are farmed out to a process pool and merged in the same total order.
    """
    _check_range(n, trace_max)
    items = [(n, pre) for pre in _work_items(n, trace_max)]
    threads = thread_count() if threads is None else threads
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run, items))
    else:
        chunks = [_run(it) for it in items]
    polys = [_polynomial(e) for chunk in chunks for e in chunk]
    records = [ExtremalRecord.build(p) for p in polys]
    records.sort(key=lambda r: (r.trace, r.coeffs))
    return records


def selection_key(record: ExtremalRecord, m: int):
    """S_m, then trace, then the coefficient tuple."""
    return (record.S[m], record.trace, record.coeffs)


@lru_cache(maxsize=None)
def _factor_candidates(d: int, trace_max: int) -> tuple[IntPolynomial, ...]:
    if trace_max < d:
        return ()
    return tuple(_polynomial(e) for pre in _work_items(d, trace_max) for e in _subtree(d, pre))


def is_irreducible_totally_positive(p: IntPolynomial) -> bool:
    """Irreducibility over Q of a monic squarefree totally positive P.

    A monic factor of degree d is itself totally positive with integer
    coefficients (Gauss) and trace between d and trace(P) - (n - d), so the
    search's own enumeration lists every possible factor.
    """
    n = p.degree
    if not p.is_monic():
        raise DomainError("irreducibility test expects a monic polynomial")
    if n <= 1:
        return n == 1
    if has_integer_root(p):
        return False
    trace = -p[n - 1]
    for d in range(2, n // 2 + 1):
        for f in _factor_candidates(d, trace - (n - d)):
            if pseudo_divmod(p, f)[1].is_zero():
                return False
    return True


def minimal_symmetric_mean(n: int, m: int, trace_budget: int,
                           records: Iterable[ExtremalRecord] | None = None,
                           irreducible: bool = True) -> ExtremalRecord:
    """The record minimizing S_m among all records with trace <= trace_budget.

    By default only irreducible records compete, i.e. full conjugate sets of
    totally positive algebraic integers; ``irreducible=False`` searches all
    squarefree polynomials, where products such as (x - 1)(x^2 - 3x + 1) win.
    """
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    recs = list(records) if records is not None else enumerate_totally_positive(n, trace_budget)
    recs = [r for r in recs if r.degree == n and r.trace <= trace_budget]
    if irreducible:
        recs = [replace(r, irreducible=True) for r in recs if is_irreducible_totally_positive(r.polynomial)]
    if not recs:
        kind = "irreducible " if irreducible else ""
        raise NoCandidatesError(f"no {kind}totally positive squarefree monic polynomial of degree {n} "
                                f"with trace <= {trace_budget}")
    best = min(recs, key=lambda r: selection_key(r, m))
    return replace(best, floor_attained=best.S[m] == 1)


def records_to_jsonl(records: Iterable[ExtremalRecord]) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in records)


SUMMARY_HEADER = ("degree", "trace_max", "count", "min_trace", "min_S1", "argmin_S1", "rational_root_count")


def summary_csv(groups: Iterable[tuple[int, int, Sequence[ExtremalRecord]]]) -> str:
    """One CSV row per (degree, trace_max, records) group."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for n, t, recs in groups:
        if recs:
            best = min(recs, key=lambda r: selection_key(r, 1))
            w.writerow([n, t, len(recs), best.trace, fraction_str(best.S[1]),
                        ",".join(map(str, best.coeffs)), sum(r.rational_root for r in recs)])
        else:
            w.writerow([n, t, 0, "", "", "", 0])
    return buf.getvalue()
