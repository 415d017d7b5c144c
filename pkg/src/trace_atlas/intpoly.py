"""Exact integer polynomials.

Coefficients are stored degree-ascending (``coeffs[k]`` multiplies ``x**k``)
as Python ints, so nothing here ever rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, ParseError


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients in canonical (trailing-zero free) form.

    The zero polynomial is represented by an empty tuple and has degree -1;
    it only shows up as an intermediate value (e.g. a vanishing remainder).
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> "IntPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, k: int) -> int:
        """Coefficient of ``x**k``; zero outside the stored range."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, x):
        """Horner evaluation; exact for int and Fraction arguments."""
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-a for a in self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self), len(other))
        return IntPolynomial(self[k] - other[k] for k in range(n))

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(a * other for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * a for k, a in enumerate(self.coeffs) if k)

    def content(self) -> int:
        """Gcd of the coefficients, signed like the leading coefficient."""
        if self.is_zero():
            return 0
        g = math.gcd(*self.coeffs)
        return g if self.leading > 0 else -g

    def primitive(self) -> "IntPolynomial":
        c = self.content()
        if c in (0, 1):
            return self
        return IntPolynomial(a // c for a in self.coeffs)

    def divide_exact(self, d: int) -> "IntPolynomial":
        out = []
        for a in self.coeffs:
            q, r = divmod(a, d)
            if r:
                raise ArithmeticError(f"{d} does not divide {self}")
            out.append(q)
        return IntPolynomial(out)

    def deflate_zero(self) -> tuple["IntPolynomial", int]:
        """Split off the power of x: returns (P / x**k, k)."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return IntPolynomial(self.coeffs[k:]), k

    def sign_at(self, x: Fraction | int) -> int:
        """Exact sign of P(x) at a rational point, without building Fractions."""
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        acc = 0
        qpow = 1
        # sum a_k p^k q^(n-k), Horner in p with q powers pushed down
        for a in reversed(self.coeffs):
            acc = acc * p + a * qpow
            qpow *= q
        return (acc > 0) - (acc < 0)

    def to_text(self) -> str:
        return ",".join(str(a) for a in self.coeffs)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if k == 0:
                body = str(mag)
            else:
                xk = "x" if k == 1 else f"x^{k}"
                body = xk if mag == 1 else f"{mag}*{xk}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial([{self.to_text()}])"


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"a0,a1,...,an"`` (degree-ascending) into a canonical polynomial.

    Whitespace around tokens is ignored and trailing zeros are stripped.
    """
    if text is None or not text.strip():
        raise ParseError("empty coefficient list", token="")
    coeffs = []
    for raw in text.split(","):
        tok = raw.strip()
        try:
            coeffs.append(int(tok, 10))
        except ValueError:
            raise ParseError(f"not an integer coefficient: {tok!r}", token=tok) from None
    p = IntPolynomial(coeffs)
    if p.is_zero():
        raise ParseError("all coefficients are zero", token=text.strip())
    return p


def pseudo_divmod(a: IntPolynomial, b: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Pseudo-division: lc(b)**(deg a - deg b + 1) * a = q*b + r."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-division by the zero polynomial")
    db = b.degree
    if a.degree < db:
        return IntPolynomial(()), a
    lc = b.leading
    r = list(a.coeffs)
    q = [0] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        # multiply everything so far by lc, then eliminate r[k+db]
        lead = r[k + db]
        q = [c * lc for c in q]
        q[k] += lead
        r = [c * lc for c in r]
        for j, bj in enumerate(b.coeffs):
            r[k + j] -= lead * bj
        r.pop()
    return IntPolynomial(q), IntPolynomial(r)


def pseudo_remainder(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return pseudo_divmod(a, b)[1]


def gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z[x] by the primitive PRS (positive leading coefficient)."""
    if a.is_zero():
        return b.primitive() if b.leading >= 0 else (-b).primitive()
    if b.is_zero():
        return a.primitive() if a.leading >= 0 else (-a).primitive()
    c = math.gcd(abs(a.content()), abs(b.content()))
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = pseudo_remainder(a, b)
        a, b = b, (r.primitive() if not r.is_zero() else r)
    g = a.primitive()
    if g.leading < 0:
        g = -g
    return g * c


def is_squarefree(p: IntPolynomial) -> bool:
    """True iff gcd(P, P') is a constant, i.e. P has only simple zeros."""
    if p.degree < 1:
        raise DomainError(f"squarefreeness is undefined for the constant polynomial {p}")
    return gcd(p, p.derivative()).degree == 0


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """P = c * prod A_i**i with A_i squarefree and pairwise coprime.

    Musser's variant: only gcds and exact quotients, both taken up to
    constants, so primitive normalisation never upsets the bookkeeping.
    Returns the nonconstant A_i with their multiplicities; c is dropped.
    """
    if p.degree < 1:
        return []
    g = gcd(p, p.derivative())
    w = exact_quotient(p, g)
    out = []
    i = 1
    while w.degree > 0:
        y = gcd(w, g)
        z = exact_quotient(w, y)
        if z.degree > 0:
            out.append((z, i))
        w = y
        g = exact_quotient(g, y)
        i += 1
    return out


def exact_quotient(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """a / b over Q, returned as an integer polynomial scaled to be primitive.

    Only used where b divides a up to a rational constant.
    """
    if b.degree == 0:
        return a.primitive()
    q, r = pseudo_divmod(a, b)
    if not r.is_zero():
        raise ArithmeticError(f"{b} does not divide {a}")
    return q.primitive() if not q.is_zero() else q


def resultant(a: IntPolynomial, b: IntPolynomial) -> int:
    """Res(A, B) by the subresultant PRS (Collins/Brown, as in Cohen Alg. 3.3.7)."""
    if a.is_zero() or b.is_zero():
        return 0
    if a.degree == 0 and b.degree == 0:
        return 1
    if a.degree == 0:
        return a.leading ** b.degree
    if b.degree == 0:
        return b.leading ** a.degree
    ca, cb = a.content(), b.content()
    a, b = a.primitive(), b.primitive()
    t = ca ** b.degree * cb ** a.degree
    s = 1
    if a.degree < b.degree:
        a, b = b, a
        if a.degree % 2 == 1 and b.degree % 2 == 1:
            s = -1
    g = 1
    h = 1
    while True:
        delta = a.degree - b.degree
        if a.degree % 2 == 1 and b.degree % 2 == 1:
            s = -s
        r = pseudo_remainder(a, b)
        a = b
        b = r.divide_exact(g * h ** delta) if not r.is_zero() else r
        g = a.leading
        # h <- h^(1-delta) g^delta, division is exact
        if delta == 1:
            h = g
        elif delta > 1:
            h = g ** delta // h ** (delta - 1)
        if b.degree <= 0:
            break
    if b.is_zero():
        return 0
    da = a.degree
    lb = b.leading
    h = lb ** da // h ** (da - 1) if da >= 1 else h
    return s * t * h


def discriminant(p: IntPolynomial) -> int:
    """Exact discriminant with Delta = (-1)^(n(n-1)/2) Res(P, P') / a_n."""
    n = p.degree
    if n < 2:
        raise DomainError(f"discriminant needs degree >= 2, got degree {n}")
    res = resultant(p, p.derivative())
    q, r = divmod(res, p.leading)
    assert r == 0
    return -q if (n * (n - 1) // 2) % 2 else q


# t_0, t_1, ... as coefficient tuples, extended on demand
_CHEBYSHEV: list[tuple[int, ...]] = [(2,), (-2, 1)]


def _chebyshev_coeffs(n: int) -> tuple[int, ...]:
    while len(_CHEBYSHEV) <= n:
        prev, cur = _CHEBYSHEV[-2], _CHEBYSHEV[-1]
        # (x - 2) cur - prev, one pass over the coefficients
        nxt = [0] * (len(cur) + 1)
        for k, a in enumerate(cur):
            nxt[k + 1] += a
            nxt[k] -= 2 * a
        for k, a in enumerate(prev):
            nxt[k] -= a
        _CHEBYSHEV.append(tuple(nxt))
    return _CHEBYSHEV[n]


def chebyshev_shifted(n: int) -> IntPolynomial:
    """Monic t_n(x) = 2 cos(n arccos((x-2)/2)), the Chebyshev polynomial of [0, 4].

    Built from t_{n+1} = (x-2) t_n - t_{n-1}, t_0 = 2, t_1 = x - 2.
    """
    if n < 1:
        raise DomainError("chebyshev_shifted needs n >= 1 (t_0 = 2 is constant)")
    return IntPolynomial(_chebyshev_coeffs(n))


def taylor_shift(p: IntPolynomial, c: int) -> IntPolynomial:
    """P(x + c) for an integer shift c (repeated synthetic division)."""
    a = list(p.coeffs)
    n = len(a) - 1
    if c == 0 or n < 1:
        return p
    for i in range(n):
        for k in range(n - 1, i - 1, -1):
            a[k] += c * a[k + 1]
    return IntPolynomial(a)


def cauchy_bound(p: IntPolynomial) -> Fraction:
    """1 + max|a_k|/|a_n|; every root satisfies |z| < bound."""
    if p.degree < 1:
        raise DomainError("root bound of a constant polynomial")
    m = max(abs(a) for a in p.coeffs[:-1])
    return 1 + Fraction(m, abs(p.leading))


def fujiwara_bound(p: IntPolynomial) -> float:
    """2 max |a_{n-k}/a_n|^(1/k) (with the a_0 term halved); a much tighter root bound."""
    n = p.degree
    lc = abs(p.leading)
    best = 0.0
    for k in range(1, n + 1):
        a = abs(p[n - k])
        if a == 0:
            continue
        # log-space, coefficients may exceed float range
        la = math.log(a) - (math.log(2) if k == n else 0.0)
        val = math.exp((la - math.log(lc)) / k)
        best = max(best, val)
    return 2.0 * best
