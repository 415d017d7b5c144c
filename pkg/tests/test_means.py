import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import to_sympy
from trace_atlas.errors import DomainError
from trace_atlas.intpoly import IntPolynomial, chebyshev_shifted, parse_polynomial
from trace_atlas.means import (
    convex_mean,
    maclaurin_chain,
    means_report,
    power_sum_mean,
    power_sums,
    sector_mean_bound,
    symmetric_mean,
    symmetric_means_from_values,
)
from trace_atlas.realroots import all_roots

coeff_lists = st.lists(st.integers(-20, 20), min_size=2, max_size=9).filter(lambda c: c[-1] != 0)


class TestSymmetricMean:
    def test_examples(self):
        p = parse_polynomial("1,-3,1")
        assert symmetric_mean(p, 1) == Fraction(3, 2)
        assert symmetric_mean(p, 2) == 1

    @pytest.mark.parametrize("n", range(1, 41))
    def test_chebyshev_mean_is_two(self, n):
        assert symmetric_mean(chebyshev_shifted(n), 1) == 2

    def test_missing_coefficient_means_zero(self):
        assert symmetric_mean(parse_polynomial("-120,0,0,0,0,1"), 2) == 0

    def test_range(self):
        p = parse_polynomial("1,-3,1")
        for m in (0, 3):
            with pytest.raises(DomainError):
                symmetric_mean(p, m)

    @given(coeff_lists)
    def test_vieta_sign_and_index_convention(self, c):
        # sympy lists coefficients highest degree first; Vieta read from there
        p = IntPolynomial(c)
        n = p.degree
        if n < 1:
            return
        sp = to_sympy(c)
        coeffs = sp.all_coeffs()
        for m in range(1, n + 1):
            sigma = sympy.Rational((-1) ** m * coeffs[m], coeffs[0])
            assert symmetric_mean(p, m) == Fraction(int(sigma.p), int(sigma.q)) / math.comb(n, m)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_mean_of_root_products(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        c = [int(v) for v in rng.integers(-6, 7, n + 1)]
        c[-1] = int(rng.integers(1, 4))
        p = IntPolynomial(c)
        r = all_roots(p)
        scale = max(1.0, float(np.abs(r.roots).max()))
        for m in range(1, n + 1):
            prods = [np.prod(r.roots[list(ix)]) for ix in itertools.combinations(range(n), m)]
            got = complex(np.mean(prods))
            # propagated error: each product moves by at most m r scale^(m-1)
            tol = m * r.max_radius * scale ** (m - 1) + 1e-12 * scale ** m * math.comb(n, m)
            assert abs(got - float(symmetric_mean(p, m))) <= tol


class TestPowerSums:
    def test_examples(self):
        assert power_sum_mean(parse_polynomial("1,-3,1"), 2) == Fraction(7, 2)

    @pytest.mark.parametrize("n", range(3, 60))
    def test_chebyshev_second_and_third(self, n):
        t = chebyshev_shifted(n)
        assert power_sum_mean(t, 2) == 6
        assert power_sum_mean(t, 3) == 20

    @given(coeff_lists, st.integers(1, 12))
    def test_newton_identities_against_sympy(self, c, m):
        p = IntPolynomial(c)
        if p.degree < 1:
            return
        # oracle: p_m is the trace of the m-th power of the companion matrix
        n = p.degree
        comp = sympy.zeros(n, n)
        for i in range(1, n):
            comp[i, i - 1] = 1
        for i in range(n):
            comp[i, n - 1] = sympy.Rational(-c[i], c[-1])
        want = (comp ** m).trace()
        got = power_sums(p, m)[m]
        assert got == Fraction(int(want.p), int(want.q))


class TestMaclaurin:
    def test_examples(self):
        assert maclaurin_chain([1, 1, 1]) == [1, 1, 1]
        assert maclaurin_chain([1, 4]) == pytest.approx([2.5, 2.0])
        assert maclaurin_chain([0, 2]) == [1.0, 0.0]

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            maclaurin_chain([1, -1])

    @given(st.lists(st.floats(0, 100, allow_subnormal=False), min_size=2, max_size=20))
    def test_monotone(self, xs):
        chain = maclaurin_chain(xs)
        for a, b in zip(chain, chain[1:]):
            assert b <= a * (1 + 1e-12) + 1e-300

    @given(st.floats(0.01, 100), st.integers(2, 20))
    def test_constant_tuple_gives_flat_chain(self, c, n):
        chain = maclaurin_chain([c] * n)
        assert chain == pytest.approx([c] * n, rel=1e-12)

    @given(st.lists(st.integers(1, 50), min_size=2, max_size=12).filter(lambda v: len(set(v)) > 1))
    def test_strict_somewhere_for_nonconstant(self, xs):
        chain = maclaurin_chain(xs)
        assert chain[-1] < chain[0] * (1 - 1e-12)


class TestConvexMean:
    def test_chebyshev_square(self):
        r = all_roots(chebyshev_shifted(4))
        cm = convex_mean(r.roots.real, lambda x: x * x)
        assert cm.value == pytest.approx(6, abs=1e-10)
        assert cm.jensen_ok

    def test_constant(self):
        assert convex_mean([2.5] * 7, math.exp).value == pytest.approx(math.exp(2.5))

    def test_exp(self):
        assert convex_mean([1, 3], math.exp).value == pytest.approx((math.e + math.e ** 3) / 2)

    def test_empty(self):
        with pytest.raises(DomainError):
            convex_mean([], math.exp)

    def test_convexity_sampling_catches_concave(self):
        with pytest.raises(DomainError):
            convex_mean([0.5, 1, 4], math.sqrt, check_convexity=True)

    @given(st.lists(st.floats(0, 10), min_size=1, max_size=30))
    def test_jensen(self, xs):
        assert convex_mean(xs, lambda x: x ** 3).jensen_ok


class TestSector:
    def test_golden(self):
        p = parse_polynomial("1,-3,1")
        b = sector_mean_bound(p, all_roots(p), math.pi / 4)
        assert b.lhs == pytest.approx(1.5)
        assert b.rhs == pytest.approx(math.sqrt(2) / 2)
        assert b.holds

    @pytest.mark.parametrize("gamma", [0.1, 0.7, 1.5])
    def test_linear(self, gamma):
        p = parse_polynomial("-1,1")
        b = sector_mean_bound(p, all_roots(p), gamma)
        assert b.lhs == 1 and b.holds

    def test_equality_case(self):
        p = parse_polynomial("2,-2,1")
        b = sector_mean_bound(p, all_roots(p), math.pi / 4)
        assert b.lhs == pytest.approx(1) and b.rhs == pytest.approx(1)
        assert b.holds

    def test_outside_sector(self):
        p = parse_polynomial("1,0,1")
        with pytest.raises(DomainError):
            sector_mean_bound(p, all_roots(p), math.pi / 4)


class TestReport:
    def test_serialization(self):
        d = means_report(parse_polynomial("1,-3,1"), [1, 2]).to_dict()
        assert d["S"] == {"1": "3/2", "2": "1"}
        assert d["A_n"] == "3/2"
        assert d["power_sum_means"]["2"] == "7/2"


class TestProperties:
    @pytest.mark.parametrize("coeffs", ["1,-3,1", "-1,6,-5,1", "1,-7,14,-8,1", "2,-4,1"])
    def test_totally_positive_floor(self, coeffs):
        # S_m >= |a_0|^(m/n) >= 1 for totally positive monic P
        p = parse_polynomial(coeffs)
        n = p.degree
        for m in range(1, n + 1):
            assert float(symmetric_mean(p, m)) >= abs(p.constant) ** (m / n) * (1 - 1e-12)

    @pytest.mark.parametrize("m", [2, 3])
    @pytest.mark.parametrize("n", [100, 1000])
    def test_multinomial_decay(self, m, n):
        # |S_1^m - S_m| <= m(m-1) R^m / n on tuples in [0, R]
        rng = np.random.default_rng(n + m)
        R = 3.0
        for _ in range(20):
            xs = rng.uniform(0, R, n)
            s = symmetric_means_from_values(xs, m)
            assert abs(s[0] ** m - s[m - 1]) <= m * (m - 1) * R ** m / n
