import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mp_mahler
from trace_atlas.errors import DomainError, ExceptionalRadiusError, InfiniteEnergyError, ParseError
from trace_atlas.intpoly import IntPolynomial, chebyshev_shifted, discriminant, is_squarefree, parse_polynomial
from trace_atlas.potential import (
    CompactSetModel,
    CountingMeasure,
    discrete_energy,
    energy_sandwich,
    equilibrium_cdf,
    equilibrium_moment,
    equilibrium_moment_exact,
    equilibrium_quadrature,
    generalized_mahler,
    green,
    log_mahler,
    logplus_mass,
    mahler,
    mahler_with_error,
)
from trace_atlas.realroots import all_roots

UNIT = CompactSetModel.disk()
SEG = CompactSetModel.interval(0, 4)


def _random_poly(rng, max_degree=8):
    n = int(rng.integers(1, max_degree + 1))
    c = [int(v) for v in rng.integers(-12, 13, n + 1)]
    while c[-1] == 0:
        c[-1] = int(rng.integers(-5, 6))
    return IntPolynomial(c)


class TestModel:
    def test_parse(self):
        assert CompactSetModel.parse("interval:0,4") == SEG
        d = CompactSetModel.parse("disk:0,0,1")
        assert d.kind == "disk" and d.radius == 1 and d.center == 0

    @pytest.mark.parametrize("text", ["", "disk:0,0", "interval:4,0", "disk:0,0,-1", "square:1", "interval:a,b"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            CompactSetModel.parse(text)

    def test_capacity(self):
        assert SEG.capacity == 1 and SEG.has_unit_capacity
        assert CompactSetModel.interval(-2, 2).has_unit_capacity
        assert CompactSetModel.interval(0, 1).capacity == pytest.approx(0.25)
        assert CompactSetModel.disk(3 + 1j, 2.0).capacity == 2.0


class TestGreen:
    def test_zero_on_set(self):
        assert green(SEG, 0) == 0 and green(SEG, 2) == 0 and green(SEG, 4) == 0
        assert green(UNIT, 0.5j) == 0 and green(UNIT, 1) == 0

    def test_disk_closed_form(self):
        assert green(UNIT, 3) == pytest.approx(math.log(3))

    def test_segment_real_axis(self):
        # g_[0,4](5) = log of the larger root of w^2 - 3w + 1, i.e. (3 + sqrt 5)/2
        assert green(SEG, 5) == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-15)
        assert green(SEG, -1) == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-15)

    @given(st.complex_numbers(max_magnitude=50).filter(lambda z: abs(z.imag) > 1e-6))
    def test_positive_off_segment(self, z):
        assert green(SEG, z) > 0

    @given(st.floats(1e3, 1e8), st.floats(0, 2 * math.pi))
    def test_log_asymptotics(self, r, t):
        # g(z) = log|z| - log cap + O(1/|z|); cap = 1 here
        z = r * complex(math.cos(t), math.sin(t))
        assert abs(green(SEG, z) - math.log(r)) <= 4 / r

    def test_conformal_map_oracle(self):
        # g is log|phi| where phi inverts the Joukowski map w = (u + 1/u)/2 on |u| > 1
        rng = np.random.default_rng(3)
        u = np.exp(rng.uniform(0.01, 3, 50) + 1j * rng.uniform(0, 2 * np.pi, 50))
        z = 2 + 2 * (u + 1 / u) / 2
        np.testing.assert_allclose(green(SEG, z), np.log(np.abs(u)), atol=1e-12)


class TestMahler:
    def test_examples(self):
        p = parse_polynomial("1,-3,1")
        assert mahler(p, all_roots(p)) == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-14)
        q = parse_polynomial("-120,0,0,0,0,1")
        assert mahler(q, all_roots(q)) == pytest.approx(120, rel=1e-14)
        c = parse_polynomial("1,0,1")
        assert mahler(c, all_roots(c)) == pytest.approx(1)

    def test_leading_coefficient(self):
        p = parse_polynomial("1,0,3")
        assert mahler(p, all_roots(p)) == pytest.approx(3)

    def test_error_bound_returned(self):
        p = parse_polynomial("1,-3,1")
        v, e = mahler_with_error(p, all_roots(p))
        assert 0 <= e <= 1e-10 * v

    def test_zero_polynomial(self):
        p = parse_polynomial("1,1")
        with pytest.raises(DomainError):
            log_mahler(IntPolynomial([0]), all_roots(p))

    @pytest.mark.parametrize("seed", range(40))
    def test_against_mpmath(self, seed):
        rng = np.random.default_rng(seed)
        p = _random_poly(rng)
        r = all_roots(p)
        v, e = mahler_with_error(p, r)
        assert abs(v - mp_mahler(p.coeffs)) <= e + 1e-13 * v

    @given(st.lists(st.integers(-9, 9), min_size=2, max_size=8).filter(lambda c: c[-1] != 0),
           st.lists(st.integers(-9, 9), min_size=2, max_size=5).filter(lambda c: c[-1] != 0))
    @settings(max_examples=50)
    def test_multiplicative(self, a, b):
        pa, pb = IntPolynomial(a), IntPolynomial(b)
        prod = pa * pb
        lhs = log_mahler(prod, all_roots(prod))[0]
        rhs = log_mahler(pa, all_roots(pa))[0] + log_mahler(pb, all_roots(pb))[0]
        assert lhs == pytest.approx(rhs, abs=1e-8)


class TestGeneralizedMahler:
    @pytest.mark.parametrize("n", [1, 2, 7, 32, 64])
    def test_chebyshev_is_one(self, n):
        t = chebyshev_shifted(n)
        assert generalized_mahler(t, all_roots(t), SEG) == 1.0

    def test_root_outside_segment(self):
        p = IntPolynomial.from_roots([5, 1])
        want = (3 + math.sqrt(5)) / 2
        assert generalized_mahler(p, all_roots(p), SEG) == pytest.approx(want, rel=1e-14)

    def test_endpoint_roots_count_as_inside(self):
        p = IntPolynomial.from_roots([0, 4, 2])
        assert generalized_mahler(p, all_roots(p), SEG) == 1.0

    def test_capacity_guard(self):
        p = parse_polynomial("1,-3,1")
        seg = CompactSetModel.interval(0, 1)
        with pytest.raises(DomainError):
            generalized_mahler(p, all_roots(p), seg)
        assert generalized_mahler(p, all_roots(p), seg, require_unit_capacity=False) > 1

    @pytest.mark.parametrize("seed", range(200))
    def test_unit_disk_is_classical(self, seed):
        p = _random_poly(np.random.default_rng(1000 + seed))
        r = all_roots(p)
        assert abs(generalized_mahler(p, r, UNIT) - mahler(p, r)) <= 1e-10 * mahler(p, r)


class TestEquilibrium:
    @pytest.mark.parametrize("m,want", [(0, 1), (1, 2), (2, 6), (3, 20), (4, 70), (5, 252), (6, 924)])
    def test_segment_moments(self, m, want):
        assert equilibrium_moment_exact(SEG, m) == want
        assert equilibrium_moment(SEG, m) == want

    @pytest.mark.parametrize("m", range(1, 13))
    def test_double_factorial_form(self, m):
        dfact = math.prod(range(1, 2 * m, 2))
        assert equilibrium_moment_exact(SEG, m) == Fraction(2 ** m * dfact, math.factorial(m))

    @pytest.mark.parametrize("m", range(0, 13))
    def test_gauss_chebyshev(self, m):
        # Gauss-Chebyshev with 64 nodes is exact for degree < 128
        x, w = np.polynomial.chebyshev.chebgauss(64)
        want = float(np.sum(w * (2 + 2 * x) ** m) / np.pi)
        assert abs(equilibrium_moment(SEG, m) - want) <= 1e-10 * max(1.0, want)
        assert abs(equilibrium_quadrature(SEG, lambda t: t ** m) - want) <= 1e-10 * max(1.0, want)

    @pytest.mark.parametrize("a,b", [(-1, 1), (1, 3), (Fraction(1, 2), 7)])
    def test_other_segments(self, a, b):
        seg = CompactSetModel.interval(a, b)
        x, w = np.polynomial.chebyshev.chebgauss(32)
        mid, half = (float(a) + float(b)) / 2, (float(b) - float(a)) / 2
        for m in range(6):
            want = float(np.sum(w * (mid + half * x) ** m) / np.pi)
            assert float(equilibrium_moment_exact(seg, m)) == pytest.approx(want, rel=1e-12, abs=1e-14)

    def test_disk_moments(self):
        for m in range(1, 6):
            assert equilibrium_moment(UNIT, m) == 0
        assert equilibrium_quadrature(UNIT, lambda z: z ** 3) == pytest.approx(0, abs=1e-14)

    def test_cdf(self):
        assert equilibrium_cdf(SEG, [0, 2, 4, -1, 5]).tolist() == pytest.approx([0, 0.5, 1, 0, 1])
        assert equilibrium_cdf(SEG, 1.0) == pytest.approx(1 / 3)


class TestEnergy:
    def test_examples(self):
        assert discrete_energy(CountingMeasure.uniform([0.0]), 5) == 0
        two = CountingMeasure.uniform([0.0, 0.5])
        # 2 * (1/2)(1/2) log 2
        assert discrete_energy(two, 5) == pytest.approx(0.5 * math.log(2))

    def test_restriction(self):
        mu = CountingMeasure.uniform([0.0, 0.5, 10.0])
        assert discrete_energy(mu, 5) == pytest.approx(2 / 9 * math.log(2))

    def test_exceptional_radius(self):
        with pytest.raises(ExceptionalRadiusError):
            discrete_energy(CountingMeasure.uniform([0.0, 5.0]), 5)

    def test_coincident_atoms(self):
        with pytest.raises(InfiniteEnergyError):
            discrete_energy(CountingMeasure.uniform([1.0, 1.0]), 5)

    @pytest.mark.parametrize("n", [8, 64, 256])
    def test_chebyshev_matches_discriminant(self, n):
        # monic P: sum_{j != k} log|a_j - a_k| = log|disc|
        t = chebyshev_shifted(n)
        r = all_roots(t)
        e = discrete_energy(CountingMeasure.uniform(r.roots), 5)
        want = -math.log(abs(discriminant(t))) / n ** 2
        assert e == pytest.approx(want, abs=1e-10)

    def test_t256_is_small(self):
        t = chebyshev_shifted(256)
        e = discrete_energy(CountingMeasure.uniform(all_roots(t).roots), 5)
        assert abs(e) <= 0.05

    @given(st.lists(st.complex_numbers(max_magnitude=3), min_size=2, max_size=12, unique=True), st.randoms())
    def test_relabel_and_reflection_invariant(self, pts, rnd):
        if min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]) < 1e-6:
            return
        e = discrete_energy(CountingMeasure.uniform(pts), 4.5)
        shuffled = list(pts)
        rnd.shuffle(shuffled)
        assert discrete_energy(CountingMeasure.uniform(shuffled), 4.5) == pytest.approx(e, abs=1e-12)
        conj = [p.conjugate() for p in pts]
        assert discrete_energy(CountingMeasure.uniform(conj), 4.5) == pytest.approx(e, abs=1e-12)

    def test_logplus_matches_mahler(self):
        # for monic P, log M(P) / n is the log+ mass of its counting measure
        p = parse_polynomial("-120,0,0,0,0,1")
        r = all_roots(p)
        mu = CountingMeasure.uniform(r.roots)
        assert logplus_mass(mu) == pytest.approx(log_mahler(p, r)[0] / 5, abs=1e-14)


class TestSandwich:
    def test_chebyshev(self):
        seq = [(chebyshev_shifted(n), all_roots(chebyshev_shifted(n))) for n in (64, 128, 256)]
        rep = energy_sandwich(seq, 5)
        assert rep.tau_R == 1
        # oracle: roots 2 + 2cos((2k-1)pi/2n), H the largest per-degree log+ mean
        want = max(np.mean(np.log(np.maximum(2 + 2 * np.cos((2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n)), 1)))
                   for n in (64, 128, 256))
        assert rep.log_H == pytest.approx(want, abs=1e-12)
        assert rep.holds

    def test_escaping_member(self):
        seq = [(parse_polynomial("-120,0,0,0,0,1"), all_roots(parse_polynomial("-120,0,0,0,0,1")))]
        rep = energy_sandwich(seq, 2)
        assert rep.tau_R == 0 and rep.energy == 0 and rep.holds

    def test_empty(self):
        with pytest.raises(DomainError):
            energy_sandwich([], 5)

    @pytest.mark.parametrize("seed", range(20))
    def test_holds_on_squarefree_integer_polys(self, seed):
        p = _random_poly(np.random.default_rng(seed), 8)
        p = IntPolynomial(list(p.coeffs[:-1]) + [1])
        if p.degree < 2 or not is_squarefree(p):
            pytest.skip("draw is not a squarefree monic polynomial")
        r = all_roots(p)
        R = 7.3 + 0.01 * seed
        assert energy_sandwich([(p, r)], R).holds
