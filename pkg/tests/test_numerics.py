import cmath
import math
import random

import pytest

from modlavg import numerics as nm
from modlavg.errors import DomainError, PoleError


def euler_beta_quadrature(z, w):
    """Independent oracle: the half-line integral representation."""
    spec = nm.QuadratureSpec(domain=nm.half_line(), rel_tol=1e-13, abs_tol=1e-14)
    res = nm.integrate(lambda t: t ** (z - 1.0) / (1.0 + t) ** (z + w), spec)
    return res.require()


def euler_2f1_quadrature(a, b, c, z):
    """Independent oracle: the Euler integral on [0, 1] (Re c > Re b > 0)."""
    spec = nm.QuadratureSpec(domain=nm.interval(0.0, 1.0), rel_tol=1e-13,
                             abs_tol=1e-14)
    res = nm.integrate(
        lambda t: t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - t * z) ** (-a),
        spec,
    )
    pref = nm.gamma(c) / (nm.gamma(b) * nm.gamma(c - b))
    return pref * res.require()


class TestLogGamma:
    def test_half(self):
        assert nm.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)),
                                                  rel=1e-14)

    def test_four(self):
        assert nm.log_gamma(4.0) == pytest.approx(math.log(6.0), rel=1e-14)

    def test_five_halves_by_recurrence(self):
        # Gamma(5/2) = (3/2)(1/2) Gamma(1/2)
        expected = 1.5 * 0.5 * math.sqrt(math.pi)
        assert cmath.exp(nm.log_gamma(2.5)) == pytest.approx(expected, rel=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            nm.log_gamma(0.0)
        with pytest.raises(PoleError):
            nm.log_gamma(-3.0)

    def test_recurrence_random_box(self):
        rng = random.Random(20240811)
        for _ in range(100):
            z = complex(rng.uniform(0.25, 6.0), rng.uniform(-3.0, 3.0))
            lhs = cmath.exp(nm.log_gamma(z + 1))
            rhs = z * cmath.exp(nm.log_gamma(z))
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


class TestBeta:
    def test_ones(self):
        assert nm.beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_two_two(self):
        assert nm.beta(2.0, 2.0) == pytest.approx(1.0 / 6.0, rel=1e-13)

    def test_against_quadrature(self):
        val = nm.beta(1.5, 2.5)
        oracle = euler_beta_quadrature(1.5, 2.5)
        assert abs(val - oracle) <= 1e-10 * abs(oracle)

    def test_symmetry_exact(self):
        for z, w in [(1.7, 2.9), (0.3, 4.4), (2.25, 2.25)]:
            assert nm.beta(z, w) == nm.beta(w, z)

    def test_pole(self):
        with pytest.raises(PoleError):
            nm.beta(0.0, 2.0)


class TestHyp2f1:
    def test_at_zero(self):
        assert nm.hyp2f1(1.3, 0.7, 2.1, 0.0) == 1.0

    def test_log_closed_form(self):
        # F(1,1;2;z) = -log(1-z)/z
        assert nm.hyp2f1(1, 1, 2, 0.5) == pytest.approx(2.0 * math.log(2.0),
                                                        rel=1e-13)

    def test_against_euler_integral(self):
        val = nm.hyp2f1(2.5, 2.0, 4.0, 0.3)
        oracle = euler_2f1_quadrature(2.5, 2.0, 4.0, 0.3)
        assert abs(val - oracle) <= 1e-9 * abs(oracle)

    def test_argument_symmetry_exact(self):
        rng = random.Random(7)
        for _ in range(20):
            a = complex(rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5))
            b = complex(rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5))
            c = complex(rng.uniform(3.5, 6.0), 0.0)
            z = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.2, 0.2))
            assert nm.hyp2f1(a, b, c, z) == nm.hyp2f1(b, a, c, z)

    def test_euler_transform(self):
        # F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
        rng = random.Random(11)
        for _ in range(20):
            a = rng.uniform(0.3, 2.0)
            b = rng.uniform(0.3, 2.0)
            c = rng.uniform(4.0, 6.0) + rng.uniform(0.01, 0.4)
            z = rng.uniform(-0.8, 0.45)
            lhs = nm.hyp2f1(a, b, c, z)
            rhs = (1.0 - z) ** (c - a - b) * nm.hyp2f1(c - a, c - b, c, z)
            assert abs(lhs - rhs) <= 1e-9 * abs(lhs)

    def test_cut_rejected(self):
        with pytest.raises(DomainError):
            nm.hyp2f1(1.0, 1.0, 3.0, 1.5)

    def test_pfaff_region(self):
        # |z| > 1 off the cut goes through the Pfaff map
        val = nm.hyp2f1(2.0, 1.5, 4.25, -1.8)
        oracle = euler_2f1_quadrature(2.0, 1.5, 4.25, -1.8)
        assert abs(val - oracle) <= 1e-9 * abs(oracle)

    def test_c_pole(self):
        with pytest.raises(PoleError):
            nm.hyp2f1(1.0, 1.0, -2.0, 0.3)


class TestIntegrate:
    def test_unit(self):
        spec = nm.QuadratureSpec(domain=nm.interval(0.0, 1.0))
        assert nm.integrate(lambda t: 1.0, spec).require().real == pytest.approx(1.0)

    def test_half_line_beta(self):
        spec = nm.QuadratureSpec(domain=nm.half_line(), rel_tol=1e-12)
        res = nm.integrate(lambda t: t ** 0.5 / (1.0 + t) ** 3, spec)
        assert res.require().real == pytest.approx(math.pi / 8.0, rel=1e-11)

    def test_semicircle_mass(self):
        spec = nm.QuadratureSpec(domain=nm.interval(-2.0, 2.0), rel_tol=1e-12)
        res = nm.integrate(
            lambda x: math.sqrt(max(4.0 - x * x, 0.0)) / (2.0 * math.pi), spec
        )
        assert res.require().real == pytest.approx(1.0, rel=1e-10)

    def test_deterministic(self):
        spec = nm.QuadratureSpec(domain=nm.interval(0.0, 3.0), rel_tol=1e-11)
        r1 = nm.integrate(lambda t: math.exp(-t) * math.sin(3 * t), spec)
        r2 = nm.integrate(lambda t: math.exp(-t) * math.sin(3 * t), spec)
        assert r1.value == r2.value and r1.error == r2.error

    def test_nan_flagged(self):
        spec = nm.QuadratureSpec(domain=nm.interval(0.0, 1.0))
        with pytest.raises(DomainError):
            nm.integrate(lambda t: float("nan"), spec)

    def test_2d_quadrant(self):
        # int over the quadrant of e^(-x-y) = 1
        spec = nm.QuadratureSpec(domain=nm.quadrant(), rel_tol=1e-10)
        res = nm.integrate(lambda x, y: math.exp(-x - y), spec)
        assert res.require().real == pytest.approx(1.0, rel=1e-9)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            nm.QuadratureSpec(rel_tol=-1.0)
        with pytest.raises(ValueError):
            nm.QuadratureSpec(max_subdivisions=0)
