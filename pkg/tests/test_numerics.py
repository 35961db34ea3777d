import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.integrate import quad

from equilib.core.exceptions import NoRoot
from equilib.numerics import (adaptive_simpson, bracket_root, central_difference,
                              integrate_piecewise, partial_derivatives, real_roots, rk4_step,
                              sign_change_brackets)


class TestQuadrature:
    def test_sine(self):
        value, error = adaptive_simpson(math.sin, 0.0, math.pi)
        assert value == pytest.approx(2.0, rel=1e-10)
        assert error < 1e-8

    def test_reversed_limits(self):
        forward, _ = adaptive_simpson(math.exp, 0.0, 1.0)
        backward, _ = adaptive_simpson(math.exp, 1.0, 0.0)
        assert backward == pytest.approx(-forward, rel=1e-14)
        assert forward == pytest.approx(math.e - 1.0, rel=1e-10)

    def test_matches_scipy_quad(self):
        def f(x):
            return math.log(x) / (1.0 + x * x)

        value, _ = adaptive_simpson(f, 0.5, 4.0)
        assert value == pytest.approx(quad(f, 0.5, 4.0, epsabs=1e-13)[0], rel=1e-9)

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 2.0, 2.0) == (0.0, 0.0)

    def test_piecewise_kink(self):
        value, _ = integrate_piecewise(lambda x: abs(x - 1.0), 0.0, 3.0, knots=[1.0, 5.0])
        assert value == pytest.approx(2.5, rel=1e-12)

    def test_piecewise_reversed(self):
        value, _ = integrate_piecewise(lambda x: abs(x - 1.0), 3.0, 0.0, knots=[1.0])
        assert value == pytest.approx(-2.5, rel=1e-12)


class TestRoots:
    def test_bracket(self):
        root = bracket_root(lambda x: x * x - 2.0, 0.0, 2.0)
        assert root == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_same_sign(self):
        with pytest.raises(NoRoot):
            bracket_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_endpoint_root(self):
        assert bracket_root(lambda x: x - 1.0, 1.0, 3.0) == 1.0

    def test_sign_change_scan(self):
        brackets = sign_change_brackets(math.sin, np.linspace(0.5, 7.0, 14))
        assert len(brackets) == 2
        lo, hi = brackets[0]
        assert lo < math.pi < hi

    def test_polynomial_roots(self):
        roots = real_roots(Polynomial.fromroots([3.0, 1.0, 2.0]))
        assert roots == pytest.approx([1.0, 2.0, 3.0], rel=1e-12)

    def test_complex_roots_dropped(self):
        roots = real_roots(Polynomial([1.0, 0.0, 1.0]))
        assert roots.size == 0

    def test_constant_polynomial(self):
        assert real_roots(Polynomial([4.0])).size == 0


class TestSteps:
    def test_rk4_exponential(self):
        y = rk4_step(lambda y: y, np.array([1.0]), 0.1)
        assert y[0] == pytest.approx(math.exp(0.1), abs=1e-7)

    def test_central_difference(self):
        assert central_difference(math.exp, 1.0) == pytest.approx(math.e, rel=1e-8)

    def test_partials(self):
        d_t, d_p = partial_derivatives(lambda T, P: T * T * P, 300.0, 2.0)
        assert d_t == pytest.approx(1200.0, rel=1e-8)
        assert d_p == pytest.approx(90000.0, rel=1e-8)
