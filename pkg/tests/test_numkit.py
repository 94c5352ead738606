import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from conftest import closed
from wronskia.exceptions import ArgumentError, DomainError
from wronskia.numkit import (
    AIRY_MAX_ABS_X,
    Antiderivative,
    Grid,
    airy,
    airy_arrays,
    as_grid,
    central_derivative,
    constant,
    finite_difference_columns,
    integrate_cumulative,
    rk4_linear2,
    rk4_linear3,
)

EXP = closed(np.exp, np.exp, np.exp, np.exp)
SQUARE = closed(lambda t: t * t, lambda t: 2 * t, lambda t: 2 + 0 * t, lambda t: 0 * t)
CUBE = closed(lambda t: t**3, lambda t: 3 * t * t, lambda t: 6 * t, lambda t: 6 + 0 * t)


class TestGrid:
    def test_spacing(self):
        g = Grid(0.0, 1.0, 11)
        assert g.h == pytest.approx(0.1)
        assert g.points[0] == 0.0 and g.points[-1] == 1.0
        assert len(g) == 11

    @pytest.mark.parametrize("args", [(0, 1, 4), (1, 0, 11), (0, 0, 11), (0, math.inf, 11), (0, 1, 5.5)])
    def test_rejects(self, args):
        with pytest.raises(ArgumentError):
            Grid(*args)

    def test_points_read_only(self):
        with pytest.raises(ValueError):
            Grid(0, 1, 5).points[0] = 3.0

    def test_refined_halves_step(self):
        g = Grid(0, 2, 21).refined()
        assert g.n == 41 and g.h == pytest.approx(0.05)

    def test_as_grid_rejects_nonuniform(self):
        with pytest.raises(ArgumentError):
            as_grid([0, 0.1, 0.3, 0.4, 0.5])
        assert as_grid(np.linspace(0, 1, 6)).n == 6


class TestCentralDerivative:
    def test_quadratic(self):
        assert central_derivative(SQUARE, 1, 3.0, 1e-4) == pytest.approx(6.0, abs=1e-6)

    @pytest.mark.parametrize("t", [-2.0, 0.0, 1.7])
    def test_cubic_third(self, t):
        assert central_derivative(CUBE, 3, t, 1e-2) == pytest.approx(6.0, abs=1e-6)

    def test_exp_second(self):
        assert central_derivative(EXP, 2, 0.0, 1e-3) == pytest.approx(1.0, abs=1e-5)

    def test_domain(self):
        f = closed(np.log, lambda t: 1 / t, lambda t: -1 / t**2, lambda t: 2 / t**3, domain=(0.0, np.inf))
        with pytest.raises(DomainError):
            central_derivative(f, 1, 0.01, 0.01)
        with pytest.raises(ArgumentError):
            central_derivative(f, 4, 1.0, 0.01)
        with pytest.raises(ArgumentError):
            central_derivative(f, 1, 1.0, 0.0)

    def test_second_order_accuracy(self):
        errs = [abs(central_derivative(EXP, 3, 0.3, h) - math.exp(0.3)) for h in (0.04, 0.02)]
        assert math.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.1)


class TestFiniteDifferenceColumns:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_exact_on_quadratics_and_cubics(self, k):
        g = Grid(-1, 2, 31)
        t = g.points
        exact = [None, 3 * t**2 + 2 * t, 6 * t + 2, 6 + 0 * t][k]
        got = finite_difference_columns(t**3 + t**2, g.h, k)
        # O(h^2) stencils are exact for quadratics; the cubic term gives an h^2 error
        assert np.max(np.abs(got - exact)) < 20 * g.h**2

    def test_order_two_at_edges(self):
        errs = []
        for n in (41, 81):
            g = Grid(0, 1, n)
            errs.append(np.max(np.abs(finite_difference_columns(np.exp(g.points), g.h, 3) - np.exp(g.points))))
        assert math.log2(errs[0] / errs[1]) > 1.8


class TestIntegrateCumulative:
    def test_constant(self):
        F = integrate_cumulative(constant(1.0), Grid(0, 1, 101))
        assert F[0] == 0.0
        assert F[-1] == pytest.approx(1.0, abs=1e-12)

    def test_cos(self):
        f = closed(np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t), np.sin)
        F = integrate_cumulative(f, Grid(0, math.pi / 2, 201))
        assert F[-1] == pytest.approx(1.0, abs=1e-8)

    def test_square(self):
        F = integrate_cumulative(SQUARE, Grid(0, 3, 301))
        assert F[-1] == pytest.approx(9.0, abs=1e-8)

    @pytest.mark.parametrize("n", [10, 11])
    def test_exact_for_quadratics_at_every_node(self, n):
        g = Grid(-1, 2, n)
        F = integrate_cumulative(g.points**2, g)
        assert np.max(np.abs(F - (g.points**3 + 1) / 3)) < 1e-14

    @given(
        a=st.floats(-5, 5),
        b=st.floats(-5, 5),
        n=st.integers(5, 60),
    )
    def test_linear(self, a, b, n):
        g = Grid(0.0, 2.0, n)
        f, h = np.sin(g.points), np.exp(g.points)
        lhs = integrate_cumulative(a * f + b * h, g)
        rhs = a * integrate_cumulative(f, g) + b * integrate_cumulative(h, g)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_antiderivative_derivatives(self):
        g = Grid(0, 1, 201)
        A = Antiderivative(EXP, g)
        t = np.array([0.123, 0.5, 0.9])
        assert np.allclose(A.deriv(0, t), np.exp(t) - 1, atol=1e-10)
        assert np.allclose(A.deriv(1, t), np.exp(t))


class TestRK4:
    def test_exponential(self):
        u = rk4_linear3(None, None, -1.0, (1, 1, 1), Grid(0, 1, 1001))
        assert u(1.0) == pytest.approx(math.e, abs=1e-8)

    def test_matches_exp_decay_member(self):
        g = Grid(-1, 1, 1001)
        u = rk4_linear3(0.0, 0.0, 1.0, (math.exp(1), -math.exp(1), math.exp(1)), g)
        assert np.max(np.abs(u.deriv(0, g.points) - np.exp(-g.points))) < 1e-8

    def test_third_derivative_from_equation(self):
        g = Grid(0, 1, 101)
        u = rk4_linear3(None, 2.0, 3.0, (1, 0, 0), g)
        t = np.linspace(0, 1, 17)
        res = u.deriv(3, t) + 2 * u.deriv(1, t) + 3 * u.deriv(0, t)
        assert np.max(np.abs(res)) < 1e-12

    def test_observed_order(self):
        def err(n):
            g = Grid(0, 2, n)
            u = rk4_linear3(None, None, -1.0, (1, 1, 1), g)
            return np.max(np.abs(u.deriv(0, g.points) - np.exp(g.points)))

        order = math.log2(err(51) / err(101))
        assert 3.8 <= order <= 4.2

    def test_sine(self):
        w = rk4_linear2(0.0, 1.0, (0, 1), Grid(0, math.pi / 2, 1001))
        assert w(math.pi / 2) == pytest.approx(1.0, abs=1e-8)

    def test_trivial_second_order(self):
        g = Grid(0.5, 2.0, 51)
        w1 = rk4_linear2(None, None, (1, 0), g)
        w2 = rk4_linear2(None, None, (0, 1), g)
        assert np.allclose(w1.nodal(0), 1.0, atol=1e-14)
        assert np.allclose(w2.nodal(0), g.points - 0.5, atol=1e-13)

    @given(c=st.floats(-100, 100, allow_nan=False))
    def test_homogeneity(self, c):
        g = Grid(0, 1, 51)
        p = closed(np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))
        base = rk4_linear2(p, 2.0, (0.3, -0.7), g).nodal(0)
        scaled = rk4_linear2(p, 2.0, (0.3 * c, -0.7 * c), g).nodal(0)
        assert np.max(np.abs(scaled - c * base)) <= 1e-12 * (1 + abs(c)) * np.max(np.abs(base))

    def test_bad_ics(self):
        with pytest.raises(ArgumentError):
            rk4_linear3(None, None, 1.0, (1, 0), Grid(0, 1, 11))
        with pytest.raises(ArgumentError):
            rk4_linear2(None, None, (1, 0, 0), Grid(0, 1, 11))

    def test_rejects_nonuniform(self):
        with pytest.raises(ArgumentError):
            rk4_linear2(None, None, (1, 0), [0, 0.1, 0.3, 0.6, 1.0])


class TestAiry:
    def test_origin(self):
        v = airy(0.0)
        assert v.ai == pytest.approx(0.3550280539, abs=1e-10)
        assert v.bi == pytest.approx(0.6149266274, abs=1e-10)

    def test_wronskian_across_range(self):
        x = np.linspace(-AIRY_MAX_ABS_X, AIRY_MAX_ABS_X, 2401)
        ai, bi, aip, bip = airy_arrays(x)
        assert np.max(np.abs(ai * bip - aip * bi - 1 / math.pi)) < 1e-10 / math.pi

    @given(x=st.floats(-AIRY_MAX_ABS_X, AIRY_MAX_ABS_X))
    def test_against_scipy(self, x):
        v = airy(x)
        ref = special.airy(x)
        # Ai decays like exp(-2/3 x^1.5) for x > 0: compare relative to its own size there
        scale_ai = abs(ref[0]) if x > 0 else max(1.0, abs(ref[0]))
        assert abs(v.ai - ref[0]) <= 1e-9 * scale_ai
        assert abs(v.bi - ref[2]) <= 1e-9 * max(1.0, abs(ref[2]))
        assert abs(v.bi_prime - ref[3]) <= 1e-9 * max(1.0, abs(ref[3]))

    def test_decay(self):
        assert airy(6.0).ai < airy(3.0).ai < airy(0.0).ai

    @pytest.mark.parametrize("x", [12.5, -13.0, math.nan])
    def test_range(self, x):
        with pytest.raises(DomainError):
            airy(x)
