import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hexsum import kernels
from hexsum.exceptions import BoundaryBandError, DegenerateKnotsError
from hexsum.hexgeom import HexPoint
from hexsum.specfun import f_delta_gap

from conftest import off_singular

pair = st.tuples(st.floats(-6, 6), st.floats(-6, 6))


def _mp_three_terms(g, t, digits=50):
    with mpmath.workdps(digits):
        t1, t2 = mpmath.mpf(t.t1), mpmath.mpf(t.t2)
        t3 = -t1 - t2
        a, b, c = t1 - t2, t2 - t3, t3 - t1
        return float(-mpmath.mpf(9) / 2 * (g(a) / (b * c) + g(b) / (c * a) + g(c) / (a * b)))


def test_dirichlet_at_origin_is_area():
    ev = kernels.dirichlet(1.0, HexPoint.origin())
    assert ev.value == 3.0 and ev.method == kernels.LIMIT
    assert kernels.dirichlet(2.5, HexPoint.origin()).value == pytest.approx(3 * 2.5**2)


@given(pair, st.floats(0.1, 5))
def test_closed_and_regularised_dirichlet_agree(p, rho):
    t = HexPoint.from_pair(*p)
    assume(off_singular(t, 1e-2))
    closed = kernels.dirichlet(rho, t)
    reg = float(kernels.dirichlet_regularized(rho, t.t1, t.t2, t.t3))
    assert closed.method == kernels.CLOSED_FORM
    assert closed.value == pytest.approx(reg, abs=1e-11 * (1 + rho * rho))


@pytest.mark.parametrize("eps", [1e-5, 1e-7, 1e-9, 1e-12])
def test_limit_fallback_against_high_precision(eps):
    rho = 1.7
    t = HexPoint.from_pair(0.8 + eps, 0.8)
    k = mpmath.mpf(2 * rho) / 3
    want = _mp_three_terms(lambda d: mpmath.cos(k * d), t)
    ev = kernels.dirichlet(rho, t)
    assert ev.method == kernels.LIMIT
    assert ev.value == pytest.approx(want, abs=1e-13)
    assert ev.err_est < 1e-12


@pytest.mark.parametrize("eps", [1e-6, 1e-10])
def test_limit_fallback_e_kernel_high_precision(eps):
    rho = 2.3
    t = HexPoint.from_pair(-0.4, -0.4 + eps)
    k = mpmath.mpf(2 * rho) / 3
    want = -2 / 3 * _mp_three_terms(lambda d: d * mpmath.sin(k * d), t)
    assert kernels.e_kernel(rho, t).value == pytest.approx(want, abs=1e-12)


def test_cesaro_fallback_high_precision():
    R, delta = 3.0, 1.5
    t = HexPoint.from_pair(1.1 + 1e-8, 1.1)
    k = mpmath.mpf(2 * R) / 3
    F = lambda u: delta * mpmath.quad(lambda r: mpmath.cos(r * u) * (1 - r) ** (delta - 1), [0, 1])
    want = _mp_three_terms(lambda d: F(k * d), t, digits=30)
    ev = kernels.cesaro_kernel(R, delta, t)
    assert ev.method == kernels.LIMIT
    assert ev.value == pytest.approx(want, abs=1e-9)


def test_err_est_flags_cancellation():
    near = kernels.dirichlet(1.0, HexPoint.from_pair(0.3 + 2e-4, 0.3))
    far = kernels.dirichlet(1.0, HexPoint.from_pair(2.0, -1.0))
    assert near.method == kernels.CLOSED_FORM
    assert near.err_est > 100 * far.err_est


def test_kernels_are_even():
    t = HexPoint(0.3, 1.1, -1.4)
    for fn in (lambda p: kernels.dirichlet(1.3, p), lambda p: kernels.cesaro_kernel(2.0, 2.5, p)):
        assert fn(t).value == pytest.approx(fn(-t).value, rel=1e-13)


@pytest.mark.parametrize("delta", [0.0, -1.0])
def test_cesaro_rejects_bad_delta(delta):
    with pytest.raises(ValueError):
        kernels.cesaro_kernel(1.0, delta, HexPoint.origin())


def test_cesaro_at_origin():
    for delta in (1.0, 1.5, 2.0, 3.0):
        want = 3 * 4.0 * 2 / ((delta + 1) * (delta + 2))
        assert kernels.cesaro_kernel(2.0, delta, HexPoint.origin()).value == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("delta", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("R", [1.0, 4.0])
def test_witness(delta, R):
    t = HexPoint(3 * math.pi / R, -3 * math.pi / R, 0.0)
    val = kernels.cesaro_kernel(R, delta, t).value
    want = R * R / (2 * math.pi**2) * f_delta_gap(delta, 2 * math.pi, 4 * math.pi)
    assert val < 0
    assert val == pytest.approx(want, rel=1e-8)


def test_delta_two_squared_form(rng):
    # D_R^2 = 9 G(k t) / (k^4 (abc)^2)
    R = 1.7
    k = 2 * R / 3
    for t1, t2 in rng.uniform(-4, 4, (20, 2)):
        t = HexPoint.from_pair(t1, t2)
        a, b, c = t.diffs()
        g = kernels.g_direct(t.scaled(k))
        assert kernels.cesaro_kernel(R, 2.0, t).value == pytest.approx(
            9 * g / (k**4 * (a * b * c) ** 2), rel=1e-8
        )


@given(pair)
def test_sum_of_squares(p):
    t = HexPoint.from_pair(*p)
    gd, gs = kernels.g_direct(t), kernels.g_sos(t)
    assert gs >= 0
    assert abs(gd - gs) <= 1e-10 * (1 + abs(gd))


# -- B-splines ---------------------------------------------------------------------


def test_bspline1():
    assert kernels.bspline1(0.5, 0.0, 2.0) == 0.5
    assert kernels.bspline1(0.5, 2.0, 0.0) == 0.5
    assert kernels.bspline1(2.0, 0.0, 2.0) == 0.0
    with pytest.raises(DegenerateKnotsError) as info:
        kernels.bspline1(0.0, 1.0, 1.0)
    assert info.value.pair == (1.0, 1.0)


def test_degenerate_spline_knots():
    with pytest.raises(DegenerateKnotsError):
        kernels.m_spline(0.1, HexPoint(0.5, 0.5, -1.0))


@given(pair)
def test_spline_mass_three(p):
    t = HexPoint.from_pair(*p)
    assume(off_singular(t, 1e-6))
    assert kernels.integrate_pieces(kernels.spline_pieces(t)) == pytest.approx(3.0, abs=1e-12)
    assert kernels.integrate_pieces(kernels.spline_pieces(t, symmetric=False)) == pytest.approx(3.0, abs=1e-12)


@given(pair, st.floats(0.1, 10), st.floats(-5, 5))
def test_spline_even_and_nonnegative(p, s, u):
    t = HexPoint.from_pair(*p)
    assume(off_singular(t, 1e-6))
    assert kernels.m_spline(u, t) >= 0
    assert kernels.m_spline(u, t) == kernels.m_spline(-u, t)


@given(pair, st.floats(0.1, 6))
def test_e_kernel_spline_route(p, rho):
    t = HexPoint.from_pair(*p)
    assume(off_singular(t, 1e-3))
    assert kernels.e_kernel_spline(rho, t) == pytest.approx(kernels.e_kernel(rho, t).value, abs=1e-10)


# -- spider function --------------------------------------------------------------


def test_j_examples():
    assert kernels.j_closed(HexPoint(0.6, 0.0, -0.6)) == pytest.approx(1.5 * math.pi / 0.36)
    assert kernels.j_closed(HexPoint(0.2, 0.1, -0.3)) == 0.0
    assert kernels.j_closed(HexPoint(2.0, -1.0, -1.0)) == pytest.approx(math.pi / 6)
    assert kernels.j_closed(HexPoint(3.0, 0.5, -3.5)) == 0.0
    with pytest.raises(BoundaryBandError):
        kernels.j_closed(HexPoint(0.5, 0.0, -0.5))


def test_j_scales_with_threshold():
    # J is homogeneous of degree -2 once the band threshold scales with t
    t = HexPoint(0.7, 0.1, -0.8)
    scaled = kernels.j_closed_array(1.4, 0.2, -1.6, threshold=2.0)
    assert float(scaled) == pytest.approx(kernels.j_closed(t) / 4)


def test_j_nonnegative_on_grid():
    u = np.linspace(-6, 6, 241)
    t1, t2 = np.meshgrid(u, u)
    j = kernels.j_closed_array(t1, t2, -t1 - t2)
    assert np.nanmin(j) >= 0
    # six legs: J vanishes near the origin and far out along the diagonals
    assert kernels.j_closed(HexPoint(0.1, 0.0, -0.1)) == 0.0
