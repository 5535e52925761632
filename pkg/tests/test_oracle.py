import math

import numpy as np
import pytest

from hexsum import kernels, oracle
from hexsum.exceptions import QuadratureError
from hexsum.hexgeom import HexPoint
from hexsum.specfun import QuadratureControl


def _norm(s1, s2, s3):
    return np.maximum(np.maximum(np.abs(s1), np.abs(s2)), np.abs(s3))


def test_hexagon_area():
    res = oracle.quad_hexagon(1.0, lambda a, b, c: np.ones_like(a))
    assert res.converged
    assert res.value.real == pytest.approx(3.0, abs=1e-13)


def test_cartesian_area_via_jacobian():
    # the unit hexagon has Cartesian area 3 sqrt(3) / 2
    res = oracle.quad_hexagon(1.0, lambda a, b, c: np.ones_like(a))
    assert res.value.real / oracle.JACOBIAN_CARTESIAN == pytest.approx(3 * math.sqrt(3) / 2)


@pytest.mark.parametrize(
    "phi,exact",
    [
        (lambda r: np.ones_like(r), lambda rho: 3 * rho**2),
        (lambda r: r, lambda rho: 2 * rho**3),
        (lambda r: np.exp(-r), lambda rho: 6 * (1 - (1 + rho) * math.exp(-rho))),
    ],
)
def test_radial_measure(phi, exact):
    rho = 1.7
    res = oracle.quad_hexagon(rho, lambda a, b, c: phi(_norm(a, b, c)))
    assert res.value.real == pytest.approx(exact(rho), abs=1e-9)


def test_exponential_mass():
    res = oracle.quad_hexagon(40.0, lambda a, b, c: np.exp(-2 / 3 * _norm(a, b, c)))
    tail = 6 * (4.5 * 40 + 27 / 4 + 0) * math.exp(-80 / 3)  # 6 int_40^inf r exp(-2r/3) dr, bounded above
    assert abs(res.value.real - 13.5) <= tail + 1e-9


def test_dirichlet_oracle_matches_closed_form():
    t = HexPoint(0.3, 1.1, -1.4)
    for rho in (0.5, 2.0, 10.0):
        res = oracle.dirichlet_oracle(rho, t).require()
        assert res.value.real == pytest.approx(kernels.dirichlet(rho, t).value, rel=1e-10)
        assert abs(res.value.imag) < 1e-10


def test_subdivision_budget_reported():
    ctrl = QuadratureControl(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=2)
    res = oracle.quad_hexagon(5.0, lambda a, b, c: np.sqrt(np.abs(a - b)), ctrl)
    assert not res.converged
    with pytest.raises(QuadratureError):
        res.require()


def test_quad_1d_weighted():
    res = oracle.quad_1d(lambda x: 1.0, 0.0, 1.0, weight=(0.0, -0.5))
    assert res.value == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ValueError):
        oracle.quad_1d(lambda x: 1.0, 1.0, 0.0)


def test_quad_1d_panels():
    res = oracle.quad_1d(math.cos, 0.0, 200.0, panels=40)
    assert res.converged and res.value == pytest.approx(math.sin(200.0), abs=1e-10)


def test_finite_difference():
    assert oracle.finite_diff_rho(lambda r: r**3, 2.0, 1e-5) == pytest.approx(12.0, rel=1e-9)
    with pytest.raises(ValueError):
        oracle.finite_diff_rho(lambda r: r, 1e-6, 1e-5)


@pytest.mark.parametrize(
    "env,tol,want",
    [
        (lambda r: math.exp(-r), 1e-10, 23.025850929940457),
        (lambda r: 2 / r**2, 1e-3, 2000.0),
        (lambda r: r**-3, 1e-6, 707.1067811865476),
    ],
)
def test_truncate_tail(env, tol, want):
    assert oracle.truncate_tail(env, tol) == pytest.approx(want, rel=1e-8)


def test_truncate_tail_cap():
    with pytest.raises(QuadratureError):
        oracle.truncate_tail(lambda r: 1 / r**1.01, 1e-9, cap=1e6)


@pytest.mark.parametrize("u,want", [(0.5, 0.0), (2.0, math.pi / 4), (3.0, math.pi / 6)])
def test_sine_product(u, want):
    assert oracle.sine_product_truncated(u) == pytest.approx(want, abs=1e-4)


def test_j_truncated_matches_regions():
    for t in (HexPoint(0.6, 0.0, -0.6), HexPoint(2.0, -1.0, -1.0), HexPoint(0.2, 0.1, -0.3)):
        assert oracle.j_truncated(t) == pytest.approx(kernels.j_closed(t), abs=1e-3)


def test_cesaro_oracle():
    t = HexPoint(0.3, 1.1, -1.4)
    for delta in (0.5, 1.5, 2.0):
        res = oracle.cesaro_oracle(3.0, delta, t).require()
        assert res.value == pytest.approx(kernels.cesaro_kernel(3.0, delta, t).value, abs=1e-10)
