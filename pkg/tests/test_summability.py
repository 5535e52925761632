import math

import numpy as np
import pytest

from hexsum import kernels, radial, summability
from hexsum.exceptions import QuadratureError
from hexsum.hexgeom import GridSpec, HexPoint
from hexsum.radial import RadialProfile
from hexsum.specfun import QuadratureControl
from hexsum.summability import SummabilityParams

EXP = RadialProfile.exponential(2 / 3)


def test_params_validation():
    with pytest.raises(ValueError):
        SummabilityParams(0.0, 1.0)
    with pytest.raises(ValueError):
        SummabilityParams(1.0, -0.5)
    with pytest.raises(ValueError):
        SummabilityParams(1.0, 1.0, "fejer")


def test_delta_zero_is_partial_integral():
    t = HexPoint(0.3, 1.1, -1.4)
    p = SummabilityParams(4.0, 0.0)
    assert summability.riesz_mean_radial(EXP, p, t) == radial.radial_ft(EXP, 4.0, t)


def test_constant_profile_gives_cesaro_kernel():
    one = RadialProfile.constant(1.0)
    t = HexPoint(0.45, -1.2, 0.75)
    for delta in (1.0, 2.0, 2.5):
        p = SummabilityParams(3.0, delta)
        k = kernels.cesaro_kernel(3.0, delta, t).value
        assert summability.riesz_mean_radial(one, p, t) == pytest.approx(k, abs=1e-10)
        assert summability.cesaro_mean_radial(one, p, t) == pytest.approx(k, abs=1e-10)


def test_origin_value_for_constant_profile():
    one = RadialProfile.constant(1.0)
    for delta in (0.5, 1.0, 3.0):
        want = 3 * 25.0 * 2 / ((delta + 1) * (delta + 2))
        got = summability.cesaro_mean_radial(one, SummabilityParams(5.0, delta), HexPoint.origin())
        assert got == pytest.approx(want, rel=1e-12)


def test_cesaro_needs_positive_delta():
    with pytest.raises(ValueError):
        summability.cesaro_mean_radial(EXP, SummabilityParams(2.0, 0.0), HexPoint.origin())


def test_cesaro_equals_riesz(rng):
    for k in range(8):
        t = HexPoint.from_pair(*rng.uniform(-3, 3, 2))
        p = SummabilityParams(float(rng.uniform(1, 10)), (1.0, 1.5, 2.0, 3.0)[k % 4])
        phi = RadialProfile.exponential(float(rng.uniform(0.3, 2)))
        a = summability.riesz_mean_radial(phi, p, t)
        b = summability.cesaro_mean_radial(phi, p, t)
        assert a == pytest.approx(b, rel=1e-8)


def test_linearity(rng):
    t = HexPoint(0.7, -0.2, -0.5)
    p = SummabilityParams(6.0, 1.5)
    f = RadialProfile.exponential(0.5)
    g = RadialProfile.exponential(1.3)
    alpha, beta = rng.uniform(-3, 3, 2)
    combo = RadialProfile(lambda r: alpha * f.func(r) + beta * g.func(r))
    lhs = summability.riesz_mean_radial(combo, p, t)
    rhs = alpha * summability.riesz_mean_radial(f, p, t) + beta * summability.riesz_mean_radial(g, p, t)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_scaling():
    # S_R[phi](t) = S_1[R^2 phi(R .)](R t)
    R, delta = 4.0, 2.0
    t = HexPoint(0.3, -0.5, 0.2)
    lhs = summability.riesz_mean_radial(EXP, SummabilityParams(R, delta), t)
    scaled = RadialProfile(lambda r: R * R * EXP.func(R * np.asarray(r)))
    rhs = summability.riesz_mean_radial(scaled, SummabilityParams(1.0, delta), t.scaled(R))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_convergence_rows():
    rows = summability.convergence_experiment(1.0, 2.0, [5, 10, 20, 40], [HexPoint.origin()])
    errs = [r.abs_err for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert all(r.target == 13.5 for r in rows)


def test_convergence_rate_at_origin():
    # at the origin the error of the delta = 2 mean is 81/R - 182.25/R^2 + exponentially small terms
    (row,) = summability.convergence_experiment(1.0, 2.0, [200.0], [HexPoint.origin()])
    assert row.abs_err == pytest.approx(81 / 200 - 182.25 / 200**2, rel=1e-9)


def test_smoothing_comparison_at_origin():
    # the plain partial integral converges exponentially at the origin, so it beats delta = 2 there
    for R in (5.0, 10.0):
        (r0,) = summability.convergence_experiment(1.0, 0.0, [R], [HexPoint.origin()])
        (r2,) = summability.convergence_experiment(1.0, 2.0, [R], [HexPoint.origin()])
        assert r0.abs_err < r2.abs_err


def test_convergence_row_invariant():
    with pytest.raises(ValueError):
        summability.ConvergenceRow(1.0, 2.0, HexPoint.origin(), 1.0, 2.0, 0.5)


def test_positivity_scan():
    grid = GridSpec.square(-15, 15, 101)
    for delta in (2.0, 2.5, 3.0):
        assert summability.positivity_scan(1.0, delta, grid).violations == 0
    witness = GridSpec("hexplane", (3 * math.pi, -3 * math.pi), (0.5, 0.5), (3, 3))
    for delta in (1.2, 1.5, 1.8):
        rep = summability.positivity_scan(1.0, delta, witness)
        assert rep.violations >= 1 and rep.minimum < 0


def test_convolution_of_constant():
    one = lambda a, b, c: np.ones_like(a)
    res = summability.convolve_kernel(one, 1.0, 2.0, HexPoint.origin(), 30.0, f_sup=1.0)
    assert res.value > 0
    # total kernel mass is 3 pi^2, and the tail bound closes the gap
    assert res.value <= summability.KERNEL_MASS
    assert res.value + res.tail_bound >= summability.KERNEL_MASS - 1e-6


def test_convolution_positive_and_zero(rng):
    f = lambda a, b, c: radial.exp_radial_ft_closed_array(1.0, a, b, c)
    for t1, t2 in rng.uniform(-2, 2, (3, 2)):
        res = summability.convolve_kernel(f, 1.0, 2.0, HexPoint.from_pair(t1, t2), 12.0, f_sup=13.5)
        assert res.value >= -1e-6
    zero = lambda a, b, c: np.zeros_like(a)
    assert summability.convolve_kernel(zero, 1.0, 2.0, HexPoint.origin(), 5.0, f_sup=0.0).value == 0.0


def test_convolution_against_radial_route():
    # f with transform exp(-2 rho/3): f * D_R^2 is 3 pi^2 times the Riesz mean
    f = lambda a, b, c: radial.exp_radial_ft_closed_array(1.0, a, b, c)
    t = HexPoint.origin()
    ctrl = QuadratureControl(abs_tol=1e-9, rel_tol=1e-8, max_subdivisions=20000)
    res = summability.convolve_kernel(f, 1.0, 2.0, t, 30.0, f_sup=13.5, ctrl=ctrl)
    mean = summability.riesz_mean_radial(EXP, SummabilityParams(1.0, 2.0), t)
    assert res.value / summability.KERNEL_MASS == pytest.approx(mean, rel=1e-4)


def test_convolution_tail_guard():
    one = lambda a, b, c: np.ones_like(a)
    with pytest.raises(QuadratureError):
        summability.convolve_kernel(one, 1.0, 2.0, HexPoint.origin(), 3.0, f_sup=1.0, tail_tol=1e-6)
    with pytest.raises(ValueError):
        summability.convolve_kernel(one, 1.0, 1.5, HexPoint.origin(), 3.0, f_sup=1.0)
