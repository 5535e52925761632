"""Riesz and Cesaro means of Fourier integrals with radial transforms.

With fhat(s) = phi(||s||_H) both means reduce to 1-D integrals:

    Riesz:  S_{R,d} f(t) = int_0^R (1 - rho/R)^d E_rho(t) phi(rho) drho
    Cesaro: sigma_R^d(f; t) = (d / R^d) int_0^R (R - rho)^(d-1) sigma_rho(t) drho,
            sigma_rho(t) = int_0^rho E_u(t) phi(u) du.

The two agree (integrate the Riesz form by parts), which the test-suite
checks numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from hexsum.exceptions import QuadratureError
from hexsum.hexgeom import GridSpec, HexPoint
from hexsum.kernels import cesaro_kernel_array, e_regularized
from hexsum.oracle import _gl, quad_1d, quad_hexagon
from hexsum.radial import (
    PositivityReport,
    RadialProfile,
    _phase_rate,
    _report,
    exp_radial_ft_closed,
    radial_ft,
)
from hexsum.specfun import QuadratureControl

KERNEL_MASS = 3 * math.pi**2

_DEFAULT_CTRL = QuadratureControl(abs_tol=1e-12, rel_tol=1e-11, max_subdivisions=400)


@dataclass(frozen=True)
class SummabilityParams:
    R: float
    delta: float
    method: str = "riesz"

    def __post_init__(self):
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError(f"R must be positive, got {self.R!r}")
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be >= 0, got {self.delta!r}")
        if self.method not in ("riesz", "cesaro"):
            raise ValueError(f"method must be riesz or cesaro, got {self.method!r}")


@dataclass(frozen=True)
class ConvergenceRow:
    R: float
    delta: float
    point: HexPoint
    mean: float
    target: float
    abs_err: float

    def __post_init__(self):
        if self.abs_err != abs(self.mean - self.target):
            raise ValueError("abs_err must equal |mean - target|")


def _split(R: float, t: HexPoint) -> int:
    return min(400, max(1, int(math.ceil(R * (_phase_rate(t) + 1) / (2 * math.pi)))))


def _weighted_to_endpoint(g: Callable[[float], float], R: float, power: float, n: int, ctrl) -> tuple[float, float, bool]:
    """int_0^R g(rho) (R - rho)^power drho.

    The weight is applied explicitly on [0, R - L] and by the algebraic-weight
    rule on the last panel [R - L, R], so the endpoint behaviour is exact.
    """
    L = R / n
    head_val = head_err = 0.0
    ok = True
    if n > 1:
        head = quad_1d(lambda r: g(r) * (R - r) ** power, 0.0, R - L, ctrl, panels=n - 1)
        head_val, head_err, ok = head.value, head.error, head.converged
    tail = quad_1d(g, R - L, R, ctrl, weight=(0.0, power))
    return head_val + tail.value, head_err + tail.error, ok and tail.converged


def riesz_mean_radial(fhat: RadialProfile, params: SummabilityParams, t: HexPoint, ctrl=None) -> float:
    """int_0^R (1 - rho/R)^delta E_rho(t) fhat(rho) drho."""
    ctrl = ctrl or _DEFAULT_CTRL
    R, delta = params.R, params.delta
    if delta == 0:
        return radial_ft(fhat, R, t, ctrl)
    t1, t2, t3 = t.as_tuple()

    def g(rho):
        return float(e_regularized(rho, t1, t2, t3) * fhat.func(rho))

    val, err, ok = _weighted_to_endpoint(g, R, delta, _split(R, t), ctrl)
    if not ok:
        raise QuadratureError(f"Riesz mean did not converge (R={R}, delta={delta})", value=val, error=err)
    return val / R**delta


def partial_integral(fhat: RadialProfile, rho: float, t: HexPoint, order: int = 20) -> float:
    """sigma_rho(t) = int_0^rho E_u(t) fhat(u) du by composite Gauss-Legendre."""
    if rho <= 0:
        return 0.0
    t1, t2, t3 = t.as_tuple()
    n = max(2, int(math.ceil(rho * (_phase_rate(t) + 1))))
    edges = np.linspace(0.0, rho, n + 1)
    x, w = _gl(order)
    lo, hi = edges[:-1], edges[1:]
    nodes = ((hi - lo)[:, None] * (x + 1) / 2 + lo[:, None]).ravel()
    wts = ((hi - lo)[:, None] / 2 * w).ravel()
    return float(np.sum(wts * e_regularized(nodes, t1, t2, t3) * fhat.func(nodes)))


def cesaro_mean_radial(fhat: RadialProfile, params: SummabilityParams, t: HexPoint, ctrl=None) -> float:
    """(delta / R^delta) int_0^R (R - rho)^(delta-1) sigma_rho(t) drho, delta > 0."""
    ctrl = ctrl or _DEFAULT_CTRL
    R, delta = params.R, params.delta
    if not delta > 0:
        raise ValueError("the Cesaro mean needs delta > 0")

    def g(rho):
        return partial_integral(fhat, rho, t)

    val, err, ok = _weighted_to_endpoint(g, R, delta - 1.0, _split(R, t), ctrl)
    if not ok:
        raise QuadratureError(f"Cesaro mean did not converge (R={R}, delta={delta})", value=val, error=err)
    return delta * val / R**delta


def mean_radial(fhat: RadialProfile, params: SummabilityParams, t: HexPoint, ctrl=None) -> float:
    if params.method == "cesaro":
        return cesaro_mean_radial(fhat, params, t, ctrl)
    return riesz_mean_radial(fhat, params, t, ctrl)


@dataclass(frozen=True)
class ConvolutionResult:
    value: float
    quad_error: float
    tail_bound: float


def convolve_kernel(
    f: Callable,
    R: float,
    delta: float,
    t: HexPoint,
    radius: float,
    *,
    f_sup: float,
    tail_tol: float = math.inf,
    ctrl: QuadratureControl | None = None,
) -> ConvolutionResult:
    """(f * D_R^delta)(t) by 2-D quadrature over ||s||_H <= radius.

    ``f(t1, t2, t3)`` is vectorised and bounded by ``f_sup``.  For delta >= 2
    the kernel is nonnegative with total mass 3 pi^2, so the neglected part is
    at most f_sup times the kernel mass outside the ball.
    """
    if not delta >= 2:
        raise ValueError("the tail bound needs a nonnegative kernel (delta >= 2)")
    if not (radius > 0 and f_sup >= 0):
        raise ValueError("radius must be positive and f_sup nonnegative")
    ctrl = ctrl or QuadratureControl(abs_tol=1e-10, rel_tol=1e-9, max_subdivisions=20000)
    t1, t2, t3 = t.as_tuple()
    rate = 2 * R / 3 * 2

    def kernel(s1, s2, s3):
        return cesaro_kernel_array(R, delta, s1, s2, s3)[0]

    def integrand(s1, s2, s3):
        return f(t1 - s1, t2 - s2, t3 - s3) * kernel(s1, s2, s3)

    main = quad_hexagon(radius, integrand, ctrl, phase_rate=rate)
    inner = quad_hexagon(radius, kernel, ctrl, phase_rate=rate)
    for res in (main, inner):
        res.require()
    tail = f_sup * max(0.0, KERNEL_MASS - inner.value.real) + f_sup * inner.error
    if tail > tail_tol:
        raise QuadratureError(f"tail bound {tail:.3g} exceeds {tail_tol:.3g}; enlarge the radius")
    return ConvolutionResult(float(main.value.real), float(main.error), float(tail))


def positivity_scan(R: float, delta: float, grid: GridSpec, tol: float | None = None) -> PositivityReport:
    """Minimum of D_R^delta over the grid and the count of values below -tol."""
    if not R > 0:
        raise ValueError("R must be positive")
    tol = 1e-10 * R * R if tol is None else tol
    _, _, t1, t2, t3 = grid.arrays()
    values, _, _ = cesaro_kernel_array(R, delta, t1, t2, t3)
    return _report(grid, np.asarray(values, dtype=float), t1, t2, tol)


def convergence_experiment(
    a: float,
    delta: float,
    R_list: Sequence[float],
    points: Sequence[HexPoint],
    ctrl=None,
    method: str = "riesz",
) -> list[ConvergenceRow]:
    """Errors of S_{R,delta} f against f for fhat = exp(-(2a/3) rho), rows ordered by (R, point)."""
    if not a > 0:
        raise ValueError("a must be positive")
    fhat = RadialProfile.exponential(2 * a / 3)
    rows = []
    for R in R_list:
        params = SummabilityParams(float(R), float(delta), method)
        for p in points:
            mean = mean_radial(fhat, params, p, ctrl)
            target = exp_radial_ft_closed(a, p)
            rows.append(ConvergenceRow(float(R), float(delta), p, mean, target, abs(mean - target)))
    return rows


__all__ = [
    "ConvergenceRow",
    "ConvolutionResult",
    "KERNEL_MASS",
    "SummabilityParams",
    "cesaro_mean_radial",
    "convergence_experiment",
    "convolve_kernel",
    "mean_radial",
    "partial_integral",
    "positivity_scan",
    "riesz_mean_radial",
]
