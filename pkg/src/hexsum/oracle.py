"""Brute-force reference values for the closed forms.

Measure convention: ``ds`` on the plane is ds_i ds_j in any chart (s_i, s_j),
so the unit hexagon has measure 3 and the Cartesian pull-back is
dx1 dx2 = (2 sqrt(3)/3) ds.

The hexagon {||s||_H <= rho} is cut into three parallelograms (charts
(s1, s2), (s2, s3), (s3, s1) with s_i in [0, rho], s_j in [-rho, 0]), and each
parallelogram along its diagonal into two triangles on which ||s||_H is a
single coordinate.  Radial integrands are therefore smooth on every piece.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from hexsum.exceptions import QuadratureError
from hexsum.hexgeom import HexPoint
from hexsum.kernels import dirichlet, e_regularized
from hexsum.specfun import QuadratureControl, m2

TEST_SEED = 42
JACOBIAN_CARTESIAN = 2 * math.sqrt(3) / 3

_CHARTS = ((0, 1), (1, 2), (2, 0))


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error: float
    subdivisions: int
    converged: bool
    message: str = ""

    def require(self) -> "QuadResult":
        if not self.converged:
            raise QuadratureError(
                self.message or "quadrature did not converge",
                value=self.value,
                error=self.error,
                subdivisions=self.subdivisions,
            )
        return self


def quad_1d(
    f: Callable[[float], float],
    a: float,
    b: float,
    ctrl: QuadratureControl | None = None,
    *,
    weight: tuple[float, float] | None = None,
    points=None,
    panels: int = 1,
) -> QuadResult:
    """Adaptive 1-D quadrature (QUADPACK) of f over [a, b].

    ``weight=(alpha, beta)`` integrates f(x) (x - a)^alpha (b - x)^beta with the
    endpoint singularity handled by the rule; ``panels`` splits [a, b] into
    equal pieces first, which helps long oscillatory ranges.
    """
    ctrl = ctrl or QuadratureControl()
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError(f"need finite a < b, got [{a}, {b}]")
    if weight is not None and panels != 1:
        raise ValueError("weighted quadrature uses a single panel")
    edges = np.linspace(a, b, int(panels) + 1)
    total, err, evals, ok, msgs = 0.0, 0.0, 0, True, []
    for lo, hi in zip(edges[:-1], edges[1:]):
        kwargs = dict(epsabs=ctrl.abs_tol / panels, epsrel=ctrl.rel_tol, limit=ctrl.max_subdivisions, full_output=1)
        if weight is not None:
            kwargs.update(weight="alg", wvar=tuple(weight))
        elif points is not None:
            inside = [p for p in points if lo < p < hi]
            if inside:
                kwargs["points"] = inside
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                out = integrate.quad(f, lo, hi, **kwargs)
            except integrate.IntegrationWarning as exc:
                ok = False
                msgs.append(str(exc).splitlines()[0])
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                out = integrate.quad(f, lo, hi, **kwargs)
        total += out[0]
        err += out[1]
        evals += out[2].get("last", 0) if isinstance(out[2], dict) else 0
    converged = ok and err <= ctrl.target(total) * 10
    return QuadResult(total, err, evals, converged, "; ".join(msgs))


@functools.lru_cache(maxsize=32)
def _gl(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_panels(f, a: float, b: float, n_panels: int, order: int = 20):
    """Composite Gauss-Legendre on equal panels; f must accept an array.

    Returns (value, error) with the error taken against the half-order rule.
    """
    edges = np.linspace(a, b, int(n_panels) + 1)
    lo, hi = edges[:-1], edges[1:]
    vals = []
    for n in (order, order // 2):
        x, w = _gl(n)
        nodes = ((hi - lo)[:, None] * (x + 1) / 2 + lo[:, None]).ravel()
        wts = ((hi - lo)[:, None] / 2 * w).ravel()
        vals.append(np.sum(wts * f(nodes)))
    return vals[0], abs(vals[0] - vals[1])


def _triangle_points(tri, u, w):
    (i, j), half = _CHARTS[tri // 2], tri % 2
    if half == 0:
        si, sj = u, -u * w
    else:
        si, sj = u * w, -u
    s = [None, None, None]
    s[i], s[j] = si, sj
    s[3 - i - j] = -si - sj
    return s


def quad_hexagon(
    rho: float,
    integrand: Callable,
    ctrl: QuadratureControl | None = None,
    *,
    phase_rate: float = 0.0,
    order: int = 20,
) -> QuadResult:
    """Integral of integrand(s1, s2, s3) over {||s||_H <= rho}.

    ``integrand`` is called with three equally shaped arrays and must return an
    array (real or complex).  ``phase_rate`` bounds how fast the integrand
    oscillates per unit length and sets the initial subdivision.

    Each of the six triangles is parametrised by u in [0, rho] (the value of
    ||s||_H) and w in [0, 1]; cells in (u, w) are refined four ways until the
    difference between an ``order`` and an ``order // 2`` tensor rule is small.
    """
    rho = float(rho)
    if not (rho > 0 and math.isfinite(rho)):
        raise ValueError(f"rho must be positive, got {rho!r}")
    ctrl = ctrl or QuadratureControl(abs_tol=1e-13, rel_tol=1e-11, max_subdivisions=4000)
    m = max(1, int(math.ceil(phase_rate * rho / 3.0)))
    ue = np.linspace(0, rho, m + 1)
    we = np.linspace(0, 1, m + 1)
    cells = [
        (tri, ue[p], ue[p + 1], we[q], we[q + 1])
        for tri in range(6)
        for p in range(m)
        for q in range(m)
    ]
    rules = [_gl(order), _gl(order // 2)]
    full_area = 6 * rho * rho / 2

    def evaluate(batch):
        arr = np.array([c[1:] for c in batch])
        tri = np.array([c[0] for c in batch])
        out = []
        for x, w in rules:
            xu, xw = np.meshgrid(x, x, indexing="ij")
            ww = np.outer(w, w).ravel()
            u0, u1, w0, w1 = (arr[:, k : k + 1] for k in range(4))
            u = u0 + (u1 - u0) * (xu.ravel() + 1) / 2
            v = w0 + (w1 - w0) * (xw.ravel() + 1) / 2
            jac = u * (u1 - u0) * (w1 - w0) / 4
            vals = np.zeros(u.shape, dtype=complex)
            for t in range(6):
                sel = tri == t
                if np.any(sel):
                    s1, s2, s3 = _triangle_points(t, u[sel], v[sel])
                    vals[sel] = integrand(s1, s2, s3)
            out.append(np.sum(vals * jac * ww, axis=1))
        area = (arr[:, 1] ** 2 - arr[:, 0] ** 2) / 2 * (arr[:, 3] - arr[:, 2])
        return out[0], np.abs(out[0] - out[1]), area

    hi, err, area = evaluate(cells)
    estimate = hi.sum()
    value, error, splits = 0j, 0.0, 0
    while cells:
        target = ctrl.target(abs(estimate))
        ok = err <= target * area / full_area
        value += hi[ok].sum()
        error += err[ok].sum()
        pending = [c for c, good in zip(cells, ok) if not good]
        if not pending:
            cells = []
            break
        if splits + len(pending) > ctrl.max_subdivisions:
            value += hi[~ok].sum()
            error += err[~ok].sum()
            break
        splits += len(pending)
        cells = []
        for tri, u0, u1, w0, w1 in pending:
            um, wm = (u0 + u1) / 2, (w0 + w1) / 2
            cells += [
                (tri, u0, um, w0, wm),
                (tri, um, u1, w0, wm),
                (tri, u0, um, wm, w1),
                (tri, um, u1, wm, w1),
            ]
        hi, err, area = evaluate(cells)
        estimate = value + hi.sum()
    converged = not cells
    if np.all(np.iscomplexobj(value)) and abs(value.imag) == 0.0:
        value = complex(value.real, 0.0)
    return QuadResult(
        complex(value),
        float(error),
        splits,
        converged,
        "" if converged else f"hexagon quadrature hit {ctrl.max_subdivisions} subdivisions",
    )


def dirichlet_oracle(rho: float, t: HexPoint, sign: int = -1, ctrl=None) -> QuadResult:
    """int_{||s||_H <= rho} exp(sign * (2i/3) s.t) ds by 2-D quadrature."""
    t1, t2, t3 = t.as_tuple()
    rate = (2 / 3) * max(abs(t1 - t2), abs(t2 - t3), abs(t3 - t1))

    def integrand(s1, s2, s3):
        return np.exp(sign * 2j / 3 * (s1 * t1 + s2 * t2 + s3 * t3))

    return quad_hexagon(rho, integrand, ctrl, phase_rate=rate)


def radial_oracle(r: float, phi, t: HexPoint, sign: int = 1, ctrl=None) -> QuadResult:
    """int_{||s||_H <= r} exp(sign (2i/3) s.t) phi(||s||_H) ds by 2-D quadrature."""
    t1, t2, t3 = t.as_tuple()
    rate = (2 / 3) * max(abs(t1 - t2), abs(t2 - t3), abs(t3 - t1))

    def integrand(s1, s2, s3):
        norm = np.maximum(np.maximum(np.abs(s1), np.abs(s2)), np.abs(s3))
        return np.exp(sign * 2j / 3 * (s1 * t1 + s2 * t2 + s3 * t3)) * phi(norm)

    return quad_hexagon(r, integrand, ctrl, phase_rate=rate)


def finite_diff_rho(F: Callable[[float], float], rho: float, h: float) -> float:
    if not (rho > h > 0):
        raise ValueError(f"need rho > h > 0, got rho={rho}, h={h}")
    return (F(rho + h) - F(rho - h)) / (2 * h)


def tail_integral(envelope: Callable[[float], float], P: float) -> float:
    """int_P^inf envelope, computed as int_0^1 envelope(P/s) P/s^2 ds (scale free in P)."""

    def g(s):
        return envelope(P / s) * P / (s * s) if s > 0 else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(g, 0.0, 1.0, epsabs=0, epsrel=1e-10, limit=200)[0]


def truncate_tail(envelope: Callable[[float], float], tol: float, cap: float = 1e9) -> float:
    """Smallest P with int_P^inf envelope <= tol, for a monotone integrable envelope."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if tail_integral(envelope, cap) > tol:
        raise QuadratureError(f"no truncation point below cap={cap:g} reaches tail {tol:g}")
    hi = 1.0
    while tail_integral(envelope, hi) > tol:
        hi *= 2
    lo = hi / 2
    while lo > 1e-12 and tail_integral(envelope, lo) <= tol:
        hi, lo = lo, lo / 2
    if lo <= 1e-12:
        return 0.0
    return optimize.brentq(
        lambda p: math.log(max(tail_integral(envelope, p), 1e-300)) - math.log(tol), lo, hi, xtol=1e-12, rtol=1e-13
    )


@functools.lru_cache(maxsize=8)
def _tapered_grid(P: float, taper: float, width: float, order: int):
    n_panels = int(round(P / width))
    x, w = _gl(order)
    edges = np.linspace(0.0, P, n_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    nodes = ((hi - lo)[:, None] * (x + 1) / 2 + lo[:, None]).ravel()
    wts = ((hi - lo)[:, None] / 2 * w).ravel()
    s = np.clip((P - nodes) / taper, 0.0, 1.0) if taper > 0 else np.ones_like(nodes)
    ramp = s**3 * (10 - 15 * s + 6 * s * s)
    return nodes, wts * ramp * m2(nodes)


def m2_tapered_integral(g, P: float = 2000.0, taper: float = 1000.0, width: float = 0.5, order: int = 16):
    """int_0^P g(rho) m2(rho) w(rho) drho, with w falling from 1 to 0 over [P - taper, P].

    w is the quintic smoothstep (two continuous derivatives at both ends).  It
    damps the conditionally convergent oscillating tail of g * m2 much faster
    than a hard cut-off or a linear ramp.
    """
    nodes, wm = _tapered_grid(float(P), float(taper), float(width), int(order))
    return float(np.sum(wm * g(nodes)))


def j_truncated(t: HexPoint, P: float = 2000.0, taper: float = 1000.0) -> float:
    """Numerical spider function: int_0^P E_{3 rho/2}(t) m2(rho) drho (tapered)."""
    t1, t2, t3 = t.as_tuple()
    return m2_tapered_integral(lambda r: e_regularized(1.5 * r, t1, t2, t3), P, taper)


def sine_product_truncated(u: float, P: float = 2000.0, taper: float = 1000.0) -> float:
    """int_0^inf sin(u rho) m2(rho) drho, truncated at P with the same taper."""
    return m2_tapered_integral(lambda r: np.sin(u * r), P, taper)


def cesaro_oracle(R: float, delta: float, t: HexPoint, ctrl=None) -> QuadResult:
    """(delta/R^delta) int_0^R (R - rho)^(delta-1) D_rho(t) drho by adaptive 1-D quadrature."""
    ctrl = ctrl or QuadratureControl(abs_tol=1e-13, rel_tol=1e-12, max_subdivisions=400)

    def f(rho):
        return dirichlet(rho, t).value if rho > 0 else 0.0

    res = quad_1d(f, 0.0, R, ctrl, weight=(0.0, delta - 1.0))
    scale = delta / R**delta
    return QuadResult(res.value * scale, res.error * scale, res.subdivisions, res.converged, res.message)
