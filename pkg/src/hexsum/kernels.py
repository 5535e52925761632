"""Closed-form kernels on the hexagonal plane.

With a = t1 - t2, b = t2 - t3, c = t3 - t1 (so a + b + c = 0):

    D_rho   = -9/2 [cos(k a)/(b c) + cos(k b)/(c a) + cos(k c)/(a b)],   k = 2 rho / 3
    E_rho   = 3 [a sin(k a)/(b c) + b sin(k b)/(c a) + c sin(k c)/(a b)]
    D_R^d   = -9/2 [F_d(k a)/(b c) + ...],                               k = 2 R / 3

The three-term forms are 0/0 on the lines t_i = t_j.  Near those lines the
evaluators switch to exact regularised forms obtained by integrating the
hexagon chart by chart:

    D_rho = rho^2 [cos x sinc y sinc z + cos y sinc z sinc x + cos z sinc x sinc y]
    E_rho = 2 rho [cos(rho t3) sinc x + cos(rho t1) sinc y + cos(rho t2) sinc z]

with (x, y, z) = rho (a, b, c) / 3.  These carry the ``limit-formula`` tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hexsum.exceptions import BoundaryBandError, DegenerateKnotsError, QuadratureError
from hexsum.hexgeom import BOUNDARY_BAND, HexPoint
from hexsum.specfun import _jacobi_rule, f_delta

EPS = np.finfo(float).eps
SINGULAR_REL = 1e-4

CLOSED_FORM = "closed-form"
TAYLOR = "taylor-fallback"
LIMIT = "limit-formula"


@dataclass(frozen=True)
class KernelEval:
    value: float
    method: str
    err_est: float


def _check_positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def _arrays(t1, t2, t3):
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    t3 = np.asarray(t3, dtype=float)
    return t1, t2, t3, t1 - t2, t2 - t3, t3 - t1


def _sinc(x):
    return np.sinc(x / np.pi)


def singular_mask(t1, t2, t3):
    """True where the smallest pairwise difference is below 1e-4 (1 + ||t||_H)."""
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    norm = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), np.abs(t3))
    dmin = np.minimum(np.minimum(np.abs(a), np.abs(b)), np.abs(c))
    return dmin < SINGULAR_REL * (1.0 + norm)


def dirichlet_regularized(rho, t1, t2, t3):
    """D_rho(t) as a sum of cos * sinc * sinc products; finite everywhere."""
    rho = np.asarray(rho, dtype=float)
    _, _, _, a, b, c = _arrays(t1, t2, t3)
    x, y, z = rho * a / 3, rho * b / 3, rho * c / 3
    sx, sy, sz = _sinc(x), _sinc(y), _sinc(z)
    return rho**2 * (np.cos(x) * sy * sz + np.cos(y) * sz * sx + np.cos(z) * sx * sy)


def e_regularized(rho, t1, t2, t3):
    """E_rho(t) = d/drho D_rho(t) in the divided-difference form; finite everywhere."""
    rho = np.asarray(rho, dtype=float)
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    return 2 * rho * (
        np.cos(rho * t3) * _sinc(rho * a / 3)
        + np.cos(rho * t1) * _sinc(rho * b / 3)
        + np.cos(rho * t2) * _sinc(rho * c / 3)
    )


def _closed_three_terms(g, a, b, c):
    # -9/2 [g(a)/(bc) + g(b)/(ca) + g(c)/(ab)] and the largest term magnitude
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = g(a) / (b * c)
        tb = g(b) / (c * a)
        tc = g(c) / (a * b)
        value = -4.5 * (ta + tb + tc)
        scale = 4.5 * np.maximum(np.maximum(np.abs(ta), np.abs(tb)), np.abs(tc))
    return value, scale


def dirichlet_array(rho, t1, t2, t3):
    """Vectorised :func:`dirichlet`; returns (values, methods, err_est) arrays."""
    rho = _check_positive("rho", rho)
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    k = 2 * rho / 3
    value, scale = _closed_three_terms(lambda d: np.cos(k * d), a, b, c)
    dmax = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(c))
    err = 10 * EPS * scale * (1 + k * dmax)
    sing = singular_mask(t1, t2, t3)
    methods = np.where(sing, LIMIT, CLOSED_FORM)
    if np.any(sing):
        value = np.where(sing, dirichlet_regularized(rho, t1, t2, t3), value)
        err = np.where(sing, 30 * EPS * rho**2 * (1 + rho * dmax), err)
    return value, methods, err


def e_kernel_array(rho, t1, t2, t3):
    rho = _check_positive("rho", rho)
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    k = 2 * rho / 3
    # E = 3 sum a sin(k a)/(b c) = -(2/3) * (-9/2) sum ... with g(d) = d sin(k d)
    value, scale = _closed_three_terms(lambda d: d * np.sin(k * d), a, b, c)
    value = -(2.0 / 3.0) * value
    scale = (2.0 / 3.0) * scale
    dmax = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.abs(c))
    err = 10 * EPS * scale * (1 + k * dmax)
    sing = singular_mask(t1, t2, t3)
    methods = np.where(sing, LIMIT, CLOSED_FORM)
    if np.any(sing):
        value = np.where(sing, e_regularized(rho, t1, t2, t3), value)
        err = np.where(sing, 60 * EPS * rho * (1 + rho * dmax), err)
    return value, methods, err


def _cesaro_regularized(R, delta, t1, t2, t3, tol=1e-12):
    """delta int_0^1 (1-r)^(delta-1) D_{R r}(t) dr by Gauss-Jacobi on the regularised D."""
    _, _, _, a, b, c = _arrays(t1, t2, t3)
    omega = R * float(np.max(np.abs(a) + np.abs(b) + np.abs(c), initial=0.0)) / 6
    n = 16 * int(math.ceil((48 + math.ceil(omega)) / 16))

    def rule(m):
        x, w = _jacobi_rule(m, delta - 1.0)
        r = (1 + x) / 2
        vals = dirichlet_regularized(R * r[None, :], t1[:, None], t2[:, None], t3[:, None])
        return delta * 2.0 ** (-delta) * (vals @ w)

    lo, hi = rule(n), rule(n + 24)
    diff = np.abs(hi - lo)
    if np.any(diff > tol * max(1.0, R * R)):
        raise QuadratureError(
            f"regularised Cesaro kernel did not converge (n={n}, err={diff.max():.3g})",
            value=hi,
            error=float(diff.max()),
            subdivisions=n,
        )
    return hi, diff + 30 * EPS * R * R


def cesaro_kernel_array(R, delta, t1, t2, t3):
    R = _check_positive("R", R)
    delta = _check_positive("delta", delta)
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    k = 2 * R / 3
    sing = singular_mask(t1, t2, t3)
    safe = ~sing
    value = np.zeros(np.broadcast(t1, t2, t3).shape)
    err = np.zeros_like(value)
    f_err = 20 * EPS if delta in (1.0, 2.0) else 1e-11
    if np.any(safe):
        sa, sb, sc = a[safe], b[safe], c[safe]
        v, scale = _closed_three_terms(lambda d: f_delta(delta, k * d), sa, sb, sc)
        value[safe] = v
        dmax = np.maximum(np.maximum(np.abs(sa), np.abs(sb)), np.abs(sc))
        err[safe] = scale * (10 * EPS * (1 + k * dmax) + f_err)
    if np.any(sing):
        v, e = _cesaro_regularized(R, delta, t1[sing], t2[sing], t3[sing])
        value[sing] = v
        err[sing] = e
    methods = np.where(sing, LIMIT, CLOSED_FORM)
    return value, methods, err


def _single(fn, *args, t: HexPoint) -> KernelEval:
    v, m, e = fn(*args, np.array([t.t1]), np.array([t.t2]), np.array([t.t3]))
    return KernelEval(float(v[0]), str(m[0]), float(e[0]))


def dirichlet(rho: float, t: HexPoint) -> KernelEval:
    """Hexagonal Dirichlet kernel D_rho(t) = int_{||s||_H <= rho} exp(-(2i/3) s.t) ds."""
    return _single(dirichlet_array, rho, t=t)


def e_kernel(rho: float, t: HexPoint) -> KernelEval:
    """E_rho(t) = d/drho D_rho(t)."""
    return _single(e_kernel_array, rho, t=t)


def cesaro_kernel(R: float, delta: float, t: HexPoint) -> KernelEval:
    """Cesaro/Riesz kernel D_R^delta(t) = (delta/R^delta) int_0^R (R - rho)^(delta-1) D_rho(t) drho."""
    return _single(cesaro_kernel_array, R, delta, t=t)


# -- positivity certificate for delta = 2 -----------------------------------


def g_direct_array(t1, t2, t3):
    _, _, _, a, b, c = _arrays(t1, t2, t3)
    return -b * c * (1 - np.cos(a)) - c * a * (1 - np.cos(b)) - a * b * (1 - np.cos(c))


def g_sos_array(t1, t2, t3):
    t1, t2, t3, a, b, c = _arrays(t1, t2, t3)
    p = a * np.cos(t3) + b * np.cos(t1) + c * np.cos(t2)
    q = a * np.sin(t3) + b * np.sin(t1) + c * np.sin(t2)
    return 0.5 * p * p + 0.5 * q * q


def g_direct(t: HexPoint) -> float:
    """G(t) in its three-cosine form (the (2/3) R = 1 case)."""
    return float(g_direct_array(t.t1, t.t2, t.t3))


def g_sos(t: HexPoint) -> float:
    """G(t) as half the squared modulus of a trigonometric combination."""
    return float(g_sos_array(t.t1, t.t2, t.t3))


# -- B-splines -----------------------------------------------------------------


def bspline1(u, a: float, b: float):
    """Order-one B-spline: 1/|b - a| strictly between the knots, 0 elsewhere."""
    a = float(a)
    b = float(b)
    if a == b:
        raise DegenerateKnotsError(f"degenerate knots a = b = {a!r}", pair=(a, b))
    lo, hi = min(a, b), max(a, b)
    arr = np.asarray(u, dtype=float)
    out = np.where((arr > lo) & (arr < hi), 1.0 / (hi - lo), 0.0)
    return float(out) if out.ndim == 0 else out


def m1_knot_pairs(t: HexPoint) -> list[tuple[float, float]]:
    t1, t2, t3 = t.as_tuple()
    return [(t1 - t3, t2 - t3), (t2 - t1, t3 - t1), (t3 - t2, t1 - t2)]


def _checked_pairs(t: HexPoint):
    pairs = m1_knot_pairs(t)
    for idx, (a, b) in enumerate(pairs):
        if a == b:
            raise DegenerateKnotsError(
                f"knot pair {idx} collapsed at {a!r} (t = {t.as_tuple()})", pair=(a, b)
            )
    return pairs


def m1_spline(u, t: HexPoint):
    pairs = _checked_pairs(t)
    return sum(bspline1(u, a, b) for a, b in pairs)


def m_spline(u, t: HexPoint):
    """M(u|t) = (M1(u|t) + M1(u|-t)) / 2; nonnegative, even in u, total mass 3."""
    return 0.5 * (m1_spline(u, t) + m1_spline(u, -t))


def spline_pieces(t: HexPoint, symmetric: bool = True) -> list[tuple[float, float, float]]:
    """(lo, hi, height) pieces whose sum is M(.|t) (or M1 when ``symmetric`` is false)."""
    pairs = _checked_pairs(t)
    pieces = []
    for a, b in pairs:
        lo, hi = min(a, b), max(a, b)
        h = 1.0 / (hi - lo)
        if symmetric:
            pieces.append((lo, hi, 0.5 * h))
            pieces.append((-hi, -lo, 0.5 * h))
        else:
            pieces.append((lo, hi, h))
    return pieces


def integrate_pieces(pieces, lo: float = -math.inf, hi: float = math.inf) -> float:
    """Exact integral of a sum of constant pieces over [lo, hi]."""
    total = 0.0
    for p, q, h in pieces:
        p, q = max(p, lo), min(q, hi)
        if q > p:
            total += h * (q - p)
    return total


def e_kernel_spline(rho: float, t: HexPoint) -> float:
    """E_rho(t) = 4 rho int_0^inf cos(2 rho u / 3) M(u|t) du, integrated piece by piece.

    Equivalent to 2 rho int_R cos(2 rho u / 3) M1(u|t) du, since M is the even
    part of M1.
    """
    rho = _check_positive("rho", rho)
    kappa = 2 * rho / 3
    total = 0.0
    for p, q, h in spline_pieces(t):
        p, q = max(p, 0.0), q
        if q <= p:
            continue
        # int_p^q cos(kappa u) du without cancellation
        total += h * 2 * math.cos(kappa * (p + q) / 2) * math.sin(kappa * (q - p) / 2) / kappa
    return 4 * rho * total


# -- spider function -----------------------------------------------------------


def j_closed_array(t1, t2, t3, threshold: float = 1.0):
    """Vectorised spider function; NaN on the |t_i - t_j| = 1 boundary band."""
    _, _, _, a, b, c = _arrays(t1, t2, t3)
    d = np.stack(np.broadcast_arrays(a, b, c))
    gap = np.abs(d) - threshold
    boundary = np.any(np.abs(gap) <= BOUNDARY_BAND, axis=0)
    outside = gap > 0
    n_out = outside.sum(axis=0)
    # one outside: (3 pi/2) / (product of the two inside differences)
    # two outside: -(3 pi/2) / (product of the two outside differences)
    prod_in = np.prod(np.where(outside, 1.0, d), axis=0)
    prod_out = np.prod(np.where(outside, d, 1.0), axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(
            n_out == 1,
            1.5 * np.pi / prod_in,
            np.where(n_out == 2, -1.5 * np.pi / prod_out, 0.0),
        )
    return np.where(boundary, np.nan, val)


def j_closed(t: HexPoint) -> float:
    """Spider function J(t) = int_0^inf E_{3 rho/2}(t) m2(rho) drho, piecewise by region."""
    v = float(j_closed_array(t.t1, t.t2, t.t3))
    if math.isnan(v):
        raise BoundaryBandError(f"t = {t.as_tuple()} has a pairwise difference on |.| = 1")
    return v


__all__ = [
    "CLOSED_FORM",
    "KernelEval",
    "LIMIT",
    "TAYLOR",
    "bspline1",
    "cesaro_kernel",
    "cesaro_kernel_array",
    "dirichlet",
    "dirichlet_array",
    "dirichlet_regularized",
    "e_kernel",
    "e_kernel_array",
    "e_kernel_spline",
    "e_regularized",
    "g_direct",
    "g_sos",
    "integrate_pieces",
    "j_closed",
    "j_closed_array",
    "m1_spline",
    "m_spline",
    "singular_mask",
    "spline_pieces",
]
