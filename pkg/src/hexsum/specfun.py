"""Scalar special functions: Si, m2 and the Riesz profile F_delta.

All functions accept scalars or numpy arrays and return the same shape
(scalars come back as ``float``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from hexsum.exceptions import ConsistencyError, QuadratureError

HALF_PI = math.pi / 2
SERIES_SWITCH = 8.0


@dataclass(frozen=True)
class QuadratureControl:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def sine_integral(x):
    """Si(x) = int_0^x sin(u)/u du for x >= 0 (scipy's sici)."""
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise ValueError("sine_integral needs finite input")
    if np.any(arr < 0):
        raise ValueError("sine_integral is defined here for x >= 0")
    return _ret(special.sici(arr)[0], scalar)


def m2(xi):
    """m2(xi) = int_xi^inf sin(u)/u du = pi/2 - Si(xi)."""
    arr, scalar = _as_array(xi)
    if not np.all(np.isfinite(arr)):
        raise ValueError("m2 needs finite input")
    if np.any(arr < 0):
        raise ValueError("m2 is defined for xi >= 0")
    return _ret(HALF_PI - special.sici(arr)[0], scalar)


def _check_delta(delta):
    delta = float(delta)
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError(f"delta must be a positive finite number, got {delta!r}")
    return delta


def f_delta_series(delta, u):
    """1F2(1; (delta+1)/2, (delta+2)/2; -u^2/4), summed until terms drop below 1e-16."""
    delta = _check_delta(delta)
    arr, scalar = _as_array(u)
    p = (delta + 1) / 2
    q = (delta + 2) / 2
    z = -arr * arr / 4
    term = np.ones_like(arr)
    total = np.ones_like(arr)
    for n in range(400):
        term = term * z / ((p + n) * (q + n))
        total = total + term
        if np.all(np.abs(term) < 1e-16 * np.abs(total)) or not np.any(term):
            break
    else:
        raise QuadratureError(f"1F2 series did not converge for delta={delta}")
    return _ret(total, scalar)


@functools.lru_cache(maxsize=256)
def _jacobi_rule(n: int, alpha: float):
    x, w = special.roots_jacobi(n, alpha, 0.0)
    return x, w


def _jacobi_nodes_for(umax: float) -> int:
    # the integrand cos(u (1+x)/2) needs n a bit above e*u/8 nodes; pad generously
    n = 48 + int(math.ceil(0.6 * umax))
    return 16 * int(math.ceil(n / 16))


def _jacobi_cos_integral(delta, u, n):
    # delta * int_0^1 cos(rho u) (1-rho)^(delta-1) drho with rho = (1+x)/2
    x, w = _jacobi_rule(n, delta - 1.0)
    phase = np.multiply.outer(u, (1.0 + x) / 2)
    return delta * 2.0 ** (-delta) * (np.cos(phase) @ w)


def f_delta_jacobi(delta, u, tol: float = 1e-11):
    """F_delta(u) by Gauss-Jacobi quadrature with the (1-rho)^(delta-1) weight built in.

    Each group of arguments is integrated twice with different node counts;
    a disagreement above ``tol`` raises :class:`QuadratureError`.
    """
    delta = _check_delta(delta)
    arr, scalar = _as_array(u)
    a = np.abs(arr)
    out = np.empty_like(a)
    flat_in = a.ravel()
    flat_out = out.ravel()
    buckets = np.ceil(flat_in / 32.0).astype(int)
    for b in np.unique(buckets):
        idx = np.nonzero(buckets == b)[0]
        n = _jacobi_nodes_for(32.0 * max(b, 1))
        lo = _jacobi_cos_integral(delta, flat_in[idx], n)
        hi = _jacobi_cos_integral(delta, flat_in[idx], n + 24)
        err = np.max(np.abs(hi - lo)) if idx.size else 0.0
        if err > tol:
            raise QuadratureError(
                f"Gauss-Jacobi F_delta did not converge (delta={delta}, n={n}, err={err:.3g})",
                value=hi,
                error=err,
                subdivisions=n,
            )
        flat_out[idx] = hi
    return _ret(flat_out.reshape(a.shape), scalar)


def f_delta(delta, u):
    """F_delta(u) = delta int_0^1 cos(rho u) (1 - rho)^(delta-1) drho.

    Closed forms for delta in {1, 2}; the 1F2 series for |u| <= 8; Gauss-Jacobi
    quadrature beyond.  Even in u and bounded by 1 in absolute value.
    """
    delta = _check_delta(delta)
    arr, scalar = _as_array(u)
    if not np.all(np.isfinite(arr)):
        raise ValueError("f_delta needs finite u")
    a = np.abs(arr)
    if delta == 1.0:
        out = np.sinc(a / np.pi)
    elif delta == 2.0:
        # 2 (1 - cos u) / u^2 written without cancellation
        out = np.sinc(a / (2 * np.pi)) ** 2
    else:
        out = np.empty_like(a)
        small = a <= SERIES_SWITCH
        if np.any(small):
            out[small] = f_delta_series(delta, a[small])
        if np.any(~small):
            out[~small] = f_delta_jacobi(delta, a[~small])
    return _ret(out, scalar)


def _gap_symmetrized(delta):
    def integrand(s):
        return ((1 - s) ** (delta - 2) - s ** (delta - 2)) * math.sin(2 * math.pi * s) * (
            1 - math.cos(2 * math.pi * s)
        )

    val, err = integrate.quad(integrand, 0.0, 0.5, epsabs=1e-14, epsrel=1e-13, limit=200)
    return delta * (delta - 1) / (2 * math.pi) * val


def f_delta_gap(delta, k1, k2, tol: float = 1e-9) -> float:
    """F_delta(k1) - F_delta(k2).

    For (k1, k2) = (2 pi, 4 pi) with 1 < delta < 2 the difference is also
    computed from the folded integral over [0, 1/2], whose integrand has a
    definite sign; the two routes must agree to ``tol``.
    """
    delta = _check_delta(delta)
    gap = f_delta(delta, k1) - f_delta(delta, k2)
    if (
        1.0 < delta < 2.0
        and math.isclose(k1, 2 * math.pi, rel_tol=1e-15)
        and math.isclose(k2, 4 * math.pi, rel_tol=1e-15)
    ):
        folded = _gap_symmetrized(delta)
        if abs(folded - gap) > tol:
            raise ConsistencyError(
                f"F_delta gap routes disagree: direct {gap!r}, folded {folded!r}"
            )
    return float(gap)
