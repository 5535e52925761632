"""Fourier analysis of functions of ||t||_H.

For phi(||s||_H) the two-dimensional transform collapses to a 1-D integral
against the E kernel,

    int_{||s||_H <= r} exp((2i/3) s.t) phi(||s||_H) ds = int_0^r E_rho(t) phi(rho) drho,

which is what :func:`radial_ft` computes.  All transforms here are
unnormalised; :func:`radial_ft_normalized` divides by 3 pi^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from hexsum.exceptions import QuadratureError
from hexsum.hexgeom import GridSpec, HexPoint
from hexsum.kernels import e_regularized, j_closed_array, spline_pieces
from hexsum.oracle import QuadResult, _gl, j_truncated, quad_1d, truncate_tail
from hexsum.specfun import QuadratureControl, m2

FT_NORMALIZATION = 3 * math.pi**2


@dataclass(frozen=True)
class RadialProfile:
    """A function rho -> phi(rho) on [0, inf) with a decay envelope.

    ``func`` must accept numpy arrays.  ``envelope`` bounds |phi| from above
    and is non-increasing; it sets truncation points for infinite integrals.
    """

    func: Callable
    envelope: Callable | None = None
    continuous_at_0: bool = True
    rho_phi_integrable: bool = True
    name: str = "phi"

    def __post_init__(self):
        probe = np.concatenate([[0.0], np.logspace(-3, 2, 23)])
        vals = np.asarray(self.func(probe), dtype=float)
        if vals.shape != probe.shape or not np.all(np.isfinite(vals)):
            raise ValueError(f"profile {self.name!r} must be finite and vectorised on [0, inf)")
        if self.envelope is not None:
            env = np.array([self.envelope(float(r)) for r in probe[1:]])
            if np.any(np.abs(vals[1:]) > env * (1 + 1e-12) + 1e-300):
                raise ValueError(f"envelope of {self.name!r} does not bound the profile")

    def __call__(self, rho):
        return self.func(rho)

    @classmethod
    def exponential(cls, rate: float, scale: float = 1.0) -> "RadialProfile":
        """scale * exp(-rate * rho)."""
        if not rate > 0:
            raise ValueError("rate must be positive")
        return cls(
            lambda r: scale * np.exp(-rate * np.asarray(r, dtype=float)),
            lambda r: abs(scale) * math.exp(-rate * r),
            name=f"{scale:g}*exp(-{rate:g} rho)",
        )

    @classmethod
    def power(cls, k: int) -> "RadialProfile":
        """rho^k, for use on finite balls only."""
        return cls(
            lambda r: np.asarray(r, dtype=float) ** k,
            rho_phi_integrable=False,
            name=f"rho^{k}",
        )

    @classmethod
    def constant(cls, c: float = 1.0) -> "RadialProfile":
        return cls(
            lambda r: np.full(np.shape(r), float(c)),
            rho_phi_integrable=(c == 0),
            envelope=(lambda r: 0.0) if c == 0 else None,
            name=f"const {c:g}",
        )


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms u_k >= 0 with weights w_k >= 0."""

    atoms: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        atoms = tuple(float(a) for a in self.atoms)
        weights = tuple(float(w) for w in self.weights)
        if len(atoms) != len(weights):
            raise ValueError("atoms and weights must have the same length")
        if any(not (math.isfinite(a) and a >= 0) for a in atoms):
            raise ValueError("atoms must be finite and nonnegative")
        if any(not (math.isfinite(w) and w >= 0) for w in weights):
            raise ValueError("weights must be finite and nonnegative")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def parse(cls, text: str) -> "DiscreteMeasure":
        """Parse ``"u:w,u:w,..."``; the empty string is the zero measure."""
        text = text.strip()
        if not text:
            return cls()
        atoms, weights = [], []
        for item in text.split(","):
            u, sep, w = item.partition(":")
            if not sep:
                raise ValueError(f"atom {item!r} is not of the form u:w")
            atoms.append(float(u))
            weights.append(float(w))
        return cls(tuple(atoms), tuple(weights))

    @property
    def mass(self) -> float:
        return float(sum(self.weights))

    def __iter__(self):
        return iter(zip(self.atoms, self.weights))


@dataclass(frozen=True)
class PositivityReport:
    grid: GridSpec
    minimum: float
    argmin: HexPoint | None
    violations: int
    tol: float
    skipped: int = 0
    evaluated: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if (self.violations == 0) != (self.minimum >= -self.tol):
            raise ValueError("violation count inconsistent with minimum")

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _report(grid, values, t1, t2, tol, skipped=0, notes=()):
    finite = np.isfinite(values)
    if not np.any(finite):
        return PositivityReport(grid, 0.0, None, 0, tol, skipped, 0, tuple(notes))
    masked = np.where(finite, values, np.inf)
    k = int(np.argmin(masked))
    minimum = float(masked[k])
    return PositivityReport(
        grid,
        minimum,
        HexPoint.from_pair(float(t1[k]), float(t2[k])),
        int(np.sum(values[finite] < -tol)),
        tol,
        skipped,
        int(finite.sum()),
        tuple(notes),
    )


# -- transforms ----------------------------------------------------------------


def _phase_rate(t: HexPoint) -> float:
    a, b, c = t.diffs()
    return (2 / 3) * max(abs(a), abs(b), abs(c))


def _finite_cutoff(phi: RadialProfile, r: float, tol: float, weight: Callable[[float], float]) -> float:
    if math.isfinite(r):
        return float(r)
    if not phi.rho_phi_integrable or phi.envelope is None:
        raise QuadratureError(f"profile {phi.name!r} has no integrable envelope; the transform diverges")
    return truncate_tail(lambda s: weight(s) * phi.envelope(s), tol)


def radial_ft_result(phi: RadialProfile, r: float, t: HexPoint, ctrl: QuadratureControl | None = None) -> QuadResult:
    """int_0^r E_rho(t) phi(rho) drho with its error estimate; r may be inf."""
    ctrl = ctrl or QuadratureControl(abs_tol=1e-12, rel_tol=1e-11, max_subdivisions=400)
    if not r > 0:
        raise ValueError("r must be positive")
    # |E_rho(t)| <= E_rho(0) = 6 rho
    P = _finite_cutoff(phi, r, ctrl.abs_tol, lambda s: 6 * s)
    if P == 0.0:
        return QuadResult(0.0, 0.0, 0, True)
    t1, t2, t3 = t.as_tuple()

    def f(rho):
        return float(e_regularized(rho, t1, t2, t3) * phi.func(rho))

    panels = min(2000, max(1, int(math.ceil(P * _phase_rate(t) / (2 * math.pi)))))
    res = quad_1d(f, 0.0, P, ctrl, panels=panels)
    tail = 0.0 if math.isfinite(r) else ctrl.abs_tol
    return QuadResult(res.value, res.error + tail, res.subdivisions, res.converged, res.message)


def radial_ft(phi: RadialProfile, r: float, t: HexPoint, ctrl: QuadratureControl | None = None) -> float:
    """Unnormalised transform of phi(||s||_H) restricted to ||s||_H <= r."""
    return float(radial_ft_result(phi, r, t, ctrl).require().value)


def radial_ft_normalized(phi: RadialProfile, r: float, t: HexPoint, ctrl=None) -> float:
    return radial_ft(phi, r, t, ctrl) / FT_NORMALIZATION


def exp_radial_ft_closed(a: float, t: HexPoint) -> float:
    """Transform of exp(-(2a/3) ||s||_H) over the whole plane, in closed form."""
    a = float(a)
    if not (a > 0 and math.isfinite(a)):
        raise ValueError(f"a must be positive, got {a!r}")
    t1, t2, t3 = t.as_tuple()
    d1, d2, d3 = t.diffs()
    a2 = a * a
    num = 27 * a2 * (2 * a2 + t1 * t1 + t2 * t2 + t3 * t3)
    den = 4 * (a2 + d1 * d1) * (a2 + d2 * d2) * (a2 + d3 * d3)
    return num / den


def exp_radial_ft_closed_array(a: float, t1, t2, t3):
    a2 = float(a) ** 2
    t1, t2, t3 = (np.asarray(v, dtype=float) for v in (t1, t2, t3))
    num = 27 * a2 * (2 * a2 + t1 * t1 + t2 * t2 + t3 * t3)
    den = 4 * (a2 + (t1 - t2) ** 2) * (a2 + (t2 - t3) ** 2) * (a2 + (t3 - t1) ** 2)
    return num / den


def radial_integral(phi: RadialProfile, r: float, ctrl: QuadratureControl | None = None) -> float:
    """int over {||s||_H <= r} of phi(||s||_H) ds = 6 int_0^r rho phi(rho) drho."""
    ctrl = ctrl or QuadratureControl()
    if not r > 0:
        raise ValueError("r must be positive")
    P = _finite_cutoff(phi, r, ctrl.abs_tol, lambda s: 6 * s)
    if P == 0.0:
        return 0.0
    res = quad_1d(lambda s: 6 * s * float(phi.func(s)), 0.0, P, ctrl).require()
    return float(res.value)


def psi_transform(phi: RadialProfile, u: float, ctrl: QuadratureControl | None = None) -> float:
    """psi(u) = 4 int_0^inf rho cos(2 rho u / 3) phi(rho) drho, truncated where the envelope allows."""
    ctrl = ctrl or QuadratureControl(abs_tol=1e-13, rel_tol=1e-12)
    u = float(u)
    if not (u >= 0 and math.isfinite(u)):
        raise ValueError(f"u must be finite and >= 0, got {u!r}")
    if not phi.rho_phi_integrable:
        raise QuadratureError(f"rho * phi is not integrable for {phi.name!r}")

    def f(rho):
        return 4 * rho * float(phi.func(rho))

    P = _finite_cutoff(phi, math.inf, ctrl.abs_tol, lambda s: 4 * s)
    kwargs = dict(epsabs=ctrl.abs_tol, epsrel=ctrl.rel_tol, limit=max(ctrl.max_subdivisions, 400))
    if u > 0.0:
        # QUADPACK's modified Clenshaw-Curtis rule for cosine weights
        kwargs.update(weight="cos", wvar=2 * u / 3)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, 0.0, P, **kwargs)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"psi transform failed at u={u}: {exc}") from exc
    return float(val)


def ft_via_spline(
    phi: RadialProfile, t: HexPoint, ctrl: QuadratureControl | None = None, *, order: int = 16, max_width: float = 1.0
) -> float:
    """int_0^inf psi(u) M(u|t) du, integrating psi over each knot interval.

    M is piecewise constant, so each piece contributes height times the
    integral of psi over the piece; that integral uses Gauss-Legendre on
    sub-panels of width at most ``max_width``, checked against half order.
    """
    ctrl = ctrl or QuadratureControl(abs_tol=1e-13, rel_tol=1e-12)
    cache: dict[float, float] = {}

    def psi(u):
        if u not in cache:
            cache[u] = psi_transform(phi, u, ctrl)
        return cache[u]

    total = 0.0
    for p, q, h in spline_pieces(t):
        p = max(p, 0.0)
        if q <= p:
            continue
        n_sub = max(1, int(math.ceil((q - p) / max_width)))
        edges = np.linspace(p, q, n_sub + 1)
        vals = []
        for n in (order, order // 2):
            x, w = _gl(n)
            s = 0.0
            for lo, hi in zip(edges[:-1], edges[1:]):
                nodes = lo + (hi - lo) * (x + 1) / 2
                s += (hi - lo) / 2 * sum(wi * psi(float(ui)) for wi, ui in zip(w, nodes))
            vals.append(s)
        if abs(vals[0] - vals[1]) > max(1e-9, 1e-8 * abs(vals[0])):
            raise QuadratureError(
                f"psi integral over [{p}, {q}] unresolved (diff {abs(vals[0] - vals[1]):.3g})"
            )
        total += h * vals[0]
    return float(total)


# -- positive definiteness -----------------------------------------------------


def m2_mixture(alpha: DiscreteMeasure, s):
    """phi(s) = sum_k w_k m2(s u_k)."""
    arr = np.asarray(s, dtype=float)
    out = np.zeros_like(arr)
    for u, w in alpha:
        out = out + w * m2(arr * u)
    return float(out) if out.ndim == 0 else out


def _m2_ft_array(u: float, t1, t2, t3):
    # int_0^inf E_rho(t) m2(rho u) drho = (2 / (3 u^2)) J(2 t / (3 u))
    f = 2 / (3 * u)
    return (2 / (3 * u * u)) * j_closed_array(f * t1, f * t2, f * t3)


def pd_field(alpha: DiscreteMeasure, t1, t2, t3):
    """Phi(t) = int_0^inf E_rho(t) phi(rho) drho for phi = m2_mixture(alpha, .).

    Points where some atom puts t on the J boundary band come back as NaN.
    Atoms at u = 0 add a constant to phi, whose transform is a point mass at
    the origin and is left out.
    """
    t1, t2, t3 = (np.asarray(v, dtype=float) for v in (t1, t2, t3))
    out = np.zeros(np.broadcast(t1, t2, t3).shape)
    for u, w in alpha:
        if u == 0.0 or w == 0.0:
            continue
        out = out + w * _m2_ft_array(u, t1, t2, t3)
    return out


def pd_certificate(
    alpha: DiscreteMeasure,
    grid: GridSpec,
    tol: float = 1e-3,
    ctrl: QuadratureControl | None = None,
    *,
    method: str = "closed",
) -> PositivityReport:
    """Scan Phi over the grid and report its minimum and violations below -tol.

    ``method="numeric"`` replaces the piecewise J by the truncated integral;
    it costs roughly a millisecond per point and atom.
    """
    if method not in ("closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if not tol >= 0:
        raise ValueError("tol must be nonnegative")
    _, _, t1, t2, t3 = grid.arrays()
    values = pd_field(alpha, t1, t2, t3)
    skipped = int(np.sum(~np.isfinite(values)))
    notes = []
    if any(u == 0.0 and w > 0 for u, w in alpha):
        notes.append("atom at u=0 contributes only a point mass at the origin")
    if method == "numeric":
        num = np.zeros_like(values)
        for u, w in alpha:
            if u == 0.0 or w == 0.0:
                continue
            f = 2 / (3 * u)
            for k in range(values.size):
                tp = HexPoint.from_pair(f * t1[k], f * t2[k])
                num[k] += w * (2 / (3 * u * u)) * j_truncated(tp)
        values = np.where(np.isfinite(values), num, np.nan)
    return _report(grid, values, t1, t2, tol, skipped, notes)


def gram_check(alpha: DiscreteMeasure, points: list[HexPoint]) -> float:
    """Smallest eigenvalue of [phi(||t_j - t_k||_H)] with phi = m2_mixture(alpha, .)."""
    n = len(points)
    if n == 0:
        raise ValueError("need at least one point")
    if n > 64:
        raise ValueError(f"gram_check is limited to 64 points, got {n}")
    T = np.array([p.as_tuple() for p in points])
    dist = np.max(np.abs(T[:, None, :] - T[None, :, :]), axis=2)
    gram = m2_mixture(alpha, dist)
    gram = 0.5 * (gram + gram.T)
    try:
        eig = np.linalg.eigvalsh(gram)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - symmetric input
        raise QuadratureError(f"eigensolve failed: {exc}") from exc
    return float(eig[0])


__all__ = [
    "DiscreteMeasure",
    "FT_NORMALIZATION",
    "PositivityReport",
    "RadialProfile",
    "exp_radial_ft_closed",
    "exp_radial_ft_closed_array",
    "ft_via_spline",
    "gram_check",
    "m2_mixture",
    "pd_certificate",
    "pd_field",
    "psi_transform",
    "radial_ft",
    "radial_ft_normalized",
    "radial_ft_result",
    "radial_integral",
]
