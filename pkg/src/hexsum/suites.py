"""Closed form versus oracle checks, grouped into named suites.

Every check returns a :class:`Check`; suites are lists of checks run with a
shared seeded generator.  The CLI ``verify`` command and the acceptance tests
both draw on these functions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from hexsum import kernels, oracle, radial, summability
from hexsum.exceptions import DegenerateKnotsError
from hexsum.hexgeom import GridSpec, HexPoint, region_classify
from hexsum.specfun import f_delta_gap

DEFAULT_SEED = 42
SUITES = ("dirichlet", "ekernel", "cesaro", "radial", "spline", "j", "psi")
WITNESS_DELTAS = (1.2, 1.5, 1.8)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    start = time.perf_counter()
    ok, detail = fn()
    return Check(name, bool(ok), detail, time.perf_counter() - start)


def random_points(rng: np.random.Generator, n: int, lo: float = -5.0, hi: float = 5.0, min_gap: float = 1e-3):
    """n points with every t_i in [lo, hi] and pairwise differences at least min_gap apart."""
    out = []
    while len(out) < n:
        t1, t2 = rng.uniform(lo, hi, 2)
        t3 = -t1 - t2
        if not lo <= t3 <= hi:
            continue
        p = HexPoint(t1, t2, t3)
        if min(abs(d) for d in p.diffs()) < min_gap:
            continue
        out.append(p)
    return out


# -- Dirichlet and E kernels ---------------------------------------------------


def check_dirichlet_oracle(rng, n=100, rel_tol=1e-7, imag_tol=1e-10) -> Check:
    def run():
        worst_rel = worst_imag = 0.0
        pts = random_points(rng, n)
        rhos = rng.choice([0.5, 1.0, 2.0], size=n)
        for rho, t in zip(rhos, pts):
            q = oracle.dirichlet_oracle(float(rho), t).require()
            c = kernels.dirichlet(float(rho), t).value
            worst_rel = max(worst_rel, abs(q.value.real - c) / max(abs(c), 1e-300))
            worst_imag = max(worst_imag, abs(q.value.imag))
        ok = worst_rel <= rel_tol and worst_imag <= imag_tol
        return ok, f"max rel err {worst_rel:.2e} (tol {rel_tol:g}), max |imag| {worst_imag:.2e} at {n} points"

    return _timed("dirichlet closed form vs hexagon quadrature", run)


def check_dirichlet_origin() -> Check:
    def run():
        ev = kernels.dirichlet(1.0, HexPoint.origin())
        return abs(ev.value - 3.0) <= 1e-15 and ev.method == kernels.LIMIT, f"D_1(0) = {ev.value!r} via {ev.method}"

    return _timed("dirichlet at the origin equals the hexagon area", run)


def check_derivative_identity(rng, n=100, h=1e-5, tol=1e-6) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n):
            rho = float(rng.uniform(0.5, 3.0))
            fd = oracle.finite_diff_rho(lambda r: kernels.dirichlet(r, t).value, rho, h)
            worst = max(worst, abs(fd - kernels.e_kernel(rho, t).value))
        return worst <= tol, f"max |dD/drho - E| {worst:.2e} (tol {tol:g}) at {n} points"

    return _timed("finite-difference derivative of D matches E", run)


RADIAL_TEST_PROFILES = (
    ("1", lambda r: np.ones_like(np.asarray(r, dtype=float))),
    ("rho", lambda r: np.asarray(r, dtype=float)),
    ("exp(-rho)", lambda r: np.exp(-np.asarray(r, dtype=float))),
)


def check_radial_reduction(rng, n=4, r=2.0, tol=1e-6) -> Check:
    def run():
        worst = 0.0
        pts = random_points(rng, n, -3, 3)
        for label, fn in RADIAL_TEST_PROFILES:
            phi = radial.RadialProfile(fn, rho_phi_integrable=False, name=label)
            for t in pts:
                q = oracle.radial_oracle(r, fn, t).require()
                worst = max(worst, abs(q.value.real - radial.radial_ft(phi, r, t)))
        return worst <= tol, f"max abs err {worst:.2e} (tol {tol:g}) for phi in 1, rho, exp(-rho)"

    return _timed("2-D radial integral equals int E_rho phi", run)


def check_e_scaling(rng, n=20, tol=1e-10) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-2):
            rho, u = rng.uniform(0.2, 4.0, 2)
            lhs = kernels.e_kernel(rho / u, t).value
            rhs = kernels.e_kernel(rho, t.scaled(1 / u)).value / u
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-12))
        return worst <= tol, f"max rel err {worst:.2e} (tol {tol:g})"

    return _timed("E scaling E_{rho/u}(t) = E_rho(t/u)/u", run)


# -- Cesaro kernel ---------------------------------------------------------------


def check_positivity_delta2(R_values=(1.0, 5.0, 10.0), n=201) -> Check:
    def run():
        grid = GridSpec.square(-15, 15, n)
        parts, ok = [], True
        for R in R_values:
            rep = summability.positivity_scan(R, 2.0, grid)
            ok &= rep.violations == 0
            parts.append(f"R={R:g} min {rep.minimum:.3g}")
        return ok, "; ".join(parts) + f" (tol 1e-10 R^2, {n}x{n} grid)"

    return _timed("Cesaro kernel with delta=2 is nonnegative", run)


def check_sum_of_squares(rng, n=10_000) -> Check:
    def run():
        t1, t2 = rng.uniform(-20, 20, (2, n))
        t3 = -t1 - t2
        gd = kernels.g_direct_array(t1, t2, t3)
        gs = kernels.g_sos_array(t1, t2, t3)
        worst = float(np.max(np.abs(gd - gs) / (1 + np.abs(gd))))
        return worst <= 1e-10 and float(gs.min()) >= 0, f"max |G - SOS|/(1+|G|) {worst:.2e} at {n} points"

    return _timed("sum-of-squares form of G", run)


def check_witness(delta: float, R: float = 1.0) -> Check:
    def run():
        t = HexPoint(3 * math.pi / R, -3 * math.pi / R, 0.0)
        val = kernels.cesaro_kernel(R, delta, t).value
        gap = f_delta_gap(delta, 2 * math.pi, 4 * math.pi)
        expect = R * R / (2 * math.pi**2) * gap
        rel = abs(val - expect) / abs(expect) if expect else abs(val)
        if delta < 2:
            ok = val < 0 and rel <= 1e-8
            return ok, f"D={val:.6g} < 0, matches (R^2/2pi^2)(F(2pi)-F(4pi)) to {rel:.1e}"
        ok = val >= -1e-10 * R * R
        return ok, f"D={val:.6g} >= 0"

    tag = "negative" if delta < 2 else "nonnegative"
    return _timed(f"witness point for delta={delta:g} is {tag}", run)


def check_witness_scan(delta: float, R: float = 1.0) -> Check:
    def run():
        step = math.pi / R / 8
        grid = GridSpec("hexplane", (3 * math.pi / R, -3 * math.pi / R), (16 * step, 16 * step), (33, 33))
        rep = summability.positivity_scan(R, delta, grid)
        want = rep.violations > 0 if delta < 2 else rep.violations == 0
        return want, f"{rep.violations} values below -1e-10 R^2, min {rep.minimum:.3g}"

    tag = "finds" if delta < 2 else "finds no"
    return _timed(f"positivity scan {tag} violations for delta={delta:g}", run)


def check_cesaro_oracle(rng, n=10, tol=1e-9) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-2):
            R = float(rng.uniform(0.5, 4.0))
            delta = float(rng.choice([0.5, 1.0, 1.5, 2.0, 3.0]))
            q = oracle.cesaro_oracle(R, delta, t).require()
            c = kernels.cesaro_kernel(R, delta, t).value
            worst = max(worst, abs(q.value - c) / max(1.0, abs(c)))
        return worst <= tol, f"max err {worst:.2e} (tol {tol:g}) against the averaged Dirichlet kernel"

    return _timed("Cesaro closed form vs averaged Dirichlet kernel", run)


def cesaro_riesz_cases(rng, n=50):
    deltas = (1.0, 1.5, 2.0, 3.0)
    cases = []
    for k, t in enumerate(random_points(rng, n, -3, 3)):
        rate = float(rng.uniform(0.3, 2.0))
        R = float(rng.uniform(1.0, 10.0))
        cases.append((rate, R, deltas[k % 4], t))
    return cases


def check_cesaro_riesz(rng, n=50, tol=1e-6) -> Check:
    def run():
        worst = 0.0
        for rate, R, delta, t in cesaro_riesz_cases(rng, n):
            phi = radial.RadialProfile.exponential(rate)
            p = summability.SummabilityParams(R, delta)
            a = summability.riesz_mean_radial(phi, p, t)
            b = summability.cesaro_mean_radial(phi, p, t)
            worst = max(worst, abs(a - b) / max(abs(a), 1e-12))
        return worst <= tol, f"max rel diff {worst:.2e} (tol {tol:g}) over {n} cases"

    return _timed("Cesaro and Riesz means agree", run)


def check_convergence_monotone(R_list=(5.0, 10.0, 20.0, 40.0)) -> Check:
    def run():
        rows = summability.convergence_experiment(1.0, 2.0, R_list, [HexPoint.origin()])
        errs = [r.abs_err for r in rows]
        ok = all(b < a for a, b in zip(errs, errs[1:]))
        return ok, "errors " + ", ".join(f"{e:.4g}" for e in errs)

    return _timed("convergence errors decrease along the R ladder", run)


def check_convergence_limit(R: float = 200.0, tol: float = 1e-4) -> Check:
    def run():
        (row,) = summability.convergence_experiment(1.0, 2.0, [R], [HexPoint.origin()])
        return row.abs_err < tol, f"error at R={R:g} is {row.abs_err:.4g} (target < {tol:g})"

    return _timed(f"convergence error below {tol:g} at R={R:g}", run)


# -- radial transforms -----------------------------------------------------------


def check_example_pair(rng, n=20, tol=1e-6) -> Check:
    def run():
        worst = 0.0
        for a in (0.5, 1.0, 2.0):
            phi = radial.RadialProfile.exponential(2 * a / 3)
            for t in random_points(rng, n, -3, 3):
                c = radial.exp_radial_ft_closed(a, t)
                q = radial.radial_ft(phi, math.inf, t)
                worst = max(worst, abs(q - c) / abs(c))
        at0 = radial.exp_radial_ft_closed(1.0, HexPoint.origin())
        ok = worst <= tol and abs(at0 - 13.5) <= 1e-9
        return ok, f"max rel err {worst:.2e} (tol {tol:g}); value at origin {at0!r}"

    return _timed("exponential transform pair", run)


def check_radial_integrals() -> Check:
    def run():
        vals = (
            radial.radial_integral(radial.RadialProfile.constant(1.0), 1.0),
            radial.radial_integral(radial.RadialProfile.power(1), 1.0),
            radial.radial_integral(radial.RadialProfile.exponential(2 / 3), math.inf),
        )
        want = (3.0, 2.0, 13.5)
        ok = all(abs(v - w) <= 1e-9 for v, w in zip(vals, want))
        return ok, "values " + ", ".join(f"{v:.12g}" for v in vals)

    return _timed("radial integrals of 1, rho, exp(-2 rho/3)", run)


def check_pd_certificate(atoms: str, tol: float = 1e-3, n: int = 101) -> Check:
    def run():
        rep = radial.pd_certificate(radial.DiscreteMeasure.parse(atoms), GridSpec.square(-5, 5, n), tol)
        return rep.violations == 0, f"min {rep.minimum:.3g}, {rep.violations} violations, {rep.skipped} boundary points skipped"

    return _timed(f"transform of the m2 mixture {atoms} is nonnegative", run)


def check_gram(rng, n=16, tol=1e-8) -> Check:
    def run():
        pts = random_points(rng, n, -3, 3, min_gap=0.0)
        alpha = radial.DiscreteMeasure((1.0,), (1.0,))
        lo = radial.gram_check(alpha, pts)
        lo10 = radial.gram_check(alpha, [p.scaled(10) for p in pts])
        return min(lo, lo10) >= -tol, f"smallest eigenvalues {lo:.3g} and {lo10:.3g} (scaled by 10)"

    return _timed("Gram matrix of an m2 mixture is positive semidefinite", run)


# -- B-splines -------------------------------------------------------------------


def check_spline_mass(rng, n=100, tol=1e-12) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-6):
            worst = max(worst, abs(kernels.integrate_pieces(kernels.spline_pieces(t)) - 3.0))
        return worst <= tol, f"max |int M - 3| {worst:.2e} at {n} points"

    return _timed("the spline M has total mass 3", run)


def check_spline_scaling(rng, n=100, tol=1e-12) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-3):
            u = float(rng.uniform(0.2, 5.0))
            lhs = kernels.m_spline(u, t.scaled(u))
            rhs = kernels.m_spline(1.0, t) / u
            worst = max(worst, abs(lhs - rhs))
        return worst <= tol, f"max |M(u|ut) - M(1|t)/u| {worst:.2e}"

    return _timed("spline scaling M(u|ut) = M(1|t)/u", run)


def check_spline_e_kernel(rng, n=50, tol=1e-10) -> Check:
    def run():
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-3):
            rho = float(rng.uniform(0.2, 5.0))
            worst = max(worst, abs(kernels.e_kernel_spline(rho, t) - kernels.e_kernel(rho, t).value))
        return worst <= tol, f"max abs err {worst:.2e} (tol {tol:g})"

    return _timed("E kernel from the spline representation", run)


def check_degenerate_knots() -> Check:
    def run():
        try:
            kernels.m1_spline(0.5, HexPoint(0.5, 0.5, -1.0))
        except DegenerateKnotsError:
            return True, "collapsed knot pair raises"
        return False, "collapsed knot pair was accepted"

    return _timed("degenerate knots are rejected", run)


# -- spider function -------------------------------------------------------------


def check_j_nonnegative(n=301) -> Check:
    def run():
        _, _, t1, t2, t3 = GridSpec.square(-6, 6, n).arrays()
        j = kernels.j_closed_array(t1, t2, t3)
        finite = np.isfinite(j)
        lo = float(np.min(j[finite]))
        return lo >= 0, f"min {lo:.3g} over {int(finite.sum())} points ({int((~finite).sum())} on the band)"

    return _timed("J is nonnegative off the boundary band", run)


def j_sample_points(rng, n=50, margin=0.05):
    """n random points spread evenly over the four region classes, ``margin`` away from the band."""
    quota = {k: n // 4 + (1 if k < n % 4 else 0) for k in range(4)}
    buckets: dict[int, list[HexPoint]] = {k: [] for k in range(4)}
    while any(len(buckets[k]) < quota[k] for k in range(4)):
        p = HexPoint.from_pair(*rng.uniform(-3, 3, 2))
        if min(abs(abs(d) - 1) for d in p.diffs()) < margin:
            continue
        k = region_classify(p).outside_count
        if len(buckets[k]) < quota[k]:
            buckets[k].append(p)
    return [p for k in range(4) for p in buckets[k]]


def check_j_truncated(rng, n=50, tol=1e-3) -> Check:
    def run():
        worst, by_region = 0.0, {}
        pts = j_sample_points(rng, n)
        for p in pts:
            err = abs(oracle.j_truncated(p) - kernels.j_closed(p))
            name = region_classify(p).name
            by_region[name] = max(by_region.get(name, 0.0), err)
            worst = max(worst, err)
        regions = ", ".join(f"{k} {v:.1e}" for k, v in sorted(by_region.items()))
        return worst <= tol, f"max abs err {worst:.2e} (tol {tol:g}) over {len(pts)} points; {regions}"

    return _timed("J piecewise form vs truncated integral", run)


def check_sine_product(tol=1e-3) -> Check:
    def run():
        parts, ok = [], True
        for u in (0.5, 2.0, 3.0):
            want = 0.0 if u < 1 else math.pi / (2 * u)
            got = oracle.sine_product_truncated(u)
            ok &= abs(got - want) <= tol
            parts.append(f"u={u:g}: {got:.6f} vs {want:.6f}")
        return ok, "; ".join(parts)

    return _timed("sine-product integral behind J", run)


def check_j_regions() -> Check:
    def run():
        cases = [
            (HexPoint(0.2, 0.1, -0.3), 0, 0.0),
            (HexPoint(0.6, 0.0, -0.6), 1, 1.5 * math.pi / (0.6 * 0.6)),
            (HexPoint(2.0, -1.0, -1.0), 2, -1.5 * math.pi / (3.0 * -3.0)),
            (HexPoint(3.0, 0.5, -3.5), 3, 0.0),
        ]
        bad = []
        for t, outside, want in cases:
            label = region_classify(t)
            got = kernels.j_closed(t)
            if label.outside_count != outside or abs(got - want) > 1e-12 * max(1, abs(want)):
                bad.append(f"{t.as_tuple()}: {label.name} J={got}")
        return not bad, "E---, E--+, E-++ and E+++ values" if not bad else "; ".join(bad)

    return _timed("J region by region", run)


# -- psi transform ---------------------------------------------------------------


def check_psi_exponential(n=101, tol=1e-8) -> Check:
    def run():
        # 4 int rho cos(u rho) exp(-rho) drho in the 2/3-phase convention
        phi = radial.RadialProfile.exponential(2 / 3, 4 / 9)
        us = np.linspace(0, 5, n)
        worst = max(abs(radial.psi_transform(phi, u) - 4 * (1 - u * u) / (1 + u * u) ** 2) for u in us)
        return worst <= tol, f"max abs err {worst:.2e} on {n} samples of [0, 5]"

    return _timed("psi transform of the exponential", run)


def check_spline_route(rng, n=20, tol=1e-6) -> Check:
    def run():
        phi = radial.RadialProfile.exponential(1.0)
        worst = 0.0
        for t in random_points(rng, n, -3, 3, min_gap=1e-2):
            a = radial.ft_via_spline(phi, t)
            b = radial.radial_ft(phi, math.inf, t)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-12))
        return worst <= tol, f"max rel err {worst:.2e} (tol {tol:g}) at {n} points"

    return _timed("transform via psi and the spline M vs direct route", run)


# -- suites ----------------------------------------------------------------------


def suite_checks(name: str, seed: int = DEFAULT_SEED, delta: float | None = None) -> list[Callable[[], Check]]:
    """Deferred checks of one suite; each suite draws from its own generator."""
    rng = np.random.default_rng(seed)
    if name == "dirichlet":
        return [check_dirichlet_origin, lambda: check_dirichlet_oracle(rng)]
    if name == "ekernel":
        return [
            lambda: check_derivative_identity(rng),
            lambda: check_radial_reduction(rng),
            lambda: check_e_scaling(rng),
        ]
    if name == "cesaro":
        deltas = WITNESS_DELTAS + (2.0, 2.5, 3.0) if delta is None else (float(delta),)
        out = [check_positivity_delta2, lambda: check_sum_of_squares(rng)]
        for d in deltas:
            out += [lambda d=d: check_witness(d), lambda d=d: check_witness_scan(d)]
        out += [
            lambda: check_cesaro_oracle(rng),
            lambda: check_cesaro_riesz(rng),
            check_convergence_monotone,
        ]
        return out
    if name == "radial":
        return [
            lambda: check_example_pair(rng),
            check_radial_integrals,
            lambda: check_pd_certificate("1:1"),
            lambda: check_pd_certificate("1:1,2:0.5"),
            lambda: check_gram(rng),
        ]
    if name == "spline":
        return [
            lambda: check_spline_mass(rng),
            lambda: check_spline_scaling(rng),
            lambda: check_spline_e_kernel(rng),
            check_degenerate_knots,
        ]
    if name == "j":
        return [check_j_regions, check_j_nonnegative, lambda: check_j_truncated(rng), check_sine_product]
    if name == "psi":
        return [check_psi_exponential, lambda: check_spline_route(rng)]
    if name == "all":
        return [c for s in SUITES for c in suite_checks(s, seed, delta)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")


def run_suite(name: str, seed: int = DEFAULT_SEED, delta: float | None = None, on_check=None) -> list[Check]:
    results = []
    for thunk in suite_checks(name, seed, delta):
        check = thunk()
        results.append(check)
        if on_check is not None:
            on_check(check)
    return results
