"""Seeded property suites behind the ``verify`` CLI subcommand.

Each suite returns a list of (name, passed, detail) tuples; the CLI
prints one machine-readable line per check.  The heavy acceptance
versions of these properties live in the test suite; these runs are
sized to finish quickly while still exercising every inequality.
"""

from __future__ import annotations

import numpy as np

from . import decay, rhs, series, spectral
from .grid import GridSpec

Check = tuple[str, bool, str]


def _fields(d: int, count: int, seed: int, target: float = 0.1):
    grid = GridSpec(d=d, n=64 if d == 1 else 32)
    rng = np.random.default_rng(seed)
    for i in range(count):
        band = (1, int(rng.integers(2, grid.n // 4)))
        f = spectral.random_band_field(grid, band, int(rng.integers(0, 2**31)))
        sf = spectral.analyze(f, grid)
        x1 = spectral.s_norm(sf, 1.0)
        yield f * (target / x1), grid


def verify_norms(seed: int = 0, count: int = 200) -> list[Check]:
    checks: list[Check] = []
    worst_rt = 0.0
    ineq23 = True
    holder = True
    hy_grad = True
    hy_sup = True
    for d in (1, 2):
        for f, grid in _fields(d, count, seed + d):
            sf = spectral.analyze(f, grid)
            back = spectral.synthesize(sf)
            worst_rt = max(worst_rt, float(np.max(np.abs(back - f))) / max(1e-300, float(np.max(np.abs(f)))))
            for s in (-float(d), 0.0, 1.0):
                sup, _ = spectral.besov_s_norm(sf, s)
                if sup > spectral.s_norm(sf, s) * (1 + 1e-12):
                    ineq23 = False
            rep = spectral.check_interpolation(sf, -1.0, 0.5, 2.0)
            holder = holder and rep.holds
            grad = spectral.gradient(sf)
            gsup = max(float(np.max(np.abs(g))) for g in grad)
            hy_grad = hy_grad and gsup <= spectral.s_norm(sf, 1.0) * (1 + 1e-12)
            hy_sup = hy_sup and float(np.max(np.abs(f))) <= spectral.s_norm(sf, 0.0) * (1 + 1e-12)
    checks.append(("norms.round_trip_1e-12", worst_rt <= 1e-12, f"max rel err {worst_rt:.2e}"))
    checks.append(("norms.dyadic_sup_le_full", ineq23, "constant-1 annulus bound"))
    checks.append(("norms.holder_interpolation", holder, "constant-1 interpolation"))
    checks.append(("norms.grad_sup_le_s1", hy_grad, "||grad f||_inf <= ||f||_1"))
    checks.append(("norms.sup_le_s0", hy_sup, "||f||_inf <= ||f||_0"))
    return checks


def verify_rhs(seed: int = 0) -> list[Check]:
    checks: list[Check] = []
    quad = rhs.QuadratureConfig()
    # refinement of the split identity, d = 1
    res = {}
    for n in (128, 256):
        grid = GridSpec(d=1, n=n)
        x = grid.coords()[0]
        res[n] = rhs.consistency_residual(0.1 * np.cos(x), grid, quad)
    order_ok = res[128] / res[256] >= 3.5
    checks.append(
        ("rhs.residual_order_d1", order_ok, f"residuals {res[128]:.2e} -> {res[256]:.2e}")
    )
    res2 = {}
    for n in (16, 32):
        grid = GridSpec(d=2, n=n)
        X, Y = grid.coords()
        res2[n] = rhs.consistency_residual(0.1 * (np.cos(X) + np.cos(Y)), grid, quad)
    order2_ok = res2[16] / res2[32] >= 2.8
    checks.append(
        ("rhs.residual_order_d2", order2_ok, f"residuals {res2[16]:.2e} -> {res2[32]:.2e}")
    )
    # cubic smallness of the nonlinear remainder
    grid = GridSpec(d=1, n=128)
    x = grid.coords()[0]
    ratios = []
    for eps in (1e-1, 1e-2):
        t = rhs.nonlinear_t(eps * np.cos(x), grid, quad)
        ratios.append(float(np.max(np.abs(t))) / eps**3)
    cubic_ok = abs(ratios[1] / ratios[0] - 1.0) < 0.1
    checks.append(("rhs.cubic_smallness", cubic_ok, f"|T|/eps^3 ratios {ratios}"))
    zero_ok = float(np.max(np.abs(rhs.split_rhs(np.zeros(grid.shape), grid, quad)))) == 0.0
    checks.append(("rhs.zero_field", zero_ok, "split_rhs(0) == 0"))
    return checks


def verify_bounds(seed: int = 0, count: int = 25) -> list[Check]:
    checks: list[Check] = []
    quad = rhs.QuadratureConfig()
    for d in (1, 2):
        ok = True
        for f, grid in _fields(d, count, seed + 10 * d, target=0.15):
            for s in (1.0, 2.0):
                rep = rhs.fourier_bound_report(f, grid, s, quad)
                ok = ok and rep.holds
        checks.append((f"bounds.majorant_d{d}", ok, f"{count} fields, s in (1, 2)"))
    # series / closed-form identity
    ident_ok = all(
        abs(series.majorant_series(xv) - series.closed_form_majorant(xv)) < 1e-10
        for xv in (0.1, 0.3, 0.5)
    )
    checks.append(("bounds.series_closed_form", ident_ok, "majorant identity to 1e-10"))
    k3 = series.admissible_constant(3, 0.01)
    c2 = series.admissible_constant(2, 0.001)
    checks.append(("bounds.admissible_3d", k3 >= 0.2, f"k* = {k3:.4f}"))
    checks.append(("bounds.admissible_2d", c2 >= 1.0 / 3.0, f"c* = {c2:.4f}"))
    return checks


def verify_decay(seed: int = 0) -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for d in (1, 2):
        for a in (0.0, 1.0):
            profile = decay.RadialProfile(a=a, d=d)
            for s in (0.0, 1.0, 2.0):
                for t in (0.0, 3.0, 100.0):
                    closed = decay.semigroup_norm_closed(profile, s, t)
                    quadv = decay.semigroup_norm_quadrature(profile, s, t)
                    worst = max(worst, abs(closed - quadv) / closed)
    checks.append(("decay.gamma_identity", worst <= 1e-6, f"max rel diff {worst:.2e}"))
    slope_ok = True
    times = np.geomspace(10.0, 1000.0, 40)
    for d in (1, 2):
        for a in (0.0, 1.0):
            profile = decay.RadialProfile(a=a, d=d)
            for s in (0.0, 1.0, 2.0):
                vals = [decay.semigroup_norm_closed(profile, s, t) for t in times]
                fit = decay.fit_exponent(times, vals, (10.0, 1000.0))
                expected = -(s + a + d)
                slope_ok = slope_ok and abs(fit.slope - expected) <= 0.01 * abs(expected)
    checks.append(("decay.semigroup_slopes", slope_ok, "slopes within 1% of -(s+a+d)"))
    return checks


SUITES = {
    "norms": verify_norms,
    "rhs": verify_rhs,
    "bounds": verify_bounds,
    "decay": verify_decay,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for key in ("norms", "rhs", "bounds", "decay"):
            out.extend(SUITES[key](seed))
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed)
