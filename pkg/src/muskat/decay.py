"""Linear-semigroup norms on the frequency continuum and decay-rate checks.

The half-Laplacian semigroup acting on a radial spectral profile
``|g0^|(r) = amplitude * r^a exp(-r)`` has every weighted norm in closed
Gamma-function form, which makes the family an exact oracle for the
algebraic decay exponents: the s-weighted norm decays like
``(1+t)^(-(s+a+d))``, i.e. with exponent ``-s + nu`` at the endpoint
identification ``nu = -(a+d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DivergentNormError, PreconditionError

#: Surface measure of the unit sphere per dimension (sigma_1 counts both half-lines).
SPHERE_MEASURE = {1: 2.0, 2: 2.0 * np.pi}


@dataclass(frozen=True)
class RadialProfile:
    """Radial spectral profile |g0^|(r) = amplitude * r^a exp(-r) in dimension d."""

    a: float
    d: int
    amplitude: float = 1.0

    def __post_init__(self):
        if self.d not in (1, 2):
            raise PreconditionError(f"profile dimension must be 1 or 2, got {self.d}")
        if self.a + self.d <= 0:
            raise PreconditionError(
                f"need a + d > 0 for finite endpoint norms, got a={self.a}, d={self.d}"
            )

    @property
    def endpoint_nu(self) -> float:
        """The largest nu with a finite dyadic-sup norm: nu = -(a + d)."""
        return -(self.a + self.d)


def semigroup_norm_closed(profile: RadialProfile, s: float, t: float) -> float:
    """Exact s-weighted norm of the semigroup: sigma_d Gamma(s+a+d) (1+t)^-(s+a+d)."""
    p = s + profile.a + profile.d
    if p <= 0:
        raise DivergentNormError(f"norm diverges: s + a + d = {p} <= 0")
    if t < 0:
        raise PreconditionError(f"time must be nonnegative, got {t}")
    sigma = SPHERE_MEASURE[profile.d]
    return profile.amplitude * sigma * math.gamma(p) * (1.0 + t) ** (-p)


def semigroup_norm_quadrature(profile: RadialProfile, s: float, t: float) -> float:
    """Adaptive radial quadrature of sigma_d int r^(s+a+d-1) exp(-r(1+t)) dr.

    Independent oracle for :func:`semigroup_norm_closed`; relative
    accuracy around 1e-10.
    """
    p = s + profile.a + profile.d
    if p <= 0:
        raise DivergentNormError(f"norm diverges: s + a + d = {p} <= 0")
    if t < 0:
        raise PreconditionError(f"time must be nonnegative, got {t}")
    sigma = SPHERE_MEASURE[profile.d]
    rate = 1.0 + t

    def integrand(r):
        return r ** (p - 1.0) * math.exp(-rate * r)

    # split at the integrand scale 1/rate to help the adaptive rule
    split = 1.0 / rate
    v1, _ = integrate.quad(integrand, 0.0, split, epsabs=0.0, epsrel=1e-11, limit=200)
    v2, _ = integrate.quad(integrand, split, np.inf, epsabs=0.0, epsrel=1e-11, limit=200)
    return profile.amplitude * sigma * (v1 + v2)


def semigroup_besov_sup(profile: RadialProfile, nu: float, t: float = 0.0) -> float:
    """Dyadic-sup norm of the semigroup profile at exponent nu.

    Finite for nu >= -(a+d); each annulus integral is evaluated by
    quadrature and the sup taken over annuli carrying non-negligible
    mass.
    """
    if nu < profile.endpoint_nu - 1e-12:
        raise DivergentNormError(
            f"dyadic-sup norm diverges for nu={nu} < -(a+d)={profile.endpoint_nu}"
        )
    sigma = SPHERE_MEASURE[profile.d]
    rate = 1.0 + t
    p = nu + profile.a + profile.d

    def annulus(j):
        lo, hi = 2.0 ** (j - 1), 2.0**j
        v, _ = integrate.quad(
            lambda r: r ** (p - 1.0) * math.exp(-rate * r), lo, hi, epsrel=1e-11
        )
        return profile.amplitude * sigma * v

    best = 0.0
    for j in range(-60, 12):
        best = max(best, annulus(j))
    return best


@dataclass
class FitResult:
    slope: float
    intercept: float
    r2: float
    window: tuple[float, float]


def fit_exponent(times, values, window: tuple[float, float]) -> FitResult:
    """Least-squares slope of log(values) against log(1+t) on a time window.

    Requires at least 10 samples inside the window and strictly positive
    values there.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    t0, t1 = window
    if not t0 < t1:
        raise PreconditionError(f"empty fit window {window}")
    sel = (t >= t0) & (t <= t1)
    if int(sel.sum()) < 10:
        raise PreconditionError(f"need >= 10 samples in window {window}, got {int(sel.sum())}")
    if np.any(v[sel] <= 0):
        raise PreconditionError("fit requires positive values on the window")
    x = np.log1p(t[sel])
    y = np.log(v[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    r2 = min(max(r2, 0.0), 1.0)
    return FitResult(slope=float(slope), intercept=float(intercept), r2=r2, window=(t0, t1))


def default_fit_window(t_end: float) -> tuple[float, float]:
    """Last decade of the recorded time, where (1+t) is essentially t."""
    return (t_end / 10.0, t_end)


@dataclass
class DecayLemmaReport:
    hypothesis_ok: bool
    besov_ok: bool
    conclusion_ok: bool
    empirical_C: float
    besov_sup: float
    weighted_sup: float
    weighted_argmax: float


def decay_lemma_check(
    times,
    mu_series,
    mu1_series,
    besov_series,
    mu: float,
    nu: float,
    C: float,
    besov_bound: float,
    weighted_bound: float,
) -> DecayLemmaReport:
    """Numerical check of the comparison lemma behind the algebraic rates.

    Hypothesis: d/dt ||g||_mu <= -C ||g||_{mu+1} (finite differences,
    with the usual dt^2 allowance) together with a uniform dyadic-sup
    bound at exponent nu < mu.  Conclusion: the weighted supremum
    sup_t (1+t)^(mu-nu) ||g||_mu stays below ``weighted_bound``.
    """
    if not nu < mu:
        raise PreconditionError(f"decay lemma needs nu < mu, got nu={nu}, mu={mu}")
    t = np.asarray(times, dtype=float)
    v = np.asarray(mu_series, dtype=float)
    w = np.asarray(mu1_series, dtype=float)
    b = np.asarray(besov_series, dtype=float)
    if t.size < 3 or v.size != t.size or w.size != t.size or b.size != t.size:
        raise PreconditionError("decay lemma check needs aligned series with >= 3 samples")
    dv = (v[2:] - v[:-2]) / (t[2:] - t[:-2])
    dt_f = t[2:] - t[1:-1]
    dt_b = t[1:-1] - t[:-2]
    d2v = 2.0 * ((v[2:] - v[1:-1]) / dt_f - (v[1:-1] - v[:-2]) / dt_b) / (t[2:] - t[:-2])
    half = 0.5 * (t[2:] - t[:-2])
    tol = np.maximum(1e-8, 0.5 * half**2 * np.abs(d2v))
    viol = dv + C * w[1:-1]
    hypothesis_ok = bool(np.all(viol <= tol))
    pos = w[1:-1] > 0
    empirical = float(np.min(-dv[pos] / w[1:-1][pos])) if np.any(pos) else np.inf
    besov_sup = float(np.max(b))
    besov_ok = besov_sup <= besov_bound
    weighted = (1.0 + t) ** (mu - nu) * v
    idx = int(np.argmax(weighted))
    weighted_sup = float(weighted[idx])
    conclusion_ok = weighted_sup <= weighted_bound
    return DecayLemmaReport(
        hypothesis_ok=hypothesis_ok,
        besov_ok=besov_ok,
        conclusion_ok=conclusion_ok,
        empirical_C=empirical,
        besov_sup=besov_sup,
        weighted_sup=weighted_sup,
        weighted_argmax=float(t[idx]),
    )


def decay_lemma_check_record(
    record,
    mu: float,
    nu: float,
    C: float,
    besov_bound: float | None = None,
    weighted_bound: float | None = None,
) -> DecayLemmaReport:
    """Run :func:`decay_lemma_check` on a recorded trajectory.

    The record must carry norm series for ``mu`` and ``mu + 1`` and a
    dyadic-sup series at ``nu``; the bounds default to 2x (dyadic sup)
    and 3x (weighted sup) of the initial values.
    """
    times = record.times
    v = record.series(mu)
    w = record.series(mu + 1.0)
    b = record.besov_series(nu)
    if besov_bound is None:
        besov_bound = 2.0 * float(b[0])
    if weighted_bound is None:
        weighted_bound = 3.0 * float((1.0 + times[0]) ** (mu - nu) * v[0])
    return decay_lemma_check(
        times, v, w, b, mu=mu, nu=nu, C=C,
        besov_bound=besov_bound, weighted_bound=weighted_bound,
    )


def write_fit_csv(path, rows) -> None:
    """Fit report CSV: s, nu, slope, expected_slope, r2, window_lo, window_hi.

    Each row is (s, nu, FitResult, expected_slope).
    """
    with open(path, "w") as fh:
        fh.write("s,nu,slope,expected_slope,r2,window_lo,window_hi\n")
        for s, nu, fit, expected in rows:
            fh.write(
                f"{s:g},{nu:g},{fit.slope:.12e},{expected:.12e},"
                f"{fit.r2:.12e},{fit.window[0]:.12e},{fit.window[1]:.12e}\n"
            )
