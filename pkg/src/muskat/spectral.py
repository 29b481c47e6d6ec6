"""Spectral transforms and norm functionals on the periodic box.

Conventions
-----------
Fields are expanded as Fourier series ``f(x) = sum_m c_m exp(i k_m . x)``
with ``k_m = (2 pi / L) m`` and integer wavevectors ``m`` with components
in ``[-n/2, n/2)``.  All frequency-weighted norms use the physical
wavenumber magnitude ``|k_m|`` and exclude the mean mode, so the
half-Laplacian is the plain multiplier ``|k_m|`` and every constant-1
inequality (dyadic-sup vs full sum, Hoelder interpolation, the sup-norm
bound by the absolute coefficient sum) holds exactly at the discrete
level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvariantViolationError, PreconditionError
from .grid import GridSpec, check_real_field

_MEAN_TOL = 1e-12
_HERMITIAN_TOL = 1e-12


def _conj_flip(c: np.ndarray) -> np.ndarray:
    """c evaluated at -m in FFT layout."""
    out = c
    for ax in range(c.ndim):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients of a real field plus the grid they live on.

    ``coeffs`` is a complex array in numpy FFT layout (index m, negative
    frequencies in the upper half), normalized so that
    ``f(x) = sum_m coeffs[m] exp(i k_m . x)``.
    """

    coeffs: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ConfigurationError(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )

    @property
    def scale(self) -> float:
        """Largest coefficient magnitude, used for relative tolerances."""
        return float(np.max(np.abs(self.coeffs)))

    def mean_mode(self) -> complex:
        return complex(self.coeffs[(0,) * self.grid.d])

    def is_mean_zero(self, tol: float = _MEAN_TOL) -> bool:
        return abs(self.mean_mode()) <= tol * max(self.scale, 1e-300)

    def hermitian_defect(self) -> float:
        """Max |c(-m) - conj(c(m))| over the lattice."""
        return float(np.max(np.abs(_conj_flip(self.coeffs) - np.conj(self.coeffs))))

    def require_hermitian(self, tol: float = _HERMITIAN_TOL) -> None:
        defect = self.hermitian_defect()
        if defect > tol * max(self.scale, 1e-300):
            raise InvariantViolationError(
                f"coefficients are not Hermitian-symmetric (defect {defect:.3e})"
            )


def analyze(samples: np.ndarray, grid: GridSpec) -> SpectralField:
    """Forward transform: grid samples to Fourier-series coefficients."""
    arr = check_real_field(samples, grid)
    coeffs = np.fft.fftn(arr) / arr.size
    return SpectralField(coeffs=coeffs, grid=grid)


def synthesize(spec: SpectralField) -> np.ndarray:
    """Inverse transform back to real grid samples.

    Raises if the coefficients break Hermitian symmetry: the imaginary
    residue of the inverse transform must stay below 1e-12 of the field
    amplitude.
    """
    out = np.fft.ifftn(spec.coeffs) * spec.coeffs.size
    amp = max(float(np.max(np.abs(out))), 1e-300)
    resid = float(np.max(np.abs(out.imag)))
    if resid > 1e-12 * amp:
        raise InvariantViolationError(
            f"imaginary residue {resid:.3e} exceeds 1e-12 of amplitude {amp:.3e}"
        )
    return np.ascontiguousarray(out.real)


def _require_mean_zero(spec: SpectralField, what: str) -> None:
    if not spec.is_mean_zero():
        raise PreconditionError(f"{what} requires a mean-zero field (coeff(0) != 0)")


def s_norm(spec: SpectralField, s: float) -> float:
    """Frequency-weighted coefficient sum  sum_{m!=0} |k_m|^s |c_m|.

    The mean mode is always excluded; for s < 0 the field must be
    mean-zero so the expression is well defined.
    """
    if s < 0:
        _require_mean_zero(spec, f"s_norm with s={s}")
    kmag = spec.grid.wavevectors()
    mask = kmag > 0
    return float(np.sum(kmag[mask] ** s * np.abs(spec.coeffs[mask])))


def besov_annulus_index(kmag: np.ndarray) -> np.ndarray:
    """Dyadic annulus index j with 2^(j-1) <= |k| < 2^j, exact at powers of two."""
    _, expo = np.frexp(kmag)
    return expo


def besov_s_norm(spec: SpectralField, s: float) -> tuple[float, dict[int, float]]:
    """Dyadic-annulus profile of the s-norm and its sup over annuli.

    Returns ``(sup_j, {j: annulus value})`` where annulus j collects the
    wavevectors with 2^(j-1) <= |k_m| < 2^j.  The sup is bounded by
    ``s_norm(spec, s)`` with constant one.
    """
    if s < 0:
        _require_mean_zero(spec, f"besov_s_norm with s={s}")
    kmag = spec.grid.wavevectors()
    mask = kmag > 0
    km = kmag[mask]
    vals = km**s * np.abs(spec.coeffs[mask])
    idx = besov_annulus_index(km)
    profile: dict[int, float] = {}
    for j in np.unique(idx):
        mass = float(vals[idx == j].sum())
        if mass > 0.0:
            profile[int(j)] = mass
    sup = max(profile.values()) if profile else 0.0
    return sup, profile


def sobolev_norm(spec: SpectralField, l: float) -> float:
    """Parseval H^l norm  ( sum_m (1+|k_m|^2)^l |c_m|^2 L^d )^(1/2)."""
    kmag = spec.grid.wavevectors()
    weight = (1.0 + kmag**2) ** l
    vol = spec.grid.length ** spec.grid.d
    return float(np.sqrt(np.sum(weight * np.abs(spec.coeffs) ** 2) * vol))


def lp_norm(samples: np.ndarray, grid: GridSpec, p) -> float:
    """Trapezoid-rule Lebesgue norm on the periodic grid (p in {1, 2, inf})."""
    arr = check_real_field(samples, grid)
    if p == np.inf or p == "inf":
        return float(np.max(np.abs(arr)))
    cell = grid.spacing**grid.d
    if p == 1:
        return float(np.sum(np.abs(arr)) * cell)
    if p == 2:
        return float(np.sqrt(np.sum(arr**2) * cell))
    raise ConfigurationError(f"unsupported Lebesgue exponent p={p!r}")


def apply_lambda_power(spec: SpectralField, r: float) -> SpectralField:
    """Fourier multiplier |k_m|^r; r=1 is the half-Laplacian.

    At r=0 this is the identity (the mean mode is preserved); for r < 0
    the field must be mean-zero and the mean mode stays zero.
    """
    kmag = spec.grid.wavevectors()
    if r < 0:
        _require_mean_zero(spec, f"apply_lambda_power with r={r}")
        mult = np.zeros_like(kmag)
        nz = kmag > 0
        mult[nz] = kmag[nz] ** r
    else:
        mult = kmag**r  # 0**0 == 1, so r=0 keeps the mean mode
    return SpectralField(coeffs=spec.coeffs * mult, grid=spec.grid)


def gradient(spec: SpectralField) -> list[np.ndarray]:
    """Physical-space spectral gradient, one array per axis.

    The Nyquist mode is zeroed in the derivative multiplier (it is its
    own conjugate partner, so an odd multiplier would break realness).
    """
    n = spec.grid.n
    k1 = 2.0 * np.pi * np.fft.fftfreq(n, d=spec.grid.spacing)
    k1[n // 2] = 0.0
    out = []
    for ax in range(spec.grid.d):
        shape = [1] * spec.grid.d
        shape[ax] = n
        kax = k1.reshape(shape)
        out.append(synthesize(SpectralField(coeffs=1j * kax * spec.coeffs, grid=spec.grid)))
    return out


@dataclass
class InterpolationReport:
    lhs: float
    rhs: float
    holds: bool


def check_interpolation(spec: SpectralField, mu1: float, s: float, mu2: float) -> InterpolationReport:
    """Constant-1 Hoelder interpolation  ||f||_s <= ||f||_mu1^th ||f||_mu2^(1-th).

    ``th = (mu2 - s)/(mu2 - mu1)`` and ``mu1 < s < mu2`` is required; the
    inequality is exact on the discrete norms, no hidden constant.
    """
    if not (mu1 < s < mu2):
        raise PreconditionError(f"need mu1 < s < mu2, got ({mu1}, {s}, {mu2})")
    theta = (mu2 - s) / (mu2 - mu1)
    lhs = s_norm(spec, s)
    rhs = s_norm(spec, mu1) ** theta * s_norm(spec, mu2) ** (1.0 - theta)
    return InterpolationReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs * (1.0 + 1e-12))


def dealias_mask(grid: GridSpec) -> np.ndarray:
    """Two-thirds-rule mask: keep modes with |m|_inf <= n/3."""
    m1 = np.abs(np.fft.fftfreq(grid.n, d=1.0 / grid.n))
    cut = grid.n / 3.0
    if grid.d == 1:
        return m1 <= cut
    mx, my = np.meshgrid(m1, m1, indexing="ij")
    return np.maximum(mx, my) <= cut


def project(spec: SpectralField, mean_zero: bool = True, dealias: bool = False) -> SpectralField:
    """Re-project onto the simulation subspace (mean-zero, optional 2/3 rule)."""
    c = spec.coeffs.copy()
    if dealias:
        c[~dealias_mask(spec.grid)] = 0.0
    if mean_zero:
        c[(0,) * spec.grid.d] = 0.0
    return SpectralField(coeffs=c, grid=spec.grid)


@dataclass
class NormReport:
    """Values of the s-norm and the dyadic sup for a list of exponents."""

    s_values: list[float]
    norms: list[float]
    besov_sups: list[float]
    besov_profiles: list[dict[int, float]] = field(default_factory=list)

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("s,norm,besov_sup\n")
            for s, nv, bv in zip(self.s_values, self.norms, self.besov_sups):
                fh.write(f"{s:.12e},{nv:.12e},{bv:.12e}\n")


def norm_report(spec: SpectralField, s_values) -> NormReport:
    norms, sups, profiles = [], [], []
    for s in s_values:
        norms.append(s_norm(spec, s))
        sup, profile = besov_s_norm(spec, s)
        sups.append(sup)
        profiles.append(profile)
    return NormReport(
        s_values=list(s_values), norms=norms, besov_sups=sups, besov_profiles=profiles
    )


def random_band_field(
    grid: GridSpec, band: tuple[int, int], seed: int, exponent: float | None = None
) -> np.ndarray:
    """Random mean-zero real field supported on integer modes kmin <= |m| <= kmax.

    With ``exponent`` set, coefficient magnitudes follow |m|^exponent
    exactly and only the phases are random; otherwise the coefficients
    are Hermitian-projected complex Gaussians.  Deterministic for a
    fixed seed.
    """
    kmin, kmax = band
    mmag = grid.mode_numbers()
    sel = (mmag >= kmin) & (mmag <= kmax)
    sel[(0,) * grid.d] = False
    if not np.any(sel):
        raise ConfigurationError(f"empty spectral band {band} on grid n={grid.n}")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    herm = 0.5 * (raw + np.conj(_conj_flip(raw)))
    if exponent is not None:
        mod = np.abs(herm)
        phase = np.where(mod > 0, herm / np.where(mod > 0, mod, 1.0), 1.0)
        herm = np.where(sel, mmag, 1.0) ** exponent * phase
    c = np.where(sel, herm, 0.0)
    field = SpectralField(coeffs=c, grid=grid)
    return synthesize(field)
