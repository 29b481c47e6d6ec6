"""Majorant series coefficients and admissible small-data constants.

The Fourier transform of the Muskat nonlinearity is dominated by a power
series in the slope-type norm ``x = ||f||_1``.  In the 3D problem the
coefficients are ``a_n = (2n+1)!/(2^n n!)^2`` (equivalently the double
factorial ratio (2n+1)!!/(2n)!!); in the 2D problem they are all one.
Global existence needs the weighted series to stay at or below one,
which pins the largest admissible ``||f_0||_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError

#: Default truncation index for series sums.
DEFAULT_MAX_N = 500


def series_coefficient(n: int) -> float:
    """a_n = (2n+1)!/(2^n n!)^2 via the stable ratio a_n = a_{n-1} (2n+1)/(2n)."""
    if n < 1:
        raise PreconditionError(f"series coefficient defined for n >= 1, got {n}")
    a = 1.0
    for i in range(1, n + 1):
        a *= (2 * i + 1) / (2 * i)
    return a


def series_coefficients(max_n: int) -> np.ndarray:
    """Array [a_1, ..., a_max_n] by recurrence (a_0 = 1 is dropped)."""
    idx = np.arange(1, max_n + 1, dtype=np.float64)
    return np.cumprod((2 * idx + 1) / (2 * idx))


def series_coefficient_factorial(n: int) -> float:
    """Direct factorial evaluation, usable for n <= 85; validation oracle."""
    return math.factorial(2 * n + 1) / (2**n * math.factorial(n)) ** 2


@dataclass
class SeriesConstants:
    """Coefficient table and admissibility data for the majorant series.

    ``rho_jump`` is the normalized density jump rho2 - rho1; all formulas
    in the package assume the normalization rho_jump/2 = 1.
    """

    max_n: int = DEFAULT_MAX_N
    delta: float = 0.01
    rho_jump: float = 2.0
    coefficients: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.delta > 0:
            raise PreconditionError(f"admissibility exponent must be positive, got {self.delta}")
        self.coefficients = series_coefficients(self.max_n)


def closed_form_majorant(x: float) -> float:
    """(1 + 2x^2)/(1 - x^2)^(5/2) - 1, the closed form of sum (2n+1) a_n x^(2n).

    Defined for 0 <= x < 1; the series diverges at x = 1.
    """
    if not 0.0 <= x < 1.0:
        raise PreconditionError(f"majorant argument must lie in [0, 1), got {x}")
    return (1.0 + 2.0 * x * x) / (1.0 - x * x) ** 2.5 - 1.0


def majorant_series(x: float, max_n: int = DEFAULT_MAX_N) -> float:
    """Truncated sum_{n>=1} (2n+1) a_n x^(2n); cross-check for the closed form."""
    if not 0.0 <= x < 1.0:
        raise PreconditionError(f"majorant argument must lie in [0, 1), got {x}")
    a = series_coefficients(max_n)
    nn = np.arange(1, max_n + 1, dtype=np.float64)
    return float(np.sum((2 * nn + 1) * a * x ** (2 * nn)))


def diff_ineq_constant(x: float) -> float:
    """Dissipation constant C0 = 1 - pi ((1+2x^2)/(1-x^2)^(5/2) - 1) at slope norm x."""
    return 1.0 - np.pi * closed_form_majorant(x)


def _weighted_terms(dim: int, k: float, delta: float, max_n: int) -> np.ndarray:
    nn = np.arange(1, max_n + 1, dtype=np.float64)
    weights = (2 * nn + 1) ** (1.0 + delta)
    if dim == 3:
        return np.pi * weights * series_coefficients(max_n) * k ** (2 * nn)
    if dim == 2:
        return 2.0 * weights * k ** (2 * nn)
    raise PreconditionError(f"dimension must be 2 or 3, got {dim}")


def admissibility_series(
    dim: int, k: float, delta: float, max_n: int = DEFAULT_MAX_N
) -> tuple[float, float]:
    """Weighted admissibility series value and a rigorous tail bound.

    3D: pi sum (2n+1)^(1+delta) a_n k^(2n);  2D: 2 sum (2n+1)^(1+delta) k^(2n).
    The tail beyond ``max_n`` is bounded by a geometric series with ratio
    (k (1 + 1/max_n))^2 amplified by the (2n+1)^(1+delta) growth factor.
    Both the value and the bound are monotone increasing in k and delta.
    """
    if not 0.0 <= k < 1.0:
        raise PreconditionError(f"series argument must lie in [0, 1), got {k}")
    terms = _weighted_terms(dim, k, delta, max_n)
    value = float(terms.sum())
    if k == 0.0:
        return value, 0.0
    # term ratio t_{n+1}/t_n <= ((2n+3)/(2n+1))^(1+delta) * (a ratio <= (2n+3)/(2n+2)) * k^2
    n = max_n
    ratio = ((2 * n + 3) / (2 * n + 1)) ** (1.0 + delta) * ((2 * n + 3) / (2 * n + 2)) * k * k
    if ratio >= 1.0:
        return value, np.inf
    tail = float(terms[-1]) * ratio / (1.0 - ratio)
    return value, tail


def closed_form_2d_series(c: float) -> float:
    """delta -> 0 closed form of the 2D series: 2 (3c^2 - c^4)/(1 - c^2)^2."""
    if not 0.0 <= c < 1.0:
        raise PreconditionError(f"series argument must lie in [0, 1), got {c}")
    c2 = c * c
    return 2.0 * (3.0 * c2 - c2 * c2) / (1.0 - c2) ** 2


def admissible_constant(
    dim: int, delta: float, tol: float = 1e-10, max_n: int = DEFAULT_MAX_N
) -> float:
    """Largest k with admissibility series value <= 1, found by bisection.

    The series is strictly increasing in k, so bisection brackets the
    root of ``series(k) = 1``; the returned ``k*`` satisfies
    ``|series(k*) - 1| <= tol``.
    """
    upper_delta = 1.0 if dim == 3 else 0.5
    if not 0.0 < delta < upper_delta:
        raise PreconditionError(
            f"delta must lie in (0, {upper_delta}) for dim={dim}, got {delta}"
        )
    lo, hi = 0.0, 1.0 - 1e-9

    def total(k: float) -> float:
        value, tail = admissibility_series(dim, k, delta, max_n)
        return value + tail

    if total(hi) <= 1.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total(mid) <= 1.0:
            lo = mid
        else:
            hi = mid
        if abs(total(lo) - 1.0) <= tol:
            break
    return lo
