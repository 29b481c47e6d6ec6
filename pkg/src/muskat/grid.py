"""Periodic computational grids and flat binary field serialization.

The interface height f lives on a uniform periodic grid over a box of
period ``length`` per axis; ``d`` is the dimension of the interface
(1 for the 2D two-fluid problem, 2 for the 3D problem).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

_HEADER = struct.Struct("<IId")  # d, n, length


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: ``n`` points per axis on a box of period ``length``.

    Parameters
    ----------
    d : int
        Interface dimension, 1 or 2.
    n : int
        Points per axis; a power of two, at least 8.
    length : float
        Box period L.
    """

    d: int
    n: int
    length: float = 2.0 * np.pi

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ConfigurationError(f"interface dimension must be 1 or 2, got {self.d}")
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            raise ConfigurationError(f"n must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise ConfigurationError(f"box period must be positive, got {self.length}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def spacing(self) -> float:
        return self.length / self.n

    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays x_m = m*L/n, meshgrid'ed for d=2."""
        x = np.arange(self.n) * self.spacing
        if self.d == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    def wavevectors(self) -> np.ndarray:
        """Physical wavenumber magnitude |k_m| = (2*pi/L)|m| on the FFT lattice."""
        k1 = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        if self.d == 1:
            return np.abs(k1)
        kx, ky = np.meshgrid(k1, k1, indexing="ij")
        return np.sqrt(kx**2 + ky**2)

    def mode_numbers(self) -> np.ndarray:
        """Integer mode magnitude |m| on the FFT lattice."""
        m1 = np.fft.fftfreq(self.n, d=1.0 / self.n)
        if self.d == 1:
            return np.abs(m1)
        mx, my = np.meshgrid(m1, m1, indexing="ij")
        return np.sqrt(mx**2 + my**2)


def check_real_field(samples: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Validate a physical-space field against its grid; returns float64 view."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.shape != grid.shape:
        raise ConfigurationError(f"field shape {arr.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("field contains non-finite samples")
    return arr


def save_field(path, samples: np.ndarray, grid: GridSpec) -> None:
    """Write a field as header (d, n, L: u32, u32, f64 LE) + row-major f64 samples."""
    arr = check_real_field(samples, grid)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(grid.d, grid.n, grid.length))
        fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_field(path) -> tuple[np.ndarray, GridSpec]:
    """Read a field written by :func:`save_field`."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ConfigurationError(f"truncated field file: {path}")
        d, n, length = _HEADER.unpack(head)
        grid = GridSpec(d=d, n=n, length=length)
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != n**d:
        raise ConfigurationError(
            f"field file holds {data.size} samples, expected {n**d}: {path}"
        )
    return data.reshape(grid.shape).copy(), grid
