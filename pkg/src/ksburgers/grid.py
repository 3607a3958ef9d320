"""Periodic d-dimensional grids, discrete Fourier transforms, and L^p norms.

The grid is a uniform periodic truncation of R^d to a box of edge length L
with n points per axis. All fields live on this grid; integrals become
rectangle-rule sums weighted by the cell volume (L/n)^d.

Transform normalization
-----------------------
``forward_transform`` approximates the unitary continuum Fourier transform

    F(xi) = (2*pi)^{-d/2} * integral f(x) exp(-i <x, xi>) dx

by the Riemann sum over grid points, so

    coeffs = (2*pi)^{-d/2} * cell_volume * fftn(values).

``inverse_transform`` is the Riemann sum of the inverse unitary transform
over the wavenumber lattice (spacing 2*pi/L per axis); the pair is mutually
inverse to machine precision. Under this convention the discrete Parseval
identity reads

    lp_norm(f, 2)**2 == sum(|coeffs|^2) * (2*pi/L)**d.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatchError, ValidationError

MAX_DIM = 5


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [0, L)^d with n points per axis.

    The induced wavenumber lattice is {(2*pi/L) * k : k integer,
    each component in [-n/2, n/2)}, stored in FFT order.
    """

    d: int
    n: int
    L: float

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or not 1 <= self.d <= MAX_DIM:
            raise ValidationError(
                f"dimension d must be an integer in [1, {MAX_DIM}], got {self.d!r}"
            )
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or self.n % 2 != 0:
            raise ValidationError(
                f"points per axis n must be an even integer >= 4, got {self.n!r}"
            )
        if not np.isfinite(self.L) or self.L <= 0:
            raise ValidationError(f"box edge length L must be positive, got {self.L!r}")

    @property
    def cell_volume(self) -> float:
        return (self.L / self.n) ** self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    def axis_coords(self) -> np.ndarray:
        """Sample points along one axis: j*L/n for j = 0..n-1."""
        return np.arange(self.n) * (self.L / self.n)

    def coords(self) -> tuple[np.ndarray, ...]:
        """Meshgrid of sample coordinates, one array per axis."""
        x = self.axis_coords()
        return tuple(np.meshgrid(*([x] * self.d), indexing="ij"))

    def axis_wavenumbers(self) -> np.ndarray:
        """Wavenumbers along one axis in FFT order, components in
        (2*pi/L) * {0, 1, ..., n/2-1, -n/2, ..., -1}."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.L / self.n)

    def wavenumber_mesh(self) -> tuple[np.ndarray, ...]:
        return _wavenumber_mesh(self)

    def wavenumber_sq(self) -> np.ndarray:
        """|xi|^2 on the full lattice, FFT order."""
        return _wavenumber_sq(self)

    def dealias_mask(self) -> np.ndarray:
        """Two-thirds-rule mask: True where every integer mode |k| <= n/3."""
        return _dealias_mask(self)


@lru_cache(maxsize=32)
def _wavenumber_mesh(grid: GridSpec) -> tuple[np.ndarray, ...]:
    k = grid.axis_wavenumbers()
    return tuple(np.meshgrid(*([k] * grid.d), indexing="ij"))

@lru_cache(maxsize=32)
def _wavenumber_sq(grid: GridSpec) -> np.ndarray:
    mesh = _wavenumber_mesh(grid)
    out = np.zeros(grid.shape)
    for km in mesh:
        out += km**2
    return out

@lru_cache(maxsize=32)
def _dealias_mask(grid: GridSpec) -> np.ndarray:
    k_int = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    keep_1d = np.abs(k_int) <= grid.n / 3.0
    mask = np.ones(grid.shape, dtype=bool)
    for axis in range(grid.d):
        shape = [1] * grid.d
        shape[axis] = grid.n
        mask &= keep_1d.reshape(shape)
    return mask


@dataclass(frozen=True)
class Field:
    """Real-valued samples on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            if values.size == self.grid.size:
                values = values.reshape(self.grid.shape)
            else:
                raise ValidationError(
                    f"field has {values.size} values, grid needs {self.grid.size}"
                )
        if not np.all(np.isfinite(values)):
            raise ValidationError("field values must all be finite")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients on the wavenumber lattice, FFT order.

    Carries Hermitian symmetry (coeff at -k equal to the conjugate of the
    coeff at k) whenever it represents a real field.
    """

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != self.grid.shape:
            if coeffs.size == self.grid.size:
                coeffs = coeffs.reshape(self.grid.shape)
            else:
                raise ValidationError(
                    f"spectral field has {coeffs.size} coefficients, "
                    f"grid needs {self.grid.size}"
                )
        object.__setattr__(self, "coeffs", coeffs)


def make_grid(d: int, n: int, L: float) -> GridSpec:
    """Build a validated GridSpec (see GridSpec for the invariants)."""
    return GridSpec(d=d, n=n, L=float(L))


def forward_transform(f: Field) -> SpectralField:
    """Discrete analogue of the unitary Fourier transform (see module docs)."""
    scale = (2.0 * np.pi) ** (-f.grid.d / 2.0) * f.grid.cell_volume
    return SpectralField(f.grid, scale * np.fft.fftn(f.values))


def inverse_transform(F: SpectralField) -> Field:
    """Inverse of ``forward_transform``; assumes Hermitian-symmetric input."""
    g = F.grid
    scale = (2.0 * np.pi) ** (-g.d / 2.0) * (2.0 * np.pi / g.L) ** g.d * g.size
    return Field(g, (scale * np.fft.ifftn(F.coeffs)).real)


def lp_norm(f: Field, p: float) -> float:
    """Rectangle-rule L^p norm: (sum |f_i|^p * cell_volume)^(1/p), p >= 1."""
    if not p >= 1.0:
        raise ValidationError(f"norm order p must be >= 1, got {p!r}")
    return float(
        (np.sum(np.abs(f.values) ** p) * f.grid.cell_volume) ** (1.0 / p)
    )


def lp_norm_values(values: np.ndarray, cell_volume: float, p: float) -> float:
    """lp_norm on a bare sample array (helper for hot loops)."""
    if not p >= 1.0:
        raise ValidationError(f"norm order p must be >= 1, got {p!r}")
    return float((np.sum(np.abs(values) ** p) * cell_volume) ** (1.0 / p))


def require_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"grid mismatch: {a.grid} vs {b.grid}")
