"""Periodic grid, discrete Fourier transforms, and L^p norms.

Convention (pinned): for a function sampled at x_j = jL/N,

    fhat(xi_k) = sum_j f(x_j) e^{-i xi_k . x_j} dx^n,
    f(x_j)    = (1/L^n) sum_k fhat(xi_k) e^{+i xi_k . x_j},

with frequencies xi_k = 2 pi k / L, k in {-N/2, ..., N/2 - 1} in FFT
order.  Under this convention D = -i d/dx acts as the multiplier xi,
and a constant c on a period-2pi grid has fhat(0) = 2 pi c.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidExponentError, InvalidInputError


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, L)^dim."""

    dim: int = 1
    points_per_axis: int = 256
    period: float = 2 * np.pi

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise InvalidInputError(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if not isinstance(n, (int, np.integer)) or not _is_power_of_two(int(n)) or n < 8:
            raise InvalidInputError(
                f"points_per_axis must be a power of two >= 8, got {n}")
        if not self.period > 0:
            raise InvalidInputError(f"period must be positive, got {self.period}")

    @property
    def spacing(self) -> float:
        return self.period / self.points_per_axis

    @property
    def freq_spacing(self) -> float:
        return 2 * np.pi / self.period

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    def nodes_1d(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def frequencies_1d(self) -> np.ndarray:
        """Frequencies 2 pi k / L in FFT order."""
        n = self.points_per_axis
        return 2 * np.pi * np.fft.fftfreq(n, d=self.period / n)

    def node_mesh(self) -> tuple:
        """Tuple of dim arrays of shape self.shape giving node coordinates."""
        ax = self.nodes_1d()
        if self.dim == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))

    def frequency_mesh(self) -> tuple:
        ax = self.frequencies_1d()
        if self.dim == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples, one per grid node."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise InvalidInputError(
                f"sample shape {v.shape} does not match grid shape {self.grid.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, np.asarray(fn(*grid.node_mesh()), dtype=np.complex128)
                   * np.ones(grid.shape))


@dataclass(frozen=True)
class SpectralFunction:
    """Fourier coefficients fhat(xi_k), one per frequency, FFT order."""

    grid: Grid
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.shape != self.grid.shape:
            raise InvalidInputError(
                f"coefficient shape {c.shape} does not match grid shape {self.grid.shape}")
        object.__setattr__(self, "coefficients", c)


def fft_forward(f: GridFunction) -> SpectralFunction:
    g = f.grid
    coeff = np.fft.fftn(f.values) * g.spacing ** g.dim
    return SpectralFunction(g, coeff)


def fft_inverse(F: SpectralFunction) -> GridFunction:
    g = F.grid
    scale = (g.points_per_axis / g.period) ** g.dim
    return GridFunction(g, np.fft.ifftn(F.coefficients) * scale)


def lp_norm(f: GridFunction, p) -> float:
    if p == np.inf or p == "inf":
        return float(np.max(np.abs(f.values)))
    p = float(p)
    if p < 1:
        raise InvalidExponentError(f"exponent must be >= 1 or inf, got {p}")
    g = f.grid
    return float((np.sum(np.abs(f.values) ** p) * g.spacing ** g.dim) ** (1.0 / p))


def fractional_derivative(f: GridFunction, alpha: float) -> GridFunction:
    """Fourier multiplier |xi|^alpha; the zero mode passes through when alpha = 0."""
    if alpha < 0:
        raise InvalidInputError(f"alpha must be nonnegative, got {alpha}")
    g = f.grid
    mesh = g.frequency_mesh()
    absxi = np.sqrt(sum(m ** 2 for m in mesh))
    if alpha == 0:
        mult = np.ones_like(absxi)
    else:
        mult = absxi ** alpha
    coeff = np.fft.fftn(f.values) * mult
    return GridFunction(g, np.fft.ifftn(coeff))


def spectral_derivative(f: GridFunction, axis: int = 0) -> GridFunction:
    """D = -i d/dx along the given axis: multiplier xi, unpaired mode zeroed."""
    g = f.grid
    if not 0 <= axis < g.dim:
        raise InvalidInputError(f"axis {axis} out of range for dim {g.dim}")
    xi = g.frequencies_1d()
    xi[g.points_per_axis // 2] = 0.0  # unpaired -N/2 mode, odd multiplier
    shape = [1] * g.dim
    shape[axis] = g.points_per_axis
    mult = xi.reshape(shape)
    coeff = np.fft.fftn(f.values) * mult
    return GridFunction(g, np.fft.ifftn(coeff))


def translate(f: GridFunction, steps) -> GridFunction:
    """f(. + steps*dx), exact circular shift by whole nodes per axis."""
    g = f.grid
    if g.dim == 1:
        steps = (int(steps),) if np.isscalar(steps) else tuple(int(s) for s in steps)
    else:
        steps = tuple(int(s) for s in steps)
    if len(steps) != g.dim:
        raise InvalidInputError(f"need {g.dim} shift components, got {len(steps)}")
    return GridFunction(g, np.roll(f.values, shift=[-s for s in steps],
                                   axis=tuple(range(g.dim))))


def eval_at(f: GridFunction, *coords) -> np.ndarray:
    """Trigonometric interpolation of f at off-grid points.

    coords: one array per axis, broadcastable to a common shape.
    """
    g = f.grid
    if len(coords) != g.dim:
        raise InvalidInputError(f"need {g.dim} coordinate arrays, got {len(coords)}")
    coeff = np.fft.fftn(f.values)  # raw DFT, inverse needs 1/N^n
    xi = g.frequencies_1d().copy()
    # symmetrize the unpaired mode so real samples interpolate to real values
    pts = [np.asarray(c, dtype=float) for c in coords]
    out_shape = np.broadcast(*[p for p in pts]).shape if g.dim > 1 else pts[0].shape
    n = g.points_per_axis
    if g.dim == 1:
        ph = np.exp(1j * np.outer(pts[0].ravel(), xi))
        half = n // 2
        ph[:, half] = np.cos(pts[0].ravel() * xi[half])
        vals = ph @ coeff / n
        return vals.reshape(pts[0].shape)
    p0 = np.broadcast_to(pts[0], out_shape).ravel()
    p1 = np.broadcast_to(pts[1], out_shape).ravel()
    ph0 = np.exp(1j * np.outer(p0, xi))
    ph1 = np.exp(1j * np.outer(p1, xi))
    half = n // 2
    ph0[:, half] = np.cos(p0 * xi[half])
    ph1[:, half] = np.cos(p1 * xi[half])
    vals = np.einsum("pk,pl,kl->p", ph0, ph1, coeff) / n ** 2
    return vals.reshape(out_shape)
