"""
Numerical substrate shared by the backends

Grid points are cell centres, x_k = -L/2 + (k + 1/2) dx, and the momentum grid
uses the same half-bin offset, p_j = (j - n/2 + 1/2) dp with dp = 2 pi hbar / L.
With that choice the discrete transform

    phi(p_j) = dx / sqrt(2 pi hbar) * sum_k psi(x_k) exp(-i p_j x_k / hbar)

is exactly unitary with respect to the dx / dp weights, and a grid with
L^2 = 2 pi hbar n has identical x and p axes (self-dual).
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg

from scripts.utils.errors import ConfigurationError, ContractError, DimensionError, DomainError
from scripts.utils.helpers import is_power_of_two

logger = logging.getLogger(__name__)

HERMITE_MAX_ORDER = 200


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred discretisation of one quadrature axis"""

    n_points: int
    extent: float
    hbar: float = 2.0

    def __post_init__(self):
        if not is_power_of_two(self.n_points):
            raise ConfigurationError(f"n_points must be a power of two, got {self.n_points}")
        if not self.extent > 0:
            raise ConfigurationError(f"extent must be positive, got {self.extent}")
        if not self.hbar > 0:
            raise ConfigurationError(f"hbar must be positive, got {self.hbar}")

    @property
    def spacing(self) -> float:
        return self.extent / self.n_points

    @property
    def dp(self) -> float:
        return 2.0 * np.pi * self.hbar / self.extent

    @cached_property
    def x(self) -> np.ndarray:
        return (np.arange(self.n_points) - (self.n_points - 1) / 2.0) * self.spacing

    @cached_property
    def p(self) -> np.ndarray:
        return (np.arange(self.n_points) - (self.n_points - 1) / 2.0) * self.dp

    @property
    def is_self_dual(self) -> bool:
        return abs(self.spacing - self.dp) <= 1e-12 * self.dp

    def bin_of(self, x0: float) -> int:
        """Index of the bin containing x0"""
        k = int(np.floor((x0 + self.extent / 2.0) / self.spacing))
        if not 0 <= k < self.n_points:
            raise DomainError(f"x = {x0} lies outside the grid [-{self.extent / 2}, {self.extent / 2})")
        return k

    def to_dict(self) -> dict:
        return {'n': self.n_points, 'L': self.extent, 'hbar': self.hbar}


def make_grid(n_points: int, extent: float, hbar: float = 2.0) -> Grid:
    return Grid(int(n_points), float(extent), float(hbar))


def self_dual_grid(n_points: int, hbar: float = 2.0) -> Grid:
    """Grid with dx = dp, i.e. L^2 = 2 pi hbar n"""
    return Grid(int(n_points), float(np.sqrt(2.0 * np.pi * hbar * n_points)), float(hbar))


def grid_from_preset(preset: dict, hbar: float) -> Grid:
    """Build a grid from a config preset (extent in units of sqrt(hbar), or self-dual)"""
    n = int(preset['n_points'])
    if preset.get('extent_units') is None:
        return self_dual_grid(n, hbar)
    return make_grid(n, float(preset['extent_units']) * np.sqrt(hbar), hbar)


def require_same_hbar(*hbars: float) -> float:
    """All states in one computation share one hbar"""
    first = float(hbars[0])
    for h in hbars[1:]:
        if abs(float(h) - first) > 1e-12 * first:
            raise ContractError(f"hbar mismatch: {first} vs {h}")
    return first


def _centring_phase(grid: Grid) -> np.ndarray:
    n = grid.n_points
    c = (n - 1) / 2.0
    return np.exp(2j * np.pi * c * np.arange(n) / n)


def _along(vector: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = -1
    return vector.reshape(shape)


def _check_axis(values: np.ndarray, grid: Grid, axis: int) -> None:
    if values.ndim == 0 or values.shape[axis] != grid.n_points:
        raise DimensionError(
            f"expected {grid.n_points} samples along axis {axis}, got shape {values.shape}"
        )


def x_to_p_transform(values: np.ndarray, grid: Grid, axis: int = -1) -> np.ndarray:
    """Unitary x -> p transform with 1/sqrt(2 pi hbar) normalisation and centred ordering"""
    values = np.asarray(values, dtype=complex)
    _check_axis(values, grid, axis)
    n = grid.n_points
    c = (n - 1) / 2.0
    w = _along(_centring_phase(grid), values.ndim, axis)
    const = np.exp(-2j * np.pi * c * c / n) * grid.spacing / np.sqrt(2.0 * np.pi * grid.hbar)
    return const * w * np.fft.fft(values * w, axis=axis)


def p_to_x_transform(values: np.ndarray, grid: Grid, axis: int = -1) -> np.ndarray:
    """Exact inverse of x_to_p_transform"""
    values = np.asarray(values, dtype=complex)
    _check_axis(values, grid, axis)
    n = grid.n_points
    c = (n - 1) / 2.0
    w = _along(np.conj(_centring_phase(grid)), values.ndim, axis)
    const = np.exp(2j * np.pi * c * c / n) * n * grid.dp / np.sqrt(2.0 * np.pi * grid.hbar)
    return const * w * np.fft.ifft(values * w, axis=axis)


def quadrature_integrate(values: np.ndarray, grid: Grid) -> complex:
    """Riemann sum over the x grid"""
    values = np.asarray(values)
    if values.shape != (grid.n_points,):
        raise DimensionError(f"expected {grid.n_points} samples, got shape {values.shape}")
    return complex(np.sum(values) * grid.spacing)


def sample(f: Callable, points: np.ndarray) -> np.ndarray:
    """Evaluate f on points (vectorised when f supports arrays)"""
    try:
        out = np.asarray(f(points), dtype=complex)
        if out.shape == points.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(float(v))) for v in points])


def hermite_functions(n_max: int, x: np.ndarray, hbar: float) -> np.ndarray:
    """Rows 0..n_max of the normalised oscillator eigenfunctions at x"""
    if n_max < 0 or n_max > HERMITE_MAX_ORDER:
        raise DomainError(f"Hermite order must be in [0, {HERMITE_MAX_ORDER}], got {n_max}")
    xi = np.asarray(x, dtype=float) / np.sqrt(hbar)
    out = np.empty((n_max + 1, xi.size))
    out[0] = (np.pi * hbar) ** -0.25 * np.exp(-0.5 * xi * xi)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_function(n: int, grid: Grid) -> np.ndarray:
    """psi_n(x) = (2^n n! sqrt(pi hbar))^(-1/2) H_n(x/sqrt(hbar)) exp(-x^2/2hbar)"""
    return hermite_functions(n, grid.x, grid.hbar)[n].astype(complex)


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring matrix exponential"""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def delta_kernel(grid: Grid, x_prime_index: int) -> np.ndarray:
    """(1/2 pi hbar) sum_p exp(i p (x - x') / hbar) dp evaluated on the x grid"""
    phase = np.exp(1j * np.outer(grid.x - grid.x[x_prime_index], grid.p) / grid.hbar)
    return phase.sum(axis=1) * grid.dp / (2.0 * np.pi * grid.hbar)


def delta_identity_check(grid: Grid) -> float:
    """Max abs deviation of the discrete plane-wave sum from the grid delta (1/dx on the diagonal)"""
    e = np.exp(1j * np.outer(grid.x, grid.p) / grid.hbar)
    kernel = (e @ e.conj().T) * grid.dp / (2.0 * np.pi * grid.hbar)
    target = np.eye(grid.n_points) / grid.spacing
    return float(np.max(np.abs(kernel - target)))
