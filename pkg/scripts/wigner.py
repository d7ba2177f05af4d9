"""
Wigner quasi-probability functions for the three backends

Grid states use the standard integral transform

    W(x, p) = 1/(pi hbar) * integral psi*(x + y) psi(x - y) exp(2 i p y / hbar) dy

evaluated with y on the grid's own points: for each x the state is shifted by
x spectrally, and because the cell-centred grid is symmetric (x_{n-1-k} = -x_k)
the same shifted vector supplies both psi(x + y) and psi(x - y). Two-mode grid
states are traced over the other mode first.

Gaussian states use the closed form exp(-d^T V^-1 d / 2) / (2 pi sqrt(det V)).
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from scripts.backends import fock, gaussian
from scripts.backends.gridstate import GridState
from scripts.utils.errors import ContractError, DimensionError, DomainError
from scripts.utils.helpers import write_csv, write_json
from scripts.utils.numerics import Grid, p_to_x_transform, x_to_p_transform

logger = logging.getLogger(__name__)

DEFAULT_HALF_WIDTH_UNITS = 5.0
DEFAULT_POINTS = 201


@dataclass(frozen=True)
class WignerGrid:
    """values[j, i] = W(x_axis[i], p_axis[j])"""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray = field(repr=False)
    hbar: float = 2.0

    def __post_init__(self):
        x = np.asarray(self.x_axis, dtype=float)
        p = np.asarray(self.p_axis, dtype=float)
        values = np.asarray(self.values, dtype=float).reshape(p.size, x.size)
        for arr in (x, p, values):
            arr.setflags(write=False)
        object.__setattr__(self, 'x_axis', x)
        object.__setattr__(self, 'p_axis', p)
        object.__setattr__(self, 'values', values)

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0]) if self.x_axis.size > 1 else 0.0

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0]) if self.p_axis.size > 1 else 0.0

    def value_at(self, x: float, p: float) -> float:
        """Value at the axis point nearest (x, p)"""
        i = int(np.argmin(np.abs(self.x_axis - x)))
        j = int(np.argmin(np.abs(self.p_axis - p)))
        return float(self.values[j, i])

    def to_json(self) -> dict:
        return {
            'x_axis': [float(v) for v in self.x_axis],
            'p_axis': [float(v) for v in self.p_axis],
            'values': [[float(v) for v in row] for row in self.values],
        }


def default_axes(hbar: float = 2.0, points: int = DEFAULT_POINTS,
                 half_width_units: float = DEFAULT_HALF_WIDTH_UNITS) -> np.ndarray:
    """Symmetric window [-h, h] with h = half_width_units * sqrt(hbar/2); odd counts sample the origin"""
    half = half_width_units * np.sqrt(hbar / 2.0)
    return np.linspace(-half, half, int(points))


def p_limit(grid: Grid) -> float:
    """Largest |p| the kernel exp(2 i p x_k / hbar) resolves; it repeats with period pi hbar / dx"""
    return np.pi * grid.hbar / (2.0 * grid.spacing)


def _check_axes(x_axis: np.ndarray, p_axis: np.ndarray, grid: Grid) -> None:
    half = grid.extent / 2.0
    if x_axis.size and (x_axis.min() < -half or x_axis.max() > half):
        raise DomainError(f"Wigner x axis [{x_axis.min()}, {x_axis.max()}] exceeds the grid [-{half}, {half}]")
    p_max = p_limit(grid)
    if p_axis.size and np.max(np.abs(p_axis)) > p_max:
        raise DomainError(f"Wigner p axis [{p_axis.min()}, {p_axis.max()}] exceeds the resolved range ±{p_max}")


def wigner_from_grid(state: GridState, x_axis, p_axis, mode: int = 0) -> WignerGrid:
    grid = state.grid
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    if not 0 <= mode < state.modes:
        raise DomainError(f"mode {mode} out of range for a {state.modes}-mode state")
    _check_axes(x_axis, p_axis, grid)

    hbar = grid.hbar
    # (n, m): the measured mode first, the traced mode (if any) as columns
    psi = np.moveaxis(state.amplitudes, mode, 0).reshape(grid.n_points, -1)
    cell_other = grid.spacing ** (state.modes - 1)
    phi = x_to_p_transform(psi, grid, axis=0)

    products = np.empty((x_axis.size, grid.n_points), dtype=complex)
    for i, x0 in enumerate(x_axis):
        shifted = p_to_x_transform(phi * np.exp(1j * grid.p * x0 / hbar)[:, None], grid, axis=0)
        # shifted[k] = psi(x0 + x_k); shifted[n-1-k] = psi(x0 - x_k)
        products[i] = np.sum(np.conj(shifted) * shifted[::-1], axis=1) * cell_other

    kernel = np.exp(2j * np.outer(grid.x, p_axis) / hbar) * grid.spacing / (np.pi * hbar)
    values = (products @ kernel).real.T
    return WignerGrid(x_axis, p_axis, values, hbar)


def wigner_from_gaussian(state: gaussian.GaussianState, mode: int, x_axis, p_axis) -> WignerGrid:
    mean, cov = gaussian.wigner_params(state, mode)
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    inv = np.linalg.inv(cov)
    dxs = x_axis[None, :] - mean[0]
    dps = p_axis[:, None] - mean[1]
    quad = inv[0, 0] * dxs ** 2 + 2.0 * inv[0, 1] * dxs * dps + inv[1, 1] * dps ** 2
    values = np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(np.linalg.det(cov)))
    return WignerGrid(x_axis, p_axis, values, state.hbar)


def wigner_from_fock(state: fock.FockState, x_axis, p_axis, grid: Grid, mode: int = 0) -> WignerGrid:
    """Hermite synthesis onto grid, then the grid transform"""
    return wigner_from_grid(fock.to_grid(state, grid, mode), x_axis, p_axis)


def wigner_of_state(state, x_axis, p_axis, mode: int = 0, grid: Optional[Grid] = None) -> WignerGrid:
    """Dispatch on the backend of a snapshot"""
    if isinstance(state, GridState):
        return wigner_from_grid(state, x_axis, p_axis, mode)
    if isinstance(state, gaussian.GaussianState):
        return wigner_from_gaussian(state, mode, x_axis, p_axis)
    if isinstance(state, fock.FockState):
        if grid is None:
            raise ContractError("Fock Wigner functions need a synthesis grid")
        return wigner_from_fock(state, x_axis, p_axis, grid, mode)
    raise ContractError(f"no Wigner function for {type(state).__name__}")


def phase_space_panels(hbar: float, axes: np.ndarray, displacement: float = 0.5,
                       squeezing: float = 0.5) -> Dict[str, WignerGrid]:
    """vacuum, displaced, squeezed, displaced then squeezed (Gaussian backend)"""
    vac = gaussian.vacuum(1, hbar)
    moved = gaussian.apply_displacement(vac, 0, displacement)
    states = {
        'vacuum': vac,
        'displaced': moved,
        'squeezed': gaussian.apply_squeeze(vac, 0, squeezing),
        'displaced_squeezed': gaussian.apply_squeeze(moved, 0, squeezing),
    }
    return {name: wigner_from_gaussian(state, 0, axes, axes) for name, state in states.items()}


# ========================================
# DIAGNOSTICS
# ========================================


def normalization_check(w: WignerGrid) -> float:
    return float(np.sum(w.values) * w.dx * w.dp)


def marginal_x(w: WignerGrid) -> np.ndarray:
    """Integral over p at each x (compare with |psi(x)|^2)"""
    return np.sum(w.values, axis=0) * w.dp


def marginal_p(w: WignerGrid) -> np.ndarray:
    return np.sum(w.values, axis=1) * w.dx


def lower_bound(hbar: float) -> float:
    return -1.0 / (np.pi * hbar)


# ========================================
# EXPORT
# ========================================


def to_frame(w: WignerGrid) -> pd.DataFrame:
    """Long format, rows ordered by p then x"""
    xs, ps = np.meshgrid(w.x_axis, w.p_axis)
    return pd.DataFrame({
        'x': xs.ravel(),
        'p': ps.ravel(),
        'w': w.values.ravel(),
    }, columns=['x', 'p', 'w'])


def export(w: WignerGrid, fmt: str, path: Optional[Union[str, Path]]) -> None:
    """Write csv (x,p,w) or json ({x_axis, p_axis, values}); stdout when path is None"""
    if fmt == 'csv':
        write_csv(to_frame(w), path)
    elif fmt == 'json':
        write_json(w.to_json(), path)
    else:
        raise DomainError(f"unknown Wigner export format {fmt!r}")


def from_json(payload: dict, hbar: float = 2.0) -> WignerGrid:
    return WignerGrid(payload['x_axis'], payload['p_axis'], payload['values'], hbar)


def to_pgm(w: WignerGrid, path: Union[str, Path]) -> None:
    """8-bit grayscale heatmap, zero mapped to mid-gray, highest p on the top row"""
    if w.values.size == 0:
        raise DimensionError("cannot render an empty Wigner grid")
    vmax = max(float(np.max(np.abs(w.values))), 1e-300)
    levels = np.interp(w.values, (-vmax, 0.0, vmax), (0.0, 0.5, 1.0))
    pixels = np.round(levels[::-1] * 255).astype(np.uint8)
    height, width = pixels.shape

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(f"P5\n{width} {height}\n255\n".encode('ascii'))
        f.write(pixels.tobytes())
