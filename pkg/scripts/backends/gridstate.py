"""
Discretised-wavefunction backend

States are amplitude tensors of shape (n,) or (n, n) over a shared Grid, in the
x representation. Every operation returns a new state; amplitude arrays are
read-only.

p is applied spectrally (multiply by p between x_to_p and p_to_x), so it is
exactly Hermitian on the grid. The spectral derivative treats the grid as
(anti)periodic, which is why constructors warn when a state carries mass at
the grid edges.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from scripts.utils.errors import (
    CapabilityError,
    ConfigurationError,
    ContractError,
    DegenerateStateError,
    DomainError,
    WraparoundError,
)
from scripts.utils.helpers import complex_to_pairs, pairs_to_complex
from scripts.utils.numerics import (
    Grid,
    hermite_function,
    make_grid,
    p_to_x_transform,
    sample,
    x_to_p_transform,
)

logger = logging.getLogger(__name__)

MAX_GRID_MODES = 2
EDGE_WARN_RATIO = 1e-8
NORM_TOLERANCE = 1e-6
SQUEEZE_LOSS_LIMIT = 1e-3
ANGLE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GridState:
    grid: Grid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim not in (1, 2) or any(s != self.grid.n_points for s in amps.shape):
            raise ContractError(
                f"amplitude shape {amps.shape} does not match {amps.ndim} mode(s) of {self.grid.n_points} points"
            )
        amps.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amps)

    @property
    def modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def hbar(self) -> float:
        return self.grid.hbar

    @property
    def cell(self) -> float:
        """Volume element dx^m"""
        return self.grid.spacing ** self.modes

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.cell)

    def to_json(self) -> dict:
        return {
            'backend': 'grid',
            'grid': self.grid.to_dict(),
            'modes': self.modes,
            'amplitudes': complex_to_pairs(self.amplitudes),
        }

    @classmethod
    def from_json(cls, payload: dict) -> 'GridState':
        g = payload['grid']
        grid = make_grid(g['n'], g['L'], g['hbar'])
        shape = (grid.n_points,) * int(payload['modes'])
        return cls(grid, pairs_to_complex(payload['amplitudes']).reshape(shape))


@dataclass(frozen=True)
class ProjectionWindow:
    """Finite-precision window [center - width/2, center + width/2) on one mode"""

    center: float
    width: float
    mode: int = 0

    def mask(self, grid: Grid) -> np.ndarray:
        if self.width < grid.spacing * (1 - 1e-12):
            raise DomainError(f"window width {self.width} is below one grid bin ({grid.spacing})")
        lo = self.center - self.width / 2.0
        hi = self.center + self.width / 2.0
        half = grid.extent / 2.0
        slack = 1e-9 * grid.spacing
        if lo < -half - slack or hi > half + slack:
            raise DomainError(f"window [{lo}, {hi}) extends outside the grid [-{half}, {half})")
        return (grid.x >= lo - slack) & (grid.x < hi - slack)


class OperatorKind(Enum):
    X = 'x'
    P = 'p'
    X_DIAGONAL = 'diagonal-in-x'
    P_DIAGONAL = 'diagonal-in-p'
    COMBINATION = 'combination'

    @property
    def diagonal_in_x(self) -> bool:
        return self in (OperatorKind.X, OperatorKind.X_DIAGONAL)

    @property
    def diagonal_in_p(self) -> bool:
        return self in (OperatorKind.P, OperatorKind.P_DIAGONAL)


@dataclass(frozen=True)
class QuadratureOperator:

    """x_coeff * x + p_coeff * p + f(x) + g(p) acting on one mode"""

    mode: int = 0
    x_coeff: complex = 0.0
    p_coeff: complex = 0.0
    x_function: Optional[Callable] = None
    p_function: Optional[Callable] = None

    @classmethod
    def X(cls, mode: int = 0) -> 'QuadratureOperator':
        return cls(mode=mode, x_coeff=1.0)

    @classmethod
    def P(cls, mode: int = 0) -> 'QuadratureOperator':
        return cls(mode=mode, p_coeff=1.0)

    @classmethod
    def diagonal_in_x(cls, f: Callable, mode: int = 0) -> 'QuadratureOperator':
        return cls(mode=mode, x_function=f)

    @classmethod
    def diagonal_in_p(cls, g: Callable, mode: int = 0) -> 'QuadratureOperator':
        return cls(mode=mode, p_function=g)

    @property
    def kind(self) -> OperatorKind:
        """The single term present, or COMBINATION for sums (and for the zero operator)"""
        parts = [
            (self.x_coeff != 0, OperatorKind.X),
            (self.p_coeff != 0, OperatorKind.P),
            (self.x_function is not None, OperatorKind.X_DIAGONAL),
            (self.p_function is not None, OperatorKind.P_DIAGONAL),
        ]
        present = [k for on, k in parts if on]
        return present[0] if len(present) == 1 else OperatorKind.COMBINATION

    def __add__(self, other: 'QuadratureOperator') -> 'QuadratureOperator':
        if other.mode != self.mode:
            raise ContractError("cannot add operators acting on different modes")
        return QuadratureOperator(
            mode=self.mode,
            x_coeff=self.x_coeff + other.x_coeff,
            p_coeff=self.p_coeff + other.p_coeff,
            x_function=_sum_functions(self.x_function, other.x_function),
            p_function=_sum_functions(self.p_function, other.p_function),
        )

    def __rmul__(self, scale: float) -> 'QuadratureOperator':
        return QuadratureOperator(
            mode=self.mode,
            x_coeff=scale * self.x_coeff,
            p_coeff=scale * self.p_coeff,
            x_function=None if self.x_function is None else (lambda x, f=self.x_function: scale * f(x)),
            p_function=None if self.p_function is None else (lambda p, g=self.p_function: scale * g(p)),
        )


def _sum_functions(f: Optional[Callable], g: Optional[Callable]) -> Optional[Callable]:
    if f is None:
        return g
    if g is None:
        return f
    return lambda v: f(v) + g(v)


# ========================================
# CONSTRUCTORS
# ========================================


def _warn_if_edge_mass(amplitudes: np.ndarray) -> None:
    peak = np.max(np.abs(amplitudes))
    if peak == 0:
        return
    for axis in range(amplitudes.ndim):
        edge = max(np.max(np.abs(np.take(amplitudes, 0, axis=axis))),
                   np.max(np.abs(np.take(amplitudes, -1, axis=axis))))
        if edge > EDGE_WARN_RATIO * peak:
            logger.warning("state has boundary amplitude %.3g of peak on mode %d; "
                           "spectral p is inaccurate near the edges", edge / peak, axis)
            return


def _normalized(grid: Grid, amplitudes: np.ndarray) -> GridState:
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if not np.all(np.isfinite(amplitudes)):
        raise DegenerateStateError("state samples are not finite")
    mass = np.sum(np.abs(amplitudes) ** 2) * grid.spacing ** amplitudes.ndim
    if mass == 0:
        raise DegenerateStateError("all samples are zero")
    _warn_if_edge_mass(amplitudes)
    return GridState(grid, amplitudes / np.sqrt(mass))


def from_function(f: Callable, grid: Grid, mode_count: int = 1) -> GridState:
    """Sample f on the grid and normalise; for two modes f takes (x1, x2)"""
    if mode_count == 1:
        return _normalized(grid, sample(f, grid.x))
    if mode_count == 2:
        x1, x2 = np.meshgrid(grid.x, grid.x, indexing='ij')
        return _normalized(grid, np.asarray(f(x1, x2), dtype=complex))
    raise DomainError(f"grid backend supports 1 or 2 modes, got {mode_count}")


def vacuum(grid: Grid) -> GridState:
    return from_function(lambda x: np.exp(-x * x / (2.0 * grid.hbar)), grid)


def realistic_gaussian(x0: float, R: float, grid: Grid) -> GridState:
    """Gaussian substitute for |x0>: psi ~ exp(-R^2 (x - x0)^2 / 2 hbar); R > 1 squeezes x"""
    if not R > 0:
        raise DomainError(f"squeezing factor R must be positive, got {R}")
    return from_function(lambda x: np.exp(-(R * (x - x0)) ** 2 / (2.0 * grid.hbar)), grid)


def position_eigenstate(x0: float, grid: Grid) -> GridState:
    """Grid delta: 1/sqrt(dx) on the bin containing x0"""
    amps = np.zeros(grid.n_points, dtype=complex)
    amps[grid.bin_of(x0)] = 1.0 / np.sqrt(grid.spacing)
    return GridState(grid, amps)


def momentum_eigenstate(p0: float, grid: Grid) -> GridState:
    """Plane wave exp(i p0 x / hbar), normalised over the grid extent"""
    return _normalized(grid, np.exp(1j * p0 * grid.x / grid.hbar))


def number_state(n: int, grid: Grid) -> GridState:
    """Oscillator eigenfunction psi_n on the grid"""
    return _normalized(grid, hermite_function(n, grid))


def product_state(first: GridState, second: GridState) -> GridState:
    if first.grid != second.grid:
        raise ContractError("product_state needs both factors on the same grid")
    if first.modes + second.modes > MAX_GRID_MODES:
        raise DomainError(f"grid backend supports at most {MAX_GRID_MODES} modes")
    return GridState(first.grid, np.multiply.outer(first.amplitudes, second.amplitudes))


def entangled_pair(g: Callable, c: float, grid: Grid) -> GridState:
    """amplitude(x1, x2) ~ g(x1) K(x2 - (x1 - c)) with K one bin wide"""
    shift = c / grid.spacing
    bins = int(round(shift))
    if abs(shift - bins) > 1e-9:
        logger.warning("offset c = %g is not a whole number of bins; rounded to %d bins", c, bins)
    weights = sample(g, grid.x)
    amps = np.zeros((grid.n_points, grid.n_points), dtype=complex)
    k1 = np.arange(grid.n_points)
    k2 = k1 - bins
    keep = (k2 >= 0) & (k2 < grid.n_points)
    amps[k1[keep], k2[keep]] = weights[keep]
    return _normalized(grid, amps)


# ========================================
# GATES
# ========================================


def _check_mode(state: GridState, mode: int) -> None:
    if not 0 <= mode < state.modes:
        raise DomainError(f"mode {mode} out of range for a {state.modes}-mode state")


def _along(vector: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = -1
    return vector.reshape(shape)


def fourier_gate(state: GridState, mode: int, inverse: bool = False) -> GridState:
    """F on one mode: the x_to_p transform read back on the x axis (needs dx == dp)"""
    _check_mode(state, mode)
    if not state.grid.is_self_dual:
        raise ConfigurationError(
            f"Fourier gate needs a self-dual grid (dx = dp); got dx={state.grid.spacing}, dp={state.grid.dp}"
        )
    transform = p_to_x_transform if inverse else x_to_p_transform
    return GridState(state.grid, transform(state.amplitudes, state.grid, axis=mode))


def parity(state: GridState, mode: int) -> GridState:
    """psi(x) -> psi(-x) on one mode (U(pi))"""
    _check_mode(state, mode)
    return GridState(state.grid, np.flip(state.amplitudes, axis=mode))


def rotate(state: GridState, mode: int, theta: float) -> GridState:
    """U(theta) for the angles the grid supports: multiples of pi/2"""
    quarter = (theta / (np.pi / 2.0)) % 4.0
    nearest = round(quarter) % 4
    if abs(quarter - round(quarter)) > ANGLE_TOLERANCE:
        raise CapabilityError(f"grid backend only rotates by multiples of pi/2, got {theta}")
    if nearest == 0:
        return state
    if nearest == 1:
        return fourier_gate(state, mode)
    if nearest == 2:
        return parity(state, mode)
    return fourier_gate(state, mode, inverse=True)


def displace(state: GridState, mode: int, dx_amount: float, dp_amount: float) -> GridState:
    """D(dx, dp) = exp(-i dx dp / 2 hbar) exp(i dp x / hbar) exp(-i dx p / hbar)"""
    _check_mode(state, mode)
    grid = state.grid
    if abs(dx_amount) >= grid.extent / 4.0:
        raise WraparoundError(f"position shift {dx_amount} exceeds a quarter of the extent {grid.extent}")
    if abs(dp_amount) >= grid.n_points * grid.dp / 4.0:
        raise WraparoundError(f"momentum kick {dp_amount} exceeds a quarter of the momentum extent")

    hbar = grid.hbar
    ndim = state.modes
    amps = state.amplitudes
    if dx_amount != 0.0:
        phi = x_to_p_transform(amps, grid, axis=mode)
        phi = phi * _along(np.exp(-1j * dx_amount * grid.p / hbar), ndim, mode)
        amps = p_to_x_transform(phi, grid, axis=mode)
    if dp_amount != 0.0:
        amps = amps * _along(np.exp(1j * dp_amount * grid.x / hbar), ndim, mode)
    return GridState(grid, amps * np.exp(-0.5j * dx_amount * dp_amount / hbar))


def squeeze(state: GridState, mode: int, r: float, phi: float = 0.0) -> GridState:
    """S(r e^{i phi}) for phi in {0, pi}: psi(x) -> e^{s/2} psi(e^s x), s = +-r

    The dilation is evaluated by band-limited interpolation of the sampled state;
    samples whose source point falls outside the grid are set to zero. Mass lost
    that way is restored by renormalising, with a warning above NORM_TOLERANCE
    and a WraparoundError above SQUEEZE_LOSS_LIMIT.
    """
    _check_mode(state, mode)
    turns = (phi / np.pi) % 2.0
    if abs(turns - round(turns)) > ANGLE_TOLERANCE:
        raise CapabilityError(f"grid backend only squeezes along x or p (phi in {{0, pi}}), got phi={phi}")
    s = r if round(turns) % 2 == 0 else -r
    if s == 0.0:
        return state

    grid = state.grid
    z = np.exp(s) * grid.x
    kernel = np.exp(1j * np.outer(z, grid.p) / grid.hbar) * grid.dp / np.sqrt(2.0 * np.pi * grid.hbar)
    kernel[np.abs(z) >= grid.extent / 2.0, :] = 0.0
    phi_amps = x_to_p_transform(state.amplitudes, grid, axis=mode)
    moved = np.moveaxis(phi_amps, mode, -1) @ kernel.T
    amps = np.exp(s / 2.0) * np.moveaxis(moved, -1, mode)

    before = state.norm()
    after = float(np.sum(np.abs(amps) ** 2) * state.cell)
    lost = 1.0 - after / before
    if lost > SQUEEZE_LOSS_LIMIT:
        raise WraparoundError(f"squeezing by r={r} leaves {lost:.3g} of the norm outside the grid")
    if abs(lost) > NORM_TOLERANCE:
        logger.warning("squeezing by r=%g changed the norm by %.3g on the grid; renormalising", r, -lost)
    _warn_if_edge_mass(amps)
    return GridState(grid, amps * np.sqrt(before / after))



def _shear(amps: np.ndarray, grid: Grid, along: int, amount: float) -> np.ndarray:
    """f(y) -> f(y + amount * y_other * e_along), one spectral shift per line"""
    phi = x_to_p_transform(amps, grid, axis=along)
    if along == 0:
        phase = np.exp(1j * np.outer(grid.p, amount * grid.x) / grid.hbar)
    else:
        phase = np.exp(1j * np.outer(amount * grid.x, grid.p) / grid.hbar)
    return p_to_x_transform(phi * phase, grid, axis=along)


def mix(state: GridState, mode_a: int, mode_b: int, theta: float, phi: float = 0.0) -> GridState:
    """B(theta, phi) for phi in {0, pi}: psi(y) -> psi(R y), R the (x_a, x_b) rotation

    The rotation is three shears (tan(theta/2), -sin(theta), tan(theta/2)); angles
    beyond pi/2 first take out a joint parity.
    """
    if state.modes != 2:
        raise ContractError("mixer needs a two-mode state")
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ContractError(f"mixer needs two distinct modes, got {mode_a} twice")
    turns = (phi / np.pi) % 2.0
    if abs(turns - round(turns)) > ANGLE_TOLERANCE:
        raise CapabilityError(f"grid backend only mixes with phi in {{0, pi}}, got phi={phi}")
    if round(turns) % 2 == 1:
        theta = -theta

    amps = state.amplitudes if mode_a == 0 else state.amplitudes.T
    theta = (theta + np.pi) % (2.0 * np.pi) - np.pi
    if abs(theta) > np.pi / 2.0:
        amps = amps[::-1, ::-1]
        theta -= np.sign(theta) * np.pi
    if theta != 0.0:
        a = np.tan(theta / 2.0)
        amps = _shear(amps, state.grid, 0, a)
        amps = _shear(amps, state.grid, 1, -np.sin(theta))
        amps = _shear(amps, state.grid, 0, a)
    _warn_if_edge_mass(amps)
    return GridState(state.grid, amps if mode_a == 0 else amps.T)


def project(state: GridState, window: ProjectionWindow) -> Tuple[GridState, float]:
    """Zero amplitudes outside the window; returns the unnormalised state and surviving mass"""
    _check_mode(state, window.mode)
    mask = _along(window.mask(state.grid), state.modes, window.mode)
    amps = np.where(mask, state.amplitudes, 0.0)
    weight = float(np.sum(np.abs(amps) ** 2) * state.cell)
    return GridState(state.grid, amps), weight


def invert_about(state: GridState, window: ProjectionWindow) -> GridState:
    """I = 2P - 1: keep amplitudes inside the window, negate those outside"""
    _check_mode(state, window.mode)
    mask = _along(window.mask(state.grid), state.modes, window.mode)
    return GridState(state.grid, np.where(mask, state.amplitudes, -state.amplitudes))


# ========================================
# MEASUREMENT
# ========================================


def bin_probabilities(state: GridState, mode: int) -> np.ndarray:
    """Probability of each x bin of one mode"""
    _check_mode(state, mode)
    dens = np.abs(state.amplitudes) ** 2 * state.cell
    other = tuple(a for a in range(state.modes) if a != mode)
    return np.sum(dens, axis=other) if other else dens


def sample_bins(state: GridState, mode: int, rng: np.random.Generator, shots: int) -> np.ndarray:
    pmf = bin_probabilities(state, mode)
    total = float(np.sum(pmf))
    if abs(total - 1.0) > NORM_TOLERANCE:
        raise ContractError(f"measurement needs a normalised state, norm is {total}")
    return rng.choice(state.grid.n_points, size=shots, p=pmf / total)


def measure_x(state: GridState, mode: int, rng: np.random.Generator) -> Tuple[int, float, GridState]:
    """One-bin x measurement; the measured mode collapses in place onto the outcome bin"""
    k = int(sample_bins(state, mode, rng, 1)[0])
    grid = state.grid
    collapsed = np.zeros(grid.n_points, dtype=complex)
    collapsed[k] = 1.0 / np.sqrt(grid.spacing)
    if state.modes == 1:
        return k, float(grid.x[k]), GridState(grid, collapsed)

    rest = np.take(state.amplitudes, k, axis=mode)
    rest_state = _normalized(grid, rest)
    if mode == 0:
        post = np.multiply.outer(collapsed, rest_state.amplitudes)
    else:
        post = np.multiply.outer(rest_state.amplitudes, collapsed)
    return k, float(grid.x[k]), GridState(grid, post)


# ========================================
# OBSERVABLES
# ========================================


def _real_on(values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.max(np.abs(values.imag)) > 1e-12 * scale:
        raise ContractError(f"{what} is not real-valued on the grid; operator is not Hermitian")
    return values.real


def _check_hermitian(op: QuadratureOperator) -> None:
    if abs(np.imag(op.x_coeff)) > 0 or abs(np.imag(op.p_coeff)) > 0:
        raise ContractError("operator coefficients must be real")


def apply_operator(state: GridState, op: QuadratureOperator) -> np.ndarray:
    """Raw amplitudes of op|psi> (not normalised)"""
    _check_mode(state, op.mode)
    _check_hermitian(op)
    grid = state.grid
    ndim = state.modes
    psi = state.amplitudes
    kind = op.kind
    out = np.zeros_like(psi)
    if not kind.diagonal_in_p:
        x_diag = op.x_coeff * grid.x
        if op.x_function is not None:
            x_diag = x_diag + _real_on(sample(op.x_function, grid.x), "x-diagonal function")
        out = out + psi * _along(np.asarray(x_diag, dtype=complex), ndim, op.mode)
    if not kind.diagonal_in_x:
        p_diag = op.p_coeff * grid.p
        if op.p_function is not None:
            p_diag = p_diag + _real_on(sample(op.p_function, grid.p), "p-diagonal function")
        phi = x_to_p_transform(psi, grid, axis=op.mode)
        out = out + p_to_x_transform(phi * _along(np.asarray(p_diag, dtype=complex), ndim, op.mode),
                                     grid, axis=op.mode)
    return out



def _braket(state: GridState, left: np.ndarray, right: np.ndarray) -> complex:
    return complex(np.sum(np.conj(left) * right) * state.cell)


def expectation(state: GridState, op: QuadratureOperator) -> float:
    """<psi|A|psi> by quadrature"""
    value = _braket(state, state.amplitudes, apply_operator(state, op))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ContractError(f"expectation has imaginary part {value.imag}; operator is not Hermitian")
    return value.real


def moments(state: GridState, mode: int) -> Tuple[float, float, float, float]:
    """(<x>, <p>, dx, dp) of one mode"""
    _check_mode(state, mode)
    grid = state.grid
    px = bin_probabilities(state, mode)
    mean_x = float(np.sum(px * grid.x))
    var_x = float(np.sum(px * (grid.x - mean_x) ** 2))

    phi = x_to_p_transform(state.amplitudes, grid, axis=mode)
    dens = np.abs(phi) ** 2 * grid.dp * grid.spacing ** (state.modes - 1)
    other = tuple(a for a in range(state.modes) if a != mode)
    pp = np.sum(dens, axis=other) if other else dens
    mean_p = float(np.sum(pp * grid.p))
    var_p = float(np.sum(pp * (grid.p - mean_p) ** 2))
    return mean_x, mean_p, float(np.sqrt(var_x)), float(np.sqrt(var_p))


def uncertainty_product(state: GridState, mode: int = 0) -> Tuple[float, float, float]:
    _, _, dx, dp = moments(state, mode)
    return dx, dp, dx * dp


def generalized_uncertainty_check(state: GridState, A: QuadratureOperator,
                                  B: QuadratureOperator) -> Tuple[float, float, bool]:
    """dA dB against |<[A, B]>| / 2"""
    a_psi = apply_operator(state, A)
    b_psi = apply_operator(state, B)
    mean_a = _braket(state, state.amplitudes, a_psi).real
    mean_b = _braket(state, state.amplitudes, b_psi).real
    var_a = max(_braket(state, a_psi, a_psi).real - mean_a ** 2, 0.0)
    var_b = max(_braket(state, b_psi, b_psi).real - mean_b ** 2, 0.0)
    lhs = float(np.sqrt(var_a * var_b))

    ab = _braket(state, state.amplitudes, apply_operator(GridState(state.grid, b_psi), A))
    ba = _braket(state, state.amplitudes, apply_operator(GridState(state.grid, a_psi), B))
    rhs = float(abs(ab - ba) / 2.0)
    return lhs, rhs, lhs >= rhs * (1 - 1e-6)


def commutator_residual(grid: Grid, test_state: GridState) -> float:
    """max |(xp - px) psi - i hbar psi| over the interior half of the grid"""
    X = QuadratureOperator.X()
    P = QuadratureOperator.P()
    p_psi = GridState(grid, apply_operator(test_state, P))
    x_psi = GridState(grid, apply_operator(test_state, X))
    xp = apply_operator(p_psi, X)
    px = apply_operator(x_psi, P)
    residual = xp - px - 1j * grid.hbar * test_state.amplitudes
    interior = np.abs(grid.x) < grid.extent / 4.0
    return float(np.max(np.abs(residual[interior])))


def apply_hamiltonian(state: GridState) -> np.ndarray:
    """(p^2 + x^2) / 2 applied to a single-mode state"""
    if state.modes != 1:
        raise DomainError("apply_hamiltonian is defined for single-mode states")
    half_p2 = QuadratureOperator.diagonal_in_p(lambda p: 0.5 * p * p)
    half_x2 = QuadratureOperator.diagonal_in_x(lambda x: 0.5 * x * x)
    return apply_operator(state, half_p2 + half_x2)


def energy(state: GridState) -> float:
    return _braket(state, state.amplitudes, apply_hamiltonian(state)).real


def inner_product(a: GridState, b: GridState) -> complex:
    if a.grid != b.grid or a.modes != b.modes:
        raise ContractError("inner product needs states on the same grid with the same mode count")
    return _braket(a, a.amplitudes, b.amplitudes)


def fidelity(a: GridState, b: GridState) -> float:
    return float(abs(inner_product(a, b)) ** 2)
