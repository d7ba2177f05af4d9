"""
Truncated number-basis backend

Basis |0>..|D-1> per mode, one or two modes. Gate matrices are matrix
exponentials of the truncated generators; every generator is anti-Hermitian
on the truncated space, so the gates are exactly unitary there and truncation
shows up only as population reaching the top level.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from scripts.backends.gridstate import GridState
from scripts.utils.errors import (
    ConfigurationError,
    ContractError,
    DomainError,
    ResourceError,
    TruncationError,
)
from scripts.utils.helpers import complex_to_pairs, pairs_to_complex
from scripts.utils.numerics import Grid, hermite_functions, matrix_exp

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 40
MAX_CUTOFF = 64
MAX_MIXER_DIM = 4096
LEAKAGE_WARN = 1e-6
LEAKAGE_ERROR = 1e-3


@dataclass(frozen=True)
class FockState:
    modes: int
    cutoff: int
    amplitudes: np.ndarray = field(repr=False)
    hbar: float = 2.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if self.modes not in (1, 2):
            raise DomainError(f"Fock backend supports 1 or 2 modes, got {self.modes}")
        if amps.shape != (self.cutoff,) * self.modes:
            raise ContractError(f"amplitude shape {amps.shape} does not match cutoff {self.cutoff}")
        amps.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amps)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def to_json(self) -> dict:
        return {
            'backend': 'fock',
            'cutoff': self.cutoff,
            'modes': self.modes,
            'hbar': self.hbar,
            'amplitudes': complex_to_pairs(self.amplitudes),
        }

    @classmethod
    def from_json(cls, payload: dict) -> 'FockState':
        cutoff, modes = int(payload['cutoff']), int(payload['modes'])
        amps = pairs_to_complex(payload['amplitudes']).reshape((cutoff,) * modes)
        return cls(modes, cutoff, amps, float(payload['hbar']))


@dataclass(frozen=True)
class LadderOps:
    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray


def _check_cutoff(cutoff: int) -> None:
    if cutoff < 2:
        raise DomainError(f"cutoff must be at least 2, got {cutoff}")
    if cutoff > MAX_CUTOFF:
        raise DomainError(f"cutoff must be at most {MAX_CUTOFF}, got {cutoff}")


def ladder_ops(cutoff: int) -> LadderOps:
    """a has sqrt(n) on the superdiagonal"""
    _check_cutoff(cutoff)
    a = np.diag(np.sqrt(np.arange(1, cutoff)), k=1).astype(complex)
    a_dag = a.conj().T
    return LadderOps(a, a_dag, a_dag @ a)


def quadrature_ops(cutoff: int, hbar: float = 2.0) -> Tuple[np.ndarray, np.ndarray]:
    ops = ladder_ops(cutoff)
    scale = math.sqrt(hbar / 2.0)
    x = scale * (ops.a + ops.a_dag)
    p = -1j * scale * (ops.a - ops.a_dag)
    return x, p


def hamiltonian(cutoff: int, hbar: float = 2.0) -> np.ndarray:
    """H = (p^2 + x^2) / 2"""
    x, p = quadrature_ops(cutoff, hbar)
    return 0.5 * (p @ p + x @ x)


# ========================================
# STATES
# ========================================


def vacuum(modes: int = 1, cutoff: int = DEFAULT_CUTOFF, hbar: float = 2.0) -> FockState:
    _check_cutoff(cutoff)
    amps = np.zeros((cutoff,) * modes, dtype=complex)
    amps[(0,) * modes] = 1.0
    return FockState(modes, cutoff, amps, hbar)


def number_state(n: int, cutoff: int = DEFAULT_CUTOFF, hbar: float = 2.0) -> FockState:
    _check_cutoff(cutoff)
    if not 0 <= n < cutoff:
        raise DomainError(f"number state {n} outside cutoff {cutoff}")
    amps = np.zeros(cutoff, dtype=complex)
    amps[n] = 1.0
    return FockState(1, cutoff, amps, hbar)


def coherent(alpha: complex, cutoff: int = DEFAULT_CUTOFF, hbar: float = 2.0) -> FockState:
    """c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) by running product"""
    _check_cutoff(cutoff)
    alpha = complex(alpha)
    if abs(alpha) ** 2 >= cutoff / 4.0:
        raise TruncationError(f"|alpha|^2 = {abs(alpha) ** 2:.3g} needs a cutoff above {4 * abs(alpha) ** 2:.0f}")
    amps = np.empty(cutoff, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return FockState(1, cutoff, amps, hbar)


def product_state(first: FockState, second: FockState) -> FockState:
    if first.modes + second.modes > 2:
        raise DomainError("Fock backend supports at most 2 modes")
    if first.cutoff != second.cutoff:
        raise ContractError("product_state needs equal cutoffs")
    return FockState(2, first.cutoff, np.multiply.outer(first.amplitudes, second.amplitudes), first.hbar)


# ========================================
# GATE MATRICES
# ========================================


def phase_matrix(theta: float, cutoff: int) -> np.ndarray:
    """exp(-i theta N)"""
    _check_cutoff(cutoff)
    return np.diag(np.exp(-1j * theta * np.arange(cutoff)))


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """exp(alpha a^dag - alpha* a)"""
    ops = ladder_ops(cutoff)
    alpha = complex(alpha)
    if abs(alpha) > math.sqrt(cutoff) / 3.0:
        raise TruncationError(f"|alpha| = {abs(alpha):.3g} exceeds sqrt(cutoff)/3 for cutoff {cutoff}")
    return matrix_exp(alpha * ops.a_dag - alpha.conjugate() * ops.a)


def squeeze_matrix(zeta: complex, cutoff: int) -> np.ndarray:
    """exp((zeta* a^2 - zeta a^dag^2) / 2)"""
    ops = ladder_ops(cutoff)
    zeta = complex(zeta)
    if abs(zeta) > 2.0:
        raise TruncationError(f"|zeta| = {abs(zeta):.3g} exceeds 2")
    return matrix_exp(0.5 * (zeta.conjugate() * ops.a @ ops.a - zeta * ops.a_dag @ ops.a_dag))


def gate_matrix(kind: str, parameter: complex, cutoff: int) -> np.ndarray:
    """kind is 'phase' (theta), 'displace' (alpha) or 'squeeze' (zeta)"""
    builders = {
        'phase': lambda: phase_matrix(float(np.real(parameter)), cutoff),
        'displace': lambda: displacement_matrix(parameter, cutoff),
        'squeeze': lambda: squeeze_matrix(parameter, cutoff),
    }
    if kind not in builders:
        raise DomainError(f"unknown Fock gate kind {kind!r}")
    return builders[kind]()


def mixer_matrix(theta: float, phi: float, cutoff: int) -> np.ndarray:
    """exp(theta (e^{-i phi} a1 a2^dag - e^{i phi} a1^dag a2)) on the D^2 product space"""
    if cutoff * cutoff > MAX_MIXER_DIM:
        raise ResourceError(f"mixer on cutoff {cutoff} needs a {cutoff ** 2}-dimensional matrix (max {MAX_MIXER_DIM})")
    ops = ladder_ops(cutoff)
    eye = np.eye(cutoff)
    a1 = np.kron(ops.a, eye)
    a2 = np.kron(eye, ops.a)
    generator = theta * (np.exp(-1j * phi) * a1 @ a2.conj().T - np.exp(1j * phi) * a1.conj().T @ a2)
    return matrix_exp(generator)


# ========================================
# APPLICATION
# ========================================


def top_level_population(state: FockState) -> float:
    """Largest population of the |D-1> level over the modes"""
    dens = np.abs(state.amplitudes) ** 2
    if state.modes == 1:
        return float(dens[-1])
    return float(max(dens[-1, :].sum(), dens[:, -1].sum()))


def check_leakage(state: FockState, warn_at: float = LEAKAGE_WARN, error_at: float = LEAKAGE_ERROR) -> FockState:
    leak = top_level_population(state)
    if leak > error_at:
        raise TruncationError(f"top Fock level holds {leak:.3g} of the population (cutoff {state.cutoff})")
    if leak > warn_at:
        logger.warning("top Fock level holds %.3g of the population; raise the cutoff above %d",
                       leak, state.cutoff)
    return state


def apply_gate(state: FockState, matrix: np.ndarray, modes: Tuple[int, ...],
               warn_at: float = LEAKAGE_WARN, error_at: float = LEAKAGE_ERROR) -> FockState:
    """Apply a single-mode (D x D) or two-mode (D^2 x D^2) matrix"""
    d = state.cutoff
    for m in modes:
        if not 0 <= m < state.modes:
            raise DomainError(f"mode {m} out of range for a {state.modes}-mode state")
    if len(modes) == 1:
        if matrix.shape != (d, d):
            raise ContractError(f"single-mode gate must be {d}x{d}, got {matrix.shape}")
        moved = np.tensordot(matrix, state.amplitudes, axes=([1], [modes[0]]))
        amps = np.moveaxis(moved, 0, modes[0])
    elif len(modes) == 2:
        if state.modes != 2 or modes[0] == modes[1]:
            raise ContractError("two-mode gate needs a two-mode state and two distinct modes")
        if matrix.shape != (d * d, d * d):
            raise ContractError(f"two-mode gate must be {d * d}x{d * d}, got {matrix.shape}")
        psi = state.amplitudes if modes == (0, 1) else state.amplitudes.T
        out = (matrix @ psi.reshape(-1)).reshape(d, d)
        amps = out if modes == (0, 1) else out.T
    else:
        raise ContractError("gates act on one or two modes")
    return check_leakage(FockState(state.modes, d, amps, state.hbar), warn_at, error_at)


def mean_photon_number(state: FockState, mode: int = 0) -> float:
    dens = np.abs(state.amplitudes) ** 2
    if state.modes == 2:
        dens = dens.sum(axis=1 - mode)
    return float(np.sum(np.arange(state.cutoff) * dens))


def reduced_amplitudes(state: FockState, mode: int) -> np.ndarray:
    """Single-mode amplitudes of a product state (raises for entangled states)"""
    if state.modes == 1:
        return np.array(state.amplitudes)
    psi = state.amplitudes if mode == 0 else state.amplitudes.T
    u, s, vh = np.linalg.svd(psi)
    if s.size > 1 and s[1] > 1e-9 * s[0]:
        raise ContractError(f"mode {mode} is entangled; it has no pure reduced state")
    return u[:, 0] * s[0]


def _check_synthesis_grid(state: FockState, grid: Grid) -> None:
    if abs(grid.hbar - state.hbar) > 1e-12 * state.hbar:
        raise ContractError(f"hbar mismatch: Fock state {state.hbar}, grid {grid.hbar}")
    needed = 2.0 * math.sqrt(2.0 * state.hbar * state.cutoff)
    if grid.extent < needed:
        raise ConfigurationError(
            f"grid extent {grid.extent:.3g} cannot resolve cutoff {state.cutoff}; need {needed:.3g}"
        )


def to_grid(state: FockState, grid: Grid, mode: int = 0) -> GridState:
    """psi(x) = sum_n c_n psi_n(x) by Hermite synthesis"""
    _check_synthesis_grid(state, grid)
    coeffs = reduced_amplitudes(state, mode)
    basis = hermite_functions(state.cutoff - 1, grid.x, state.hbar)
    return GridState(grid, coeffs @ basis)


def measure_x(state: FockState, mode: int, grid: Grid,
              rng: np.random.Generator) -> Tuple[float, Optional[FockState]]:
    """Sample x of one mode at one-bin precision; the measured mode is dropped

    A single-mode state leaves nothing behind and returns None.
    """
    if not 0 <= mode < state.modes:
        raise DomainError(f"mode {mode} out of range for a {state.modes}-mode state")
    _check_synthesis_grid(state, grid)
    basis = hermite_functions(state.cutoff - 1, grid.x, state.hbar)
    if state.modes == 1:
        psi = state.amplitudes @ basis
        pmf = np.abs(psi) ** 2 * grid.spacing
        k = int(rng.choice(grid.n_points, p=pmf / pmf.sum()))
        return float(grid.x[k]), None

    amps = state.amplitudes if mode == 0 else state.amplitudes.T
    joint = basis.T @ amps  # (x, n_other)
    pmf = np.sum(np.abs(joint) ** 2, axis=1) * grid.spacing
    k = int(rng.choice(grid.n_points, p=pmf / pmf.sum()))
    rest = joint[k]
    rest = rest / np.linalg.norm(rest)
    return float(grid.x[k]), FockState(1, state.cutoff, rest, state.hbar)
