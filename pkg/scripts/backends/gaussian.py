"""
Gaussian backend: states as (mean, covariance) in phase space

Ordering is interleaved, (x1, p1, ..., xm, pm). A gate with symplectic S and
displacement d maps mean -> S mean + d and cov -> S cov S^T. The covariance is
re-symmetrised after every conjugation.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from scripts.utils.errors import ContractError, DomainError

logger = logging.getLogger(__name__)

MAX_SQUEEZE = 10.0


@dataclass(frozen=True)
class GaussianState:
    modes: int
    mean: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)
    hbar: float = 2.0

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float).reshape(2 * self.modes, 2 * self.modes)
        if mean.shape != (2 * self.modes,):
            raise ContractError(f"mean must have length {2 * self.modes}, got {mean.shape}")
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)

    def to_json(self) -> dict:
        return {
            'backend': 'gaussian',
            'modes': self.modes,
            'hbar': self.hbar,
            'mean': [float(v) for v in self.mean],
            'cov': [[float(v) for v in row] for row in self.cov],
        }

    @classmethod
    def from_json(cls, payload: dict) -> 'GaussianState':
        return gaussian_state(payload['mean'], payload['cov'], payload['hbar'])


@dataclass(frozen=True)
class SymplecticGate:
    """Full 2m x 2m symplectic plus displacement"""

    matrix: np.ndarray
    displacement: np.ndarray

    def apply(self, state: GaussianState) -> GaussianState:
        s = self.matrix
        return GaussianState(state.modes, s @ state.mean + self.displacement,
                             s @ state.cov @ s.T, state.hbar)


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal Omega with [[0, 1], [-1, 0]] per mode"""
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def is_symplectic(s: np.ndarray, tol: float = 1e-10) -> bool:
    omega = symplectic_form(s.shape[0] // 2)
    return bool(np.max(np.abs(s.T @ omega @ s - omega)) < tol)


def check_physical(state: GaussianState, tol: float = 1e-9) -> None:
    """cov + i (hbar/2) Omega must be positive semidefinite"""
    if state.modes == 0:
        return
    if np.max(np.abs(state.cov - state.cov.T)) > 1e-12 * max(1.0, np.max(np.abs(state.cov))):
        raise ContractError("covariance is not symmetric")
    herm = state.cov + 0.5j * state.hbar * symplectic_form(state.modes)
    lowest = float(np.min(np.linalg.eigvalsh(herm)))
    if lowest < -tol:
        raise ContractError(f"covariance violates the uncertainty relation (eigenvalue {lowest:.3g})")


def gaussian_state(mean, cov, hbar: float = 2.0) -> GaussianState:
    """Validated constructor"""
    mean = np.asarray(mean, dtype=float).reshape(-1)
    if mean.size % 2:
        raise ContractError("mean vector must have even length")
    state = GaussianState(mean.size // 2, mean, cov, float(hbar))
    check_physical(state)
    return state


def vacuum(modes: int, hbar: float = 2.0) -> GaussianState:
    if modes < 1:
        raise DomainError(f"need at least one mode, got {modes}")
    return GaussianState(modes, np.zeros(2 * modes), 0.5 * hbar * np.eye(2 * modes), float(hbar))


def is_pure(state: GaussianState, rel_tol: float = 1e-9) -> bool:
    target = (0.5 * state.hbar) ** (2 * state.modes)
    return abs(np.linalg.det(state.cov) - target) <= rel_tol * target


def squeezing_factor(r: float) -> float:
    """R = e^r, the width ratio of a squeezed Gaussian wavefunction"""
    return float(np.exp(r))


def squeeze_parameter(R: float) -> float:
    if not R > 0:
        raise DomainError(f"squeezing factor must be positive, got {R}")
    return float(np.log(R))


# ========================================
# SINGLE- AND TWO-MODE SYMPLECTICS
# ========================================


def rotation(theta: float) -> np.ndarray:
    """Heisenberg action of exp(-i theta N)"""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeezing(r: float, phi: float) -> np.ndarray:
    cp, sp = math.cos(phi), math.sin(phi)
    ch, sh = math.cosh(r), math.sinh(r)
    return np.array([[ch - cp * sh, -sp * sh], [-sp * sh, ch + cp * sh]])


def mixer(theta: float, phi: float) -> np.ndarray:
    """exp(theta (e^{-i phi} a1 a2^dag - e^{i phi} a1^dag a2)) on (x1, p1, x2, p2)"""
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array([
        [ct, 0.0, -st * cp, st * sp],
        [0.0, ct, -st * sp, -st * cp],
        [st * cp, st * sp, ct, 0.0],
        [-st * sp, st * cp, 0.0, ct],
    ])


def _check_mode(state: GaussianState, mode: int) -> None:
    if not 0 <= mode < state.modes:
        raise DomainError(f"mode {mode} out of range for a {state.modes}-mode state")


def expand(block: np.ndarray, modes_acted: Tuple[int, ...], total: int) -> np.ndarray:
    """Embed a 2k x 2k block acting on modes_acted into the full 2m x 2m matrix"""
    full = np.eye(2 * total)
    idx = np.array([2 * m + q for m in modes_acted for q in (0, 1)])
    full[np.ix_(idx, idx)] = block
    return full


def _conjugate(state: GaussianState, block: np.ndarray, modes_acted: Tuple[int, ...]) -> GaussianState:
    s = expand(block, modes_acted, state.modes)
    return SymplecticGate(s, np.zeros(2 * state.modes)).apply(state)


# ========================================
# GATES
# ========================================


def apply_xz(state: GaussianState, mode: int, dx_amount: float, dp_amount: float) -> GaussianState:
    """Shift the (x, p) means of one mode by (dx, dp)"""
    _check_mode(state, mode)
    mean = np.array(state.mean)
    mean[2 * mode] += dx_amount
    mean[2 * mode + 1] += dp_amount
    return GaussianState(state.modes, mean, state.cov, state.hbar)


def apply_displacement(state: GaussianState, mode: int, alpha: complex) -> GaussianState:
    """D(alpha): means shift by sqrt(2 hbar) (Re alpha, Im alpha)"""
    scale = math.sqrt(2.0 * state.hbar)
    alpha = complex(alpha)
    return apply_xz(state, mode, scale * alpha.real, scale * alpha.imag)


def apply_rotation(state: GaussianState, mode: int, theta: float) -> GaussianState:
    _check_mode(state, mode)
    return _conjugate(state, rotation(theta), (mode,))


def apply_squeeze(state: GaussianState, mode: int, r: float, phi: float = 0.0) -> GaussianState:
    _check_mode(state, mode)
    if abs(r) > MAX_SQUEEZE:
        raise DomainError(f"|r| must be <= {MAX_SQUEEZE}, got {r}")
    return _conjugate(state, squeezing(r, phi), (mode,))


def apply_mixer(state: GaussianState, mode_a: int, mode_b: int, theta: float, phi: float) -> GaussianState:
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ContractError(f"mixer needs two distinct modes, got {mode_a} twice")
    return _conjugate(state, mixer(theta, phi), (mode_a, mode_b))


# ========================================
# MARGINALS AND MEASUREMENT
# ========================================


def marginal_x(state: GaussianState, mode: int) -> Tuple[float, float]:
    _check_mode(state, mode)
    return float(state.mean[2 * mode]), float(state.cov[2 * mode, 2 * mode])


def quadrature_moments(state: GaussianState, mode: int) -> Tuple[float, float, float, float]:
    """(<x>, <p>, dx, dp) of one mode"""
    _check_mode(state, mode)
    i = 2 * mode
    return (float(state.mean[i]), float(state.mean[i + 1]),
            float(np.sqrt(state.cov[i, i])), float(np.sqrt(state.cov[i + 1, i + 1])))


def reduced_state(state: GaussianState, modes_kept: Tuple[int, ...]) -> GaussianState:
    idx = np.array([2 * m + q for m in modes_kept for q in (0, 1)], dtype=int)
    return GaussianState(len(modes_kept), state.mean[idx], state.cov[np.ix_(idx, idx)], state.hbar)


def homodyne_x(state: GaussianState, mode: int,
               rng: np.random.Generator) -> Tuple[float, Optional[GaussianState]]:
    """Sample x of one mode and condition the others on the outcome; the measured mode is dropped"""
    mu, var = marginal_x(state, mode)
    outcome = float(rng.normal(mu, math.sqrt(var)))

    rest = tuple(m for m in range(state.modes) if m != mode)
    if not rest:
        return outcome, GaussianState(0, np.zeros(0), np.zeros((0, 0)), state.hbar)

    i = 2 * mode
    idx = np.array([2 * m + q for m in rest for q in (0, 1)], dtype=int)
    cross = state.cov[idx, i]
    mean = state.mean[idx] + cross * (outcome - mu) / var
    cov = state.cov[np.ix_(idx, idx)] - np.outer(cross, cross) / var
    return outcome, GaussianState(len(rest), mean, cov, state.hbar)


def wigner_params(state: GaussianState, mode: int) -> Tuple[np.ndarray, np.ndarray]:
    """Reduced single-mode (mean, cov) of the Gaussian Wigner function"""
    _check_mode(state, mode)
    reduced = reduced_state(state, (mode,))
    if abs(np.linalg.det(reduced.cov)) < 1e-300:
        raise ContractError(f"reduced covariance of mode {mode} is singular")
    return np.array(reduced.mean), np.array(reduced.cov)
