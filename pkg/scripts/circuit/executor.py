"""
Circuit executor: dispatch a Circuit to the grid, Gaussian or Fock backend

Xgate(v) is a displacement (v, 0) in quadrature units, Zgate(v) is (0, v), and
Dgate(a, phi) is alpha = a e^{i phi}, a shift of sqrt(2 hbar) (Re alpha, Im alpha).
Fourier is Rgate(pi/2) on every backend. Preparations act on the vacuum the
mode starts in.

Measurement on the grid collapses the mode in place; the Gaussian and Fock
backends drop the measured mode, so later ops on the other modes are remapped.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from scripts.backends import fock, gaussian, gridstate
from scripts.backends.gridstate import GridState, ProjectionWindow
from scripts.circuit.ir import Circuit, GateOp, classify
from scripts.utils.errors import CapabilityError, ConfigurationError, ContractError
from scripts.utils.helpers import grid_preset_for
from scripts.utils.numerics import Grid, grid_from_preset

logger = logging.getLogger(__name__)

BACKENDS = ('grid', 'gaussian', 'fock')

State = Union[GridState, gaussian.GaussianState, fock.FockState]


@dataclass(frozen=True)
class BackendSpec:
    """Backend selector plus what it needs: a grid for grid runs (and Fock measurement), a cutoff for Fock"""

    kind: str
    hbar: float = 2.0
    grid: Optional[Grid] = None
    cutoff: int = fock.DEFAULT_CUTOFF
    leakage_warn: float = fock.LEAKAGE_WARN
    leakage_error: float = fock.LEAKAGE_ERROR

    def __post_init__(self):
        if self.kind not in BACKENDS:
            raise ConfigurationError(f"unknown backend {self.kind!r}; choose from {', '.join(BACKENDS)}")
        if self.kind == 'grid' and self.grid is None:
            raise ConfigurationError("grid backend needs a grid")
        if self.grid is not None and abs(self.grid.hbar - self.hbar) > 1e-12 * self.hbar:
            raise ContractError(f"hbar mismatch: backend {self.hbar}, grid {self.grid.hbar}")


@dataclass(frozen=True)
class Outcome:
    op_index: int
    mode: int
    value: float

    def to_json(self) -> dict:
        return {'op_index': self.op_index, 'mode': self.mode, 'value': self.value}


@dataclass(frozen=True)
class ExecutionResult:
    outcomes: List[Outcome] = field(default_factory=list)
    snapshot: Optional[State] = None

    def to_json(self) -> dict:
        return {
            'outcomes': [o.to_json() for o in self.outcomes],
            'snapshot': None if self.snapshot is None else self.snapshot.to_json(),
        }


def backend_from_config(config: Dict, kind: str, hbar: Optional[float] = None,
                        grid_preset: Optional[str] = None, cutoff: Optional[int] = None) -> BackendSpec:
    """BackendSpec from the config dict, with command-line overrides"""
    hbar = float(config['physics']['hbar']) if hbar is None else float(hbar)
    preset = grid_preset_for(config, grid_preset)
    grid = grid_from_preset(preset, hbar)
    fock_cfg = config['fock']
    return BackendSpec(
        kind=kind,
        hbar=hbar,
        grid=grid,
        cutoff=int(fock_cfg['cutoff'] if cutoff is None else cutoff),
        leakage_warn=float(fock_cfg['leakage_warn']),
        leakage_error=float(fock_cfg['leakage_error']),
    )


def _alpha(op: GateOp) -> complex:
    return op.param('a') * cmath.exp(1j * op.param('phi'))


def _quadrature_shift(op: GateOp, hbar: float):
    """(dx, dp) of Xgate, Zgate, Dgate and Coherent"""
    if op.kind == 'Xgate':
        return op.param('x'), 0.0
    if op.kind == 'Zgate':
        return 0.0, op.param('p')
    alpha = _alpha(op)
    scale = math.sqrt(2.0 * hbar)
    return scale * alpha.real, scale * alpha.imag


# ========================================
# GRID
# ========================================


def _grid_initial(c: Circuit, backend: BackendSpec) -> GridState:
    state = gridstate.vacuum(backend.grid)
    for _ in range(1, c.mode_count):
        state = gridstate.product_state(state, gridstate.vacuum(backend.grid))
    return state


def _grid_apply(state: GridState, op: GateOp, index: int, rng, outcomes: List[Outcome]) -> GridState:
    m = op.targets[0]
    if op.kind == 'Vacuum':
        return state
    if op.kind in ('Xgate', 'Zgate', 'Dgate', 'Coherent'):
        dx_amount, dp_amount = _quadrature_shift(op, state.hbar)
        return gridstate.displace(state, m, dx_amount, dp_amount)
    if op.kind in ('Sgate', 'Squeezed'):
        return gridstate.squeeze(state, m, op.param('r'), op.param('phi'))
    if op.kind == 'Rgate':
        return gridstate.rotate(state, m, op.param('theta'))
    if op.kind == 'Fourier':
        return gridstate.fourier_gate(state, m)
    if op.kind == 'BSgate':
        return gridstate.mix(state, op.targets[0], op.targets[1], op.param('theta'), op.param('phi'))
    if op.kind == 'Invert':
        return gridstate.invert_about(state, ProjectionWindow(op.param('x0'), op.param('width'), m))
    if op.kind == 'MeasureX':
        _, value, post = gridstate.measure_x(state, m, rng)
        outcomes.append(Outcome(index, m, value))
        return post
    raise CapabilityError(f"grid backend cannot run {op.kind}")


# ========================================
# GAUSSIAN
# ========================================


def _gaussian_apply(state: gaussian.GaussianState, op: GateOp, index: int, rng,
                    outcomes: List[Outcome], live: List[int]) -> gaussian.GaussianState:
    m = live.index(op.targets[0])
    if op.kind == 'Vacuum':
        return state
    if op.kind in ('Xgate', 'Zgate', 'Dgate', 'Coherent'):
        dx_amount, dp_amount = _quadrature_shift(op, state.hbar)
        return gaussian.apply_xz(state, m, dx_amount, dp_amount)
    if op.kind in ('Sgate', 'Squeezed'):
        return gaussian.apply_squeeze(state, m, op.param('r'), op.param('phi'))
    if op.kind == 'Rgate':
        return gaussian.apply_rotation(state, m, op.param('theta'))
    if op.kind == 'Fourier':
        return gaussian.apply_rotation(state, m, math.pi / 2)
    if op.kind == 'BSgate':
        return gaussian.apply_mixer(state, m, live.index(op.targets[1]), op.param('theta'), op.param('phi'))
    if op.kind == 'MeasureX':
        value, post = gaussian.homodyne_x(state, m, rng)
        outcomes.append(Outcome(index, op.targets[0], value))
        live.remove(op.targets[0])
        return post
    raise CapabilityError(f"Gaussian backend cannot run {op.kind}")


# ========================================
# FOCK
# ========================================


def _fock_apply(state: Optional[fock.FockState], op: GateOp, index: int, rng,
                outcomes: List[Outcome], live: List[int], backend: BackendSpec) -> Optional[fock.FockState]:
    m = live.index(op.targets[0])
    d = state.cutoff

    def single(matrix: np.ndarray) -> fock.FockState:
        return fock.apply_gate(state, matrix, (m,), backend.leakage_warn, backend.leakage_error)

    if op.kind == 'Vacuum':
        return state
    if op.kind in ('Xgate', 'Zgate', 'Dgate', 'Coherent'):
        dx_amount, dp_amount = _quadrature_shift(op, state.hbar)
        alpha = complex(dx_amount, dp_amount) / math.sqrt(2.0 * state.hbar)
        return single(fock.displacement_matrix(alpha, d))
    if op.kind in ('Sgate', 'Squeezed'):
        return single(fock.squeeze_matrix(op.param('r') * cmath.exp(1j * op.param('phi')), d))
    if op.kind == 'Rgate':
        return single(fock.phase_matrix(op.param('theta'), d))
    if op.kind == 'Fourier':
        return single(fock.phase_matrix(math.pi / 2, d))
    if op.kind == 'BSgate':
        pair = (m, live.index(op.targets[1]))
        matrix = fock.mixer_matrix(op.param('theta'), op.param('phi'), d)
        return fock.apply_gate(state, matrix, pair, backend.leakage_warn, backend.leakage_error)
    if op.kind == 'MeasureX':
        if backend.grid is None:
            raise ConfigurationError("Fock measurement needs a sampling grid")
        value, post = fock.measure_x(state, m, backend.grid, rng)
        outcomes.append(Outcome(index, op.targets[0], value))
        live.remove(op.targets[0])
        return post
    raise CapabilityError(f"Fock backend cannot run {op.kind}")


# ========================================
# ENTRY POINTS
# ========================================


def require_backend(c: Circuit, kind: str) -> None:
    """Raise before any execution when the circuit needs something the backend lacks"""
    backend_class = classify(c)
    if not backend_class.permits(kind):
        raise CapabilityError(f"circuit cannot run on the {kind} backend: {backend_class.reason(kind)}")


def initial_state(c: Circuit, backend: BackendSpec) -> State:
    if backend.kind == 'grid':
        return _grid_initial(c, backend)
    if backend.kind == 'gaussian':
        return gaussian.vacuum(c.mode_count, backend.hbar)
    return fock.vacuum(c.mode_count, backend.cutoff, backend.hbar)


def execute(c: Circuit, backend: BackendSpec, rng: np.random.Generator) -> ExecutionResult:
    """Run the ops in order; identical (circuit, backend, rng state) give identical results"""
    require_backend(c, backend.kind)
    state = initial_state(c, backend)
    outcomes: List[Outcome] = []
    live = list(range(c.mode_count))

    for index, op in enumerate(c.ops):
        if backend.kind == 'grid':
            state = _grid_apply(state, op, index, rng, outcomes)
        elif backend.kind == 'gaussian':
            state = _gaussian_apply(state, op, index, rng, outcomes, live)
        else:
            state = _fock_apply(state, op, index, rng, outcomes, live, backend)

    logger.debug("executed %d ops on %s, %d outcome(s)", len(c.ops), backend.kind, len(outcomes))
    return ExecutionResult(outcomes, state)
