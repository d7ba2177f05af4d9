"""
Continuous-variable Deutsch-Jozsa decision on the Gaussian backend

Circuit (q0 query register, q1 answer register):

    Squeezed(r) | q[0];  Squeezed(r) | q[1]
    Xgate(query_shift) | q[0];  Xgate(pi/2) | q[1]
    Rgate(pi/2) | q[0];  Rgate(pi/2) | q[1]
    <oracle>
    Rgate(-pi/2) | q[0]
    MeasureX | q[0]

The query register starts at x = 0, so a constant oracle leaves the outcome
centred on zero with the squeezed width sqrt(hbar/2) e^{-r}. The balanced
reference oracle flips the query's sign and kicks its momentum, which the
closing rotation turns into an x offset of -kick. The verdict compares the mean
|outcome| over `shots` runs with a threshold tau.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from scripts.circuit import executor, parser
from scripts.circuit.ir import Circuit, GateOp, make_op
from scripts.utils.errors import ContractError, DomainError

logger = logging.getLogger(__name__)

CONSTANT = 'constant'
BALANCED = 'balanced'
ANSWER_SHIFT = math.pi / 2


@dataclass(frozen=True)
class DJOracle:
    """Gaussian op sequence on the two registers; tag is for test harnesses only"""

    name: str
    ops: Tuple[GateOp, ...]
    tag: Optional[str] = None


@dataclass(frozen=True)
class DJResult:
    oracle: str
    shots: int
    mean_abs_outcome: float
    threshold: float
    verdict: str
    outcomes: Tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {
            'oracle': self.oracle,
            'shots': self.shots,
            'mean_abs_outcome': self.mean_abs_outcome,
            'threshold': self.threshold,
            'verdict': self.verdict,
        }


def constant_oracle() -> DJOracle:
    return DJOracle('constant', (), CONSTANT)


def constant_displacement_oracle(shift: float = 1.0) -> DJOracle:
    """The listing's example oracle: a displacement of the answer register only"""
    return DJOracle('constant-displacement', (make_op('Xgate', shift, targets=(1,)),), CONSTANT)


def balanced_oracle(kick: float = 3.0) -> DJOracle:
    """Sign flip plus momentum kick on the query register"""
    ops = (make_op('Rgate', math.pi, targets=(0,)), make_op('Zgate', kick, targets=(0,)))
    return DJOracle('balanced', ops, BALANCED)


REFERENCE_ORACLES = {
    'constant': lambda kick: constant_oracle(),
    'constant-displacement': lambda kick: constant_displacement_oracle(),
    'balanced': lambda kick: balanced_oracle(kick),
}


def reference_oracle(name: str, kick: float = 3.0) -> DJOracle:
    if name not in REFERENCE_ORACLES:
        raise DomainError(f"unknown reference oracle {name!r}; choose from {', '.join(REFERENCE_ORACLES)}")
    return REFERENCE_ORACLES[name](kick)


def oracle_from_file(path) -> DJOracle:
    """Oracle ops from a two-mode .cvq file"""
    c = parser.parse_file(path)
    if c.mode_count != 2:
        raise ContractError(f"oracle file must declare `modes 2`, got {c.mode_count}")
    if any(op.spec.preparation or op.kind == 'MeasureX' for op in c.ops):
        raise ContractError("oracle files may not prepare or measure modes")
    return DJOracle(Path(path).stem, c.ops)


def dj_circuit(oracle: DJOracle, squeeze_r: float, query_shift: float = 0.0) -> Circuit:
    ops: List[GateOp] = [
        make_op('Squeezed', squeeze_r, targets=(0,)),
        make_op('Squeezed', squeeze_r, targets=(1,)),
        make_op('Xgate', query_shift, targets=(0,)),
        make_op('Xgate', ANSWER_SHIFT, targets=(1,)),
        make_op('Rgate', math.pi / 2, targets=(0,)),
        make_op('Rgate', math.pi / 2, targets=(1,)),
    ]
    ops.extend(oracle.ops)
    ops.append(make_op('Rgate', -math.pi / 2, targets=(0,)))
    ops.append(make_op('MeasureX', targets=(0,)))
    return Circuit(2, tuple(ops))


def dj_run(oracle: DJOracle, squeeze_r: float, rng: np.random.Generator, shots: int,
           threshold: float, hbar: float = 2.0, query_shift: float = 0.0) -> DJResult:
    if shots < 1:
        raise DomainError(f"shots must be at least 1, got {shots}")
    if not squeeze_r > 0:
        raise DomainError(f"squeeze_r must be positive, got {squeeze_r}")
    c = dj_circuit(oracle, squeeze_r, query_shift)
    executor.require_backend(c, 'gaussian')
    backend = executor.BackendSpec('gaussian', hbar)

    outcomes = []
    for _ in range(shots):
        result = executor.execute(c, backend, rng)
        outcomes.append(result.outcomes[0].value)
    mean_abs = float(np.mean(np.abs(outcomes)))
    verdict = CONSTANT if mean_abs < threshold else BALANCED
    logger.debug("oracle %s: mean |x| = %.4f over %d shots -> %s", oracle.name, mean_abs, shots, verdict)
    return DJResult(oracle.name, shots, mean_abs, float(threshold), verdict, tuple(outcomes))


def folded_normal_mean(mu: float, sigma: float) -> float:
    """E|X| for X ~ N(mu, sigma^2)"""
    return float(sigma * math.sqrt(2.0 / math.pi) * math.exp(-mu * mu / (2.0 * sigma * sigma))
                 + mu * special.erf(mu / (sigma * math.sqrt(2.0))))


def reference_means(squeeze_r: float, hbar: float = 2.0, kick: float = 3.0) -> Dict[str, float]:
    """Expected mean |outcome| of the constant and balanced reference oracles"""
    sigma = math.sqrt(0.5 * hbar) * math.exp(-squeeze_r)
    return {CONSTANT: folded_normal_mean(0.0, sigma), BALANCED: folded_normal_mean(kick, sigma)}


def dj_threshold(squeeze_r: float, hbar: float = 2.0, kick: float = 3.0) -> float:
    """Log-midpoint of the two reference means"""
    means = reference_means(squeeze_r, hbar, kick)
    return math.sqrt(means[CONSTANT] * means[BALANCED])
