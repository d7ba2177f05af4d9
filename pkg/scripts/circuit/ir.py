"""
Circuit intermediate representation

A Circuit is a mode count plus an ordered tuple of GateOps. Parameters are
stored with their defaults filled in, so printing and re-parsing a circuit
gives back an equal circuit.
"""
import math
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

from scripts.utils.errors import ContractError


@dataclass(frozen=True)
class GateSpec:
    """Signature of one gate name"""

    name: str
    params: Tuple[str, ...]
    defaults: Tuple[float, ...]
    targets: int = 1
    preparation: bool = False
    gaussian: bool = True

    @property
    def min_params(self) -> int:
        return len(self.params) - len(self.defaults)


GATES: Dict[str, GateSpec] = {spec.name: spec for spec in [
    GateSpec('Vacuum', (), (), preparation=True),
    GateSpec('Squeezed', ('r', 'phi'), (0.0,), preparation=True),
    GateSpec('Coherent', ('a', 'phi'), (0.0,), preparation=True),
    GateSpec('Xgate', ('x',), ()),
    GateSpec('Zgate', ('p',), ()),
    GateSpec('Dgate', ('a', 'phi'), (0.0,)),
    GateSpec('Sgate', ('r', 'phi'), (0.0,)),
    GateSpec('Rgate', ('theta',), ()),
    GateSpec('Fourier', (), ()),
    GateSpec('BSgate', ('theta', 'phi'), (math.pi / 4, 0.0), targets=2),
    GateSpec('Invert', ('x0', 'width'), (), gaussian=False),
    GateSpec('MeasureX', (), ()),
]}

# accepted by the parser, expanded into Dgate + Sgate
DISPLACED_SQUEEZED = GateSpec('DisplacedSqueezed', ('a', 'phi_a', 'r', 'phi_r'), ())


@dataclass(frozen=True)
class GateOp:
    kind: str
    params: Tuple[float, ...] = ()
    targets: Tuple[int, ...] = (0,)

    def __post_init__(self):
        if self.kind not in GATES:
            raise ContractError(f"unknown gate {self.kind!r}")
        spec = GATES[self.kind]
        object.__setattr__(self, 'params', tuple(float(v) for v in self.params))
        object.__setattr__(self, 'targets', tuple(int(t) for t in self.targets))
        if len(self.params) != len(spec.params):
            raise ContractError(f"{self.kind} takes {len(spec.params)} parameters, got {len(self.params)}")
        if len(self.targets) != spec.targets:
            raise ContractError(f"{self.kind} acts on {spec.targets} mode(s), got {len(self.targets)}")
        if not all(math.isfinite(v) for v in self.params):
            raise ContractError(f"{self.kind} parameters must be finite, got {self.params}")

    @property
    def spec(self) -> GateSpec:
        return GATES[self.kind]

    def param(self, name: str) -> float:
        return self.params[self.spec.params.index(name)]


def make_op(kind: str, *params: float, targets: Tuple[int, ...] = (0,)) -> GateOp:
    """GateOp with trailing defaults filled in"""
    spec = GATES.get(kind)
    if spec is None:
        raise ContractError(f"unknown gate {kind!r}")
    missing = len(spec.params) - len(params)
    if missing < 0 or missing > len(spec.defaults):
        raise ContractError(f"{kind} takes {spec.min_params} to {len(spec.params)} parameters, got {len(params)}")
    filled = tuple(params) + spec.defaults[len(spec.defaults) - missing:]
    return GateOp(kind, filled, tuple(targets))


def validate_ops(mode_count: int, ops: Tuple[GateOp, ...]) -> Iterator[Tuple[int, str]]:
    """Yield (op_index, problem) for every ordering or range violation"""
    touched = set()
    measured = set()
    for i, op in enumerate(ops):
        if len(set(op.targets)) != len(op.targets):
            yield i, f"{op.kind} targets must be distinct"
        for t in op.targets:
            if not 0 <= t < mode_count:
                yield i, f"target q[{t}] out of range for {mode_count} mode(s)"
            elif t in measured:
                yield i, f"q[{t}] was already measured"
            elif op.spec.preparation and t in touched:
                yield i, f"preparation {op.kind} on q[{t}] must precede every gate on that mode"
        for t in op.targets:
            touched.add(t)
            if op.kind == 'MeasureX':
                measured.add(t)


@dataclass(frozen=True)
class Circuit:
    mode_count: int
    ops: Tuple[GateOp, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'ops', tuple(self.ops))
        if self.mode_count < 1:
            raise ContractError(f"a circuit needs at least one mode, got {self.mode_count}")
        for index, problem in validate_ops(self.mode_count, self.ops):
            raise ContractError(f"op {index}: {problem}")

    def measured_modes(self) -> Tuple[int, ...]:
        return tuple(op.targets[0] for op in self.ops if op.kind == 'MeasureX')


@dataclass(frozen=True)
class BackendClass:
    """Which backends can run a circuit, with the reason for each refusal"""

    gaussian: bool
    grid: bool
    fock: bool
    reasons: Tuple[Tuple[str, str], ...] = ()

    def permits(self, backend: str) -> bool:
        return bool(getattr(self, backend))

    def reason(self, backend: str) -> Optional[str]:
        return dict(self.reasons).get(backend)


def _is_multiple(angle: float, unit: float, tol: float = 1e-12) -> bool:
    turns = angle / unit
    return abs(turns - round(turns)) <= tol


def classify(c: Circuit, grid_max_modes: int = 2, fock_max_modes: int = 2) -> BackendClass:
    reasons = {}
    for i, op in enumerate(c.ops):
        where = f"op {i} ({op.kind})"
        if not op.spec.gaussian:
            reasons.setdefault('gaussian', f"{where} is not a Gaussian operation")
            reasons.setdefault('fock', f"{where} has no number-basis form")
        if op.kind == 'Rgate' and not _is_multiple(op.param('theta'), math.pi / 2):
            reasons.setdefault('grid', f"{where}: grid rotations must be multiples of pi/2")
        if op.kind in ('Sgate', 'Squeezed', 'BSgate') and not _is_multiple(op.param('phi'), math.pi):
            reasons.setdefault('grid', f"{where}: grid squeezers and mixers need phi in {{0, pi}}")
    if c.mode_count > grid_max_modes:
        reasons.setdefault('grid', f"grid backend supports at most {grid_max_modes} modes")
    if c.mode_count > fock_max_modes:
        reasons.setdefault('fock', f"Fock backend supports at most {fock_max_modes} modes")
    return BackendClass(
        gaussian='gaussian' not in reasons,
        grid='grid' not in reasons,
        fock='fock' not in reasons,
        reasons=tuple(sorted(reasons.items())),
    )


def _format_number(value: float) -> str:
    return repr(float(value))


def format_op(op: GateOp) -> str:
    targets = ", ".join(f"q[{t}]" for t in op.targets)
    if not op.params:
        head = op.kind
    else:
        head = f"{op.kind}({', '.join(_format_number(v) for v in op.params)})"
    return f"{head} | {targets}"


def format_circuit(c: Circuit) -> str:
    """DSL text that parses back to an equal circuit"""
    lines = [f"modes {c.mode_count}"] + [format_op(op) for op in c.ops]
    return "\n".join(lines) + "\n"
