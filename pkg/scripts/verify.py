"""
Invariant suites behind `cli verify`

Each suite returns a SuiteResult; a suite that raises a SimulatorError fails
with the error message as its detail.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from scripts import wigner
from scripts.algorithms import deutsch_jozsa, grover
from scripts.backends import fock, gaussian, gridstate
from scripts.backends.gridstate import ProjectionWindow
from scripts.circuit import executor, parser
from scripts.circuit.ir import GATES, Circuit, GateOp, format_circuit, make_op
from scripts.utils.errors import SimulatorError
from scripts.utils.helpers import CIRCUITS_DIR, dumps_json, make_rng
from scripts.utils.numerics import (
    delta_identity_check,
    make_grid,
    p_to_x_transform,
    self_dual_grid,
    x_to_p_transform,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


@dataclass(frozen=True)
class VerifyContext:
    hbar: float = 2.0
    seed: int = 0
    grid_hbar: Optional[float] = None
    cutoff: int = 40
    dj_threshold: float = 0.5692
    dj_kick: float = 3.0

    @property
    def standard_grid(self):
        """n = 512, L = 20 sqrt(hbar)"""
        return make_grid(512, 20.0 * math.sqrt(self.hbar), self.effective_grid_hbar)

    @property
    def fourier_grid(self):
        """n = 512, dx = dp; rotations by pi/2 need it"""
        return self_dual_grid(512, self.hbar)

    @property
    def effective_grid_hbar(self) -> float:
        return self.hbar if self.grid_hbar is None else self.grid_hbar


def _result(name: str, checks: Dict[str, bool], detail: str) -> SuiteResult:
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        return SuiteResult(name, False, f"failed: {', '.join(failed)}; {detail}")
    return SuiteResult(name, True, detail)


# ========================================
# RANDOM CIRCUITS
# ========================================


def random_gaussian_ops(rng: np.random.Generator, n_ops: int, grid_safe: bool = True) -> List[GateOp]:
    """Single-mode D/S/R sequence with small parameters; grid_safe keeps angles on the grid's set"""
    ops = []
    for _ in range(n_ops):
        kind = rng.choice(['Dgate', 'Sgate', 'Rgate'])
        if kind == 'Dgate':
            ops.append(make_op('Dgate', float(rng.uniform(0.0, 0.3)), float(rng.uniform(-math.pi, math.pi))))
        elif kind == 'Sgate':
            phi = float(rng.choice([0.0, math.pi])) if grid_safe else float(rng.uniform(-math.pi, math.pi))
            ops.append(make_op('Sgate', float(rng.uniform(-0.2, 0.2)), phi))
        else:
            if grid_safe:
                theta = float(rng.choice([math.pi / 2, -math.pi / 2, math.pi]))
            else:
                theta = float(rng.uniform(-math.pi, math.pi))
            ops.append(make_op('Rgate', theta))
    return ops


def random_circuit(rng: np.random.Generator, max_modes: int = 2, max_ops: int = 8) -> Circuit:
    """Valid circuit over the whole gate set, for parse/print round trips"""
    mode_count = int(rng.integers(1, max_modes + 1))
    ops = [make_op('Squeezed', float(rng.normal()), targets=(m,)) for m in range(mode_count) if rng.random() < 0.5]
    gate_names = [name for name, spec in GATES.items()
                  if not spec.preparation and name != 'MeasureX' and spec.targets <= mode_count]
    for _ in range(int(rng.integers(0, max_ops + 1))):
        name = str(rng.choice(gate_names))
        spec = GATES[name]
        n_params = int(rng.integers(spec.min_params, len(spec.params) + 1))
        params = [float(v) for v in rng.normal(scale=3.0, size=n_params)]
        if name == 'Invert':
            params[1] = abs(params[1]) + 0.1
        targets = tuple(int(t) for t in rng.permutation(mode_count)[:spec.targets])
        ops.append(make_op(name, *params, targets=targets))
    if rng.random() < 0.5:
        ops.append(make_op('MeasureX', targets=(int(rng.integers(mode_count)),)))
    return Circuit(mode_count, tuple(ops))


def _moments_on(backend: str, ops: Sequence[GateOp], ctx: VerifyContext, grid):
    c = Circuit(1, tuple(ops))
    spec = executor.BackendSpec(backend, ctx.hbar, grid, ctx.cutoff)
    state = executor.execute(c, spec, make_rng(ctx.seed)).snapshot
    if backend == 'gaussian':
        return state, np.array(gaussian.quadrature_moments(state, 0))
    if backend == 'fock':
        state = fock.to_grid(state, grid)
    return state, np.array(gridstate.moments(state, 0))


# ========================================
# SUITES
# ========================================


def suite_commutation(ctx: VerifyContext) -> SuiteResult:
    x, p = fock.quadrature_ops(ctx.cutoff, ctx.hbar)
    comm = x @ p - p @ x
    d = ctx.cutoff - 1
    fock_err = float(np.max(np.abs(comm[:d, :d] - 1j * ctx.hbar * np.eye(d))))
    grid = ctx.standard_grid
    grid_err = gridstate.commutator_residual(grid, gridstate.vacuum(grid))
    return _result('commutation', {'fock': fock_err < 1e-12, 'grid': grid_err < 1e-6},
                   f"fock {fock_err:.2e}, grid {grid_err:.2e}")


def suite_uncertainty(ctx: VerifyContext) -> SuiteResult:
    rng = make_rng(ctx.seed)
    bound = ctx.hbar / 2.0 * (1 - 1e-6)
    worst = math.inf
    impure = 0
    for _ in range(100):
        c = Circuit(1, tuple(random_gaussian_ops(rng, 4, grid_safe=False)))
        state = executor.execute(c, executor.BackendSpec('gaussian', ctx.hbar), rng).snapshot
        _, _, dx, dp = gaussian.quadrature_moments(state, 0)
        worst = min(worst, dx * dp)
        impure += not gaussian.is_pure(state)
    grid = ctx.fourier_grid
    saturation = 0.0
    for _ in range(10):
        ops = random_gaussian_ops(rng, 3)
        for backend in ('grid', 'fock'):
            _, m = _moments_on(backend, ops, ctx, grid)
            worst = min(worst, m[2] * m[3])
            saturation = max(saturation, abs(m[2] * m[3] - ctx.hbar / 2.0))
    return _result('uncertainty', {'bound': worst >= bound, 'pure': impure == 0, 'saturation': saturation < 1e-6},
                   f"min dx*dp {worst:.9f}, grid/fock saturation gap {saturation:.2e}")


def suite_fourier_pair(ctx: VerifyContext) -> SuiteResult:
    rng = make_rng(ctx.seed)
    grid = self_dual_grid(512, ctx.hbar)
    psi = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    round_trip = float(np.max(np.abs(p_to_x_transform(x_to_p_transform(psi, grid), grid) - psi)))
    x_mass = np.sum(np.abs(psi) ** 2) * grid.spacing
    parseval = abs(x_mass - np.sum(np.abs(x_to_p_transform(psi, grid)) ** 2) * grid.dp) / x_mass
    vac = gridstate.vacuum(grid).amplitudes
    self_dual = float(np.max(np.abs(x_to_p_transform(vac, grid) - vac)))
    return _result('fourier-pair', {'round_trip': round_trip < 1e-12 * max(1.0, np.max(np.abs(psi))),
                                    'parseval': parseval < 1e-12, 'gaussian': self_dual < 1e-10},
                   f"round trip {round_trip:.2e}, Parseval {parseval:.2e}, self-duality {self_dual:.2e}")


def suite_projection(ctx: VerifyContext) -> SuiteResult:
    rng = make_rng(ctx.seed)
    grid = ctx.standard_grid
    worst = 0.0
    for _ in range(50):
        state = gridstate.GridState(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
        width = float(rng.uniform(grid.spacing, grid.extent / 4))
        center = float(rng.uniform(-grid.extent / 4, grid.extent / 4))
        window = ProjectionWindow(center, width)
        once, _ = gridstate.project(state, window)
        twice, _ = gridstate.project(once, window)
        worst = max(worst, float(np.max(np.abs(twice.amplitudes - once.amplitudes))))
    return _result('projection', {'idempotent': worst < 1e-12}, f"max |PP psi - P psi| {worst:.2e}")


def suite_delta_identity(ctx: VerifyContext) -> SuiteResult:
    errors = {n: delta_identity_check(make_grid(n, 20.0 * math.sqrt(ctx.hbar), ctx.hbar)) for n in (256, 1024)}
    return _result('delta-identity', {f"n={n}": err < 1e-10 for n, err in errors.items()},
                   ", ".join(f"n={n}: {err:.2e}" for n, err in errors.items()))


def suite_ladder(ctx: VerifyContext) -> SuiteResult:
    ops = fock.ladder_ops(ctx.cutoff)
    raised = ops.a_dag @ fock.number_state(3, ctx.cutoff, ctx.hbar).amplitudes
    target = 2.0 * fock.number_state(4, ctx.cutoff, ctx.hbar).amplitudes
    ladder_err = float(np.max(np.abs(raised - target)))
    spectrum_err = float(np.max(np.abs(np.diag(ops.n_op).real - np.arange(ctx.cutoff))))
    return _result('ladder', {'raise': ladder_err == 0.0, 'spectrum': spectrum_err < 1e-12},
                   f"a^dag|3> - 2|4>: {ladder_err:.1e}, N spectrum {spectrum_err:.1e}")


def suite_coherent(ctx: VerifyContext) -> SuiteResult:
    ops = fock.ladder_ops(ctx.cutoff)
    worst = 0.0
    for alpha in (0.5, 1.0j, 1.5, -1.0 + 1.0j):
        c = fock.coherent(alpha, ctx.cutoff, ctx.hbar).amplitudes
        residual = (ops.a @ c - alpha * c)[:ctx.cutoff - 2]
        worst = max(worst, float(np.linalg.norm(residual)))
    return _result('coherent', {'eigenrelation': worst < 1e-6}, f"interior residual {worst:.2e}")


def suite_cross_backend(ctx: VerifyContext) -> SuiteResult:
    rng = make_rng(ctx.seed)
    grid = ctx.fourier_grid
    axis = np.linspace(-3.0, 3.0, 20) * math.sqrt(ctx.hbar / 2.0)
    worst_m = 0.0
    worst_w = 0.0
    for _ in range(25):
        ops = random_gaussian_ops(rng, int(rng.integers(2, 5)))
        g_state, g_m = _moments_on('gaussian', ops, ctx, grid)
        w_ref = wigner.wigner_from_gaussian(g_state, 0, axis, axis).values
        for backend in ('grid', 'fock'):
            state, m = _moments_on(backend, ops, ctx, grid)
            worst_m = max(worst_m, float(np.max(np.abs(m - g_m))))
            w = wigner.wigner_from_grid(state, axis, axis).values
            worst_w = max(worst_w, float(np.max(np.abs(w - w_ref))))
    return _result('cross-backend', {'moments': worst_m < 1e-4, 'wigner': worst_w < 1e-4},
                   f"moments {worst_m:.2e}, Wigner {worst_w:.2e}")


def suite_wigner_figure(ctx: VerifyContext) -> SuiteResult:
    axes = wigner.default_axes(ctx.hbar, 321, 8.0)
    panels = wigner.phase_space_panels(ctx.hbar, axes)
    vac = panels['vacuum']
    peak_err = abs(vac.value_at(0.0, 0.0) - 1.0 / (math.pi * ctx.hbar))

    # the displaced panel is the vacuum moved by whole axis steps
    shift = math.sqrt(2.0 * ctx.hbar) * 0.5
    steps = int(round(shift / vac.dx))
    moved = np.max(np.abs(panels['displaced'].values[:, steps:] - vac.values[:, :-steps]))
    shift_err = abs(steps * vac.dx - shift) + float(moved)

    sq = panels['squeezed']
    w0 = sq.value_at(0.0, 0.0)
    offset = 0.5
    width_x = offset / math.sqrt(-2.0 * math.log(sq.value_at(offset, 0.0) / w0))
    width_p = offset / math.sqrt(-2.0 * math.log(sq.value_at(0.0, offset) / w0))
    aspect_err = abs(width_p / width_x - math.exp(2 * 0.5))

    norms = {name: wigner.normalization_check(w) for name, w in panels.items()}
    norm_err = max(abs(v - 1.0) for v in norms.values())
    return _result('wigner-figure', {'peak': peak_err < 1e-6, 'shift': shift_err < 1e-6,
                                     'aspect': aspect_err < 1e-3, 'norm': norm_err < 1e-4},
                   f"peak {peak_err:.1e}, shift {shift_err:.1e}, aspect {aspect_err:.1e}, norm {norm_err:.1e}")


def suite_wigner_negativity(ctx: VerifyContext) -> SuiteResult:
    grid = ctx.standard_grid
    axes = wigner.default_axes(ctx.hbar, 101, 5.0)
    w = wigner.wigner_from_fock(fock.number_state(1, ctx.cutoff, ctx.hbar), axes, axes, grid)
    target = -1.0 / (math.pi * ctx.hbar)
    origin_err = abs(w.value_at(0.0, 0.0) - target)
    min_err = abs(float(np.min(w.values)) - target)
    return _result('wigner-negativity', {'origin': origin_err < 1e-4, 'minimum': min_err < 1e-4},
                   f"W(0,0) error {origin_err:.1e}, min error {min_err:.1e}")


def suite_grover_scaling(ctx: VerifyContext) -> SuiteResult:
    peaks = {}
    for n in (16, 64, 256):
        problem = grover.GroverProblem(n, n // 4 + 3, ctx.hbar)
        trace = grover.grover_search(problem, iterations=2 * problem.default_iterations() + 2)
        peaks[n] = grover.grover_peak_iteration(trace.probabilities)
    ratios = [peaks[64] / peaks[16], peaks[256] / peaks[64]]
    success = grover.grover_search(grover.GroverProblem(64, 12, ctx.hbar)).success_prob_final
    return _result('grover-scaling', {'ratios': all(1.5 <= r <= 2.5 for r in ratios), 'success': success > 0.5},
                   f"peaks {peaks}, success at N=64 {success:.4f}")


def suite_grover_realistic(ctx: VerifyContext) -> SuiteResult:
    problem = grover.GroverProblem(64, 12, ctx.hbar)
    exact = grover.grover_search(problem).success_prob_final
    realistic = grover.grover_search(problem, realistic=True).success_prob_final
    rel = abs(realistic - exact) / exact
    return _result('grover-realistic', {'within_10pct': rel < 0.1},
                   f"exact {exact:.4f}, realistic {realistic:.4f}")


def suite_deutsch_jozsa(ctx: VerifyContext) -> SuiteResult:
    correct = {}
    for name, expected in (('constant', 'constant'), ('balanced', 'balanced')):
        oracle = deutsch_jozsa.reference_oracle(name, ctx.dj_kick)
        hits = 0
        for seed in range(50):
            result = deutsch_jozsa.dj_run(oracle, 2.0, make_rng(ctx.seed + seed), 100, ctx.dj_threshold, ctx.hbar)
            hits += result.verdict == expected
        correct[name] = hits
    return _result('deutsch-jozsa', {name: hits == 50 for name, hits in correct.items()},
                   f"correct verdicts {correct} of 50")


def suite_parser(ctx: VerifyContext) -> SuiteResult:
    spec = executor.BackendSpec('gaussian', ctx.hbar)
    listings = {}
    for name in ('displaced_squeezed', 'deutsch_jozsa'):
        c = parser.parse_file(CIRCUITS_DIR / f"{name}.cvq")
        executor.execute(c, spec, make_rng(ctx.seed))
        listings[name] = len(c.ops)
    rng = make_rng(ctx.seed)
    mismatches = 0
    for _ in range(100):
        c = random_circuit(rng)
        mismatches += parser.parse(format_circuit(c)) != c
    return _result('parser', {'listings': listings == {'displaced_squeezed': 3, 'deutsch_jozsa': 9},
                              'round_trip': mismatches == 0},
                   f"listing ops {listings}, round-trip mismatches {mismatches}/100")


def suite_determinism(ctx: VerifyContext) -> SuiteResult:
    c = parser.parse_file(CIRCUITS_DIR / 'deutsch_jozsa.cvq')
    outputs = []
    for _ in range(2):
        run = executor.execute(c, executor.BackendSpec('gaussian', ctx.hbar), make_rng(ctx.seed))
        dj = deutsch_jozsa.dj_run(deutsch_jozsa.balanced_oracle(ctx.dj_kick), 2.0, make_rng(ctx.seed), 20,
                                  ctx.dj_threshold, ctx.hbar)
        trace = grover.grover_search(grover.GroverProblem(16, 5, ctx.hbar))
        outputs.append(dumps_json({'run': run.to_json(), 'dj': dj.to_json(), 'grover': trace.to_json()}))
    return _result('determinism', {'identical': outputs[0] == outputs[1]}, "two seeded runs compared")


def suite_hbar_consistency(ctx: VerifyContext) -> SuiteResult:
    """Fock synthesis onto the configured grid; a grid with another hbar fails here"""
    state = fock.to_grid(fock.coherent(0.5, ctx.cutoff, ctx.hbar), ctx.standard_grid)
    return _result('hbar-consistency', {'norm': abs(state.norm() - 1.0) < 1e-8},
                   f"grid hbar {ctx.effective_grid_hbar}, state hbar {ctx.hbar}")


SUITES: Dict[str, Callable[[VerifyContext], SuiteResult]] = {
    'commutation': suite_commutation,
    'uncertainty': suite_uncertainty,
    'fourier-pair': suite_fourier_pair,
    'projection': suite_projection,
    'delta-identity': suite_delta_identity,
    'ladder': suite_ladder,
    'coherent': suite_coherent,
    'cross-backend': suite_cross_backend,
    'wigner-figure': suite_wigner_figure,
    'wigner-negativity': suite_wigner_negativity,
    'grover-scaling': suite_grover_scaling,
    'grover-realistic': suite_grover_realistic,
    'deutsch-jozsa': suite_deutsch_jozsa,
    'parser': suite_parser,
    'determinism': suite_determinism,
    'hbar-consistency': suite_hbar_consistency,
}


def run_suites(ctx: VerifyContext, only: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    names = list(SUITES) if not only else list(only)
    results = []
    for name in names:
        if name not in SUITES:
            results.append(SuiteResult(name, False, "unknown suite"))
            continue
        try:
            results.append(SUITES[name](ctx))
        except SimulatorError as exc:
            results.append(SuiteResult(name, False, f"{type(exc).__name__}: {exc}"))
        logger.debug("suite %s: %s", name, "pass" if results[-1].passed else "FAIL")
    return results
