"""
Continuous-variable Grover search along one quadrature

The search interval (-L/2, L/2) is split into N bins of width dx = L/N, and the
simulation grid is the self-dual grid with exactly those N bins, so the Fourier
gate is available. One iteration is

    psi -> I_x0 F^dag O F psi,      I_x0 = 2 P_x0 - 1

With phi = F psi this is the textbook amplitude amplification
(2|s><s| - 1) O on phi, |s> = F|x0>, so the target window is read out after one
final Fourier gate. With zero iterations the readout is the uniform 1/N.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, List, Optional

import numpy as np
import pandas as pd

from scripts.backends import gridstate
from scripts.backends.gridstate import GridState, ProjectionWindow
from scripts.utils.errors import ConfigurationError, DomainError
from scripts.utils.numerics import Grid, self_dual_grid

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_MASS = 0.99

GroverOracle = Callable[[GridState], GridState]


@dataclass(frozen=True)
class GroverProblem:
    """N bins on [-L/2, L/2), one of them marked

    There is no extent field: the diffusion step needs the Fourier gate, so the
    grid is always self-dual and L = sqrt(2 pi hbar N) follows from bins and hbar
    (read it back from `extent`).
    """

    bins: int
    target_bin: int
    hbar: float = 2.0
    start_x: float = 0.0

    def __post_init__(self):
        # Grid validates the bin count (power of two)
        grid = self.grid
        if not 0 <= self.target_bin < self.bins:
            raise ConfigurationError(f"target bin {self.target_bin} outside [0, {self.bins})")
        try:
            grid.bin_of(self.start_x)
        except DomainError as exc:
            raise ConfigurationError(f"start x0 = {self.start_x} is outside the search interval") from exc

    @cached_property
    def grid(self) -> Grid:
        return self_dual_grid(self.bins, self.hbar)

    @property
    def extent(self) -> float:
        return self.grid.extent

    @property
    def precision(self) -> float:
        """dx = L / N"""
        return self.grid.spacing

    @property
    def start_bin(self) -> int:
        return self.grid.bin_of(self.start_x)

    def window(self, k: int) -> ProjectionWindow:
        grid = self.grid
        return ProjectionWindow(float(grid.x[k]), grid.spacing)

    @property
    def target_window(self) -> ProjectionWindow:
        return self.window(self.target_bin)

    @property
    def start_window(self) -> ProjectionWindow:
        return self.window(self.start_bin)

    def default_iterations(self) -> int:
        return int(math.floor(math.pi / 4.0 * math.sqrt(self.bins)))


@dataclass(frozen=True)
class InversionOracle:
    """Reference oracle I_xf = 2 P_xf - 1 about the target window"""

    window: ProjectionWindow

    def __call__(self, state: GridState) -> GridState:
        return gridstate.invert_about(state, self.window)


def identity_oracle(state: GridState) -> GridState:
    return state


@dataclass
class GroverTrace:
    """Target-window probability after 0, 1, ..., iterations_run iterations"""

    probabilities: List[float] = field(default_factory=list)
    bins: int = 0
    target_bin: int = 0
    realistic: bool = False
    R: Optional[float] = None

    @property
    def iterations_run(self) -> int:
        return len(self.probabilities) - 1

    @property
    def success_prob_final(self) -> float:
        return self.probabilities[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'iteration': np.arange(len(self.probabilities)),
            'target_prob': np.asarray(self.probabilities, dtype=float),
        })

    def to_json(self) -> dict:
        return {
            'bins': self.bins,
            'target': self.target_bin,
            'iterations': self.iterations_run,
            'realistic': self.realistic,
            'R': self.R,
            'success_prob_final': self.success_prob_final,
            'peak_iteration': grover_peak_iteration(self.probabilities),
        }


def realistic_R(grid: Grid, window_mass: float = DEFAULT_WINDOW_MASS) -> float:
    """R whose sampled Gaussian keeps window_mass in its centre bin

    Neighbouring samples carry exp(-R^2 dx^2 / hbar) of the centre's weight,
    so the centre keeps about 1 - 2 exp(-a) with a = R^2 dx^2 / hbar.
    """
    if not 0.0 < window_mass < 1.0:
        raise ConfigurationError(f"window mass must be in (0, 1), got {window_mass}")
    a = math.log(2.0 / (1.0 - window_mass))
    return math.sqrt(a * grid.hbar) / grid.spacing


def initial_state(problem: GroverProblem, realistic: bool = False, R: Optional[float] = None) -> GridState:
    grid = problem.grid
    x0 = float(grid.x[problem.start_bin])
    if not realistic:
        return gridstate.position_eigenstate(x0, grid)
    return gridstate.realistic_gaussian(x0, R if R is not None else realistic_R(grid), grid)


def grover_iterate(state: GridState, oracle: GroverOracle, x0_window: ProjectionWindow) -> GridState:
    state = gridstate.fourier_gate(state, 0)
    state = oracle(state)
    state = gridstate.fourier_gate(state, 0, inverse=True)
    return gridstate.invert_about(state, x0_window)


def target_probability(state: GridState, window: ProjectionWindow) -> float:
    """Probability of the target window after the readout Fourier gate"""
    _, weight = gridstate.project(gridstate.fourier_gate(state, 0), window)
    return weight


def grover_search(problem: GroverProblem, oracle: Optional[GroverOracle] = None,
                  iterations: Optional[int] = None, realistic: bool = False,
                  R: Optional[float] = None, window_mass: float = DEFAULT_WINDOW_MASS) -> GroverTrace:
    if oracle is None:
        oracle = InversionOracle(problem.target_window)
    if iterations is None:
        iterations = problem.default_iterations()
    if iterations < 0:
        raise ConfigurationError(f"iterations must be non-negative, got {iterations}")
    if realistic and R is None:
        R = realistic_R(problem.grid, window_mass)

    state = initial_state(problem, realistic, R)
    x0_window = problem.start_window
    target = problem.target_window
    trace = GroverTrace(bins=problem.bins, target_bin=problem.target_bin,
                        realistic=realistic, R=R if realistic else None)
    trace.probabilities.append(target_probability(state, target))
    for k in range(iterations):
        state = grover_iterate(state, oracle, x0_window)
        trace.probabilities.append(target_probability(state, target))
        logger.debug("iteration %d: target probability %.6f", k + 1, trace.probabilities[-1])
    return trace


def grover_reference_probabilities(bins: int, iterations: int) -> np.ndarray:
    """Discrete state-vector result sin^2((2k + 1) theta), sin(theta) = 1/sqrt(N)"""
    theta = math.asin(1.0 / math.sqrt(bins))
    k = np.arange(iterations + 1)
    return np.sin((2 * k + 1) * theta) ** 2


def grover_peak_iteration(probabilities) -> int:
    """Index of the first local maximum of the trace (the last index if it never turns down)"""
    probs = list(probabilities)
    for k in range(len(probs) - 1):
        if probs[k + 1] < probs[k]:
            return k
    return len(probs) - 1
