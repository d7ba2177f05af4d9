"""
Shared pytest fixtures
"""
import math

import pytest

from scripts.utils.helpers import make_rng
from scripts.utils.numerics import make_grid, self_dual_grid


@pytest.fixture
def hbar():
    return 2.0


@pytest.fixture
def grid(hbar):
    """n = 512, L = 20 sqrt(hbar)"""
    return make_grid(512, 20.0 * math.sqrt(hbar), hbar)


@pytest.fixture
def dual_grid(hbar):
    """Self-dual grid (dx = dp) for Fourier and quarter-turn rotations"""
    return self_dual_grid(512, hbar)


@pytest.fixture
def rng():
    return make_rng(0)
