"""
Tests for the discretised-wavefunction backend
"""
import math

import numpy as np
import pytest
from scipy import special

from scripts.backends import gaussian, gridstate
from scripts.backends.gridstate import GridState, OperatorKind, ProjectionWindow, QuadratureOperator
from scripts.utils.errors import (
    CapabilityError,
    ConfigurationError,
    ContractError,
    DegenerateStateError,
    DomainError,
    WraparoundError,
)
from scripts.utils.numerics import make_grid


def squeezed(R, grid, x0=0.0):
    return gridstate.realistic_gaussian(x0, R, grid)


# ========================================
# CONSTRUCTORS
# ========================================


def test_vacuum_moments(grid, hbar):
    mean_x, mean_p, dx, dp = gridstate.moments(gridstate.vacuum(grid), 0)
    assert abs(mean_x) < 1e-12 and abs(mean_p) < 1e-12
    assert dx * dp == pytest.approx(hbar / 2, abs=1e-6)


def test_squeezed_width(grid, hbar):
    dx, dp, product = gridstate.uncertainty_product(squeezed(2.0, grid))
    assert dx == pytest.approx(math.sqrt(hbar / 2) / 2, abs=1e-6)
    assert dp == pytest.approx(2 * math.sqrt(hbar / 2), abs=1e-6)
    assert product == pytest.approx(hbar / 2, abs=1e-6)


def test_first_excited_state_product(grid, hbar):
    _, _, product = gridstate.uncertainty_product(gridstate.number_state(1, grid))
    assert product == pytest.approx(3 * hbar / 2, abs=1e-6)


def test_from_function_normalises(grid):
    state = gridstate.from_function(lambda x: 3.0 * np.exp(-x ** 2), grid)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_all_zero_samples_rejected(grid):
    with pytest.raises(DegenerateStateError):
        gridstate.from_function(lambda x: 0.0 * x, grid)


def test_edge_mass_warns(grid, caplog):
    gridstate.from_function(lambda x: np.ones_like(x), grid)
    assert "boundary amplitude" in caplog.text


def test_delta_always_measures_its_bin(grid, rng):
    state = gridstate.position_eigenstate(grid.x[300], grid)
    assert set(gridstate.sample_bins(state, 0, rng, 50)) == {300}


def test_momentum_eigenstate_has_its_momentum(dual_grid):
    p0 = dual_grid.p[dual_grid.n_points // 2 + 7]
    _, mean_p, _, _ = gridstate.moments(gridstate.momentum_eigenstate(p0, dual_grid), 0)
    assert mean_p == pytest.approx(p0, abs=1e-9)


def test_amplitudes_are_read_only(grid):
    state = gridstate.vacuum(grid)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 1.0


def test_shape_mismatch_rejected(grid):
    with pytest.raises(ContractError):
        GridState(grid, np.ones(grid.n_points + 1))


def test_json_round_trip(grid):
    state = gridstate.displace(gridstate.vacuum(grid), 0, 1.0, 0.5)
    back = GridState.from_json(state.to_json())
    assert back.grid == state.grid
    np.testing.assert_array_equal(back.amplitudes, state.amplitudes)


# ========================================
# ENTANGLED PAIR
# ========================================


def test_pair_with_zero_offset_is_perfectly_correlated(grid, rng):
    pair = gridstate.entangled_pair(lambda x: np.exp(-x ** 2 / 4), 0.0, grid)
    k, _, post = gridstate.measure_x(pair, 0, rng)
    assert np.argmax(gridstate.bin_probabilities(post, 1)) == k
    assert gridstate.bin_probabilities(post, 1)[k] == pytest.approx(1.0)


def test_pair_offset_shifts_partner(grid):
    c = 5 * grid.spacing
    pair = gridstate.entangled_pair(lambda x: np.exp(-x ** 2 / 4), c, grid)
    for seed in range(5):
        k, _, post = gridstate.measure_x(pair, 0, np.random.default_rng(seed))
        assert int(np.argmax(gridstate.bin_probabilities(post, 1))) == k - 5


def test_pair_uniform_window_joint_distribution(grid):
    window = (np.abs(grid.x) < 1.0).astype(float)
    pair = gridstate.entangled_pair(lambda x: np.interp(x, grid.x, window), 2 * grid.spacing, grid)
    dens = np.abs(pair.amplitudes) ** 2 * pair.cell
    rows, cols = np.nonzero(dens > 1e-14)
    np.testing.assert_array_equal(cols, rows - 2)
    np.testing.assert_allclose(dens[rows, cols], 1.0 / rows.size, rtol=1e-12)


def test_pair_offset_rounding_warns(grid, caplog):
    gridstate.entangled_pair(lambda x: np.exp(-x ** 2), 0.3 * grid.spacing, grid)
    assert "rounded" in caplog.text


# ========================================
# GATES
# ========================================


def test_fourier_keeps_vacuum(dual_grid):
    vac = gridstate.vacuum(dual_grid)
    assert np.max(np.abs(gridstate.fourier_gate(vac, 0).amplitudes - vac.amplitudes)) < 1e-9


def test_fourier_twice_is_parity(dual_grid):
    state = gridstate.displace(gridstate.vacuum(dual_grid), 0, 1.5, -0.5)
    twice = gridstate.fourier_gate(gridstate.fourier_gate(state, 0), 0)
    assert np.max(np.abs(twice.amplitudes - state.amplitudes[::-1])) < 1e-9


def test_fourier_four_times_is_identity(dual_grid):
    state = gridstate.displace(squeezed(1.5, dual_grid), 0, 1.5, -0.5)
    turned = state
    for _ in range(4):
        turned = gridstate.fourier_gate(turned, 0)
    np.testing.assert_allclose(turned.amplitudes, state.amplitudes, atol=1e-10)
    back = gridstate.fourier_gate(gridstate.fourier_gate(state, 0), 0, inverse=True)
    np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-10)



def test_fourier_swaps_squeezed_widths(dual_grid, hbar):
    state = squeezed(2.0, dual_grid)
    _, _, dx_before, dp_before = gridstate.moments(state, 0)
    _, _, dx_after, dp_after = gridstate.moments(gridstate.fourier_gate(state, 0), 0)
    assert dx_after == pytest.approx(dp_before, rel=1e-6)
    assert dp_after == pytest.approx(dx_before, rel=1e-6)
    assert dx_after / dx_before == pytest.approx(4.0, rel=1e-6)


def test_fourier_needs_self_dual_grid(grid):
    with pytest.raises(ConfigurationError):
        gridstate.fourier_gate(gridstate.vacuum(grid), 0)


def test_quarter_rotation_moves_x_into_p(dual_grid):
    state = gridstate.displace(gridstate.vacuum(dual_grid), 0, 2.0, 0.0)
    mean_x, mean_p, _, _ = gridstate.moments(gridstate.rotate(state, 0, math.pi / 2), 0)
    assert mean_x == pytest.approx(0.0, abs=1e-8)
    assert mean_p == pytest.approx(-2.0, abs=1e-8)


def test_rotation_angles_are_restricted(dual_grid):
    with pytest.raises(CapabilityError):
        gridstate.rotate(gridstate.vacuum(dual_grid), 0, 0.3)


def test_displace_x(grid):
    mean_x, mean_p, _, _ = gridstate.moments(gridstate.displace(gridstate.vacuum(grid), 0, 1.0, 0.0), 0)
    assert mean_x == pytest.approx(1.0, abs=1e-8)
    assert mean_p == pytest.approx(0.0, abs=1e-8)


def test_displace_p_keeps_density(grid):
    vac = gridstate.vacuum(grid)
    kicked = gridstate.displace(vac, 0, 0.0, 2.0)
    assert gridstate.moments(kicked, 0)[1] == pytest.approx(2.0, abs=1e-8)
    np.testing.assert_allclose(np.abs(kicked.amplitudes), np.abs(vac.amplitudes), atol=1e-14)


def test_displacements_compose(grid):
    state = gridstate.squeeze(gridstate.vacuum(grid), 0, 0.3)
    there = gridstate.displace(state, 0, 1.2, -0.7)
    back = gridstate.displace(there, 0, -1.2, 0.7)
    assert gridstate.fidelity(back, state) > 1 - 1e-9


def test_displacement_wraparound_guard(grid):
    with pytest.raises(WraparoundError):
        gridstate.displace(gridstate.vacuum(grid), 0, grid.extent / 2, 0.0)


def test_squeeze_matches_gaussian_widths(grid, hbar):
    state = gridstate.squeeze(gridstate.vacuum(grid), 0, 0.5)
    _, _, dx, dp = gridstate.moments(state, 0)
    assert dx == pytest.approx(math.sqrt(hbar / 2) * math.exp(-0.5), rel=1e-6)
    assert dp == pytest.approx(math.sqrt(hbar / 2) * math.exp(0.5), rel=1e-6)


def test_squeeze_phase_pi_stretches_x(grid, hbar):
    _, _, dx, _ = gridstate.moments(gridstate.squeeze(gridstate.vacuum(grid), 0, 0.5, math.pi), 0)
    assert dx == pytest.approx(math.sqrt(hbar / 2) * math.exp(0.5), rel=1e-6)


def test_squeeze_other_phases_unsupported(grid):
    with pytest.raises(CapabilityError):
        gridstate.squeeze(gridstate.vacuum(grid), 0, 0.5, 0.4)


def test_strong_squeeze_keeps_norm(dual_grid):
    state = gridstate.squeeze(gridstate.vacuum(dual_grid), 0, 2.0)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_squeeze_renormalises_clipped_tails(grid, caplog):
    # e^1.3 stretches the vacuum to about 3.9 widths at the edge, clipping ~1e-4 of the mass
    state = gridstate.squeeze(gridstate.vacuum(grid), 0, 1.3, math.pi)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert "renormalising" in caplog.text


def test_squeeze_past_grid_edge_raises(grid):
    with pytest.raises(WraparoundError):
        gridstate.squeeze(gridstate.vacuum(grid), 0, 2.0, math.pi)



def test_mixer_matches_gaussian_backend(grid):
    pair = gridstate.product_state(gridstate.squeeze(gridstate.vacuum(grid), 0, 0.4),
                                   gridstate.displace(gridstate.vacuum(grid), 0, 1.0, 0.0))
    mixed = gridstate.mix(pair, 0, 1, math.pi / 4)

    ref = gaussian.apply_xz(gaussian.apply_squeeze(gaussian.vacuum(2), 0, 0.4), 1, 1.0, 0.0)
    ref = gaussian.apply_mixer(ref, 0, 1, math.pi / 4, 0.0)
    for mode in (0, 1):
        np.testing.assert_allclose(gridstate.moments(mixed, mode), gaussian.quadrature_moments(ref, mode), atol=1e-6)


def test_mixer_zero_angle_is_identity(grid):
    pair = gridstate.product_state(gridstate.vacuum(grid), gridstate.displace(gridstate.vacuum(grid), 0, 1.0, 0.0))
    np.testing.assert_allclose(gridstate.mix(pair, 0, 1, 0.0).amplitudes, pair.amplitudes, atol=1e-14)


def test_mixer_needs_two_modes(grid):
    with pytest.raises(ContractError):
        gridstate.mix(gridstate.vacuum(grid), 0, 1, 0.3)


# ========================================
# PROJECTION AND INVERSION
# ========================================


def test_projection_is_idempotent(grid, rng):
    state = GridState(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
    window = ProjectionWindow(0.7, 3.0)
    once, _ = gridstate.project(state, window)
    twice, _ = gridstate.project(once, window)
    assert np.max(np.abs(twice.amplitudes - once.amplitudes)) < 1e-12


def test_full_window_is_identity(grid):
    vac = gridstate.vacuum(grid)
    kept, weight = gridstate.project(vac, ProjectionWindow(0.0, grid.extent))
    np.testing.assert_array_equal(kept.amplitudes, vac.amplitudes)
    assert weight == pytest.approx(1.0, abs=1e-12)


def test_projection_weight_of_one_sigma(hbar):
    # dx = 1/25 puts the window edges at +-1 on cell boundaries
    g = make_grid(512, 512 / 25.0, hbar)
    _, weight = gridstate.project(gridstate.vacuum(g), ProjectionWindow(0.0, 2.0 * math.sqrt(hbar / 2)))
    assert weight == pytest.approx(special.erf(1 / math.sqrt(2)), abs=1e-4)


def test_window_narrower_than_a_bin_rejected(grid):
    with pytest.raises(DomainError):
        gridstate.project(gridstate.vacuum(grid), ProjectionWindow(0.0, grid.spacing / 2))


def test_window_outside_grid_rejected(grid):
    with pytest.raises(DomainError):
        gridstate.project(gridstate.vacuum(grid), ProjectionWindow(grid.extent / 2, 1.0))


def test_inversion_twice_is_identity(grid):
    state = gridstate.displace(gridstate.vacuum(grid), 0, 0.5, 0.5)
    window = ProjectionWindow(0.0, 1.0)
    twice = gridstate.invert_about(gridstate.invert_about(state, window), window)
    assert np.max(np.abs(twice.amplitudes - state.amplitudes)) < 1e-12


def test_inversion_edge_cases(grid):
    state = gridstate.position_eigenstate(-5.0, grid)
    full = gridstate.invert_about(state, ProjectionWindow(0.0, grid.extent))
    np.testing.assert_array_equal(full.amplitudes, state.amplitudes)
    away = gridstate.invert_about(state, ProjectionWindow(5.0, 1.0))
    np.testing.assert_array_equal(away.amplitudes, -state.amplitudes)


# ========================================
# MEASUREMENT
# ========================================


def test_histogram_matches_density(grid, rng):
    vac = gridstate.vacuum(grid)
    shots = gridstate.sample_bins(vac, 0, rng, 100_000)
    empirical = np.bincount(shots, minlength=grid.n_points) / shots.size
    tv = 0.5 * np.sum(np.abs(empirical - gridstate.bin_probabilities(vac, 0)))
    assert tv < 0.02


def test_measurement_collapses_in_place(grid, rng):
    k, value, post = gridstate.measure_x(gridstate.vacuum(grid), 0, rng)
    assert value == grid.x[k]
    assert gridstate.bin_probabilities(post, 0)[k] == pytest.approx(1.0)


def test_measurement_needs_normalised_state(grid, rng):
    with pytest.raises(ContractError):
        gridstate.measure_x(GridState(grid, 2.0 * gridstate.vacuum(grid).amplitudes), 0, rng)


# ========================================
# OBSERVABLES
# ========================================


def test_real_wavefunction_has_zero_momentum(grid):
    momentum = gridstate.expectation(gridstate.number_state(3, grid), QuadratureOperator.P())
    assert momentum == pytest.approx(0.0, abs=1e-10)


def test_ground_state_x_squared(grid, hbar):
    x2 = QuadratureOperator.diagonal_in_x(lambda x: x * x)
    assert gridstate.expectation(gridstate.vacuum(grid), x2) == pytest.approx(hbar / 2, abs=1e-6)


@pytest.mark.parametrize("op, kind", [
    (QuadratureOperator.X(), OperatorKind.X),
    (QuadratureOperator.P(), OperatorKind.P),
    (QuadratureOperator.diagonal_in_x(np.cos), OperatorKind.X_DIAGONAL),
    (QuadratureOperator.diagonal_in_p(np.cos), OperatorKind.P_DIAGONAL),
    (QuadratureOperator.X() + QuadratureOperator.P(), OperatorKind.COMBINATION),
    (2.0 * QuadratureOperator.P(), OperatorKind.P),
])
def test_operator_kind(op, kind):
    assert op.kind is kind


def test_diagonal_kinds_act_in_their_own_basis(grid, hbar):
    state = gridstate.displace(gridstate.vacuum(grid), 0, 0.7, -0.4)
    x_only = gridstate.apply_operator(state, QuadratureOperator.X())
    np.testing.assert_allclose(x_only, grid.x * state.amplitudes, atol=1e-14)
    # the sum acts term by term
    combined = gridstate.apply_operator(state, QuadratureOperator.X() + QuadratureOperator.P())
    p_only = gridstate.apply_operator(state, QuadratureOperator.P())
    np.testing.assert_allclose(combined, x_only + p_only, atol=1e-12)
    assert gridstate.expectation(state, QuadratureOperator.P()) == pytest.approx(-0.4, abs=1e-8)



def test_generalized_uncertainty_x_p(grid, hbar):
    lhs, rhs, holds = gridstate.generalized_uncertainty_check(
        gridstate.squeeze(gridstate.vacuum(grid), 0, 0.3), QuadratureOperator.X(), QuadratureOperator.P())
    assert rhs == pytest.approx(hbar / 2, abs=1e-6)
    assert holds and lhs >= rhs * (1 - 1e-6)


def test_generalized_uncertainty_self_commuting(grid):
    _, rhs, holds = gridstate.generalized_uncertainty_check(gridstate.vacuum(grid), QuadratureOperator.X(),
                                                           QuadratureOperator.X())
    assert rhs == pytest.approx(0.0, abs=1e-12)
    assert holds


def test_generalized_uncertainty_random_states(grid, hbar, rng):
    a = QuadratureOperator.X()
    b = QuadratureOperator.X() + QuadratureOperator.P()
    for _ in range(20):
        center, kick, width = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.7, 1.5)
        state = gridstate.displace(gridstate.realistic_gaussian(0.0, width, grid), 0, center, kick)
        _, rhs, holds = gridstate.generalized_uncertainty_check(state, a, b)
        assert rhs == pytest.approx(hbar / 2, abs=1e-6)
        assert holds


@pytest.mark.parametrize("builder, tol", [
    (lambda g: gridstate.vacuum(g), 1e-6),
    (lambda g: gridstate.displace(gridstate.vacuum(g), 0, 1.0, 0.5), 1e-6),
    (lambda g: gridstate.number_state(5, g), 1e-5),
])
def test_commutator_residual(grid, builder, tol):
    assert gridstate.commutator_residual(grid, builder(grid)) < tol


@pytest.mark.parametrize("n", [0, 1, 4])
def test_number_states_are_energy_eigenstates(grid, hbar, n):
    state = gridstate.number_state(n, grid)
    residual = gridstate.apply_hamiltonian(state) - hbar * (n + 0.5) * state.amplitudes
    interior = np.abs(grid.x) < grid.extent / 4
    assert np.max(np.abs(residual[interior])) < 1e-6
    assert gridstate.energy(state) == pytest.approx(hbar * (n + 0.5), abs=1e-6)
