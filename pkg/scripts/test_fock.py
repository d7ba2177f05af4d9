"""
Tests for the truncated number-basis backend
"""
import math

import numpy as np
import pytest

from scripts.backends import fock, gaussian, gridstate
from scripts.utils.errors import ConfigurationError, ContractError, DomainError, ResourceError, TruncationError
from scripts.utils.numerics import make_grid

D = 40


def test_raising_three_gives_two_times_four(hbar):
    ops = fock.ladder_ops(D)
    raised = ops.a_dag @ fock.number_state(3, D, hbar).amplitudes
    np.testing.assert_array_equal(raised, 2.0 * fock.number_state(4, D, hbar).amplitudes)


def test_lowering_vacuum_vanishes():
    ops = fock.ladder_ops(D)
    assert not np.any(ops.a @ fock.vacuum(1, D).amplitudes)


def test_number_operator_spectrum():
    np.testing.assert_allclose(np.diag(fock.ladder_ops(D).n_op).real, np.arange(D), atol=1e-12)


def test_commutator_on_interior_block(hbar):
    x, p = fock.quadrature_ops(D, hbar)
    comm = x @ p - p @ x
    np.testing.assert_allclose(comm[:D - 1, :D - 1], 1j * hbar * np.eye(D - 1), atol=1e-12)


def test_x_is_real_symmetric_tridiagonal(hbar):
    x, _ = fock.quadrature_ops(D, hbar)
    assert np.all(x.imag == 0)
    np.testing.assert_array_equal(x, x.T)
    assert not np.any(np.triu(x, 2))
    vac = fock.vacuum(1, D, hbar).amplitudes
    assert (vac @ x @ x @ vac).real == pytest.approx(hbar / 2)


def test_hamiltonian_levels(hbar):
    h = fock.hamiltonian(D, hbar)
    for n in range(D - 2):
        ket = fock.number_state(n, D, hbar).amplitudes
        assert np.max(np.abs(h @ ket - hbar * (n + 0.5) * ket)) < 1e-12
    n_op = fock.ladder_ops(D).n_op
    block = slice(0, D - 2)
    np.testing.assert_allclose((h @ n_op - n_op @ h)[block, block], 0, atol=1e-12)


def test_cutoff_bounds():
    with pytest.raises(DomainError):
        fock.ladder_ops(1)
    with pytest.raises(DomainError):
        fock.ladder_ops(fock.MAX_CUTOFF + 1)


# ========================================
# COHERENT STATES AND GATES
# ========================================


def test_zero_coherent_is_vacuum(hbar):
    np.testing.assert_array_equal(fock.coherent(0, D, hbar).amplitudes, fock.vacuum(1, D, hbar).amplitudes)


def test_coherent_is_lowering_eigenvector(hbar):
    alpha = 1.5
    c = fock.coherent(alpha, D, hbar).amplitudes
    residual = (fock.ladder_ops(D).a @ c - alpha * c)[:D - 2]
    assert np.linalg.norm(residual) < 1e-6


def test_coherent_mean_photon_number(hbar):
    assert fock.mean_photon_number(fock.coherent(1.2 - 0.4j, D, hbar)) == pytest.approx(1.6, abs=1e-6)


def test_coherent_rejects_large_amplitude(hbar):
    with pytest.raises(TruncationError):
        fock.coherent(4.0, D, hbar)


def test_displaced_vacuum_is_coherent(hbar):
    alpha = 0.8 + 0.3j
    displaced = fock.displacement_matrix(alpha, D) @ fock.vacuum(1, D, hbar).amplitudes
    overlap = np.vdot(fock.coherent(alpha, D, hbar).amplitudes, displaced)
    assert abs(overlap) ** 2 > 1 - 1e-8


def test_phase_matrix_is_exactly_diagonal():
    theta = 0.73
    m = fock.phase_matrix(theta, D)
    np.testing.assert_array_equal(m, np.diag(np.exp(-1j * theta * np.arange(D))))


def test_squeezed_vacuum_has_only_even_levels(hbar):
    amps = fock.squeeze_matrix(0.6 * np.exp(0.4j), D) @ fock.vacuum(1, D, hbar).amplitudes
    assert np.max(np.abs(amps[1::2])) < 1e-12


def test_gate_matrix_dispatch():
    np.testing.assert_array_equal(fock.gate_matrix('phase', 0.2, 8), fock.phase_matrix(0.2, 8))
    with pytest.raises(DomainError):
        fock.gate_matrix('kerr', 0.2, 8)


def test_gate_range_guards():
    with pytest.raises(TruncationError):
        fock.displacement_matrix(3.0, D)
    with pytest.raises(TruncationError):
        fock.squeeze_matrix(2.5, D)


# ========================================
# MIXER
# ========================================


def test_mixer_zero_angle_is_identity():
    np.testing.assert_allclose(fock.mixer_matrix(0.0, 0.3, 6), np.eye(36), atol=1e-14)


def test_single_photon_splits_evenly(hbar):
    d = 6
    one_zero = fock.product_state(fock.number_state(1, d, hbar), fock.vacuum(1, d, hbar))
    out = fock.apply_gate(one_zero, fock.mixer_matrix(math.pi / 4, 0.0, d), (0, 1))
    dens = np.abs(out.amplitudes) ** 2
    assert dens[1, 0] == pytest.approx(0.5, abs=1e-9)
    assert dens[0, 1] == pytest.approx(0.5, abs=1e-9)


def test_mixer_preserves_total_photon_number(hbar, rng):
    d = 8
    amps = np.zeros((d, d), dtype=complex)
    amps[:4, :4] = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    amps /= np.linalg.norm(amps)
    state = fock.FockState(2, d, amps, hbar)
    out = fock.apply_gate(state, fock.mixer_matrix(0.7, 0.2, d), (0, 1))
    before = fock.mean_photon_number(state, 0) + fock.mean_photon_number(state, 1)
    after = fock.mean_photon_number(out, 0) + fock.mean_photon_number(out, 1)
    assert after == pytest.approx(before, abs=1e-9)


def test_mixer_dimension_guard():
    with pytest.raises(ResourceError):
        fock.mixer_matrix(0.3, 0.0, 65)


def test_mixer_argument_order(hbar):
    d = 6
    zero_one = fock.product_state(fock.vacuum(1, d, hbar), fock.number_state(1, d, hbar))
    forward = fock.apply_gate(zero_one, fock.mixer_matrix(0.4, 0.0, d), (1, 0))
    swapped = fock.FockState(2, d, zero_one.amplitudes.T, hbar)
    reference = fock.apply_gate(swapped, fock.mixer_matrix(0.4, 0.0, d), (0, 1))
    np.testing.assert_allclose(forward.amplitudes, reference.amplitudes.T, atol=1e-14)


# ========================================
# LEAKAGE
# ========================================


def test_leakage_warning(hbar, caplog):
    amps = np.zeros(D, dtype=complex)
    amps[0], amps[-1] = math.sqrt(1 - 1e-5), math.sqrt(1e-5)
    fock.check_leakage(fock.FockState(1, D, amps, hbar))
    assert "top Fock level" in caplog.text


def test_leakage_error(hbar):
    with pytest.raises(TruncationError):
        fock.check_leakage(fock.number_state(D - 1, D, hbar))


# ========================================
# GRID SYNTHESIS AND MEASUREMENT
# ========================================


def test_vacuum_synthesises_ground_state(grid):
    state = fock.to_grid(fock.vacuum(1, D, grid.hbar), grid)
    assert gridstate.fidelity(state, gridstate.vacuum(grid)) > 1 - 1e-10


def test_coherent_means_match_gaussian(grid, hbar):
    state = fock.to_grid(fock.coherent(1.0, D, hbar), grid)
    ref = gaussian.apply_displacement(gaussian.vacuum(1, hbar), 0, 1.0)
    np.testing.assert_allclose(gridstate.moments(state, 0)[:2], ref.mean, atol=1e-5)


def test_squeezed_width_matches_gaussian(grid, hbar):
    amps = fock.squeeze_matrix(0.5, D) @ fock.vacuum(1, D, hbar).amplitudes
    state = fock.to_grid(fock.FockState(1, D, amps, hbar), grid)
    assert gridstate.moments(state, 0)[2] == pytest.approx(math.sqrt(hbar / 2) * math.exp(-0.5), abs=1e-4)


def test_synthesis_needs_matching_hbar(grid):
    with pytest.raises(ContractError):
        fock.to_grid(fock.vacuum(1, D, hbar=1.0), grid)


def test_synthesis_needs_wide_grid(hbar):
    with pytest.raises(ConfigurationError):
        fock.to_grid(fock.vacuum(1, D, hbar), make_grid(256, 10.0, hbar))


def test_entangled_state_has_no_reduced_amplitudes(hbar):
    d = 6
    state = fock.apply_gate(fock.product_state(fock.number_state(1, d, hbar), fock.vacuum(1, d, hbar)),
                            fock.mixer_matrix(math.pi / 4, 0.0, d), (0, 1))
    with pytest.raises(ContractError):
        fock.reduced_amplitudes(state, 0)


def test_single_mode_measurement_leaves_nothing(grid, rng):
    value, post = fock.measure_x(fock.vacuum(1, D, grid.hbar), 0, grid, rng)
    assert post is None
    assert abs(value) < grid.extent / 2


def test_two_mode_measurement_keeps_partner(grid, rng):
    state = fock.product_state(fock.vacuum(1, D, grid.hbar), fock.coherent(0.5, D, grid.hbar))
    _, post = fock.measure_x(state, 0, grid, rng)
    assert post.modes == 1
    overlap = np.vdot(fock.coherent(0.5, D, grid.hbar).amplitudes, post.amplitudes)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-9)


def test_json_round_trip(hbar):
    state = fock.coherent(0.7j, 10, hbar)
    back = fock.FockState.from_json(state.to_json())
    np.testing.assert_array_equal(back.amplitudes, state.amplitudes)
    assert back.cutoff == 10
