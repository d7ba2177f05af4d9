"""
Tests for Wigner functions and their export
"""
import json
import math

import numpy as np
import pytest

from scripts import wigner
from scripts.backends import fock, gaussian, gridstate
from scripts.utils.errors import DomainError
from scripts.utils.numerics import self_dual_grid


def vacuum_wigner(x, p, hbar):
    return np.exp(-(x[None, :] ** 2 + p[:, None] ** 2) / hbar) / (math.pi * hbar)


@pytest.fixture
def axes(hbar):
    return wigner.default_axes(hbar, 101, 4.0)


def test_default_axes_sample_the_origin(hbar):
    axes = wigner.default_axes(hbar)
    assert axes.size == wigner.DEFAULT_POINTS
    assert 0.0 in axes


def test_grid_vacuum_matches_closed_form(grid, hbar, axes):
    w = wigner.wigner_from_grid(gridstate.vacuum(grid), axes, axes)
    assert np.max(np.abs(w.values - vacuum_wigner(axes, axes, hbar))) < 1e-6


def test_grid_displaced_state_is_translated(dual_grid, hbar):
    step = 0.05
    axes = np.arange(-80, 81) * step
    shifted = gridstate.displace(gridstate.vacuum(dual_grid), 0, 1.0, -0.5)
    w = wigner.wigner_from_grid(shifted, axes, axes)
    expected = np.exp(-((axes[None, :] - 1.0) ** 2 + (axes[:, None] + 0.5) ** 2) / hbar) / (math.pi * hbar)
    assert np.max(np.abs(w.values - expected)) < 1e-6


def test_fock_one_is_negative_at_origin(grid, hbar, axes):
    w = wigner.wigner_from_fock(fock.number_state(1, 40, hbar), axes, axes, grid)
    assert w.value_at(0.0, 0.0) == pytest.approx(-1 / (math.pi * hbar), abs=1e-4)
    assert w.value_at(0.0, 0.0) == pytest.approx(wigner.lower_bound(hbar), abs=1e-4)


def test_gaussian_matches_grid(grid, axes):
    g_state = gaussian.apply_squeeze(gaussian.apply_xz(gaussian.vacuum(1, grid.hbar), 0, 0.8, 0.3), 0, 0.4)
    w_state = gridstate.squeeze(gridstate.displace(gridstate.vacuum(grid), 0, 0.8, 0.3), 0, 0.4)
    w_gauss = wigner.wigner_from_gaussian(g_state, 0, axes, axes)
    w_grid = wigner.wigner_from_grid(w_state, axes, axes)
    assert np.max(np.abs(w_gauss.values - w_grid.values)) < 1e-6


def test_two_mode_grid_state_traces_partner(grid, hbar, axes):
    pair = gridstate.product_state(gridstate.vacuum(grid), gridstate.displace(gridstate.vacuum(grid), 0, 1.0, 0.0))
    w = wigner.wigner_from_grid(pair, axes, axes, mode=0)
    assert np.max(np.abs(w.values - vacuum_wigner(axes, axes, hbar))) < 1e-6


def test_axes_outside_grid_rejected(grid):
    wide = np.linspace(-grid.extent, grid.extent, 11)
    with pytest.raises(DomainError):
        wigner.wigner_from_grid(gridstate.vacuum(grid), wide, wide)


def test_p_axis_beyond_kernel_period_rejected(hbar):
    small = self_dual_grid(16, hbar)
    p_max = wigner.p_limit(small)
    # 3 p_max aliases onto -p_max, where the vacuum would read as -1/(pi hbar)
    with pytest.raises(DomainError, match="p axis"):
        wigner.wigner_from_grid(gridstate.vacuum(small), [0.0], [0.0, 3.0 * p_max])


def test_p_axis_at_limit_accepted(hbar):
    small = self_dual_grid(16, hbar)
    p_max = wigner.p_limit(small)
    w = wigner.wigner_from_grid(gridstate.vacuum(small), [0.0], [-p_max, 0.0, p_max])
    assert w.value_at(0.0, 0.0) == pytest.approx(1 / (math.pi * hbar), rel=1e-6)


def test_mode_out_of_range(grid, axes):
    with pytest.raises(DomainError):
        wigner.wigner_from_grid(gridstate.vacuum(grid), axes, axes, mode=1)


# ========================================
# FIGURE PANELS
# ========================================


@pytest.fixture
def panels(hbar):
    return wigner.phase_space_panels(hbar, wigner.default_axes(hbar, 321, 8.0))


def test_vacuum_panel_peak(panels, hbar):
    assert panels['vacuum'].value_at(0.0, 0.0) == pytest.approx(1 / (2 * math.pi), abs=1e-6)


def test_displaced_panel_keeps_shape(panels):
    vac, moved = panels['vacuum'].values, panels['displaced'].values
    # Dgate(0.5) moves x by 1.0, twenty axis steps
    np.testing.assert_allclose(moved[:, 20:], vac[:, :-20], atol=1e-12)


def test_squeezed_panel_aspect(panels):
    w = panels['squeezed']
    peak = w.value_at(0.0, 0.0)
    width_x = 0.5 / math.sqrt(-2 * math.log(w.value_at(0.5, 0.0) / peak))
    width_p = 0.5 / math.sqrt(-2 * math.log(w.value_at(0.0, 0.5) / peak))
    assert width_x / width_p == pytest.approx(math.exp(-2 * 0.5), rel=1e-3)


def test_displaced_squeezed_panel_is_off_centre(panels):
    w = panels['displaced_squeezed']
    j, i = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert w.x_axis[i] != 0.0
    assert w.p_axis[j] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ['vacuum', 'displaced', 'squeezed', 'displaced_squeezed'])
def test_panels_are_normalised(panels, name):
    assert wigner.normalization_check(panels[name]) == pytest.approx(1.0, abs=1e-4)


def test_fock_three_normalisation(grid, hbar):
    axes = wigner.default_axes(hbar, 161, 8.0)
    w = wigner.wigner_from_fock(fock.number_state(3, 40, hbar), axes, axes, grid)
    assert wigner.normalization_check(w) == pytest.approx(1.0, abs=1e-4)


def test_marginal_is_position_density(grid, hbar):
    axes = wigner.default_axes(hbar, 161, 8.0)
    w = wigner.wigner_from_grid(gridstate.vacuum(grid), axes, axes)
    expected = np.exp(-axes ** 2 / hbar) / math.sqrt(math.pi * hbar)
    np.testing.assert_allclose(wigner.marginal_x(w), expected, atol=1e-6)
    np.testing.assert_allclose(wigner.marginal_p(w), expected, atol=1e-6)


# ========================================
# EXPORT
# ========================================


def small_grid(hbar):
    axes = np.array([-1.0, 0.0, 1.0])
    return wigner.wigner_from_gaussian(gaussian.vacuum(1, hbar), 0, axes, axes)


def test_csv_has_one_row_per_point(tmp_path, hbar):
    path = tmp_path / 'w.csv'
    wigner.export(small_grid(hbar), 'csv', path)
    lines = path.read_text().splitlines()
    assert lines[0] == 'x,p,w'
    assert len(lines) == 10


def test_csv_with_empty_axes_is_header_only(tmp_path, hbar):
    empty = wigner.wigner_from_gaussian(gaussian.vacuum(1, hbar), 0, np.array([]), np.array([]))
    path = tmp_path / 'w.csv'
    wigner.export(empty, 'csv', path)
    assert path.read_text().splitlines() == ['x,p,w']


def test_json_round_trip(tmp_path, hbar):
    w = small_grid(hbar)
    path = tmp_path / 'w.json'
    wigner.export(w, 'json', path)
    back = wigner.from_json(json.loads(path.read_text()), hbar)
    np.testing.assert_array_equal(back.values, w.values)


def test_unknown_format_rejected(hbar):
    with pytest.raises(DomainError):
        wigner.export(small_grid(hbar), 'xlsx', None)


def test_pgm_heatmap(tmp_path, hbar):
    path = tmp_path / 'w.pgm'
    wigner.to_pgm(small_grid(hbar), path)
    data = path.read_bytes()
    header = b"P5\n3 3\n255\n"
    assert data.startswith(header)
    pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(3, 3)
    assert pixels[1, 1] == 255
    assert pixels.min() >= 128
