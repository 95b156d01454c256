import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwentangle.errors import AsymptoticGapless, GaplessSpectrum
from qwentangle.topology import (
    PAULI,
    Phase,
    band_structure,
    bands_table,
    bloch_unitary,
    bound_states_table,
    crossed_lines,
    find_bound_states,
    gap_classification,
    k_grid,
    phase_diagram_table,
    real_space_spectrum,
    tan_ratio,
    winding_number,
)
from qwentangle.walk import CoinProfile, coin_rotation

PI = math.pi
angles = st.floats(-2 * PI, 2 * PI, allow_nan=False)


def test_k_grid_is_half_open():
    k = k_grid(8)
    assert k[0] == -PI and k[-1] < PI
    assert np.allclose(np.diff(k), 2 * PI / 8)


@given(angles, angles, st.floats(-PI, PI))
@settings(max_examples=60, deadline=None)
def test_bloch_unitary_is_unitary(t1, t2, k):
    u = bloch_unitary(k, t1, t2)
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-14)


def test_bloch_trace_of_simple_walk():
    ks = k_grid(64)
    for t1 in (0.3, PI / 2, 2.9):
        tr = np.trace(bloch_unitary(ks, t1, 0.0), axis1=-2, axis2=-1)
        assert np.max(np.abs(tr - 2 * math.cos(t1 / 2) * np.cos(ks))) < 1e-13


def test_bloch_identity_at_zero():
    assert np.allclose(bloch_unitary(0.0, 0.0, 0.0), np.eye(2), atol=1e-15)


def test_bloch_matches_factor_product():
    k, t1, t2 = 0.3, PI / 2, PI / 4
    t_up = np.diag([np.exp(1j * k), 1])
    t_dn = np.diag([1, np.exp(-1j * k)])
    direct = t_dn @ coin_rotation(t2) @ t_up @ coin_rotation(t1)
    assert np.allclose(bloch_unitary(k, t1, t2), direct, atol=1e-14)


@pytest.mark.parametrize("t1", [PI / 7, PI / 2, 1.3, 2.5])
def test_simple_walk_dispersion(t1):
    a = band_structure(t1, 0.0, 1024)
    err = np.abs(np.cos(a.bands[:, 0]) - math.cos(t1 / 2) * np.cos(a.k_samples))
    assert err.max() < 1e-10


def test_split_step_dispersion():
    # cos E = cos(t1/2) cos(t2/2) cos k - sin(t1/2) sin(t2/2)
    t1, t2 = 1.1, -0.7
    a = band_structure(t1, t2, 256)
    want = math.cos(t1 / 2) * math.cos(t2 / 2) * np.cos(a.k_samples) - math.sin(t1 / 2) * math.sin(t2 / 2)
    assert np.max(np.abs(np.cos(a.bands[:, 0]) - want)) < 1e-12


def test_free_walk_is_linear():
    a = band_structure(0.0, 0.0, 128)
    assert np.allclose(np.abs(a.bands[:, 0]), np.abs(a.k_samples), atol=1e-12)
    assert a.gap0 < 1e-12


def test_flat_bands_at_pi():
    a = band_structure(PI, 0.0, 1024)
    assert np.max(np.abs(np.abs(a.bands) - PI / 2)) < 1e-10


def test_band_at_quarter_turn():
    a = band_structure(PI / 2, 0.0, 4)
    i = int(np.argmin(np.abs(a.k_samples)))
    assert abs(a.bands[i, 0] - PI / 4) < 1e-13


@pytest.mark.parametrize("theta, gapped", [(0, False), (PI / 2, True), (PI, True), (3 * PI / 2, True), (2 * PI, False)])
def test_simple_walk_gap_pattern(theta, gapped):
    a = band_structure(theta, 0.0, 1024)
    gap = min(a.gap0, a.gap_pi)
    if gapped:
        assert gap > 0.5
    else:
        assert gap < 1e-8


@given(angles, angles)
@settings(max_examples=40, deadline=None)
def test_chiral_spectrum_and_unit_axes(t1, t2):
    a = band_structure(t1, t2, 64)
    assert np.allclose(a.bands[:, 0], -a.bands[:, 1], atol=1e-10)
    ok = a.axis_defined
    assert np.allclose(np.linalg.norm(a.axes[ok], axis=1), 1.0, atol=1e-10)
    assert np.all(np.isnan(a.axes[~ok]))


def test_axes_reconstruct_unitary():
    a = band_structure(PI / 2, PI / 4, 32)
    u = bloch_unitary(a.k_samples, PI / 2, PI / 4)
    e = a.bands[:, 0]
    n_sigma = np.einsum("kj,jab->kab", a.axes, PAULI)
    rebuilt = np.cos(e)[:, None, None] * np.eye(2) - 1j * np.sin(e)[:, None, None] * n_sigma
    assert np.allclose(rebuilt, u, atol=1e-12)


@pytest.mark.parametrize(
    "t1, t2, phase, w",
    [
        (PI / 2, PI / 4, Phase.GAPPED_W1, 1),
        (PI / 4, PI / 2, Phase.GAPPED_W0, 0),
        (PI / 2, -PI / 4, Phase.GAPPED_W1, 1),
        (3 * PI / 4, -7 * PI / 8, Phase.GAPPED_W0, 0),
    ],
)
def test_winding_examples(t1, t2, phase, w):
    assert gap_classification(t1, t2) is phase
    assert winding_number(band_structure(t1, t2)) == w


def test_gap_closing_line():
    assert not gap_classification(PI / 2, PI / 2).gapped
    with pytest.raises(GaplessSpectrum):
        winding_number(band_structure(PI / 2, PI / 2))


def test_gapless_type_follows_line_parity():
    # theta2 = theta1 closes at pi, theta2 = -theta1 at 0; shifting by 2pi swaps them
    assert gap_classification(PI / 2, PI / 2) is Phase.GAPLESS_PI
    assert gap_classification(PI / 2, -PI / 2) is Phase.GAPLESS_0
    assert gap_classification(PI / 2, PI / 2 - 2 * PI) is Phase.GAPLESS_0


def test_degenerate_theta1_uses_numerical_gaps():
    assert gap_classification(0.0, 0.0) is Phase.GAPLESS_0
    assert gap_classification(0.0, PI / 2).gapped
    assert not gap_classification(2 * PI, 0.0).gapped


def test_ratio_tolerance_reports_gapless():
    t1 = PI / 3
    t2 = 2 * math.atan(math.tan(t1 / 2) * (1 + 5e-7))
    assert abs(tan_ratio(t1, t2) - 1) < 1e-6
    assert not gap_classification(t1, t2).gapped


def test_phase_diagram_alternates():
    t = phase_diagram_table(8, 128)
    w = {(round(a, 6), round(b, 6)): v for a, b, v in zip(t.column("theta1"), t.column("theta2"), t.column("W"))}
    grid = sorted({k[0] for k in w})
    # one step away from the diagonals the phase flips across theta2 = theta1
    g = 2 * PI * (np.arange(8) + 0.5) / 8
    assert w[(round(g[1], 6), round(g[0], 6))] == 1
    assert w[(round(g[1], 6), round(g[3], 6))] == 0
    assert len(grid) == 8
    assert set(v for v in w.values() if v is not None) == {0, 1}


def test_crossed_lines_types():
    one = CoinProfile.boundary(PI / 2, -PI / 4, -3 * PI / 4)
    assert crossed_lines(one) == [(pytest.approx(-PI / 2), "0")]
    two = CoinProfile.boundary(3 * PI / 4, -7 * PI / 8, 7 * PI / 8, width=1.0)
    assert [g for _, g in crossed_lines(two)] == ["0", "pi"]
    assert crossed_lines(CoinProfile.boundary(PI / 4, -PI / 8, PI / 8)) == []


# -- bound states ---------------------------------------------------------------


def test_real_space_matches_bloch_for_uniform_coins():
    t1, t2 = 1.0, 0.4
    energy, _ = real_space_spectrum(CoinProfile.uniform(t1, t2), 40)
    bloch = band_structure(t1, t2, 4096).bands.ravel()
    # every ring eigenvalue sits on the Bloch band within the k-grid resolution
    d = np.abs(np.angle(np.exp(1j * (energy[:, None] - bloch[None, :])))).min(axis=1)
    assert d.max() < 1e-3


def test_no_bound_states_inside_one_zone():
    report = find_bound_states(CoinProfile.boundary(PI / 4, -PI / 8, PI / 8), 80)
    assert len(report) == 0
    assert bound_states_table(report).rows == []


DERIVED = [
    (PI / 2, PI / 4, 3 * PI / 4, 3.0),
    (PI / 2, -PI / 4, -3 * PI / 4, 3.0),
    (3 * PI / 4, -5 * PI / 8, -7 * PI / 8, 1.0),
    (3 * PI / 4, -7 * PI / 8, 7 * PI / 8, 1.0),
    (PI / 3, 0.0, PI / 2, 2.0),
    (2 * PI / 3, PI / 3, PI, 2.0),
    (PI / 2, 0.1, PI - 0.1, 0.0),
    (PI / 2, 3 * PI / 4, 5 * PI / 4, 1.0),
]


@pytest.mark.parametrize("t1, lo, hi, w", DERIVED)
def test_bound_states_sit_on_crossings(t1, lo, hi, w):
    coins = CoinProfile.boundary(t1, lo, hi, width=w)
    report = find_bound_states(coins, 80)
    lines = crossed_lines(coins)
    assert len(report) == len(lines)
    kinds = sorted("0" if abs(b.quasi_energy) < 1e-3 else "pi" for b in report.states)
    assert kinds == sorted(g for _, g in lines)
    threshold = 10 / (2 * 80 + 1)
    for b in report.states:
        assert b.ipr > threshold
        assert abs(b.center) <= 5
        assert b.decay_length < 10
        assert abs(b.state.norm() - 1) < 1e-12


def test_bound_state_is_an_eigenvector():
    from qwentangle.walk import step_matrix

    coins = CoinProfile.boundary(PI / 2, -PI / 4, -3 * PI / 4)
    (b,) = find_bound_states(coins, 80).states
    u = step_matrix(coins, 80, periodic=True)
    v = b.state.amplitudes.reshape(-1)
    assert np.linalg.norm(u @ v - np.exp(-1j * b.quasi_energy) * v) < 1e-6


def test_gapless_asymptote_rejected():
    with pytest.raises(AsymptoticGapless):
        find_bound_states(CoinProfile.boundary(PI / 2, PI / 2, PI), 80)


def test_profile_must_reach_asymptotes():
    with pytest.raises(ValueError):
        find_bound_states(CoinProfile.boundary(PI / 2, PI / 4, 3 * PI / 4, width=20.0), 30)


def test_bands_table_columns():
    t = bands_table([band_structure(PI / 2, 0.0, 16)])
    assert t.columns == ["theta", "k", "E_plus", "E_minus"]
    assert len(t) == 16
