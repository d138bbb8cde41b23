import math

import numpy as np
import pytest

from cylwalk.core import InvalidArgumentError, is_unitary
from cylwalk.lattice import BlochInitialState, LatticeState, WindowOverflowError, evolve, localized_state
from cylwalk.spectral import (
    DegeneratePointError,
    UndefinedDerivativeError,
    band_census,
    band_structure,
    census_oracle,
    dispersion,
    eigensystem,
    group_velocity,
    max_group_velocity,
    momentum_evolve,
    quasi_momenta,
    spectral_power,
    walk_matrix,
)

FIG3_COIN = BlochInitialState(math.pi / 2, math.pi / 2)


def test_quasi_momenta():
    for q_nodes in range(1, 13):
        q = quasi_momenta(q_nodes)
        assert len(q) == q_nodes and q[0] == 0
        assert np.all((q > -np.pi) & (q <= np.pi))
        assert len(np.unique(np.round(np.exp(1j * q), 12))) == q_nodes
    with pytest.raises(InvalidArgumentError):
        quasi_momenta(0)


def test_walk_matrix_identity_at_origin():
    np.testing.assert_allclose(walk_matrix(0.0, 0.0), np.eye(2), atol=1e-15)


def test_walk_matrix_unitary_random(rng):
    k, q, tx, ty = rng.uniform(-4, 4, size=(4, 500))
    for args in zip(k, q, tx, ty):
        assert is_unitary(walk_matrix(*args))


def test_walk_matrix_from_coin_products(rng):
    """Bloch matrix equals diag(e^-iq, e^iq) C_y diag(e^-ik, e^ik) C_x."""
    for _ in range(50):
        k, q, tx, ty = rng.uniform(-4, 4, size=4)
        cx = np.array([[math.cos(tx), math.sin(tx)], [math.sin(tx), -math.cos(tx)]])
        cy = np.array([[math.cos(ty), math.sin(ty)], [math.sin(ty), -math.cos(ty)]])
        expected = np.diag([np.exp(-1j * q), np.exp(1j * q)]) @ cy @ np.diag([np.exp(-1j * k), np.exp(1j * k)]) @ cx
        np.testing.assert_allclose(walk_matrix(k, q, tx, ty), expected, atol=1e-14)


def test_eigenphases_example():
    k, q = math.pi / 3, 2 * math.pi / 5
    phases = np.sort(np.angle(np.linalg.eigvals(walk_matrix(k, q))))
    w = math.acos(math.cos(k) * math.cos(q))
    np.testing.assert_allclose(phases, [-w, w], atol=1e-12)


def test_dispersion_examples():
    assert dispersion(0.0, 0.0)[0] == 0.0
    k = np.linspace(-np.pi, np.pi, 101)
    np.testing.assert_allclose(dispersion(k, np.pi / 2)[0], np.pi / 2, atol=1e-15)
    np.testing.assert_allclose(dispersion(k, 0.0)[0], np.abs(k), atol=1e-7)
    wp, wm = dispersion(k, 0.4)
    np.testing.assert_array_equal(wm, -wp)


def test_dispersion_periodic_and_symmetric(rng):
    k, q = rng.uniform(-np.pi, np.pi, size=(2, 300))
    w = dispersion(k, q)[0]
    np.testing.assert_allclose(dispersion(k + 2 * np.pi, q)[0], w, atol=1e-12)
    np.testing.assert_allclose(dispersion(k, q + 2 * np.pi)[0], w, atol=1e-12)
    np.testing.assert_allclose(dispersion(-k, -q)[0], w, atol=1e-12)
    np.testing.assert_allclose(dispersion(k, -q)[0], w, atol=1e-12)


def test_band_gap_for_unequal_angles():
    k, q = np.meshgrid(np.linspace(-np.pi, np.pi, 401), np.linspace(-np.pi, np.pi, 401))
    w = dispersion(k, q, math.pi / 4, math.pi / 6)[0]
    assert np.min(w) > 0.1 and np.max(w) < np.pi - 0.1
    w_eq = dispersion(k, q)[0]
    assert np.min(w_eq) < 1e-12


def test_eigensystem_example():
    p, m = eigensystem(math.pi / 2, 0.0)
    np.testing.assert_allclose(p, np.array([1, 1]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(m, np.array([1, -1]) / math.sqrt(2), atol=1e-15)


def test_eigensystem_degenerate():
    with pytest.raises(DegeneratePointError):
        eigensystem(0.0, 0.0)
    with pytest.raises(DegeneratePointError):
        eigensystem(math.pi, 0.0)


@pytest.mark.parametrize("k, q", [(0.0, 0.5), (0.0, -0.5), (math.pi, 1.0), (0.0, 2.5)])
def test_eigensystem_zero_vector_fallback(k, q):
    u = walk_matrix(k, q)
    w = dispersion(k, q)[0]
    p, m = eigensystem(k, q)
    np.testing.assert_allclose(u @ p, np.exp(-1j * w) * p, atol=1e-10)
    np.testing.assert_allclose(u @ m, np.exp(1j * w) * m, atol=1e-10)


def test_eigensystem_random(rng):
    for k, q in rng.uniform(-np.pi, np.pi, size=(300, 2)):
        u = walk_matrix(k, q)
        w = dispersion(k, q)[0]
        p, m = eigensystem(k, q)
        assert np.linalg.norm(p) == pytest.approx(1, abs=1e-12)
        assert abs(np.vdot(p, m)) <= 1e-10
        np.testing.assert_allclose(u @ p, np.exp(-1j * w) * p, atol=1e-10)
        np.testing.assert_allclose(u @ m, np.exp(1j * w) * m, atol=1e-10)


def test_spectral_power_examples():
    np.testing.assert_allclose(spectral_power(0.3, 1.1, 0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(spectral_power(0.3, 1.1, 1), walk_matrix(0.3, 1.1), atol=1e-15)
    k, q = 0.7, 2 * math.pi / 5
    brute = np.eye(2)
    for _ in range(137):
        brute = walk_matrix(k, q) @ brute
    np.testing.assert_allclose(spectral_power(k, q, 137), brute, atol=1e-10)


def test_spectral_power_random(rng):
    for _ in range(100):
        k, q = rng.uniform(-np.pi, np.pi, size=2)
        j = int(rng.integers(0, 1001))
        brute = np.linalg.matrix_power(walk_matrix(k, q), j)
        np.testing.assert_allclose(spectral_power(k, q, j), brute, atol=1e-10)


@pytest.mark.parametrize("k, q", [(0.0, 0.0), (math.pi, 0.0), (1e-14, 0.0)])
def test_spectral_power_degenerate_points(k, q):
    brute = np.linalg.matrix_power(walk_matrix(k, q), 9)
    np.testing.assert_allclose(spectral_power(k, q, 9), brute, atol=1e-12)


def test_spectral_power_long_times():
    k, q = 0.41, 2 * math.pi / 7
    brute = np.linalg.matrix_power(walk_matrix(k, q), 10_000)
    np.testing.assert_allclose(spectral_power(k, q, 10_000), brute, atol=1e-10)


def test_spectral_power_general_angles():
    k, q = np.linspace(-3, 3, 7), 0.9
    brute = np.linalg.matrix_power(walk_matrix(k, q, 0.3, 1.2), 25)
    np.testing.assert_allclose(spectral_power(k, q, 25, 0.3, 1.2), brute, atol=1e-12)


def test_momentum_evolve_round_trip():
    s = localized_state(5, 10, FIG3_COIN)
    np.testing.assert_allclose(momentum_evolve(s, 0).amplitudes, s.amplitudes, atol=1e-12)


@pytest.mark.parametrize("q_nodes, steps", [(5, 50), (1, 100), (3, 7), (4, 13)])
def test_momentum_evolve_matches_lattice(q_nodes, steps, hadamard):
    s = localized_state(q_nodes, steps + 1, FIG3_COIN)
    a = evolve(s, steps, hadamard, hadamard).amplitudes
    b = momentum_evolve(s, steps).amplitudes
    assert np.max(np.abs(a - b)) <= 1e-10


def test_momentum_evolve_general_coins(rng):
    from cylwalk.core import CoinAngles, coin_matrix

    q_nodes, window = 4, 25
    amps = np.zeros((2 * window + 1, q_nodes, 2), complex)
    amps[window - 2 : window + 3] = rng.normal(size=(5, q_nodes, 2)) + 1j * rng.normal(size=(5, q_nodes, 2))
    amps /= np.linalg.norm(amps)
    s = LatticeState(q_nodes, window, amps)
    cx, cy = coin_matrix(CoinAngles(theta=0.4)), coin_matrix(CoinAngles(theta=1.0))
    a = evolve(s, 20, cx, cy).amplitudes
    b = momentum_evolve(s, 20, 0.4, 1.0).amplitudes
    assert np.max(np.abs(a - b)) <= 1e-10


def test_opposite_q_sign_fails_cross_engine(hadamard, rng):
    """The Appendix-style matrix (q -> -q) does not reproduce the lattice walk."""
    q_nodes, window, steps = 5, 12, 10
    amps = np.zeros((2 * window + 1, q_nodes, 2), complex)
    amps[window, :, :] = rng.normal(size=(q_nodes, 2)) + 1j * rng.normal(size=(q_nodes, 2))
    amps /= np.linalg.norm(amps)
    s = LatticeState(q_nodes, window, amps)
    lattice = evolve(s, steps, hadamard, hadamard).amplitudes
    psi_hat = np.fft.fft2(amps, axes=(0, 1))
    k = 2 * np.pi * np.fft.fftfreq(2 * window + 1)
    q = 2 * np.pi * np.fft.fftfreq(q_nodes)
    flipped = spectral_power(k[:, None], -q[None, :], steps)
    wrong = np.fft.ifft2(np.einsum("abij,abj->abi", flipped, psi_hat), axes=(0, 1))
    assert np.max(np.abs(wrong - lattice)) > 1e-2


def test_momentum_evolve_window_overflow():
    with pytest.raises(WindowOverflowError):
        momentum_evolve(localized_state(3, 5, FIG3_COIN), 5)


def test_group_velocity_examples():
    k = np.linspace(0.05, np.pi - 0.05, 50)
    np.testing.assert_allclose(group_velocity(k, 0.0), 1.0, atol=1e-12)
    np.testing.assert_allclose(group_velocity(k, np.pi / 2), 0.0, atol=1e-12)
    fine = np.linspace(1e-3, np.pi - 1e-3, 200_001)
    v = group_velocity(fine, 2 * math.pi / 6)
    assert np.max(np.abs(v)) == pytest.approx(0.5, abs=1e-9)
    assert max_group_velocity(2 * math.pi / 6) == pytest.approx(0.5, abs=1e-15)


def test_group_velocity_matches_finite_difference(rng):
    for k, q in rng.uniform(-3, 3, size=(100, 2)):
        h = 1e-6
        fd = (dispersion(k + h, q)[0] - dispersion(k - h, q)[0]) / (2 * h)
        if abs(math.sin(dispersion(k, q)[0])) > 0.05:
            assert group_velocity(k, q) == pytest.approx(fd, abs=1e-7)
            assert abs(group_velocity(k, q)) <= 1 + 1e-12


def test_group_velocity_undefined():
    with pytest.raises(UndefinedDerivativeError):
        group_velocity(0.0, 0.0)


def test_band_structure_records():
    pts = band_structure(np.linspace(-3, 3, 6), quasi_momenta(3))
    assert len(pts) == 18
    for b in pts:
        assert math.cos(b.omega_plus) == pytest.approx(math.cos(b.k) * math.cos(b.q), abs=1e-12)
        assert b.omega_minus == -b.omega_plus
        assert abs(b.group_velocity_plus) <= 1
        u = walk_matrix(b.k, b.q)
        np.testing.assert_allclose(u @ b.eigvec_plus, np.exp(-1j * b.omega_plus) * b.eigvec_plus, atol=1e-12)
    pt = band_structure(0.0, 0.0)[0]
    assert pt.eigvec_plus is None and math.isnan(pt.group_velocity_plus)


@pytest.mark.parametrize(
    "q_nodes, distinct, flat",
    [(4, 2, True), (6, 2, False), (5, 3, False), (8, 3, True), (1, 1, False), (3, 2, False)],
)
def test_band_census_examples(q_nodes, distinct, flat):
    c = band_census(q_nodes)
    assert c.distinct == distinct == census_oracle(q_nodes)
    assert c.flat is flat
    assert sum(c.multiplicities) == q_nodes


def test_band_census_q5_multiplicities():
    c = band_census(5)
    assert sorted(c.multiplicities) == [1, 2, 2]


def test_census_oracle_against_float_enumeration():
    for q_nodes in range(1, 80):
        vals = np.abs(np.cos(2 * np.pi * np.arange(q_nodes) / q_nodes))
        assert census_oracle(q_nodes) == len(np.unique(np.round(vals, 9)))


def test_band_census_json():
    assert band_census(6).to_json() == {"Q": 6, "distinct": 2, "multiplicities": [2, 4], "flat": False}
