import math

import numpy as np
import pytest

from cylwalk.core import (
    CoinAngles,
    InvalidArgumentError,
    InvalidDensityMatrixError,
    coin_matrix,
    hadamard_coin,
    hermitian_eigvals,
    is_unitary,
    von_neumann_entropy,
)

SQ2 = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "angles, expected",
    [
        (CoinAngles(theta=math.pi / 4), [[SQ2, SQ2], [SQ2, -SQ2]]),
        (CoinAngles(theta=0.0), [[1, 0], [0, -1]]),
        (CoinAngles(theta=math.pi / 2, alpha=math.pi / 2), [[0, 1j], [-1j, 0]]),
    ],
)
def test_coin_matrix_examples(angles, expected):
    np.testing.assert_allclose(coin_matrix(angles), expected, atol=1e-15)


def test_coin_matrix_unitary_det_minus_one(rng):
    angles = rng.uniform(-10, 10, size=(10_000, 3))
    worst_u = worst_det = 0.0
    for a, b, t in angles:
        c = coin_matrix(CoinAngles(theta=t, alpha=a, beta=b))
        worst_u = max(worst_u, np.max(np.abs(c.conj().T @ c - np.eye(2))))
        worst_det = max(worst_det, abs(np.linalg.det(c) + 1))
    assert worst_u <= 1e-12
    assert worst_det <= 1e-12


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_coin_rejects_non_finite(bad):
    with pytest.raises(InvalidArgumentError):
        CoinAngles(theta=bad)
    with pytest.raises(InvalidArgumentError):
        CoinAngles(alpha=bad)


def test_hadamard():
    h = hadamard_coin()
    np.testing.assert_array_equal(h, coin_matrix(CoinAngles(0, 0, math.pi / 4)))
    np.testing.assert_allclose(h, np.array([[1, 1], [1, -1]]) * SQ2, atol=1e-15)
    np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-15)
    assert np.linalg.det(h) == pytest.approx(-1, abs=1e-15)
    assert is_unitary(h)


def test_entropy_examples():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-15)
    s = von_neumann_entropy(np.diag([2 / math.pi, 1 - 2 / math.pi]))
    assert s == pytest.approx(0.945, abs=1e-3)


def test_entropy_matches_numpy_eigvalsh(rng):
    for _ in range(200):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        lam = np.linalg.eigvalsh(rho)
        expected = -sum(x * math.log2(x) for x in lam if x > 0)
        assert von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)
        np.testing.assert_allclose(hermitian_eigvals(rho), lam, atol=1e-14)


def test_entropy_unitary_and_transpose_invariance(rng):
    for _ in range(200):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        u, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        s = von_neumann_entropy(rho)
        assert von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(s, abs=1e-10)
        assert von_neumann_entropy(rho.T) == pytest.approx(s, abs=1e-12)


def test_entropy_clamps_tiny_negative_eigenvalue():
    assert von_neumann_entropy(np.diag([1 + 5e-10, -5e-10])) == 0.0


@pytest.mark.parametrize(
    "rho",
    [
        np.diag([0.6, 0.6]),
        np.diag([1.2, -0.2]),
        np.array([[0.5, 0.5], [0.0, 0.5]]),
        np.eye(3) / 3,
    ],
)
def test_entropy_rejects_invalid(rho):
    with pytest.raises(InvalidDensityMatrixError):
        von_neumann_entropy(rho)
