"""
Two-level linear algebra shared by the rest of the package.

Coins, Bloch matrices and density matrices are plain ``(2, 2)`` complex
NumPy arrays. Spin index 0 is ``s = +1`` and index 1 is ``s = -1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "WalkError",
    "InvalidArgumentError",
    "InvalidDensityMatrixError",
    "CoinAngles",
    "coin_matrix",
    "hadamard_coin",
    "hermitian_eigvals",
    "von_neumann_entropy",
    "is_unitary",
    "ATOL",
]

ComplexMatrix2 = NDArray[np.complex128]

#: default absolute tolerance for algebraic identities
ATOL = 1e-12


class WalkError(Exception):
    """Base class for every error raised by :mod:`cylwalk`."""


class InvalidArgumentError(WalkError, ValueError):
    pass


class InvalidDensityMatrixError(WalkError, ValueError):
    pass


@dataclass(frozen=True)
class CoinAngles:
    """Angles of one coin operator (radians)."""

    alpha: float = 0.0
    beta: float = 0.0
    theta: float = math.pi / 4

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"coin angle {name} must be finite")


def coin_matrix(angles: CoinAngles) -> ComplexMatrix2:
    """
    Return the general single-qubit coin for the given angles.

    Parameters
    ----------
    angles : CoinAngles
        Phases ``alpha``, ``beta`` and mixing angle ``theta``.

    Returns
    -------
    ndarray, shape (2, 2)
        ``[[e^{i(a+b)} cos t, e^{i(a-b)} sin t], [e^{-i(a-b)} sin t, -e^{-i(a+b)} cos t]]``.
        Unitary with determinant -1.
    """
    a, b, t = angles.alpha, angles.beta, angles.theta
    c, s = math.cos(t), math.sin(t)
    return np.array(
        [
            [np.exp(1j * (a + b)) * c, np.exp(1j * (a - b)) * s],
            [np.exp(-1j * (a - b)) * s, -np.exp(-1j * (a + b)) * c],
        ],
        dtype=np.complex128,
    )


def hadamard_coin() -> ComplexMatrix2:
    """Return the Hadamard coin ``(1/sqrt2) [[1, 1], [1, -1]]``."""
    return coin_matrix(CoinAngles(theta=math.pi / 4))


def is_unitary(matrix: NDArray, atol: float = ATOL) -> bool:
    m = np.asarray(matrix)
    eye = np.eye(m.shape[-1])
    return bool(np.max(np.abs(m.conj().swapaxes(-1, -2) @ m - eye)) <= atol)


def hermitian_eigvals(rho: NDArray) -> tuple[float, float]:
    """Closed-form eigenvalues (ascending) of a 2x2 Hermitian matrix."""
    a = rho[0, 0].real
    d = rho[1, 1].real
    b = rho[0, 1]
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    return mean - radius, mean + radius


def von_neumann_entropy(rho: NDArray, tol: float = 1e-9) -> float:
    """
    Von Neumann entropy of a single-qubit density matrix, in bits.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero and ``0 log 0 = 0``.

    Raises
    ------
    InvalidDensityMatrixError
        If ``rho`` is not 2x2 Hermitian, its trace differs from one by more
        than ``tol``, or an eigenvalue is below ``-tol``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2) or not np.all(np.isfinite(rho)):
        raise InvalidDensityMatrixError("expected a finite 2x2 matrix")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidDensityMatrixError("density matrix is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > tol:
        raise InvalidDensityMatrixError(f"trace {trace!r} differs from 1")
    entropy = 0.0
    for lam in hermitian_eigvals(rho):
        if lam < -tol:
            raise InvalidDensityMatrixError(f"negative eigenvalue {lam!r}")
        if lam > 0.0:
            entropy -= lam * math.log2(lam)
    # a qubit holds at most one bit; clip rounding outside [0, 1]
    return min(max(entropy, 0.0), 1.0)
