"""
Coin-position entanglement of the walk.

Time-resolved quantities come from the real-space engine. Long-time
quantities come from the closed-form average of the coin state over ``k``
for each allowed quasi-momentum, with the rapidly oscillating cross-band
terms dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .core import InvalidArgumentError, hadamard_coin, von_neumann_entropy
from .lattice import BlochInitialState, LatticeState, iterate, localized_state
from .spectral import quasi_momenta

__all__ = [
    "EntropyRecord",
    "AsymptoticEntries",
    "AsymptoticRho",
    "reduced_density_matrix",
    "entropy_series",
    "time_averaged_rho",
    "asymptotic_entries",
    "asymptotic_rho",
    "asymptotic_rho_infinite",
    "bloch_scan",
]

#: below this value of cos^2 q the closed form is replaced by its limit
SINGULAR_COS2 = 1e-6


@dataclass(frozen=True)
class EntropyRecord:
    step: int
    rho_c: NDArray[np.complex128]
    entropy: float


@dataclass(frozen=True)
class AsymptoticEntries:
    q: float
    r22: float
    r12: complex
    nu: float

    def matrix(self) -> NDArray[np.complex128]:
        return np.array(
            [[1 - self.r22, self.r12], [np.conj(self.r12), self.r22]], dtype=np.complex128
        )


@dataclass(frozen=True)
class AsymptoticRho:
    """Long-time coin density matrix for ``Q`` sites around the cylinder.

    ``flat_band`` is set when ``Q`` is a multiple of 4. The flat band then
    adds a period-2 term that the ``k`` average does not remove, so ``rho``
    only describes the time average of the simulation, not its limit.
    """

    Q: int
    rho: NDArray[np.complex128]
    flat_band: bool

    @property
    def entropy(self) -> float:
        return von_neumann_entropy(self.rho)


def reduced_density_matrix(state: LatticeState) -> NDArray[np.complex128]:
    """Trace out position: ``rho[s, s'] = sum_{m,l} psi[m,l,s] conj(psi[m,l,s'])``."""
    psi = state.amplitudes.reshape(-1, 2)
    return psi.T @ psi.conj()


def entropy_series(
    q_nodes: int,
    coin: BlochInitialState,
    j_max: int,
    coin_x: NDArray | None = None,
    coin_y: NDArray | None = None,
) -> list[EntropyRecord]:
    """Entropy records for ``j = 0 .. j_max`` starting from a localized state."""
    if j_max < 0:
        raise InvalidArgumentError(f"j_max must be >= 0, got {j_max}")
    cx = hadamard_coin() if coin_x is None else coin_x
    cy = hadamard_coin() if coin_y is None else coin_y
    state = localized_state(q_nodes, j_max, coin)
    records = [_record(0, state)]
    for j, state in enumerate(iterate(state, j_max, cx, cy), start=1):
        records.append(_record(j, state))
    return records


def _record(j: int, state: LatticeState) -> EntropyRecord:
    rho = reduced_density_matrix(state)
    return EntropyRecord(j, rho, von_neumann_entropy(rho))


def time_averaged_rho(
    q_nodes: int, coin: BlochInitialState, j_end: int = 500, j_start: int | None = None
) -> NDArray[np.complex128]:
    """Mean of the simulated ``rho_c(j)`` over ``j_start <= j <= j_end``.

    ``j_start`` defaults to ``4 * j_end // 5``.
    """
    if j_start is None:
        j_start = 4 * j_end // 5
    if not 0 <= j_start <= j_end:
        raise InvalidArgumentError(f"need 0 <= j_start <= j_end, got {j_start}, {j_end}")
    records = entropy_series(q_nodes, coin, j_end)[j_start:]
    return np.mean([r.rho_c for r in records], axis=0)


def asymptotic_entries(q: float, theta: float, phi: float) -> AsymptoticEntries:
    """
    Closed-form long-time entries ``r22(q)`` and ``r12(q)`` for one quasi-momentum.

    Both expressions are 0/0 at ``cos q = 0``. There the limits
    ``r22 -> cos^2(theta/2)/4 + 3 sin^2(theta/2)/4`` and
    ``r12 -> -(i/4) sin(phi) sin(theta)`` are used, obtained by expanding
    around ``q = pi/2`` (``1 - nu ~ d^2/2``, ``cos 2q + nu ~ 3 d^2/2``).
    """
    nu = math.sqrt(max(0.0, 1 - math.cos(2 * q))) / math.sqrt(2)
    cos2 = math.cos(q) ** 2
    c2 = math.cos(theta / 2) ** 2
    s2 = math.sin(theta / 2) ** 2
    if cos2 <= SINGULAR_COS2:
        r22 = c2 / 4 + 0.75 * s2
        r12 = -0.25j * math.sin(phi) * math.sin(theta)
    else:
        r22 = (c2 * (1 - nu) + s2 * (math.cos(2 * q) + nu)) / (2 * cos2)
        r12 = (
            (np.exp(-2j * q) * np.exp(1j * phi) + np.exp(-1j * phi))
            / (4 * cos2)
            * (1 - nu)
            * math.sin(theta)
        )
    return AsymptoticEntries(q=q, r22=float(r22), r12=complex(r12), nu=nu)


def asymptotic_rho(q_nodes: int, theta: float, phi: float) -> AsymptoticRho:
    """Average of the per-``q_i`` long-time matrices over the ``Q`` quasi-momenta."""
    qs = quasi_momenta(q_nodes)
    rho = sum(asymptotic_entries(float(q), theta, phi).matrix() for q in qs) / q_nodes
    return AsymptoticRho(q_nodes, rho, flat_band=q_nodes % 4 == 0)


def asymptotic_rho_infinite(theta: float, phi: float) -> NDArray[np.complex128]:
    """Limit of :func:`asymptotic_rho` as ``Q -> infinity``."""
    pi = math.pi
    s, c = math.sin(theta), math.cos(theta)
    off = (np.exp(-1j * phi) + (pi - 3) * np.exp(1j * phi)) * s
    return np.array(
        [[pi + (pi - 2) * c, off], [np.conj(off), pi - (pi - 2) * c]], dtype=np.complex128
    ) / (2 * pi)


def bloch_scan(
    thetas: NDArray, phis: NDArray, q_nodes: int | None = None
) -> NDArray[np.float64]:
    """
    Long-time entropy on a ``(theta, phi)`` grid, shape ``(len(thetas), len(phis))``.

    ``q_nodes=None`` uses the ``Q -> infinity`` limit.
    """
    out = np.empty((len(thetas), len(phis)))
    for a, theta in enumerate(thetas):
        for b, phi in enumerate(phis):
            if q_nodes is None:
                rho = asymptotic_rho_infinite(float(theta), float(phi))
            else:
                rho = asymptotic_rho(q_nodes, float(theta), float(phi)).rho
            out[a, b] = von_neumann_entropy(rho)
    return out
