"""
Real-space alternate quantum walk on the cylinder ``Z x Z/Q``.

The amplitude field is stored densely as an array of shape
``(2 * window + 1, Q, 2)`` indexed by ``(m + window, l, spin)``. One step is
``U = S_y C_y S_x C_x`` with the rightmost factor acting first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from .core import InvalidArgumentError, WalkError

__all__ = [
    "WindowOverflowError",
    "BlochInitialState",
    "LatticeState",
    "localized_state",
    "step",
    "evolve",
    "iterate",
    "probability",
    "marginal_probability",
    "front_positions",
]


class WindowOverflowError(WalkError, RuntimeError):
    """Amplitude reached the edge of the truncated window; enlarge it."""


@dataclass(frozen=True)
class BlochInitialState:
    """Initial coin state ``cos(theta/2)|+1> + e^{i phi} sin(theta/2)|-1>``."""

    theta: float = math.pi / 2
    phi: float = math.pi / 2

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise InvalidArgumentError("Bloch angles must be finite")

    @property
    def spinor(self) -> NDArray[np.complex128]:
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)],
            dtype=np.complex128,
        )


@dataclass(frozen=True, eq=False)
class LatticeState:
    q_nodes: int
    window: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        if self.q_nodes < 1:
            raise InvalidArgumentError(f"Q must be >= 1, got {self.q_nodes}")
        if self.window < 0:
            raise InvalidArgumentError(f"window must be >= 0, got {self.window}")
        expected = (2 * self.window + 1, self.q_nodes, 2)
        if self.amplitudes.shape != expected:
            raise InvalidArgumentError(
                f"amplitudes have shape {self.amplitudes.shape}, expected {expected}"
            )

    @property
    def positions(self) -> NDArray[np.int64]:
        """Open-dimension coordinates ``m = -window .. window``."""
        return np.arange(-self.window, self.window + 1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def support(self) -> int:
        """Largest ``|m|`` carrying a nonzero amplitude (-1 for the zero state)."""
        rows = np.flatnonzero(np.any(self.amplitudes != 0, axis=(1, 2)))
        if rows.size == 0:
            return -1
        return int(np.max(np.abs(rows - self.window)))


def localized_state(q_nodes: int, window: int, coin: BlochInitialState) -> LatticeState:
    """Walker at ``(m, l) = (0, 0)`` with coin state given by Bloch angles."""
    if q_nodes < 1 or window < 0:
        raise InvalidArgumentError(f"need Q >= 1 and window >= 0, got {q_nodes}, {window}")
    amps = np.zeros((2 * window + 1, q_nodes, 2), dtype=np.complex128)
    amps[window, 0, :] = coin.spinor
    return LatticeState(q_nodes, window, amps)


def _apply_coin(amps: NDArray, coin: NDArray) -> NDArray:
    return amps @ np.asarray(coin, dtype=np.complex128).T


def step(state: LatticeState, coin_x: NDArray, coin_y: NDArray) -> LatticeState:
    """
    Apply one step of the walk.

    Order: coin x, shift x (``m -> m + s``), coin y, shift y (``l -> l + s mod Q``).

    Raises
    ------
    WindowOverflowError
        If any amplitude sits on ``m = +-window`` before the x-shift.
    """
    psi = _apply_coin(state.amplitudes, coin_x)
    if np.any(psi[0] != 0) or np.any(psi[-1] != 0):
        raise WindowOverflowError(
            f"amplitude reached the window edge |m| = {state.window}; enlarge the window"
        )
    shifted = np.zeros_like(psi)
    shifted[1:, :, 0] = psi[:-1, :, 0]
    shifted[:-1, :, 1] = psi[1:, :, 1]
    psi = _apply_coin(shifted, coin_y)
    psi[:, :, 0] = np.roll(psi[:, :, 0], 1, axis=1)
    psi[:, :, 1] = np.roll(psi[:, :, 1], -1, axis=1)
    return LatticeState(state.q_nodes, state.window, psi)


def iterate(state: LatticeState, steps: int, coin_x: NDArray, coin_y: NDArray) -> Iterator[LatticeState]:
    """Yield the states after steps ``1 .. steps``."""
    for _ in range(steps):
        state = step(state, coin_x, coin_y)
        yield state


def evolve(state: LatticeState, steps: int, coin_x: NDArray, coin_y: NDArray) -> LatticeState:
    if steps < 0:
        raise InvalidArgumentError(f"steps must be >= 0, got {steps}")
    for state in iterate(state, steps, coin_x, coin_y):
        pass
    return state


def probability(state: LatticeState) -> NDArray[np.float64]:
    """``P(m, l)`` as an array of shape ``(2 * window + 1, Q)``."""
    return np.sum(np.abs(state.amplitudes) ** 2, axis=2)


def marginal_probability(state: LatticeState) -> NDArray[np.float64]:
    """``P(m)`` summed over the closed dimension and the coin."""
    return np.sum(probability(state), axis=1)


def front_positions(
    marginal: NDArray, positions: NDArray, count: int, side: int = 1
) -> NDArray[np.int64]:
    """
    Locate the ``count`` strongest peaks of ``P(m)`` on one side of the origin.

    ``side=+1`` searches ``m > 0`` and ``side=-1`` searches ``m < 0``; the
    returned positions are sorted by ``|m|``.

    Peaks are strict local maxima on the sublattice of the dominant parity
    (after ``j`` steps from the origin only ``m = j mod 2`` is populated).
    The edge site of the sublattice counts as a peak if it exceeds its only
    neighbour. Returned positions are sorted ascending.
    """
    marginal = np.asarray(marginal, dtype=float)
    positions = np.asarray(positions) * (1 if side >= 0 else -1)
    even = np.sum(marginal[positions % 2 == 0])
    parity = 0 if even >= 0.5 * np.sum(marginal) else 1
    sel = (positions % 2 == parity) & (positions > 0)
    p, m = marginal[sel], positions[sel]
    padded = np.concatenate(([-np.inf], p, [-np.inf]))
    is_peak = (p > padded[:-2]) & (p > padded[2:])
    peaks_m, peaks_p = m[is_peak], p[is_peak]
    order = np.argsort(peaks_p)[::-1][:count]
    return np.sort(peaks_m[order]) * (1 if side >= 0 else -1)
