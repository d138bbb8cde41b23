"""
Small-momentum and continuum behaviour of the Hadamard walk.

Lattice momenta are scaled as ``k = eps * k_phys`` and ``q = eps * q_phys``
with ``t = j * eps``. At ``eps -> 0`` the Bloch matrix tends to the identity
and ``(U - I) / eps`` tends to ``G = -i (q_phys sigma_z + k_phys sigma_x)``,
whose frequencies ``+-sqrt(k^2 + q^2)`` give the massive Dirac cone with
mass ``|q_phys|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import InvalidArgumentError
from .spectral import dispersion, quasi_momenta, spectral_power

__all__ = [
    "UnderResolvedError",
    "ConvergenceReport",
    "dirac_cone_error",
    "first_order_generator",
    "dirac_reference_propagator",
    "mass_tower",
    "continuum_convergence",
]

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class UnderResolvedError(InvalidArgumentError):
    """Wavepacket too narrow for the lattice spacing."""


def dirac_cone_error(k: ArrayLike, q: ArrayLike) -> NDArray[np.float64]:
    """``| |omega(k, q)| - sqrt(k^2 + q^2) |`` for the Hadamard dispersion."""
    omega = dispersion(k, q)[0]
    return np.abs(omega - np.hypot(k, q))


def first_order_generator(k_phys: ArrayLike, q_phys: ArrayLike) -> NDArray[np.complex128]:
    """Anti-Hermitian ``G = lim (U(eps k, eps q) - I) / eps``."""
    k, q = np.broadcast_arrays(np.asarray(k_phys, dtype=float), np.asarray(q_phys, dtype=float))
    return -1j * (q[..., None, None] * _SIGMA_Z + k[..., None, None] * _SIGMA_X)


def dirac_reference_propagator(k_phys: ArrayLike, q_phys: ArrayLike, t: float) -> NDArray[np.complex128]:
    """
    ``exp(t G)`` in closed form: ``cos(E t) I - i t sinc(E t) (q sigma_z + k sigma_x)``.

    ``E = sqrt(k^2 + q^2)``. Broadcasts over ``k_phys`` and ``q_phys``.
    """
    k, q = np.broadcast_arrays(np.asarray(k_phys, dtype=float), np.asarray(q_phys, dtype=float))
    energy = np.hypot(k, q)
    cos_term = np.cos(energy * t)[..., None, None]
    sinc_term = (t * np.sinc(energy * t / np.pi))[..., None, None]
    h = q[..., None, None] * _SIGMA_Z + k[..., None, None] * _SIGMA_X
    return cos_term * np.eye(2) - 1j * sinc_term * h


def mass_tower(q_nodes: int, circumference: float | None = None) -> NDArray[np.float64]:
    """
    Dirac masses ``|q_i|`` selected by the closed dimension.

    With ``circumference=None`` these are the lattice values ``|2 pi i / Q|``;
    otherwise the physical masses ``2 pi |i| / circumference``.
    """
    q = np.abs(quasi_momenta(q_nodes))
    if circumference is None:
        return q
    return q * q_nodes / circumference


@dataclass(frozen=True)
class ConvergenceReport:
    epsilons: list[float]
    errors: list[float]
    fitted_order: float
    mass: float
    degenerate: bool = False
    """Every error is at rounding level, so ``fitted_order`` is meaningless."""

    def to_json(self) -> dict:
        return {
            "epsilons": self.epsilons,
            "errors": self.errors,
            "fitted_order": self.fitted_order,
            "mass": self.mass,
            "degenerate": self.degenerate,
        }


def continuum_convergence(
    q_index: int,
    packet_width: float,
    t_final: float,
    epsilons,
    q_nodes: int = 8,
    spinor=(1 / math.sqrt(2), 1j / math.sqrt(2)),
    modes: int = 2049,
) -> ConvergenceReport:
    """
    Compare walk evolution of a Gaussian packet with the first-order propagator.

    The packet is Gaussian in physical momentum, ``exp(-(k w)^2 / 2)`` times a
    fixed spinor, and sits in the sector with physical mass
    ``q_phys = 2 pi q_index / q_nodes``; at spacing ``eps`` the walk runs in
    lattice sector ``q = eps * q_phys`` for ``t_final / eps`` steps. The error
    is the L2 norm over ``k`` of the spinor difference, on a fixed grid of
    ``modes`` momenta spanning ``|k| <= 10 / w``.

    Raises
    ------
    InvalidArgumentError
        If fewer than four spacings are given, they do not halve, or
        ``t_final / eps`` is not an integer.
    UnderResolvedError
        If ``packet_width < 4 * eps`` for some spacing.
    """
    eps = [float(e) for e in epsilons]
    if len(eps) < 4:
        raise InvalidArgumentError("need at least four lattice spacings")
    for a, b in zip(eps, eps[1:]):
        if not math.isclose(b, a / 2, rel_tol=1e-12):
            raise InvalidArgumentError(f"spacings must halve: {a} -> {b}")
    if packet_width < 4 * eps[0]:
        raise UnderResolvedError(f"packet width {packet_width} < 4 * eps = {4 * eps[0]}")
    if t_final < 0:
        raise InvalidArgumentError("t_final must be >= 0")

    mass = 2 * math.pi * q_index / q_nodes
    k = np.linspace(-10 / packet_width, 10 / packet_width, modes)
    dk = k[1] - k[0]
    amplitude = np.exp(-((k * packet_width) ** 2) / 2)
    amplitude /= math.sqrt(np.sum(amplitude**2) * dk)
    chi = np.asarray(spinor, dtype=np.complex128)
    chi = chi / np.linalg.norm(chi)
    packet = amplitude[:, None] * chi[None, :]

    reference = np.einsum("kij,kj->ki", dirac_reference_propagator(k, mass, t_final), packet)
    errors = []
    for e in eps:
        steps = round(t_final / e)
        if not math.isclose(steps * e, t_final, rel_tol=1e-9, abs_tol=1e-12):
            raise InvalidArgumentError(f"t_final / eps = {t_final / e} is not an integer")
        walked = np.einsum("kij,kj->ki", spectral_power(e * k, e * mass, steps), packet)
        diff = walked - reference
        errors.append(float(math.sqrt(np.sum(np.abs(diff) ** 2) * dk)))

    degenerate = max(errors) <= 1e-12
    with np.errstate(divide="ignore"):
        logs = np.log(np.maximum(errors, np.finfo(float).tiny))
    order = float(np.polyfit(np.log(eps), logs, 1)[0])
    return ConvergenceReport(eps, errors, order, mass, degenerate)
