"""
Momentum-space description of the walk.

Fourier convention: ``psi_hat(k, q) = sum_{m,l} exp(-i (k m + q l)) psi(m, l)``.
With it a shift ``m -> m + s`` multiplies spin ``s`` by ``exp(-i s k)``, and
the one-step Bloch matrix is ``diag(e^{-iq}, e^{iq}) C_y diag(e^{-ik}, e^{ik}) C_x``.
The real-space engine in :mod:`cylwalk.lattice` is the arbiter of this
convention (see the cross-engine tests).

The Bloch matrix has determinant one, so its eigenvalues are ``exp(-+i omega)``
with ``omega = omega_plus`` in ``[0, pi]`` and ``omega_minus = -omega_plus``.
Eigenvector ``phi_plus`` belongs to ``exp(-i omega_plus)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import InvalidArgumentError, WalkError
from .lattice import LatticeState, WindowOverflowError

__all__ = [
    "DegeneratePointError",
    "UndefinedDerivativeError",
    "HADAMARD",
    "quasi_momenta",
    "walk_matrix",
    "dispersion",
    "eigensystem",
    "spectral_power",
    "momentum_evolve",
    "group_velocity",
    "max_group_velocity",
    "BandPoint",
    "band_structure",
    "BandCensus",
    "band_census",
    "census_oracle",
]

HADAMARD = math.pi / 4

# below this |sin omega| the two eigenvalues are treated as coincident
_DEGENERATE = 1e-12


class DegeneratePointError(WalkError, ArithmeticError):
    """The two bands touch; the eigenbasis is not unique."""


class UndefinedDerivativeError(WalkError, ArithmeticError):
    pass


def quasi_momenta(q_nodes: int) -> NDArray[np.float64]:
    """
    Allowed quasi-momenta ``2 pi i / Q`` reduced to ``(-pi, pi]``.

    Returned in the order ``i = 0 .. Q-1``; this is also the FFT bin order
    used by :func:`momentum_evolve`.
    """
    if q_nodes < 1:
        raise InvalidArgumentError(f"Q must be >= 1, got {q_nodes}")
    q = 2 * np.pi * np.arange(q_nodes) / q_nodes
    return np.where(q > np.pi, q - 2 * np.pi, q)


def walk_matrix(
    k: ArrayLike, q: ArrayLike, theta_x: float = HADAMARD, theta_y: float = HADAMARD
) -> NDArray[np.complex128]:
    """
    One-step Bloch matrix ``U_q(k)`` (coin phases set to zero).

    Broadcasts over ``k`` and ``q``; the result has shape ``broadcast + (2, 2)``.
    """
    k, q = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(q, dtype=float))
    cx, sx = math.cos(theta_x), math.sin(theta_x)
    cy, sy = math.cos(theta_y), math.sin(theta_y)
    e2k = np.exp(2j * k)
    left = np.exp(-1j * (k + q))
    right = np.exp(-1j * (k - q))
    out = np.empty(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = left * (cx * cy + e2k * sx * sy)
    out[..., 0, 1] = left * (cy * sx - e2k * cx * sy)
    out[..., 1, 0] = right * (cx * sy - e2k * cy * sx)
    out[..., 1, 1] = right * (e2k * cx * cy + sx * sy)
    return out


def _cos_omega(k, q, theta_x, theta_y):
    cx, sx = math.cos(theta_x), math.sin(theta_x)
    cy, sy = math.cos(theta_y), math.sin(theta_y)
    rhs = cx * cy * np.cos(np.add(k, q)) + sx * sy * np.cos(np.subtract(k, q))
    bound = abs(cx * cy) + abs(sx * sy)
    assert bound <= 1 + 1e-15, "coin angles give |cos omega| > 1"
    return np.clip(rhs, -1.0, 1.0)


def dispersion(
    k: ArrayLike, q: ArrayLike, theta_x: float = HADAMARD, theta_y: float = HADAMARD
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Band frequencies ``(omega_plus, omega_minus)`` with ``omega_plus = arccos(...)``."""
    omega = np.arccos(_cos_omega(k, q, theta_x, theta_y))
    return omega, -omega


def _su2_parts(u: NDArray) -> tuple[NDArray, NDArray, NDArray]:
    """
    Split ``U = cos(w) I + i sin(w) n.sigma`` into ``(cos w, sin w, i n.sigma)``.

    ``sin w`` comes from the norm of the traceless anti-Hermitian part, which
    stays accurate near band touchings where ``arccos`` would not.
    """
    cos_w = 0.5 * np.real(u[..., 0, 0] + u[..., 1, 1])
    anti = 0.5 * (u - np.conj(np.swapaxes(u, -1, -2)))
    # i sin(w) n.sigma has entries (i sin w) * [[nz, nx - i ny], [nx + i ny, -nz]]
    sin_w = np.sqrt(np.abs(anti[..., 0, 0]) ** 2 + np.abs(anti[..., 0, 1]) ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        i_nsigma = anti / sin_w[..., None, None]
    return cos_w, sin_w, i_nsigma


def eigensystem(k: float, q: float) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """
    Normalized eigenvectors ``(phi_plus, phi_minus)`` of the Hadamard Bloch matrix.

    ``phi_h`` is proportional to ``(e^{-iq} sin k, -sin q cos k + h sin omega)``
    and satisfies ``U phi_h = exp(-i h omega) phi_h``. Where that vector
    vanishes the eigenvector is read off the spectral projector instead.

    Raises
    ------
    DegeneratePointError
        At band touchings (``sin omega = 0``), where ``U = +-I``.
    """
    omega = float(dispersion(k, q)[0])
    sin_w = math.sin(omega)
    if sin_w < _DEGENERATE:
        raise DegeneratePointError(f"bands touch at k={k!r}, q={q!r}")
    u = walk_matrix(k, q)
    _, _, i_nsigma = _su2_parts(u)
    vectors = []
    for h in (1, -1):
        v = np.array([np.exp(-1j * q) * math.sin(k), -math.sin(q) * math.cos(k) + h * sin_w])
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            # projector onto exp(-i h omega) is (I - h n.sigma) / 2
            proj = 0.5 * (np.eye(2) + h * 1j * i_nsigma)
            col = int(np.argmax(np.linalg.norm(proj, axis=0)))
            v = proj[:, col]
            norm = np.linalg.norm(v)
        vectors.append(v / norm)
    return vectors[0], vectors[1]


def spectral_power(
    k: ArrayLike,
    q: ArrayLike,
    j: int,
    theta_x: float = HADAMARD,
    theta_y: float = HADAMARD,
) -> NDArray[np.complex128]:
    """
    ``U_q(k)^j`` from the spectral resolution ``sum_h exp(-i h omega j) P_h``.

    The projectors are ``P_h = (I - h n.sigma) / 2``. Points where the bands
    touch fall back to repeated multiplication.
    """
    if j < 0:
        raise InvalidArgumentError(f"j must be >= 0, got {j}")
    u = walk_matrix(k, q, theta_x, theta_y)
    cos_w, sin_w, i_nsigma = _su2_parts(u)
    omega = np.arctan2(sin_w, cos_w)
    eye = np.eye(2)
    n_sigma = -1j * i_nsigma
    p_plus = 0.5 * (eye - n_sigma)
    p_minus = 0.5 * (eye + n_sigma)
    phase = np.exp(-1j * omega * j)[..., None, None]
    out = phase * p_plus + np.conj(phase) * p_minus
    degenerate = sin_w < _DEGENERATE
    if np.any(degenerate):
        out[degenerate] = np.linalg.matrix_power(u[degenerate], j)
    return out


def momentum_evolve(
    initial: LatticeState,
    steps: int,
    theta_x: float = HADAMARD,
    theta_y: float = HADAMARD,
) -> LatticeState:
    """
    Evolve a lattice state by ``steps`` steps through momentum space.

    The window is treated as a ring of ``2 * window + 1`` sites. This is exact
    for the infinite lattice as long as the support never reaches the window
    edge, which is checked up front.
    """
    if steps < 0:
        raise InvalidArgumentError(f"steps must be >= 0, got {steps}")
    reach = initial.support() + steps
    if steps > 0 and reach >= initial.window:
        raise WindowOverflowError(
            f"support {initial.support()} + {steps} steps reaches window {initial.window}"
        )
    n_m = 2 * initial.window + 1
    psi_hat = np.fft.fft2(initial.amplitudes, axes=(0, 1))
    k = 2 * np.pi * np.fft.fftfreq(n_m)
    q = 2 * np.pi * np.fft.fftfreq(initial.q_nodes)
    power = spectral_power(k[:, None], q[None, :], steps, theta_x, theta_y)
    psi_hat = np.einsum("abij,abj->abi", power, psi_hat)
    amps = np.fft.ifft2(psi_hat, axes=(0, 1))
    return LatticeState(initial.q_nodes, initial.window, amps)


def group_velocity(
    k: ArrayLike, q: ArrayLike, theta_x: float = HADAMARD, theta_y: float = HADAMARD
) -> NDArray[np.float64]:
    """
    Upper-band group velocity ``d omega_plus / dk`` in sites per step.

    For the Hadamard walk this is ``sin k cos q / sin omega``.

    Raises
    ------
    UndefinedDerivativeError
        Where ``sin omega = 0`` (band extrema and touchings).
    """
    omega = dispersion(k, q, theta_x, theta_y)[0]
    sin_w = np.sin(omega)
    if np.any(sin_w < _DEGENERATE):
        raise UndefinedDerivativeError("group velocity undefined where sin(omega) = 0")
    return _velocity(k, q, sin_w, theta_x, theta_y)


def _velocity(k, q, sin_w, theta_x, theta_y):
    cxcy = math.cos(theta_x) * math.cos(theta_y)
    sxsy = math.sin(theta_x) * math.sin(theta_y)
    slope = cxcy * np.sin(np.add(k, q)) + sxsy * np.sin(np.subtract(k, q))
    # one site per step is a hard light cone; clip rounding above it
    return np.clip(slope / sin_w, -1.0, 1.0)


def max_group_velocity(q: ArrayLike) -> NDArray[np.float64]:
    """Hadamard front speed ``|cos q|``, attained at ``k = pi/2``."""
    return np.abs(np.cos(q))


@dataclass(frozen=True)
class BandPoint:
    k: float
    q: float
    omega_plus: float
    omega_minus: float
    eigvec_plus: NDArray[np.complex128] | None
    eigvec_minus: NDArray[np.complex128] | None
    group_velocity_plus: float


def band_structure(
    k: ArrayLike, q: ArrayLike, theta_x: float = HADAMARD, theta_y: float = HADAMARD
) -> list[BandPoint]:
    """
    Band records on the outer product of the ``k`` and ``q`` grids (q-major).

    Eigenvectors are computed by direct diagonalization and are ``None`` at
    band touchings; the group velocity is NaN where it is undefined.
    """
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    qs = np.atleast_1d(np.asarray(q, dtype=float))
    qq, kk = np.meshgrid(qs, ks, indexing="ij")
    omega, _ = dispersion(kk, qq, theta_x, theta_y)
    sin_w = np.sin(omega)
    with np.errstate(invalid="ignore", divide="ignore"):
        vel = np.where(sin_w < _DEGENERATE, np.nan, _velocity(kk, qq, sin_w, theta_x, theta_y))
    u = walk_matrix(kk, qq, theta_x, theta_y)
    _, sin_w2, i_nsigma = _su2_parts(u)
    points = []
    for idx in np.ndindex(kk.shape):
        plus = minus = None
        if sin_w2[idx] >= 1e-8:
            vecs = []
            for h in (1, -1):
                proj = 0.5 * (np.eye(2) + h * 1j * i_nsigma[idx])
                col = proj[:, int(np.argmax(np.linalg.norm(proj, axis=0)))]
                vecs.append(col / np.linalg.norm(col))
            plus, minus = vecs
        points.append(
            BandPoint(
                k=float(kk[idx]),
                q=float(qq[idx]),
                omega_plus=float(omega[idx]),
                omega_minus=float(-omega[idx]),
                eigvec_plus=plus,
                eigvec_minus=minus,
                group_velocity_plus=float(vel[idx]),
            )
        )
    return points


@dataclass(frozen=True)
class BandCensus:
    Q: int
    distinct: int
    multiplicities: list[int]
    flat: bool
    flat_curves: list[bool] = field(default_factory=list)
    members: list[list[float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "Q": self.Q,
            "distinct": self.distinct,
            "multiplicities": list(self.multiplicities),
            "flat": self.flat,
        }


def band_census(
    q_nodes: int,
    theta_x: float = HADAMARD,
    theta_y: float = HADAMARD,
    k_points: int = 1024,
    tol: float = 1e-10,
) -> BandCensus:
    """
    Group the ``Q`` upper-band curves ``omega_plus(k; q_i)`` into distinct states.

    Two curves are the same state when they cover the same set of frequencies
    over the Brillouin zone: their sorted samples on a ``k_points`` grid agree
    within ``tol`` in max norm. This identifies curves related by ``k -> -k``
    or ``k -> k + pi``, so for the Hadamard walk the classes are the distinct
    values of ``|cos q_i|``.
    """
    qs = quasi_momenta(q_nodes)
    k = -np.pi + 2 * np.pi * np.arange(k_points) / k_points
    curves = dispersion(k[None, :], qs[:, None], theta_x, theta_y)[0]
    signatures = np.sort(curves, axis=1)
    groups: list[list[int]] = []
    for i, sig in enumerate(signatures):
        for group in groups:
            if np.max(np.abs(signatures[group[0]] - sig)) < tol:
                group.append(i)
                break
        else:
            groups.append([i])
    flat_curves = [bool(np.ptp(curves[g[0]]) < tol) for g in groups]
    return BandCensus(
        Q=q_nodes,
        distinct=len(groups),
        multiplicities=[len(g) for g in groups],
        flat=any(flat_curves),
        flat_curves=flat_curves,
        members=[[float(qs[i]) for i in g] for g in groups],
    )


def census_oracle(q_nodes: int) -> int:
    """Number of distinct ``|cos(2 pi i / Q)|``, by exact rational reasoning on ``i``."""
    # |cos(2 pi i/Q)| depends only on the distance of 2i/Q to the nearest integer
    classes = set()
    for i in range(q_nodes):
        r = (2 * i) % q_nodes
        classes.add(min(r, q_nodes - r))
    return len(classes)
