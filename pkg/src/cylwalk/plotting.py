"""Figures written next to the data files. Uses the non-interactive Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_marginal(path: Path, positions, marginal, q_nodes: int, steps: int) -> Path:
    positions = np.asarray(positions)
    # only m = steps mod 2 is ever populated
    mask = positions % 2 == steps % 2
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(positions[mask], np.asarray(marginal)[mask], lw=0.8)
    ax.set_xlabel("m")
    ax.set_ylabel("P(m)")
    ax.set_title(f"Q = {q_nodes}, j = {steps}")
    return _save(fig, path)


def plot_bands(path: Path, k, qs, omega) -> Path:
    """``omega`` has shape ``(len(qs), len(k))``; both bands are drawn."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for q, w in zip(qs, omega):
        line, = ax.plot(k, w, lw=1.0, label=f"q = {q:.3f}")
        ax.plot(k, -w, lw=1.0, color=line.get_color())
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\omega$")
    ax.set_xlim(-np.pi, np.pi)
    if len(qs) <= 12:
        ax.legend(fontsize=7, loc="upper right")
    return _save(fig, path)


def plot_bloch_scan(path: Path, thetas, phis, entropy, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(phis, thetas, entropy, shading="auto", vmin=0, vmax=1)
    fig.colorbar(mesh, ax=ax, label="S")
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$\theta$")
    ax.set_title(title)
    return _save(fig, path)


def plot_entropy_series(path: Path, steps, entropy) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(steps, entropy, lw=0.8)
    ax.set_xlabel("j")
    ax.set_ylabel("S(j)")
    ax.set_ylim(0, 1)
    return _save(fig, path)


def plot_convergence(path: Path, epsilons, errors, order: float) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    ax.loglog(epsilons, errors, "o-")
    ax.set_xlabel(r"$\epsilon$")
    ax.set_ylabel("L2 error")
    ax.set_title(f"fitted order {order:.3f}")
    return _save(fig, path)
