"""
Command-line front end.

Every subcommand writes plot-ready data into ``--output`` (a directory,
created if needed); ``--figure`` additionally renders a PNG next to it.

Exit codes: 0 success, 2 invalid argument, 3 window overflow, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import export
from .continuum import continuum_convergence
from .core import CoinAngles, InvalidArgumentError, coin_matrix, von_neumann_entropy
from .entanglement import asymptotic_rho, asymptotic_rho_infinite, bloch_scan, entropy_series
from .lattice import BlochInitialState, WindowOverflowError, evolve, localized_state, marginal_probability
from .spectral import band_census, band_structure, dispersion, quasi_momenta

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OVERFLOW = 3
EXIT_IO = 4

SUBCOMMANDS = ("evolve", "dispersion", "census", "entropy", "asymptotic", "continuum")


@dataclass
class RunConfig:
    subcommand: str
    Q: int = 1
    steps: int = 0
    theta: float = math.pi / 2
    phi: float = math.pi / 2
    theta_x: float = math.pi / 4
    theta_y: float = math.pi / 4
    output_path: Path = Path(".")
    format: str = "csv"
    figure: bool = False
    window: int | None = None
    k_points: int = 256
    q_points: int | None = None
    scan: int = 0
    q_index: int = 0
    width: float = 1.0
    t_final: float = 1.0
    epsilons: list[float] = field(default_factory=lambda: [1 / 16, 1 / 32, 1 / 64, 1 / 128])

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidArgumentError(f"unknown subcommand {self.subcommand!r}")
        if self.Q < 1:
            raise InvalidArgumentError(f"--Q must be >= 1, got {self.Q}")
        if self.steps < 0:
            raise InvalidArgumentError(f"--steps must be >= 0, got {self.steps}")
        if self.format not in ("csv", "json"):
            raise InvalidArgumentError(f"--format must be csv or json, got {self.format!r}")
        for name in ("theta", "phi", "theta_x", "theta_y"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"--{name.replace('_', '-')} must be finite")

    def table(self, stem: str) -> Path:
        return self.output_path / f"{stem}.{self.format}"


def _coins(cfg: RunConfig):
    return coin_matrix(CoinAngles(theta=cfg.theta_x)), coin_matrix(CoinAngles(theta=cfg.theta_y))


def _run_evolve(cfg: RunConfig) -> list[Path]:
    window = cfg.steps if cfg.window is None else cfg.window
    state = localized_state(cfg.Q, window, BlochInitialState(cfg.theta, cfg.phi))
    state = evolve(state, cfg.steps, *_coins(cfg))
    written = [cfg.table("marginal"), cfg.table("probability")]
    export.write_marginal(written[0], state)
    export.write_probability(written[1], state)
    if cfg.figure:
        from .plotting import plot_marginal

        written.append(
            plot_marginal(cfg.output_path / "marginal.png", state.positions,
                          marginal_probability(state), cfg.Q, cfg.steps)
        )
    return written


def _run_dispersion(cfg: RunConfig) -> list[Path]:
    k = -np.pi + 2 * np.pi * (np.arange(cfg.k_points) + 1) / cfg.k_points
    if cfg.q_points:
        qs = -np.pi + 2 * np.pi * (np.arange(cfg.q_points) + 1) / cfg.q_points
    else:
        qs = quasi_momenta(cfg.Q)
    written = [cfg.table("bands")]
    export.write_bands(written[0], band_structure(k, qs, cfg.theta_x, cfg.theta_y))
    if cfg.figure:
        from .plotting import plot_bands

        omega = dispersion(k[None, :], qs[:, None], cfg.theta_x, cfg.theta_y)[0]
        written.append(plot_bands(cfg.output_path / "bands.png", k, qs, omega))
    return written


def _run_census(cfg: RunConfig) -> list[Path]:
    path = cfg.output_path / "census.json"
    export.write_census(path, band_census(cfg.Q, cfg.theta_x, cfg.theta_y))
    return [path]


def _run_entropy(cfg: RunConfig) -> list[Path]:
    cx, cy = _coins(cfg)
    records = entropy_series(cfg.Q, BlochInitialState(cfg.theta, cfg.phi), cfg.steps, cx, cy)
    written = [cfg.table("entropy")]
    export.write_entropy_series(written[0], records)
    if cfg.figure:
        from .plotting import plot_entropy_series

        written.append(plot_entropy_series(cfg.output_path / "entropy.png",
                                           [r.step for r in records], [r.entropy for r in records]))
    if cfg.scan:
        thetas = np.linspace(0, np.pi, cfg.scan)
        phis = np.linspace(0, 2 * np.pi, 2 * cfg.scan - 1)
        entropy = bloch_scan(thetas, phis, cfg.Q)
        written.append(cfg.table("scan"))
        export.write_bloch_scan(written[-1], thetas, phis, entropy)
        if cfg.figure:
            from .plotting import plot_bloch_scan

            written.append(plot_bloch_scan(cfg.output_path / "scan.png", thetas, phis,
                                           entropy, f"Q = {cfg.Q}"))
    return written


def _run_asymptotic(cfg: RunConfig) -> list[Path]:
    finite = asymptotic_rho(cfg.Q, cfg.theta, cfg.phi)
    limit = asymptotic_rho_infinite(cfg.theta, cfg.phi)
    payload = {
        "Q": cfg.Q,
        "theta": cfg.theta,
        "phi": cfg.phi,
        "rho": export.complex_pairs(finite.rho),
        "entropy": finite.entropy,
        "flat_band": finite.flat_band,
        "limit": {"rho": export.complex_pairs(limit), "entropy": von_neumann_entropy(limit)},
    }
    path = cfg.output_path / "asymptotic.json"
    export.write_json(path, payload)
    return [path]


def _run_continuum(cfg: RunConfig) -> list[Path]:
    report = continuum_convergence(cfg.q_index, cfg.width, cfg.t_final, cfg.epsilons, q_nodes=cfg.Q)
    written = [cfg.table("convergence"), cfg.output_path / "convergence_summary.json"]
    export.write_table(written[0], ("epsilon", "error"), zip(report.epsilons, report.errors))
    export.write_json(written[1], report.to_json())
    if cfg.figure:
        from .plotting import plot_convergence

        written.append(plot_convergence(cfg.output_path / "convergence.png",
                                        report.epsilons, report.errors, report.fitted_order))
    return written


_RUNNERS = {
    "evolve": _run_evolve,
    "dispersion": _run_dispersion,
    "census": _run_census,
    "entropy": _run_entropy,
    "asymptotic": _run_asymptotic,
    "continuum": _run_continuum,
}


def run(cfg: RunConfig) -> int:
    """Execute one configuration; returns the process exit status."""
    try:
        cfg.validate()
        cfg.output_path.mkdir(parents=True, exist_ok=True)
        _RUNNERS[cfg.subcommand](cfg)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except WindowOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _fraction(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cylwalk", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--Q", type=int, default=1, help="sites around the cylinder")
    common.add_argument("--theta-x", type=float, default=math.pi / 4, dest="theta_x")
    common.add_argument("--theta-y", type=float, default=math.pi / 4, dest="theta_y")
    common.add_argument("-o", "--output", type=Path, default=Path("."), dest="output_path")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--figure", action="store_true", help="also render a PNG")

    initial = argparse.ArgumentParser(add_help=False)
    initial.add_argument("--theta", type=float, default=math.pi / 2, help="Bloch polar angle")
    initial.add_argument("--phi", type=float, default=math.pi / 2, help="Bloch azimuth")

    p = sub.add_parser("evolve", parents=[common, initial], help="marginal probability P(m)")
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--window", type=int, default=None, help="half-width (default: steps)")

    p = sub.add_parser("dispersion", parents=[common], help="band structure")
    p.add_argument("--k-points", type=int, default=256, dest="k_points")
    p.add_argument("--q-points", type=int, default=None, dest="q_points",
                   help="continuous q grid instead of the Q quantized values")

    sub.add_parser("census", parents=[common], help="distinct dispersion curves")

    p = sub.add_parser("entropy", parents=[common, initial], help="entropy series and Bloch scan")
    p.add_argument("--steps", type=int, default=0)
    p.add_argument("--scan", type=int, default=0, metavar="N",
                   help="also scan the long-time entropy on N x (2N-1) Bloch angles")

    sub.add_parser("asymptotic", parents=[common, initial], help="long-time coin state")

    p = sub.add_parser("continuum", parents=[common], help="Dirac-limit convergence")
    p.add_argument("--q-index", type=int, default=0, dest="q_index")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--t-final", type=float, default=1.0, dest="t_final")
    p.add_argument("--epsilons", type=_fraction, nargs="+",
                   default=[1 / 16, 1 / 32, 1 / 64, 1 / 128])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    return run(RunConfig(**args))


if __name__ == "__main__":
    sys.exit(main())
