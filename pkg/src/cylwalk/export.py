"""CSV and JSON writers. Floats are written with 17 significant digits."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .entanglement import EntropyRecord
from .lattice import LatticeState, marginal_probability, probability
from .spectral import BandCensus, BandPoint


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write rows as CSV, or as a column-keyed JSON object if ``path`` ends in ``.json``."""
    path = Path(path)
    if path.suffix == ".json":
        columns: dict[str, list] = {name: [] for name in header}
        for row in rows:
            for name, v in zip(header, row):
                columns[name].append(_json_number(v))
        write_json(path, columns)
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def complex_pairs(matrix) -> list[list[list[float]]]:
    """Matrix as nested ``[re, im]`` pairs."""
    m = np.asarray(matrix)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def write_marginal(path: Path, state: LatticeState) -> None:
    p = marginal_probability(state)
    write_table(path, ("m", "p"), zip(state.positions, p))


def write_probability(path: Path, state: LatticeState) -> None:
    p = probability(state)
    rows = (
        (m, l, p[i, l]) for i, m in enumerate(state.positions) for l in range(state.q_nodes)
    )
    write_table(path, ("m", "l", "p"), rows)


def write_bands(path: Path, points: Sequence[BandPoint]) -> None:
    rows = ((b.k, b.q, b.omega_plus, b.omega_minus, b.group_velocity_plus) for b in points)
    write_table(path, ("k", "q", "omega_plus", "omega_minus", "group_velocity"), rows)


def write_census(path: Path, census: BandCensus) -> None:
    write_json(path, census.to_json())


def write_entropy_series(path: Path, records: Sequence[EntropyRecord]) -> None:
    write_table(path, ("j", "entropy"), ((r.step, r.entropy) for r in records))


def write_bloch_scan(path: Path, thetas, phis, entropy) -> None:
    rows = (
        (t, p, entropy[a, b]) for a, t in enumerate(thetas) for b, p in enumerate(phis)
    )
    write_table(path, ("theta", "phi", "entropy"), rows)


def _json_number(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if np.isfinite(v) else None
