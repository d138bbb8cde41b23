import numpy as np
import pytest

from cylwalk import hadamard_coin

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def hadamard():
    return hadamard_coin()


@pytest.fixture
def rng():
    return np.random.default_rng(20170401)


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def _report(label: str, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dense_walk_operator(q_nodes: int, window: int, coin_x, coin_y) -> np.ndarray:
    """
    Full ``U = S_y C_y S_x C_x`` on a ring of ``2 window + 1`` x-sites, built
    basis vector by basis vector from the shift and coin definitions.
    Index of ``|m, l; s>`` is ``((m + window) * Q + l) * 2 + (0 if s == 1 else 1)``.
    """
    n_m = 2 * window + 1
    dim = n_m * q_nodes * 2

    def idx(m, l, s):
        return (((m + window) % n_m) * q_nodes + l % q_nodes) * 2 + (0 if s == 1 else 1)

    def coin_op(c):
        op = np.zeros((dim, dim), complex)
        for m in range(-window, window + 1):
            for l in range(q_nodes):
                for a, s in enumerate((1, -1)):
                    for b, t in enumerate((1, -1)):
                        op[idx(m, l, s), idx(m, l, t)] = c[a, b]
        return op

    sx = np.zeros((dim, dim))
    sy = np.zeros((dim, dim))
    for m in range(-window, window + 1):
        for l in range(q_nodes):
            for s in (1, -1):
                sx[idx(m + s, l, s), idx(m, l, s)] = 1
                sy[idx(m, l + s, s), idx(m, l, s)] = 1
    return sy @ coin_op(coin_y) @ sx @ coin_op(coin_x)
