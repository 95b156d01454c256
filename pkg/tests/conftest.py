import math

import numpy as np
import pytest

from qwentangle.state import SpinorField, TwoParticleField


def random_spinor(rng, half_width, radius=3):
    """Normalized random single-walker state supported on |x| <= radius."""
    n = 2 * half_width + 1
    amps = np.zeros((n, 2), dtype=complex)
    sl = slice(half_width - radius, half_width + radius + 1)
    amps[sl] = rng.normal(size=(2 * radius + 1, 2)) + 1j * rng.normal(size=(2 * radius + 1, 2))
    return SpinorField(half_width, amps / np.linalg.norm(amps))


def random_pair(rng, half_width, radius=3):
    """Normalized random exchange-symmetric dense two-walker state."""
    n = 2 * half_width + 1
    m = 2 * n
    lo, hi = 2 * (half_width - radius), 2 * (half_width + radius + 1)
    mat = np.zeros((m, m), dtype=complex)
    k = hi - lo
    block = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    mat[lo:hi, lo:hi] = block + block.T
    mat /= np.linalg.norm(mat)
    return TwoParticleField(half_width, mat.reshape(n, 2, n, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


PI = math.pi


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
