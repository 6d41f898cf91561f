import math

import numpy as np
import pytest

from bellsym.linalg import DensityMatrix, StateVector, outer

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def bell_phi_plus() -> DensityMatrix:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / math.sqrt(2)
    return outer(StateVector(v, (2, 2)))


def werner(p: float) -> DensityMatrix:
    phi = bell_phi_plus().matrix
    psi_minus = np.array([0, 1, -1, 0]) / math.sqrt(2)
    singlet = np.outer(psi_minus, psi_minus).astype(complex)
    return DensityMatrix(p * singlet + (1 - p) * np.eye(4) / 4, (2, 2))
