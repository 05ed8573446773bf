import numpy as np
import pytest

from nlsat.state import StateVector


def random_state(rng: np.random.Generator, qubits: int) -> StateVector:
    v = rng.normal(size=1 << qubits) + 1j * rng.normal(size=1 << qubits)
    return StateVector(qubits, v / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
