import numpy as np
import pytest
from hypothesis import strategies as st

from discrete_adiabatic import HermitianMatrix, StateVector

CANONICAL_X = HermitianMatrix.diag([0.0, 1.0])
CANONICAL_Z = HermitianMatrix([[1.0, -1.0], [-1.0, 1.0]])
CROSSING_Z = HermitianMatrix.diag([1.0, 0.0])

_acceptance_lines: list[str] = []


def record_criterion(number: int, description: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"[{status}] criterion {number}: {description}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def canonical():
    return CANONICAL_X, CANONICAL_Z


@pytest.fixture
def crossing():
    return CANONICAL_X, CROSSING_Z


def random_hermitian_array(rng, m):
    g = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return (g + g.conj().T) / 2


def random_state_array(rng, m):
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    return v / np.linalg.norm(v)


@st.composite
def hermitian_and_state(draw, min_dim=2, max_dim=8):
    """Seeded random (A, psi) pair; hypothesis shrinks over the seed and dimension."""
    m = draw(st.integers(min_dim, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-3, 1.0, 10.0]))
    rng = np.random.default_rng(seed)
    return HermitianMatrix(scale * random_hermitian_array(rng, m)), StateVector(random_state_array(rng, m))
