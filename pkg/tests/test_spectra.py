import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian_array
from discrete_adiabatic import (
    ConvergenceError,
    DegenerateSpectrumError,
    HermitianMatrix,
    eigendecompose,
    gap_report,
    ground_state,
)
from discrete_adiabatic import spectra


def closed_form_2x2(a):
    """Eigenvalues of [[p, q], [q*, r]]: (p + r -/+ sqrt((p - r)^2 + 4|q|^2)) / 2."""
    p, q, r = a[0, 0].real, a[0, 1], a[1, 1].real
    root = math.sqrt((p - r) ** 2 + 4 * abs(q) ** 2)
    return np.array([(p + r - root) / 2, (p + r + root) / 2])


def test_diagonal_input():
    es = eigendecompose(HermitianMatrix.diag([3, 1, 2]))
    assert list(es.eigenvalues) == [1, 2, 3]
    assert np.array_equal(es.eigenvectors, np.eye(3)[:, [1, 2, 0]])


def test_pauli_x():
    es = eigendecompose(HermitianMatrix([[0, 1], [1, 0]]))
    assert es.eigenvalues == pytest.approx([-1, 1], abs=1e-15)
    g = es.eigenvectors[:, 0]
    assert abs(abs(np.vdot(g, [1, -1])) / math.sqrt(2) - 1) < 1e-14
    assert es.eigenvectors[:, 0] == pytest.approx(np.array([1, -1]) / math.sqrt(2))


def test_interpolated_2x2_closed_form():
    s = 0.3
    es = eigendecompose(HermitianMatrix([[s, -s], [-s, 1]]))
    expected = ((1 + s) + np.array([-1, 1]) * math.sqrt((1 - s) ** 2 + 4 * s**2)) / 2
    assert es.eigenvalues == pytest.approx(expected, abs=1e-14)
    assert es.eigenvalues == pytest.approx([0.18902278, 1.11097722], abs=1e-8)


def test_ground_state_examples():
    e0, g = ground_state(HermitianMatrix.diag([0, 1]))
    assert e0 == 0 and np.array_equal(g.amplitudes, [1, 0])
    e0, g = ground_state(HermitianMatrix([[1, -1], [-1, 1]]))
    assert e0 == pytest.approx(0, abs=1e-15)
    assert g.amplitudes == pytest.approx(np.array([1, 1]) / math.sqrt(2))
    with pytest.raises(DegenerateSpectrumError):
        ground_state(0.5 * HermitianMatrix.identity(2))


def test_gap_report_examples():
    r = gap_report(HermitianMatrix.diag([0, 1]), 1e-8)
    assert (r.gap, r.degenerate, r.tolerance_used) == (1.0, False, 1e-8)
    r = gap_report(HermitianMatrix.identity(3), 1e-8)
    assert r.gap == 0 and r.degenerate
    s = 0.2
    r = gap_report(HermitianMatrix([[s, -s], [-s, 1]]), 1e-8)
    assert r.gap == pytest.approx(math.sqrt(1 - 2 * s + 5 * s**2), abs=1e-14)
    assert r.gap == pytest.approx(0.894427191, abs=1e-9)
    with pytest.raises(ValueError):
        gap_report(HermitianMatrix.identity(2), 0)


def test_phase_convention():
    rng = np.random.default_rng(5)
    es = eigendecompose(HermitianMatrix(random_hermitian_array(rng, 5)))
    for i in range(5):
        v = es.eigenvectors[:, i]
        k = int(np.argmax(np.abs(v)))
        assert v[k].imag == 0 and v[k].real > 0


def test_convergence_budget(monkeypatch):
    monkeypatch.setattr(spectra, "MAX_SWEEPS", 0)
    with pytest.raises(ConvergenceError):
        eigendecompose(HermitianMatrix([[0, 1], [1, 0]]))


def test_zero_matrix():
    es = eigendecompose(HermitianMatrix(np.zeros((3, 3))))
    assert np.array_equal(es.eigenvalues, np.zeros(3))


def test_to_dict():
    d = eigendecompose(HermitianMatrix.diag([0, 1])).to_dict()
    assert d["eigenvalues"] == [0.0, 1.0]
    assert d["eigenvectors"][0] == [[1.0, 0.0], [0.0, 0.0]]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_eigensystem_invariants(m, seed):
    A = HermitianMatrix(random_hermitian_array(np.random.default_rng(seed), m))
    es = eigendecompose(A)
    V, L = es.eigenvectors, es.eigenvalues
    norm = A.norm()
    assert np.all(np.diff(L) >= 0)
    for i in range(m):
        assert np.linalg.norm(A.data @ V[:, i] - L[i] * V[:, i]) < 1e-9 * norm
    gram = V.conj().T @ V
    assert np.max(np.abs(gram - np.diag(np.diag(gram)))) < 1e-9
    assert np.linalg.norm((V * L) @ V.conj().T - A.data) < 1e-9 * norm
    assert abs(L.sum() - A.trace()) < 1e-10 * m
    assert L == pytest.approx(np.linalg.eigvalsh(A.data), abs=1e-12 * max(1.0, norm))


def test_deterministic():
    A = HermitianMatrix(random_hermitian_array(np.random.default_rng(9), 7))
    a, b = eigendecompose(A), eigendecompose(A)
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()


def test_closed_form_agreement_2x2():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        a = random_hermitian_array(rng, 2)
        es = eigendecompose(HermitianMatrix(a))
        assert np.max(np.abs(es.eigenvalues - closed_form_2x2(a))) < 1e-12
