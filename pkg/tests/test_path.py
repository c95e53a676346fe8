import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CANONICAL_X, CANONICAL_Z, CROSSING_Z, random_hermitian_array
from discrete_adiabatic import (
    DIVERGENT,
    DimensionMismatchError,
    HermitianMatrix,
    PathSpec,
    footnote_distance,
    gap_distance,
    gap_profile,
)
from discrete_adiabatic.path import brownian_bridge_term, operator_at


def test_endpoints_exact():
    path = PathSpec(CANONICAL_X, CANONICAL_Z, 7)
    assert operator_at(path, 0) == CANONICAL_X
    assert operator_at(path, 7) == CANONICAL_Z


def test_interior_step_arithmetic():
    path = PathSpec(CANONICAL_X, CANONICAL_Z, 10)
    # oracle: (1 - 0.3) X + 0.3 Z by hand
    assert operator_at(path, 3).data == pytest.approx(np.array([[0.3, -0.3], [-0.3, 1.0]]), abs=1e-15)


def test_step_out_of_range():
    path = PathSpec(CANONICAL_X, CANONICAL_Z, 4)
    for j in (-1, 5):
        with pytest.raises(IndexError):
            operator_at(path, j)
        with pytest.raises(IndexError):
            brownian_bridge_term(path, j)


def test_pathspec_validation():
    with pytest.raises(DimensionMismatchError):
        PathSpec(CANONICAL_X, HermitianMatrix.identity(3), 5)
    with pytest.raises(ValueError):
        PathSpec(CANONICAL_X, CANONICAL_Z, 0)
    with pytest.raises(ValueError):
        PathSpec(CANONICAL_X, CANONICAL_Z, 5, bridge_amplitude=-1)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_convex_interpolation_exact(m, n, seed):
    rng = np.random.default_rng(seed)
    X, Z = (HermitianMatrix(random_hermitian_array(rng, m)) for _ in range(2))
    path = PathSpec(X, Z, n)
    for j in range(1, n):
        assert np.array_equal(path.operator_at(j).data, X.data + (j / n) * (Z.data - X.data))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(2, 60), st.integers(0, 2**64 - 1), st.floats(0.0, 10.0))
def test_bridge_pinned_and_hermitian(m, n, seed, amp):
    rng = np.random.default_rng(seed % 2**32)
    X, Z = (HermitianMatrix(random_hermitian_array(rng, m)) for _ in range(2))
    path = PathSpec(X, Z, n, bridge_amplitude=amp, bridge_seed=seed)
    assert not np.any(path.bridge_term(0).data)
    assert not np.any(path.bridge_term(n).data)
    assert path.operator_at(0) == X and path.operator_at(n) == Z
    for j in range(n + 1):
        A = path.operator_at(j).data
        assert np.array_equal(A, A.conj().T)


def test_bridge_reproducible():
    def make():
        return PathSpec(CANONICAL_X, CANONICAL_Z, 100, bridge_amplitude=0.1, bridge_seed=42)

    w = make().bridge_term(50)
    assert np.linalg.norm(w.data) > 0
    assert w.data.tobytes() == make().bridge_term(50).data.tobytes()
    other = PathSpec(CANONICAL_X, CANONICAL_Z, 100, bridge_amplitude=0.1, bridge_seed=43).bridge_term(50)
    assert not np.array_equal(w.data, other.data)


def test_bridge_variance_profile():
    # a standard bridge has Var(B_s) = s (1 - s); check every real degree of freedom
    n, amp, seeds = 20, 0.5, 2000
    samples = np.array([
        PathSpec(HermitianMatrix.identity(2), HermitianMatrix.identity(2), n, amp, seed)._bridge
        for seed in range(seeds)
    ])
    s = np.arange(n + 1) / n
    var = samples.var(axis=0)
    mean = samples.mean(axis=0)
    expected = (s * (1 - s))[:, None]
    assert np.all(np.abs(var - expected) < 5 * np.sqrt(2 / seeds) * expected + 1e-12)
    assert np.all(np.abs(mean) < 5 * np.sqrt(expected / seeds) + 1e-12)
    w = PathSpec(HermitianMatrix.identity(2), HermitianMatrix.identity(2), n, amp, 3)
    assert w.bridge_term(5).data[0, 0].real == pytest.approx(amp * w._bridge[5, 0])


def test_gap_profile_constant_path():
    prof = gap_profile(PathSpec(CANONICAL_X, CANONICAL_X, 5), 1e-8)
    assert [r.gap for r in prof.reports] == [1.0] * 6
    assert (prof.min_gap, prof.argmin_step, prof.degenerate) == (1.0, 0, False)


def test_gap_profile_crossing():
    prof = gap_profile(PathSpec(CANONICAL_X, CROSSING_Z, 100), 1e-8)
    assert prof.argmin_step == 50
    assert prof.min_gap < 1e-12
    assert prof.degenerate_steps == [50]
    # closed form |1 - 2s|
    for j, r in enumerate(prof.reports):
        assert r.gap == pytest.approx(abs(1 - 2 * j / 100), abs=1e-12)


def test_gap_profile_canonical_closed_form():
    prof = gap_profile(PathSpec(CANONICAL_X, CANONICAL_Z, 100), 1e-8)
    for j, r in enumerate(prof.reports):
        s = j / 100
        assert abs(r.gap - math.sqrt(1 - 2 * s + 5 * s**2)) < 1e-9
    assert prof.argmin_step == 20
    assert prof.min_gap == pytest.approx(math.sqrt(0.8), abs=1e-12)


def test_footnote_distance_examples():
    assert footnote_distance(CANONICAL_X, CANONICAL_X) == 0
    assert footnote_distance(CANONICAL_X, 0.5 * HermitianMatrix.identity(2)) is DIVERGENT
    assert footnote_distance(CANONICAL_X, HermitianMatrix.diag([0, 2])) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatchError):
        footnote_distance(HermitianMatrix.identity(3), HermitianMatrix.identity(3))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_footnote_distance_properties(seed):
    rng = np.random.default_rng(seed)
    X, Z = (HermitianMatrix(random_hermitian_array(rng, 2)) for _ in range(2))
    assert footnote_distance(X, X) == 0
    assert footnote_distance(X, Z) == footnote_distance(Z, X)
    assert footnote_distance(X, Z) == pytest.approx(gap_distance(X, Z), rel=1e-10)


def test_gap_distance_examples():
    X3 = HermitianMatrix.diag([0, 1, 5])
    assert gap_distance(X3, X3) == 0
    assert gap_distance(X3, HermitianMatrix.diag([0, 2, 5])) == pytest.approx(0.5)
    assert gap_distance(X3, HermitianMatrix.diag([1, 1, 5])) is DIVERGENT
    with pytest.raises(DimensionMismatchError):
        gap_distance(X3, CANONICAL_X)


def test_divergent_is_singleton():
    import pickle

    from discrete_adiabatic import Divergent

    assert Divergent() is DIVERGENT
    assert pickle.loads(pickle.dumps(DIVERGENT)) is DIVERGENT
