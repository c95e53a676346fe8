"""Dense Hermitian operators, normalized states, and the moment decomposition.

Any Hermitian ``A`` acting on a normalized ``psi`` splits into a part along
``psi`` and a part orthogonal to it::

    A psi = <A> psi + sigma * psi_perp

where ``<A>`` is the expectation value and ``sigma`` the standard deviation
of ``A`` in ``psi``.  Amplitudes are plain Python/numpy complex numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Optional

import numpy as np

from .errors import DimensionMismatchError, HermiticityError, NormalizationError

HERMITIAN_ATOL = 1e-12
NORM_ATOL = 1e-12
IMAG_ATOL = 1e-10
SIGMA_ZERO = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class HermitianMatrix:
    """Immutable dense M x M complex Hermitian matrix (M >= 2).

    Inputs that are Hermitian up to ``HERMITIAN_ATOL`` are symmetrized as
    ``(A + A^H) / 2``; anything further off is rejected.
    """

    __slots__ = ("_data",)

    def __init__(self, entries: Any):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise DimensionMismatchError(f"dimension must be >= 2, got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise HermiticityError("matrix has non-finite entries")
        asym = float(np.max(np.abs(a - a.conj().T)))
        if asym > HERMITIAN_ATOL:
            raise HermiticityError(f"matrix is not Hermitian (max |A - A^H| = {asym:.3e})")
        self._data = _frozen((a + a.conj().T) / 2)

    @classmethod
    def diag(cls, values: Iterable[float]) -> HermitianMatrix:
        return cls(np.diag(np.asarray(list(values), dtype=float)))

    @classmethod
    def identity(cls, dim: int) -> HermitianMatrix:
        return cls(np.eye(dim))

    @property
    def data(self) -> np.ndarray:
        """Read-only complex array view."""
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self._data))

    def trace(self) -> float:
        return float(np.trace(self._data).real)

    def apply(self, psi: StateVector) -> np.ndarray:
        _check_dims(self.dim, psi.dim)
        return self._data @ psi.amplitudes

    def __add__(self, other: HermitianMatrix) -> HermitianMatrix:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        _check_dims(self.dim, other.dim)
        return HermitianMatrix(self._data + other._data)

    def __sub__(self, other: HermitianMatrix) -> HermitianMatrix:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        _check_dims(self.dim, other.dim)
        return HermitianMatrix(self._data - other._data)

    def __mul__(self, scalar: float) -> HermitianMatrix:
        if isinstance(scalar, complex) and scalar.imag != 0:
            raise HermiticityError("only real scalars preserve Hermiticity")
        return HermitianMatrix(self._data * float(np.real(scalar)))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"HermitianMatrix({self._data.tolist()!r})"


class StateVector:
    """Immutable normalized complex vector."""

    __slots__ = ("_amps",)

    def __init__(self, amplitudes: Any):
        v = np.array(amplitudes, dtype=np.complex128)
        if v.ndim != 1 or v.size < 1:
            raise DimensionMismatchError(f"expected a 1-d vector, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NormalizationError("state has non-finite amplitudes")
        n2 = float(np.vdot(v, v).real)
        if abs(n2 - 1.0) > NORM_ATOL:
            raise NormalizationError(f"state is not normalized (sum |a_i|^2 = {n2!r})")
        self._amps = _frozen(v)

    @classmethod
    def normalized(cls, amplitudes: Any) -> StateVector:
        v = np.array(amplitudes, dtype=np.complex128)
        n = np.linalg.norm(v)
        if n == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(v / n)

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return bool(np.array_equal(self._amps, other._amps))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StateVector({self._amps.tolist()!r})"


@dataclass(frozen=True)
class MomentDecomposition:
    """``A psi = mean * psi + sigma * residual``; residual is None when sigma == 0."""

    mean: float
    sigma: float
    residual: Optional[StateVector]


def _check_dims(m: int, n: int) -> None:
    if m != n:
        raise DimensionMismatchError(f"dimension mismatch: {m} vs {n}")


def inner_product(u: StateVector, v: StateVector) -> complex:
    """<u|v>, conjugate-linear in ``u``."""
    _check_dims(u.dim, v.dim)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def expectation_value(A: HermitianMatrix, psi: StateVector) -> float:
    value = complex(np.vdot(psi.amplitudes, A.apply(psi)))
    if abs(value.imag) >= IMAG_ATOL:
        raise HermiticityError(f"<psi|A|psi> has imaginary part {value.imag:.3e}")
    return value.real


def variance(A: HermitianMatrix, psi: StateVector) -> float:
    """sigma^2 = <A^2> - <A>^2, evaluated as ||(A - <A>) psi||^2."""
    mean = expectation_value(A, psi)
    r = A.apply(psi) - mean * psi.amplitudes
    return max(float(np.vdot(r, r).real), 0.0)


def moment_decompose(A: HermitianMatrix, psi: StateVector) -> MomentDecomposition:
    mean = expectation_value(A, psi)
    r = A.apply(psi) - mean * psi.amplitudes
    sigma = float(np.linalg.norm(r))
    if sigma < SIGMA_ZERO:
        return MomentDecomposition(mean, sigma, None)
    # Phase is left as produced so that the reconstruction holds exactly.
    return MomentDecomposition(mean, sigma, StateVector.normalized(r))


def variance_pairwise(eigenvalues: Any, weights: Any) -> float:
    """Half the weighted sum of squared pairwise eigenvalue differences."""
    a = np.asarray(eigenvalues, dtype=float)
    w = np.asarray(weights, dtype=float)
    if a.shape != w.shape or a.ndim != 1:
        raise DimensionMismatchError(f"eigenvalues {a.shape} and weights {w.shape} differ")
    if np.any(w < 0):
        raise NormalizationError("weights must be non-negative")
    if abs(w.sum() - 1.0) > NORM_ATOL:
        raise NormalizationError(f"weights sum to {w.sum()!r}, not 1")
    diff = a[:, None] - a[None, :]
    return 0.5 * float(np.sum(w[:, None] * w[None, :] * diff**2))


# JSON wire format: arrays of [re, im] pairs, row-major.

def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _unpair(p: Any, where: str) -> complex:
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        return complex(p)
    if not (isinstance(p, (list, tuple)) and len(p) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p)):
        raise ValueError(f"{where}: expected [re, im] pair, got {p!r}")
    return complex(p[0], p[1])


def matrix_to_json(A: HermitianMatrix) -> list[list[list[float]]]:
    return [[_pair(z) for z in row] for row in A.data]


def matrix_from_json(obj: Any, name: str = "matrix") -> HermitianMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ValueError(f"{name}: expected a list of rows")
    n = len(obj)
    for i, row in enumerate(obj):
        if len(row) != n:
            raise DimensionMismatchError(f"{name}: row {i} has {len(row)} entries, expected {n}")
    return HermitianMatrix([[_unpair(p, f"{name}[{i}][{j}]") for j, p in enumerate(row)]
                            for i, row in enumerate(obj)])


def vector_to_json(psi: StateVector) -> list[list[float]]:
    return [_pair(z) for z in psi.amplitudes]


def vector_from_json(obj: Any, name: str = "vector") -> StateVector:
    if not isinstance(obj, list):
        raise ValueError(f"{name}: expected a list of [re, im] pairs")
    return StateVector([_unpair(p, f"{name}[{i}]") for i, p in enumerate(obj)])
