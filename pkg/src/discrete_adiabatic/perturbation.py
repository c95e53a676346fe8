"""First-order eigenpair perturbation of ``A + eps * B`` and the overlap expansion.

For a non-degenerate eigenpair ``(lam, a)`` of ``A`` the perturbed eigenpair
is ``lam + eps * gamma + O(eps^2)`` and ``a + eps * d1 + O(eps^2)``, with

    gamma = <a|B|a>
    d1    = sum_{m != a} <e_m|B|a> / (lam - lam_m) * e_m

in the gauge ``<a|d1> = 0``.  The overlap of ``a`` with the normalized
perturbed eigenvector is then

    <a|d_hat> = 1 - eps^2/2 * (<d1|d1> - (<a|d1> + <d1|a>)^2 / 2) + O(eps^3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, DimensionMismatchError, HermiticityError
from .hermitian import HermitianMatrix, StateVector, expectation_value
from .spectra import DEGENERACY_TOL, eigendecompose

GAUGE_ORTHOGONAL = "orthogonal"


@dataclass(frozen=True, eq=False)
class FirstOrderCorrection:
    base_eigenvalue: float
    eigenvalue_shift: float
    correction_vector: np.ndarray
    eigenstate: StateVector
    gauge: str = GAUGE_ORTHOGONAL

    @property
    def correction_norm2(self) -> float:
        return float(np.vdot(self.correction_vector, self.correction_vector).real)


def _nearest_gap(values: np.ndarray, which: int) -> float:
    others = np.delete(values, which)
    return float(np.min(np.abs(others - values[which])))


def first_order(A: HermitianMatrix, B: HermitianMatrix, which: int = 0,
                tolerance: float = DEGENERACY_TOL) -> FirstOrderCorrection:
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dimension mismatch: {A.dim} vs {B.dim}")
    if not 0 <= which < A.dim:
        raise IndexError(f"eigenstate index {which} out of range for dimension {A.dim}")
    es = eigendecompose(A)
    gap = _nearest_gap(es.eigenvalues, which)
    if gap <= tolerance:
        raise DegenerateSpectrumError(f"eigenstate {which} is degenerate (gap {gap:.3e})", gap)
    a = es.state(which)
    lam = expectation_value(A, a)
    couplings = es.eigenvectors.conj().T @ B.apply(a)
    gamma = couplings[which]
    if abs(gamma.imag) >= 1e-10:
        raise HermiticityError(f"<a|B|a> has imaginary part {gamma.imag:.3e}")
    denom = es.eigenvalues[which] - es.eigenvalues
    coeffs = np.zeros(A.dim, dtype=np.complex128)
    mask = np.arange(A.dim) != which
    coeffs[mask] = couplings[mask] / denom[mask]
    d1 = es.eigenvectors @ coeffs
    d1.setflags(write=False)
    return FirstOrderCorrection(lam, float(gamma.real), d1, a)


def predicted_overlap(corr: FirstOrderCorrection, epsilon: float) -> float:
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon!r}")
    d1 = corr.correction_vector
    along = 2.0 * np.vdot(corr.eigenstate.amplitudes, d1).real
    bracket = corr.correction_norm2 - 0.5 * along**2
    return 1.0 - 0.5 * epsilon**2 * bracket


def exact_overlap(A: HermitianMatrix, B: HermitianMatrix, epsilon: float, which: int = 0) -> float:
    """``|<a|d_hat>|`` from eigensolves of ``A`` and ``A + eps * B``."""
    a = eigendecompose(A).eigenvectors[:, which]
    d = eigendecompose(HermitianMatrix(A.data + epsilon * B.data)).eigenvectors[:, which]
    return min(abs(complex(np.vdot(a, d))), 1.0)


def _check_gap(A: HermitianMatrix, which: int, tolerance: float) -> None:
    gap = _nearest_gap(eigendecompose(A).eigenvalues, which)
    if gap <= tolerance:
        raise DegenerateSpectrumError(f"eigenstate {which} is degenerate (gap {gap:.3e})", gap)


def overlap_order_check(A: HermitianMatrix, B: HermitianMatrix, epsilon: float,
                        which: int = 0, tolerance: float = DEGENERACY_TOL) -> tuple[float, float]:
    """Residuals of the overlap expansion at ``eps`` and ``eps/2``.

    Their ratio tends to 8 when the leading neglected term is cubic.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon!r}")
    if epsilon == 0:
        return 0.0, 0.0
    corr = first_order(A, B, which, tolerance)
    errs = []
    for eps in (epsilon, epsilon / 2):
        _check_gap(HermitianMatrix(A.data + eps * B.data), which, tolerance)
        errs.append(abs(exact_overlap(A, B, eps, which) - predicted_overlap(corr, eps)))
    return errs[0], errs[1]


def first_order_errors(A: HermitianMatrix, B: HermitianMatrix, epsilon: float,
                       which: int = 0) -> tuple[float, float]:
    """(eigenvalue error, eigenvector error) of the first-order prediction at ``eps``.

    The eigenvector error is phase-aligned: the exact eigenvector is rotated so
    its overlap with the prediction is real and positive.
    """
    corr = first_order(A, B, which)
    es = eigendecompose(HermitianMatrix(A.data + epsilon * B.data))
    value_err = abs(es.eigenvalues[which] - (corr.base_eigenvalue + epsilon * corr.eigenvalue_shift))
    guess = corr.eigenstate.amplitudes + epsilon * corr.correction_vector
    guess = guess / np.linalg.norm(guess)
    exact = es.eigenvectors[:, which]
    ov = np.vdot(exact, guess)
    exact = exact * (ov / abs(ov))
    return float(value_err), float(np.linalg.norm(exact - guess))
