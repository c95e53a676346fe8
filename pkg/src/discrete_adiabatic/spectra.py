"""Eigendecomposition of complex Hermitian matrices by cyclic Jacobi rotations.

Output is canonical: eigenvalues ascending (stable with respect to the
rotation output order), and each eigenvector has its largest-magnitude
component rotated to be real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ConvergenceError, DegenerateSpectrumError
from .hermitian import HermitianMatrix, StateVector

OFFDIAG_RTOL = 1e-14
MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-8
_PHASE_TIE_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def state(self, i: int) -> StateVector:
        return StateVector(self.eigenvectors[:, i])

    @property
    def states(self) -> list[StateVector]:
        return [self.state(i) for i in range(self.dim)]

    @property
    def gap(self) -> float:
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    def to_dict(self) -> dict[str, Any]:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "eigenvectors": [[[float(z.real), float(z.imag)] for z in row] for row in self.eigenvectors],
        }


@dataclass(frozen=True)
class GapReport:
    gap: float
    degenerate: bool
    tolerance_used: float

    def to_dict(self) -> dict[str, Any]:
        return {"gap": self.gap, "degenerate": self.degenerate, "tolerance": self.tolerance_used}


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    threshold = OFFDIAG_RTOL * scale
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(MAX_SWEEPS + 1):
        off = math.sqrt(float(np.sum(np.abs(a[offmask]) ** 2)))
        if off <= threshold:
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # phase-rotate column q so the pivot is real, then a real rotation
                ph = (apq / mag).conjugate()
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-s * ph, c * ph]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ u
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
    raise ConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - _PHASE_TIE_ATOL)[0])
    out = v * (abs(v[k]) / v[k])
    out[k] = abs(v[k])
    return out


def eigendecompose(A: HermitianMatrix) -> EigenSystem:
    values, vectors = _jacobi(np.array(A.data))
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for i in range(vectors.shape[1]):
        vectors[:, i] = _canonical_phase(vectors[:, i])
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(values, vectors)


def gap_report(A: HermitianMatrix, tolerance: float = DEGENERACY_TOL) -> GapReport:
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    es = eigendecompose(A)
    gap = max(es.gap, 0.0)
    return GapReport(gap, gap < tolerance, tolerance)


def ground_state(A: HermitianMatrix, tolerance: float = DEGENERACY_TOL) -> tuple[float, StateVector]:
    """Lowest eigenpair; a degenerate ground state is an error."""
    es = eigendecompose(A)
    if es.gap < tolerance:
        raise DegenerateSpectrumError(f"ground state is degenerate: gap = {es.gap:.3e}", es.gap)
    return float(es.eigenvalues[0]), es.state(0)
