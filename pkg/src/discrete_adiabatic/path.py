"""Discretised operator paths from X to Z.

Step ``j`` of an ``N``-step path is ``A_j = X + (j/N)(Z - X)`` for
``j = 0..N``, optionally plus a Hermitian Brownian-bridge term that vanishes
at both endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Union

import numpy as np

from .errors import DimensionMismatchError
from .hermitian import HermitianMatrix, matrix_to_json
from .spectra import DEGENERACY_TOL, GapReport, eigendecompose

DIVERGENCE_TOL = 1e-12


class Divergent:
    """Result of a distance that blows up at a degenerate spectrum."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DIVERGENT"

    def __reduce__(self):
        return (Divergent, ())


DIVERGENT = Divergent()
Distance = Union[float, Divergent]


@dataclass(frozen=True)
class PathSpec:
    X: HermitianMatrix
    Z: HermitianMatrix
    N: int
    bridge_amplitude: float = 0.0
    bridge_seed: int = 0

    def __post_init__(self):
        if self.X.dim != self.Z.dim:
            raise DimensionMismatchError(f"X is {self.X.dim}x{self.X.dim} but Z is {self.Z.dim}x{self.Z.dim}")
        if not isinstance(self.N, (int, np.integer)) or isinstance(self.N, bool) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.bridge_amplitude >= 0:
            raise ValueError(f"bridge_amplitude must be non-negative, got {self.bridge_amplitude!r}")
        if not 0 <= int(self.bridge_seed) < 2**64:
            raise ValueError(f"bridge_seed must be a 64-bit unsigned integer, got {self.bridge_seed!r}")

    @property
    def dim(self) -> int:
        return self.X.dim

    @property
    def epsilon(self) -> float:
        return 1.0 / self.N

    @property
    def B(self) -> HermitianMatrix:
        return self.Z - self.X

    @cached_property
    def _bridge(self) -> np.ndarray:
        # one standard bridge per real degree of freedom: shape (N+1, M*M)
        rng = np.random.Generator(np.random.PCG64(int(self.bridge_seed)))
        steps = rng.normal(scale=np.sqrt(1.0 / self.N), size=(self.N, self.dim * self.dim))
        walk = np.vstack([np.zeros((1, steps.shape[1])), np.cumsum(steps, axis=0)])
        frac = np.arange(self.N + 1)[:, None] / self.N
        bridge = walk - frac * walk[-1]
        bridge[0] = 0.0
        bridge[-1] = 0.0
        bridge.setflags(write=False)
        return bridge

    def _check_step(self, j: int) -> None:
        if not 0 <= j <= self.N:
            raise IndexError(f"step {j} out of range 0..{self.N}")

    def bridge_term(self, j: int) -> HermitianMatrix:
        self._check_step(j)
        m = self.dim
        w = np.zeros((m, m), dtype=np.complex128)
        if self.bridge_amplitude == 0 or j in (0, self.N):
            return HermitianMatrix(w)
        x = self._bridge[j] * self.bridge_amplitude
        w[np.diag_indices(m)] = x[:m]
        iu = np.triu_indices(m, k=1)
        k = len(iu[0])
        upper = x[m:m + k] + 1j * x[m + k:]
        w[iu] = upper
        w[iu[1], iu[0]] = upper.conj()
        return HermitianMatrix(w)

    def operator_at(self, j: int) -> HermitianMatrix:
        self._check_step(j)
        if j == 0:
            return self.X
        if j == self.N:
            return self.Z
        a = self.X.data + (j / self.N) * (self.Z.data - self.X.data)
        if self.bridge_amplitude > 0:
            a = a + self.bridge_term(j).data
        return HermitianMatrix(a)

    def operators(self) -> list[HermitianMatrix]:
        return [self.operator_at(j) for j in range(self.N + 1)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "X": matrix_to_json(self.X),
            "Z": matrix_to_json(self.Z),
            "N": int(self.N),
            "bridge_amplitude": float(self.bridge_amplitude),
            "bridge_seed": int(self.bridge_seed),
        }


def operator_at(path: PathSpec, j: int) -> HermitianMatrix:
    return path.operator_at(j)


def brownian_bridge_term(path: PathSpec, j: int) -> HermitianMatrix:
    return path.bridge_term(j)


@dataclass(frozen=True)
class GapProfile:
    reports: list[GapReport]
    min_gap: float
    argmin_step: int

    @property
    def degenerate_steps(self) -> list[int]:
        return [j for j, r in enumerate(self.reports) if r.degenerate]

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.reports)


def gap_profile(path: PathSpec, tolerance: float = DEGENERACY_TOL) -> GapProfile:
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    reports = []
    for j in range(path.N + 1):
        es = eigendecompose(path.operator_at(j))
        gap = max(es.gap, 0.0)
        reports.append(GapReport(gap, gap < tolerance, tolerance))
    gaps = np.array([r.gap for r in reports])
    k = int(np.argmin(gaps))
    return GapProfile(reports, float(gaps[k]), k)


def footnote_distance(X: HermitianMatrix, Z: HermitianMatrix) -> Distance:
    """``| 1/|x1 - x2| - 1/|z1 - z2| |`` for 2x2 operators."""
    if X.dim != 2 or Z.dim != 2:
        raise DimensionMismatchError(f"footnote distance is defined for 2x2 matrices only, got {X.dim} and {Z.dim}")
    gx, gz = _splitting_2x2(X), _splitting_2x2(Z)
    if gx < DIVERGENCE_TOL or gz < DIVERGENCE_TOL:
        return DIVERGENT
    return abs(1.0 / gx - 1.0 / gz)


def _splitting_2x2(A: HermitianMatrix) -> float:
    (a, b), (_, d) = A.data
    return float(np.hypot((a - d).real, 2.0 * abs(b)))


def gap_distance(X: HermitianMatrix, Z: HermitianMatrix) -> Distance:
    """``|1/gap(X) - 1/gap(Z)|`` using the ground-state gaps of any dimension."""
    if X.dim != Z.dim:
        raise DimensionMismatchError(f"dimension mismatch: {X.dim} vs {Z.dim}")
    gx = eigendecompose(X).gap
    gz = eigendecompose(Z).gap
    if gx < DIVERGENCE_TOL or gz < DIVERGENCE_TOL:
        return DIVERGENT
    return abs(1.0 / gx - 1.0 / gz)
