"""Seeded random Hermitian matrices and operator pairs for experiments."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateSpectrumError
from .hermitian import HermitianMatrix, StateVector
from .path import PathSpec
from .perturbation import first_order


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianMatrix:
    """GUE-style draw: ``(G + G^H) / 2`` with i.i.d. complex normal ``G``."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianMatrix((g + g.conj().T) / 2)


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    return StateVector.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def max_correction_norm(X: HermitianMatrix, Z: HermitianMatrix, grid: int = 200) -> float:
    """Largest ``||d1||`` of the ground state along the linear path, on a grid."""
    path = PathSpec(X, Z, grid)
    B = path.B
    return max(float(np.linalg.norm(first_order(path.operator_at(j), B).correction_vector))
               for j in range(grid + 1))


def random_adiabatic_pair(seed: int, dim: int = 3, n_min: int = 10, max_step: float = 0.2,
                          max_draws: int = 1000) -> tuple[HermitianMatrix, HermitianMatrix]:
    """Draw ``(X, Z)`` until the path is perturbative already at ``n_min`` steps.

    Accepts a pair when ``max_s ||d1(s)|| / n_min <= max_step`` so every step of
    the coarsest sweep point lies inside the first-order regime.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        X, Z = random_hermitian(rng, dim), random_hermitian(rng, dim)
        try:
            if max_correction_norm(X, Z) / n_min <= max_step:
                return X, Z
        except DegenerateSpectrumError:
            continue
    raise RuntimeError(f"no admissible pair found in {max_draws} draws (seed {seed})")
