"""The measurement-driven adiabatic protocol.

The state starts in the ground state of ``A_0 = X`` and is projectively
measured in the eigenbasis of ``A_1, ..., A_N``.  Nothing happens to it in
between measurements.  Consecutive eigenbases define the doubly stochastic
transition matrices ``T_j[m, n] = |<e_m(j+1)|e_n(j)>|^2``, which are used in
two ways:

* ``ideal_survival``: product of ``T_j[0, 0]``, meaning the probability of
  getting the ground outcome at every step;
* ``exact_ground_probability``: the ground entry of ``T_{N-1} ... T_0 e_0``,
  which also counts trajectories that leave the ground state and come back.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import DegeneratePathError, DegenerateSpectrumError, InsufficientDataError
from .hermitian import HermitianMatrix
from .path import PathSpec, gap_profile
from .perturbation import first_order, predicted_overlap
from .spectra import DEGENERACY_TOL, eigendecompose

FAILURE_FLOOR = 1e-14
MC_BLOCK = 8192
RNG_ALGORITHM = "numpy.random.PCG64 seeded by SeedSequence(seed, spawn_key=(block,))"
THREADS_ENV = "DISCRETE_ADIABATIC_THREADS"


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    N: int
    ideal_survival: float
    exact_final_distribution: np.ndarray
    exact_ground_probability: float
    per_step_overlaps: np.ndarray
    min_gap_encountered: float

    @property
    def failure(self) -> float:
        return 1.0 - self.exact_ground_probability

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "ideal_survival": self.ideal_survival,
            "exact_ground_probability": self.exact_ground_probability,
            "exact_final_distribution": [float(p) for p in self.exact_final_distribution],
            "per_step_overlaps": [float(p) for p in self.per_step_overlaps],
            "min_gap_encountered": self.min_gap_encountered,
        }


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    ground_hits: int
    estimate: float
    std_error: float
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "ground_hits": self.ground_hits,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "seed": self.seed,
            "rng": RNG_ALGORITHM,
        }


@dataclass(frozen=True, eq=False)
class ScalingFit:
    N_values: np.ndarray
    failures: np.ndarray
    slope: float
    intercept: float
    r_squared: float
    ground_probabilities: np.ndarray
    ideal_survivals: np.ndarray
    min_gaps: np.ndarray

    def to_dict(self) -> dict[str, Any]:
        return {
            "N_values": [int(n) for n in self.N_values],
            "failures": [float(f) for f in self.failures],
            "ground_probabilities": [float(p) for p in self.ground_probabilities],
            "ideal_survivals": [float(p) for p in self.ideal_survivals],
            "min_gaps": [float(g) for g in self.min_gaps],
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
        }


def _eigenbases(path: PathSpec, tolerance: float) -> tuple[np.ndarray, float]:
    """Eigenvector matrices for every step; raises on the first degenerate step."""
    bases = np.empty((path.N + 1, path.dim, path.dim), dtype=np.complex128)
    min_gap = math.inf
    for j in range(path.N + 1):
        es = eigendecompose(path.operator_at(j))
        gap = max(es.gap, 0.0)
        if gap < tolerance:
            raise DegeneratePathError(j, gap, j / path.N)
        min_gap = min(min_gap, gap)
        bases[j] = es.eigenvectors
    return bases, min_gap


def transition_matrices(bases: np.ndarray) -> np.ndarray:
    """``T[j, m, n] = |<e_m(j+1)|e_n(j)>|^2`` for each consecutive pair of bases."""
    overlaps = np.einsum("jim,jin->jmn", bases[1:].conj(), bases[:-1])
    return np.abs(overlaps) ** 2


def run_exact(path: PathSpec, tolerance: float = DEGENERACY_TOL) -> ProtocolResult:
    bases, min_gap = _eigenbases(path, tolerance)
    T = transition_matrices(bases)
    p = np.zeros(path.dim)
    p[0] = 1.0
    for Tj in T:
        p = Tj @ p
    p.setflags(write=False)
    steps = T[:, 0, 0].copy()
    steps.setflags(write=False)
    return ProtocolResult(
        N=path.N,
        ideal_survival=float(np.prod(steps)),
        exact_final_distribution=p,
        exact_ground_probability=float(p[0]),
        per_step_overlaps=steps,
        min_gap_encountered=float(min_gap),
    )


def _thread_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _sample_block(bases: np.ndarray, size: int, rng: np.random.Generator) -> int:
    # Born rule on the post-measurement state: the previous outcome's eigenvector
    m = bases.shape[1]
    outcome = np.zeros(size, dtype=np.intp)
    for j in range(bases.shape[0] - 1):
        amps = bases[j + 1].conj().T @ bases[j][:, outcome]
        cdf = np.cumsum(np.abs(amps) ** 2, axis=0)
        cdf /= cdf[-1]
        u = rng.random(size)
        outcome = np.minimum((u[None, :] >= cdf).sum(axis=0), m - 1)
    return int(np.count_nonzero(outcome == 0))


def run_monte_carlo(path: PathSpec, trials: int, seed: int,
                    tolerance: float = DEGENERACY_TOL) -> MonteCarloResult:
    """Sample ``trials`` independent measurement records.

    Trials are grouped in fixed blocks of ``MC_BLOCK``, each with its own RNG
    stream, so the result does not depend on the thread count.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    bases, _ = _eigenbases(path, tolerance)
    sizes = [MC_BLOCK] * (trials // MC_BLOCK)
    if trials % MC_BLOCK:
        sizes.append(trials % MC_BLOCK)

    def work(block: int) -> int:
        return _sample_block(bases, sizes[block], _block_rng(seed, block))

    threads = _thread_count()
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as pool:
            hits = sum(pool.map(work, range(len(sizes))))
    else:
        hits = sum(work(b) for b in range(len(sizes)))
    est = hits / trials
    return MonteCarloResult(trials, hits, est, math.sqrt(est * (1.0 - est) / trials), seed)


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through ``(log x, log y)``: (slope, intercept, r^2)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def scaling_sweep(X: HermitianMatrix, Z: HermitianMatrix, N_values: Sequence[int],
                  tolerance: float = DEGENERACY_TOL) -> ScalingFit:
    """Fit ``log(1 - P_ground)`` against ``log N``; the slope should tend to -1."""
    Ns = np.array([int(n) for n in N_values], dtype=int)
    if Ns.size == 0 or np.any(Ns < 1):
        raise ValueError(f"N_values must be positive integers, got {list(N_values)}")
    results = []
    for n in Ns:
        path = PathSpec(X, Z, int(n))
        try:
            results.append(run_exact(path, tolerance))
        except DegeneratePathError:
            prof = gap_profile(path, tolerance)
            raise DegeneratePathError(prof.argmin_step, prof.min_gap, prof.argmin_step / path.N) from None
    failures = np.array([r.failure for r in results])
    keep = failures > FAILURE_FLOOR
    if np.count_nonzero(keep) < 2:
        raise InsufficientDataError(
            f"only {np.count_nonzero(keep)} sweep point(s) have failure above {FAILURE_FLOOR:g}; need 2")
    slope, intercept, r2 = fit_power_law(Ns[keep], failures[keep])
    return ScalingFit(
        N_values=Ns,
        failures=failures,
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        ground_probabilities=np.array([r.exact_ground_probability for r in results]),
        ideal_survivals=np.array([r.ideal_survival for r in results]),
        min_gaps=np.array([r.min_gap_encountered for r in results]),
    )


def survival_lower_bound(path: PathSpec, tolerance: float = DEGENERACY_TOL) -> float:
    """Analytic approximation of ``ideal_survival`` from the overlap expansion.

    Uses the fixed direction ``B = Z - X`` at every step; the per-step error is
    O(eps^3), so the product is off by O(1/N^2) overall.
    """
    B = path.B
    eps = path.epsilon
    total = 1.0
    for j in range(path.N):
        A = path.operator_at(j)
        try:
            corr = first_order(A, B, 0, tolerance)
        except DegenerateSpectrumError as exc:
            raise DegeneratePathError(j, exc.gap, j / path.N) from None
        total *= predicted_overlap(corr, eps) ** 2
    return total
