"""Discretised adiabatic theorem: steering a ground state by repeated projective measurement."""

__version__ = "0.1.0"

from .errors import (
    AdiabaticError,
    ConvergenceError,
    DegeneratePathError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    HermiticityError,
    InsufficientDataError,
    NormalizationError,
)
from .hermitian import (
    HermitianMatrix,
    MomentDecomposition,
    StateVector,
    expectation_value,
    inner_product,
    moment_decompose,
    variance,
    variance_pairwise,
)
from .path import DIVERGENT, Divergent, GapProfile, PathSpec, footnote_distance, gap_distance, gap_profile
from .perturbation import FirstOrderCorrection, first_order, overlap_order_check, predicted_overlap
from .protocol import (
    MonteCarloResult,
    ProtocolResult,
    ScalingFit,
    run_exact,
    run_monte_carlo,
    scaling_sweep,
    survival_lower_bound,
)
from .spectra import EigenSystem, GapReport, eigendecompose, gap_report, ground_state
