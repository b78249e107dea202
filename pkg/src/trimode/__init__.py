"""Steady-state Gaussian quantum dynamics of a chi(2) microtoroid.

Three-mode model: fundamental optical mode F, second-harmonic mode S, and
mechanical mode M. The package computes classical mean fields, linearized
stability, stationary covariance matrices, bipartite/tripartite logarithmic
negativities, parameter-space entanglement maps, and the fidelity of
homodyne-based state inference at finite detector bandwidth.
"""

from .dynamics import StabilityReport, stability, steady_state_covariance
from .entanglement import EntanglementReport, analyze, tripartite_log_negativity
from .gaussian import (
    CovarianceMatrix,
    gaussian_fidelity_single_mode,
    is_physical,
    log_negativity,
    partial_transpose,
    reduce,
    symplectic_eigenvalues,
    symplectic_form,
)
from .inference import (
    DetectorModel,
    inference_fidelity,
    inferred_covariance,
    inferred_covariance_first_order,
    intracavity_from_io,
)
from .model import (
    MeanFields,
    SystemParams,
    decoherence_time,
    diffusion_matrix,
    drift_matrix,
    drift_matrix_rescaled,
    input_amplitude,
    steady_state_mean_fields,
    thermal_occupation,
)
from .sweep import (
    SweepGrid,
    SweepResult,
    build_grid,
    classify_regions,
    region_boundaries,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CovarianceMatrix",
    "DetectorModel",
    "EntanglementReport",
    "MeanFields",
    "StabilityReport",
    "SweepGrid",
    "SweepResult",
    "SystemParams",
    "analyze",
    "build_grid",
    "classify_regions",
    "decoherence_time",
    "diffusion_matrix",
    "drift_matrix",
    "drift_matrix_rescaled",
    "gaussian_fidelity_single_mode",
    "inference_fidelity",
    "inferred_covariance",
    "inferred_covariance_first_order",
    "input_amplitude",
    "intracavity_from_io",
    "is_physical",
    "log_negativity",
    "partial_transpose",
    "reduce",
    "region_boundaries",
    "run_sweep",
    "stability",
    "steady_state_covariance",
    "steady_state_mean_fields",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_occupation",
    "tripartite_log_negativity",
    "__version__",
]
