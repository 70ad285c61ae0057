"""Scattering polynomials, layered-media Green's functions and their checks."""

from scatpoly.greens import (
    Arrival, BudgetExceeded, GreensTruncation, amplitude, energy, enumerate_lattice,
    is_lattice_point, spectrum_poly, synthesize,
)
from scatpoly.media import (
    ImpedanceProfile, MediumError, MediumParams, from_params, load_medium, medium_from_json,
    to_params,
)
from scatpoly.polyengine import (
    BivarPoly, InconsistencyError, QuantizationError, RadialSolution, ScatteringPoly,
    apply_hybrid_laplacian, closed_form_radial, eigen_check, eigenvalue_quantization,
    eval_poly, inner_product, recurrence_radial, rodrigues, scattering_poly,
)
from scatpoly.raytrace import OracleReport, compare_oracle, trace_paths
from scatpoly.torus import (
    DiskTuple, PhaseTuple, backward_spectrum, compose, fourier_coefficient, kronecker_line,
    mobius, pde_residual, truncation_error,
)

__version__ = "0.1.0"

__all__ = [
    "Arrival", "BivarPoly", "BudgetExceeded", "DiskTuple", "GreensTruncation",
    "ImpedanceProfile", "InconsistencyError", "MediumError", "MediumParams", "OracleReport",
    "PhaseTuple", "QuantizationError", "RadialSolution", "ScatteringPoly", "amplitude",
    "apply_hybrid_laplacian", "backward_spectrum", "closed_form_radial", "compare_oracle",
    "compose", "eigen_check", "eigenvalue_quantization", "energy", "enumerate_lattice",
    "eval_poly", "fourier_coefficient", "from_params", "inner_product", "is_lattice_point",
    "kronecker_line", "load_medium", "medium_from_json", "mobius", "pde_residual",
    "recurrence_radial", "rodrigues", "scattering_poly", "spectrum_poly", "synthesize",
    "to_params", "trace_paths", "truncation_error",
]
