"""Extended determinantal kernels of the Dyson Brownian minor process,
Warren's interlaced process and the time-dependent bead kernel, validated
against a discrete Eynard-Mehta oracle and Monte Carlo simulation."""

__version__ = "0.1.0"

from .kernels import (BeadParam, ContourRep, KernelEvalConfig, Ordering,
                      SeriesRep, SpaceTimePoint, kernel_adbm, kernel_bead,
                      kernel_dbm, kernel_warren, phi_term, scaled_minor_kernel,
                      spacelike_compare, step_expansion)
from .correlation import (CorrelationQuery, SpacelikePath, correlation_density,
                          gap_probability, gauge_compare, validate_spacelike)
from .special import (DeltaAntiderivative, HermiteBasis, ScaleAlgebra,
                      hermite_eval, heaviside_power, scale_factor,
                      transition_density)

__all__ = [
    "__version__",
    "BeadParam", "ContourRep", "KernelEvalConfig", "Ordering", "SeriesRep",
    "SpaceTimePoint", "kernel_adbm", "kernel_bead", "kernel_dbm",
    "kernel_warren", "phi_term", "scaled_minor_kernel", "spacelike_compare",
    "step_expansion",
    "CorrelationQuery", "SpacelikePath", "correlation_density",
    "gap_probability", "gauge_compare", "validate_spacelike",
    "DeltaAntiderivative", "HermiteBasis", "ScaleAlgebra", "hermite_eval",
    "heaviside_power", "scale_factor", "transition_density",
]
