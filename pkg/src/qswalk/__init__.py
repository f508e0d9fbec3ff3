"""Quantum stochastic walks on line segments and the infinite line."""

from .analytic import (
    asymptotic_distribution,
    line_distribution,
    line_distribution_series,
    moment_leading_coefficient,
    mu2_closed,
    segment_distribution,
    segment_eigensystem,
    series_coefficient_A,
    series_coefficient_B,
)
from .evolution import (
    build_generator,
    check_density_matrix,
    check_majorization,
    devectorize,
    evolve,
    evolve_grid,
    evolve_spectral,
    purity,
    vectorize,
)
from .lattice import (
    AdjacencySpec,
    DissipatorSpec,
    build_global_dissipator,
    build_local_dissipators,
    build_segment,
    build_truncated_line,
)
from .moments import MomentSeries, ScalingFit, central_moment, classify_regime, fit_alpha

__version__ = "0.1.0"
