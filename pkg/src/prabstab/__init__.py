"""prabstab: Prabhakar-type fractional systems.

Three-parameter Mittag-Leffler evaluation accurate on the whole negative
axis, the exact stability region of linear systems driven by the associated
fractional derivative, eigenvalue classification, asymptotic solution
expansions for small and large time, and a trapezoidal convolution-quadrature
solver for linear and nonlinear problems.
"""

__version__ = "0.1.0"

from .params import PrabhakarParams
from .special import (
    Branch,
    SeriesResult,
    integral_of_power,
    inverse_factorial_leading,
    kernel_e,
    kernel_laplace,
    prabhakar_asymptotic,
    prabhakar_eval,
    prabhakar_series,
)
from .stability import (
    BoundaryCurve,
    RootLocusPoint,
    StabilityVerdict,
    Status,
    characteristic_value,
    classify,
    classify_spectrum,
    count_unstable_roots,
    critical_omega,
    curve_point,
    curve_sample,
    dominant_singularity,
    matignon_wedge,
    root_locus,
)
from .spectra import eigenvalues, eigenvalues_2x2
from .cq import (
    CQScheme,
    FdeSystem,
    Trajectory,
    brusselator_system,
    build_scheme,
    conv_weights,
    exactness_exponents,
    generator_delta,
    linear_system,
    solve,
    starting_weights,
)
from .asymptotics import (
    ExpansionResult,
    LargeTimeExpansion,
    TransferFunction,
    large_time_expansion,
    residue_coefficient,
    small_time_series,
    transfer_function_value,
)

__all__ = [
    "__version__",
    "PrabhakarParams",
    "Branch",
    "SeriesResult",
    "prabhakar_series",
    "prabhakar_asymptotic",
    "prabhakar_eval",
    "kernel_e",
    "kernel_laplace",
    "integral_of_power",
    "inverse_factorial_leading",
    "BoundaryCurve",
    "StabilityVerdict",
    "Status",
    "RootLocusPoint",
    "curve_point",
    "curve_sample",
    "classify",
    "classify_spectrum",
    "root_locus",
    "characteristic_value",
    "count_unstable_roots",
    "dominant_singularity",
    "critical_omega",
    "matignon_wedge",
    "eigenvalues",
    "eigenvalues_2x2",
    "FdeSystem",
    "CQScheme",
    "Trajectory",
    "generator_delta",
    "conv_weights",
    "exactness_exponents",
    "starting_weights",
    "build_scheme",
    "solve",
    "linear_system",
    "brusselator_system",
    "TransferFunction",
    "ExpansionResult",
    "LargeTimeExpansion",
    "small_time_series",
    "residue_coefficient",
    "large_time_expansion",
    "transfer_function_value",
]
