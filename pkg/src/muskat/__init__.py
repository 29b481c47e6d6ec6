"""Pseudo-spectral simulator and verification harness for Muskat interface dynamics."""

from .decay import (
    FitResult,
    RadialProfile,
    decay_lemma_check,
    fit_exponent,
    semigroup_norm_closed,
    semigroup_norm_quadrature,
)
from .errors import (
    BlowUpError,
    ConfigurationError,
    DivergentNormError,
    InvariantViolationError,
    MuskatError,
    PreconditionError,
)
from .evolve import (
    InitialDataSpec,
    SimulationConfig,
    TrajectoryRecord,
    make_initial,
    run,
    step,
    step_rk4,
)
from .grid import GridSpec, load_field, save_field
from .rhs import (
    BoundReport,
    QuadratureConfig,
    consistency_residual,
    fourier_bound_report,
    full_rhs_2d,
    full_rhs_3d,
    nonlinear_n,
    nonlinear_t,
    split_rhs,
)
from .series import (
    SeriesConstants,
    admissible_constant,
    admissibility_series,
    closed_form_majorant,
    diff_ineq_constant,
    series_coefficient,
)
from .spectral import (
    NormReport,
    SpectralField,
    analyze,
    apply_lambda_power,
    besov_s_norm,
    check_interpolation,
    lp_norm,
    norm_report,
    random_band_field,
    s_norm,
    sobolev_norm,
    synthesize,
)

__version__ = "0.1.0"
