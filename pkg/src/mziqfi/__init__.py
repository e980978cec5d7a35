"""Phase-estimation limits of a squeezing-enhanced Mach-Zehnder interferometer with single-mode readout."""

from .errors import (
    DegenerateInput,
    IllConditioned,
    NotAtPurePoint,
    PureStateRegion,
    TruncationWarning,
    UnphysicalState,
)
from .gaussian import (
    SingleModeGaussian,
    WilliamsonDecomp,
    purity,
    reduce_to_mode_b,
    symplectic_eigenvalue,
    williamson,
    williamson_closed_form,
)
from .interferometer import (
    InterferometerConfig,
    ModeTransform,
    ScenarioScalars,
    db_to_r,
    mean_photon_number,
    output_mode_transform,
    photon_number_variance,
    scenario_scalars,
)
from .precision import (
    n_precision,
    optimal_point,
    optimal_precision,
    optimal_theta,
    precision_curve,
)
from .qfim import (
    QfimResult,
    Regime,
    param_derivatives,
    qfim,
    qfim_mixed,
    qfim_pure_limit,
    qfim_pure_point,
    two_mode_qfi,
)

__version__ = "0.1.0"
