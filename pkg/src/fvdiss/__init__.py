"""1D finite-volume solvers parameterized by scalar dissipation functions."""

from .dissipation import (
    Diagnostics,
    NuBounds,
    QuadCoeffs,
    SolverKind,
    SolverSpec,
    alpha,
    beta,
    eval_d,
    quad_coeffs,
    sample_dissipation,
)
from .engine import (
    ConservationTracker,
    FieldSnapshot,
    Grid,
    MaxTracker,
    RunConfig,
    RunResult,
    compute_dt,
    run,
    step,
    total_conserved,
)
from .errors import (
    ConfigError,
    DegenerateBoundsError,
    FvdissError,
    InvalidStateError,
    NumericFailureError,
    UnsupportedKindError,
)
from .flux import (
    InterfaceContext,
    interface_fluxes,
    jacobian_action,
    numerical_flux,
    spectral_flux_oracle,
)
from .models import (
    MhdPrimitive,
    Model,
    advection_model,
    linear_system_model,
    mhd_cons_to_prim,
    mhd_flux,
    mhd_model,
    mhd_prim_to_cons,
    mhd_speeds,
)
from .scenarios import (
    MhdRiemannResult,
    ScenarioResult,
    run_mhd_riemann,
    run_scalar_sign_test,
    slow_shock_steepness,
)

__version__ = "0.1.0"
