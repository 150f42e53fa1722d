"""Acoustic field prediction in 1-D ducts with varying mean flow and temperature."""

from .coefficients import (
    MomentumCoefficients,
    ZetaCoefficients,
    angular_frequency,
    eliminate_velocity,
    momentum_coeffs_at,
    validity_check,
    zeta_at,
)
from .medium import (
    InletConditions,
    MeanFlowSample,
    TemperatureProfile,
    alpha_at,
    beta_at,
    dmach_dx_at,
    mean_density,
    mean_pressure,
    sample,
    solve_mean_velocity,
)
from .network import (
    NetworkArchitecture,
    NetworkJet,
    NetworkParameters,
    forward_jet,
    init_he,
    loss_and_param_gradient,
)
from .oracle import (
    FieldSolution,
    amplitude,
    analytic_uniform,
    characteristic_wavenumbers,
    from_csv,
    oracle_velocity,
    solve_bvp_shooting,
    to_csv,
)
from .pinn import (
    BoundaryData,
    CollocationSet,
    FrequencyCase,
    TrainingConfig,
    TrainingReport,
    evaluate_field,
    relative_error,
    relative_error_complex,
    residual_loss,
    train,
    trial_pressure,
)
from .velocity import (
    VelocityField,
    train_velocity_transfer,
    velocity_direct,
    velocity_direct_field,
    velocity_transfer_field,
)

__version__ = "0.1.0"
