"""Particle-velocity recovery from a trained pressure network.

Two routes produce the complex velocity field:

* ``velocity_direct`` eliminates u' between the continuity and momentum
  equations and evaluates the resulting algebraic relation with the trial
  pressure and its exact derivative.
* ``train_velocity_transfer`` trains a second network against the momentum
  equation's residual while the pressure network stays frozen. The momentum
  equation prescribes no boundary values for the velocity, so this network's
  output is used directly with no boundary blending.

Both should agree closely; the transfer route needs no algebraic elimination
and typically works with fewer collocation points than the pressure training.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import coefficients, medium, network, optim
from .pinn import (
    CollocationSet,
    FrequencyCase,
    TrainingConfig,
    TrainingReport,
    _complex_channels,
    trial_pressure,
)

VELOCITY_METHODS = ("direct", "transfer")


@dataclass(frozen=True)
class VelocityField:
    """Complex particle velocity samples with the recovery method that made them."""

    x: np.ndarray
    u: np.ndarray
    method: str

    def __post_init__(self):
        if self.method not in VELOCITY_METHODS:
            raise ValueError(f"method must be one of {VELOCITY_METHODS}")
        if self.x.shape != self.u.shape:
            raise ValueError("velocity samples must match the grid shape")


def _momentum_coefficients(case: FrequencyCase, x: np.ndarray):
    s = medium.sample(case.profile, case.inlet, case.frequency, x)
    omega = coefficients.angular_frequency(case.frequency)
    return coefficients.momentum_coeffs_at(s, case.inlet.gamma, omega)


def velocity_direct(
    pressure_params: network.NetworkParameters, case: FrequencyCase, x
) -> np.ndarray:
    """Velocity at x from the algebraic elimination applied to the trial
    pressure jet. Scalar input gives a complex scalar, arrays give arrays."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    jet = trial_pressure(pressure_params, case.boundary, case.profile.L, xs)
    mc = _momentum_coefficients(case, xs)
    u = coefficients.eliminate_velocity(mc, jet.value, jet.dx)
    return u[0] if np.ndim(x) == 0 else u


def velocity_direct_field(
    pressure_params: network.NetworkParameters, case: FrequencyCase, grid
) -> VelocityField:
    grid = np.asarray(grid, dtype=float)
    return VelocityField(x=grid, u=velocity_direct(pressure_params, case, grid), method="direct")


class MomentumResidualEvaluator:
    """Momentum-equation residual losses for the velocity network.

    The pressure terms D p' + F p are fixed by the frozen pressure network and
    are folded into a constant forcing; only C u + u' varies with the velocity
    parameters.
    """

    def __init__(
        self,
        case: FrequencyCase,
        points: np.ndarray,
        pressure_params: network.NetworkParameters,
    ):
        self.x = np.asarray(points, dtype=float)
        mc = _momentum_coefficients(case, self.x)
        jet = trial_pressure(pressure_params, case.boundary, case.profile.L, self.x)
        self.C = np.asarray(mc.C, dtype=complex)
        self.forcing = mc.D * jet.dx + mc.F * jet.value

    @property
    def count(self) -> int:
        return int(self.x.size)

    def residual_from_values(self, u, du) -> np.ndarray:
        """Complex momentum residual for given velocity samples and slopes."""
        return self.C * u + du + self.forcing

    def losses_from_residual(self, r: np.ndarray) -> tuple[float, float, float]:
        n = r.size
        loss_r = float(np.sum(r.real**2)) / n
        loss_i = float(np.sum(r.imag**2)) / n
        return loss_r + loss_i, loss_r, loss_i

    def losses(self, params: network.NetworkParameters) -> tuple[float, float, float]:
        jet = network.forward_jet(params, self.x)
        r = self.residual_from_values(_complex_channels(jet.value), _complex_channels(jet.dx))
        return self.losses_from_residual(r)

    def loss_and_gradient(self, params: network.NetworkParameters):
        def jet_loss(value, dx, dxx):
            r = self.residual_from_values(_complex_channels(value), _complex_channels(dx))
            loss, _, _ = self.losses_from_residual(r)
            t = (2.0 / r.size) * np.conj(r)
            tc = t * self.C
            gv = np.stack([tc.real, -tc.imag], axis=1)
            gd = np.stack([t.real, -t.imag], axis=1)
            return loss, gv, gd, None

        return network.loss_and_param_gradient(params, self.x, jet_loss)


def train_velocity_transfer(
    pressure_params: network.NetworkParameters,
    case: FrequencyCase,
    arch_u: network.NetworkArchitecture,
    colloc_u: CollocationSet,
    config: TrainingConfig,
    init_params: network.NetworkParameters | None = None,
) -> tuple[network.NetworkParameters, TrainingReport]:
    """Train the velocity network against the momentum residual with the
    pressure network frozen. The velocity collocation set may be (and usually
    is) smaller than the pressure one."""
    evaluator = MomentumResidualEvaluator(case, colloc_u.points, pressure_params)
    params0 = init_params if init_params is not None else network.init_he(arch_u, config.seed)

    def fun(theta):
        p = network.NetworkParameters.from_flat(arch_u, theta)
        return evaluator.loss_and_gradient(p)

    start = time.perf_counter()
    result = optim.minimize_lbfgs(
        fun,
        params0.to_flat(),
        memory=config.lbfgs_memory,
        max_iterations=config.max_iterations,
        gradient_tolerance=config.gradient_tolerance,
        loss_tolerance=config.loss_tolerance,
        wolfe_c1=config.wolfe_c1,
        wolfe_c2=config.wolfe_c2,
    )
    wall = time.perf_counter() - start

    params = network.NetworkParameters.from_flat(arch_u, result.x)
    total, loss_r, loss_i = evaluator.losses(params)
    report = TrainingReport(
        final_loss=total,
        loss_real=loss_r,
        loss_imag=loss_i,
        iterations=result.iterations,
        n_evals=result.n_evals,
        termination=result.termination,
        wall_time_s=wall,
        seed=config.seed,
        n_collocation=evaluator.count,
        n_parameters=params.n_params,
    )
    return params, report


def velocity_transfer_field(
    velocity_params: network.NetworkParameters, grid
) -> VelocityField:
    """Sample a trained velocity network (its raw two-channel output) on a grid."""
    grid = np.asarray(grid, dtype=float)
    jet = network.forward_jet(velocity_params, grid)
    return VelocityField(x=grid, u=_complex_channels(jet.value), method="transfer")
