"""Trial solutions, residual losses, and training for the pressure field.

The network never sees the boundary conditions as penalty terms. Instead the
trial solution

    p_t(x) = (L-x)/L * p0 + x/L * pL + x(L-x)/L^2 * net(x)

satisfies them identically for any parameter vector, which turns the
boundary-value problem into the unconstrained minimization of the governing
equation's mean squared residual over a fixed set of interior collocation
points. The complex residual is split into real and imaginary channels whose
squared means are the two loss terms; their sum is what L-BFGS minimizes.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import coefficients, medium, network, optim
from .errors import ZeroReference
from .medium import InletConditions, TemperatureProfile
from .oracle import FieldSolution

VALIDITY_WARN_RATIO = 0.1


@dataclass(frozen=True)
class BoundaryData:
    """Complex pressure amplitudes prescribed at the two duct ends."""

    p0: complex
    pL: complex

    def __post_init__(self):
        if not (np.isfinite(self.p0) and np.isfinite(self.pL)):
            raise ValueError("boundary values must be finite")


@dataclass(frozen=True)
class FrequencyCase:
    """One boundary-value problem: a frequency, a medium, and boundary data."""

    frequency: float
    profile: TemperatureProfile
    inlet: InletConditions
    boundary: BoundaryData

    def __post_init__(self):
        if self.frequency <= 0.0:
            raise ValueError("frequency must be positive")


@dataclass(frozen=True)
class CollocationSet:
    """Fixed interior residual points, reproducible from a seed."""

    points: np.ndarray
    seed: int

    def __post_init__(self):
        if self.points.ndim != 1 or self.points.size < 1:
            raise ValueError("need a 1-D array of collocation points")

    @property
    def count(self) -> int:
        return int(self.points.size)

    @classmethod
    def draw(cls, n: int, L: float, seed: int) -> "CollocationSet":
        """Draw n points uniformly in the open interval (0, L)."""
        rng = np.random.default_rng(seed)
        pts = rng.uniform(0.0, L, size=n)
        while True:
            bad = (pts <= 0.0) | (pts >= L)
            if not bad.any():
                break
            pts[bad] = rng.uniform(0.0, L, size=int(bad.sum()))
        return cls(points=pts, seed=seed)


@dataclass(frozen=True)
class TrainingConfig:
    max_iterations: int = 5000
    gradient_tolerance: float = 1e-9
    loss_tolerance: float = 1e-18
    lbfgs_memory: int = 10
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.gradient_tolerance <= 0.0 or self.loss_tolerance <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.lbfgs_memory < 1:
            raise ValueError("L-BFGS memory must be at least 1")
        if not 0.0 < self.wolfe_c1 < self.wolfe_c2 < 1.0:
            raise ValueError("need 0 < c1 < c2 < 1 for the strong-Wolfe conditions")


@dataclass
class TrainingReport:
    """Outcome of one training run; serializable as JSON and printable."""

    final_loss: float
    loss_real: float
    loss_imag: float
    iterations: int
    n_evals: int
    termination: str
    wall_time_s: float
    seed: int
    n_collocation: int
    n_parameters: int
    validity_ratio: float | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def __str__(self) -> str:
        return (
            f"loss {self.final_loss:.6e} (real {self.loss_real:.6e}, imag {self.loss_imag:.6e})\n"
            f"iterations {self.iterations}, evaluations {self.n_evals}\n"
            f"termination: {self.termination}\n"
            f"wall time {self.wall_time_s:.2f} s, seed {self.seed}, "
            f"{self.n_collocation} collocation points, {self.n_parameters} parameters"
            + (
                f"\nmax |M alpha|/k over collocation points: {self.validity_ratio:.4g}"
                if self.validity_ratio is not None
                else ""
            )
        )


@dataclass(frozen=True)
class TrialJet:
    """Complex trial pressure and its first two x-derivatives (arrays)."""

    value: np.ndarray
    dx: np.ndarray
    dxx: np.ndarray


def _blending(L: float, x: np.ndarray):
    """Boundary interpolant weights and bump polynomial with derivatives."""
    phi0 = (L - x) / L
    phi1 = x / L
    g = x * (L - x) / L**2
    gp = (L - 2.0 * x) / L**2
    gpp = np.full_like(x, -2.0 / L**2)
    return phi0, phi1, g, gp, gpp


def _complex_channels(arr: np.ndarray) -> np.ndarray:
    """(n, 2) real network output -> complex array of length n."""
    return arr[:, 0] + 1j * arr[:, 1]


def trial_pressure(
    params: network.NetworkParameters, boundary: BoundaryData, L: float, x
) -> TrialJet:
    """Trial solution jet at x (scalar or array); exact at both boundaries for
    any parameter vector."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    jet = network.forward_jet(params, x)
    nc = _complex_channels(jet.value)
    ncd = _complex_channels(jet.dx)
    ncdd = _complex_channels(jet.dxx)
    phi0, phi1, g, gp, gpp = _blending(L, x)
    p0, pL = complex(boundary.p0), complex(boundary.pL)
    value = phi0 * p0 + phi1 * pL + g * nc
    dx = (pL - p0) / L + gp * nc + g * ncd
    dxx = gpp * nc + 2.0 * gp * ncd + g * ncdd
    return TrialJet(value=value, dx=dx, dxx=dxx)


class ResidualEvaluator:
    """Residual losses of one case on one collocation set.

    The equation coefficients depend only on position and frequency, so they
    are computed once here and reused across every optimizer evaluation.
    """

    def __init__(self, case: FrequencyCase, points: np.ndarray):
        self.case = case
        self.x = np.asarray(points, dtype=float)
        s = medium.sample(case.profile, case.inlet, case.frequency, self.x)
        z = coefficients.zeta_at(s, case.inlet.gamma)
        self.zeta1 = np.asarray(z.zeta1, dtype=complex)
        self.zeta2 = np.asarray(z.zeta2, dtype=complex)
        self.zeta3 = np.asarray(z.zeta3, dtype=complex)
        self.validity_ratio = float(np.max(coefficients.validity_check(s)))

        L = case.profile.L
        phi0, phi1, g, gp, gpp = _blending(L, self.x)
        p0, pL = complex(case.boundary.p0), complex(case.boundary.pL)
        self._g, self._gp, self._gpp = g, gp, gpp
        self._const_value = phi0 * p0 + phi1 * pL
        self._const_dx = (pL - p0) / L
        # Residual sensitivities to the network jet components.
        self._w0 = self.zeta1 * gpp + self.zeta2 * gp + self.zeta3 * g
        self._w1 = 2.0 * self.zeta1 * gp + self.zeta2 * g
        self._w2 = self.zeta1 * g

    @property
    def count(self) -> int:
        return int(self.x.size)

    def residual_from_trial(self, value, dx, dxx) -> np.ndarray:
        """Complex residual of the governing equation for given trial jets."""
        return self.zeta1 * dxx + self.zeta2 * dx + self.zeta3 * value

    def losses_from_residual(self, r: np.ndarray) -> tuple[float, float, float]:
        n = r.size
        loss_r = float(np.sum(r.real**2)) / n
        loss_i = float(np.sum(r.imag**2)) / n
        return loss_r + loss_i, loss_r, loss_i

    def _residual_from_net(self, value, dx, dxx) -> np.ndarray:
        nc = _complex_channels(value)
        ncd = _complex_channels(dx)
        ncdd = _complex_channels(dxx)
        trial_v = self._const_value + self._g * nc
        trial_d = self._const_dx + self._gp * nc + self._g * ncd
        trial_s = self._gpp * nc + 2.0 * self._gp * ncd + self._g * ncdd
        return self.residual_from_trial(trial_v, trial_d, trial_s)

    def losses(self, params: network.NetworkParameters) -> tuple[float, float, float]:
        jet = network.forward_jet(params, self.x)
        r = self._residual_from_net(jet.value, jet.dx, jet.dxx)
        return self.losses_from_residual(r)

    def loss_and_gradient(self, params: network.NetworkParameters):
        def jet_loss(value, dx, dxx):
            r = self._residual_from_net(value, dx, dxx)
            loss, _, _ = self.losses_from_residual(r)
            t = (2.0 / r.size) * np.conj(r)
            gv = np.stack([(t * self._w0).real, -(t * self._w0).imag], axis=1)
            gd = np.stack([(t * self._w1).real, -(t * self._w1).imag], axis=1)
            gs = np.stack([(t * self._w2).real, -(t * self._w2).imag], axis=1)
            return loss, gv, gd, gs

        return network.loss_and_param_gradient(params, self.x, jet_loss)


def residual_loss(
    params: network.NetworkParameters, case: FrequencyCase, colloc: CollocationSet
) -> tuple[float, float, float]:
    """(total, real-part, imaginary-part) mean squared residual losses."""
    return ResidualEvaluator(case, colloc.points).losses(params)


def train(
    case: FrequencyCase,
    arch: network.NetworkArchitecture,
    colloc: CollocationSet,
    config: TrainingConfig,
    init_params: network.NetworkParameters | None = None,
) -> tuple[network.NetworkParameters, TrainingReport]:
    """Train the pressure network on one case.

    ``init_params`` warm-starts from an existing parameter set instead of the
    seeded He initialization; by default every case trains from scratch.
    """
    evaluator = ResidualEvaluator(case, colloc.points)
    if evaluator.validity_ratio > VALIDITY_WARN_RATIO:
        warnings.warn(
            f"|M alpha|/k reaches {evaluator.validity_ratio:.3g}; the governing "
            "equation was derived assuming this ratio is small",
            stacklevel=2,
        )
    params0 = init_params if init_params is not None else network.init_he(arch, config.seed)

    def fun(theta):
        p = network.NetworkParameters.from_flat(arch, theta)
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

    params = network.NetworkParameters.from_flat(arch, result.x)
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
        validity_ratio=evaluator.validity_ratio,
    )
    return params, report


def evaluate_field(
    params: network.NetworkParameters, case: FrequencyCase, grid
) -> FieldSolution:
    """Sample the trained trial solution (and its exact gradient) on a grid."""
    grid = np.asarray(grid, dtype=float)
    jet = trial_pressure(params, case.boundary, case.profile.L, grid)
    return FieldSolution(x=grid, p=jet.value, dp=jet.dx, provenance="pinn")


def relative_error_complex(predicted: np.ndarray, truth: np.ndarray) -> tuple[float, float]:
    """L2-norm error ratios of the real and imaginary channels separately."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError("fields must be sampled on the same grid")
    out = []
    for channel in (np.real, np.imag):
        ref = np.linalg.norm(channel(truth))
        if ref == 0.0:
            raise ZeroReference("reference field is identically zero on a channel")
        out.append(float(np.linalg.norm(channel(predicted) - channel(truth)) / ref))
    return out[0], out[1]


def relative_error(predicted: FieldSolution, truth: FieldSolution) -> tuple[float, float]:
    """Relative error of a predicted pressure field against a reference,
    computed separately on the real and imaginary channels."""
    if predicted.x.shape != truth.x.shape or not np.allclose(
        predicted.x, truth.x, rtol=0.0, atol=1e-12
    ):
        raise ValueError("fields must be sampled on the same grid")
    return relative_error_complex(predicted.p, truth.p)
