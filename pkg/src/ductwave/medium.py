"""Steady mean-flow field of a uniform duct with an axial temperature profile.

The steady state is fixed by the inlet conditions and the prescribed
temperature distribution: the mean velocity solves a quadratic obtained from
the integrated momentum balance and the perfect-gas law, the mean pressure
follows from the same balance, and the density from the gas law. All derived
gradient quantities (alpha, beta, dM/dx) come in closed form from the analytic
temperature derivatives, so no numerical differentiation happens anywhere in
this module.

All functions accept a scalar position or a numpy array of positions and
return matching shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominator,
    NegativeDiscriminant,
    NonPositiveRoot,
    SonicSingularity,
)

SONIC_TOLERANCE = 1e-8
DENOMINATOR_TOLERANCE = 1e-12

PROFILE_KINDS = ("linear", "sinusoidal", "constant")


@dataclass(frozen=True)
class TemperatureProfile:
    """Analytic axial mean-temperature distribution over a duct of length L.

    kind
        'linear'     : T(x) = T0 - (T0 - TL)/L * x
        'sinusoidal' : T(x) = [ (T0 - TL) sin(5 pi x / (4 L) + pi/4) + T0 + TL ] / 2,
                       built so the maximum T0 sits at x = L/5 and T(L) = TL
        'constant'   : T(x) = (T0 + TL)/2 everywhere
    """

    kind: str
    T0: float
    TL: float
    L: float = 1.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {PROFILE_KINDS}")
        if self.T0 <= 0.0 or self.TL <= 0.0:
            raise ValueError("endpoint temperatures must be positive")
        if self.L <= 0.0:
            raise ValueError("duct length must be positive")

    def temperature(self, x):
        if self.kind == "linear":
            return self.T0 - (self.T0 - self.TL) / self.L * np.asarray(x, dtype=float)
        if self.kind == "sinusoidal":
            arg = 5.0 * np.pi * np.asarray(x, dtype=float) / (4.0 * self.L) + np.pi / 4.0
            return 0.5 * ((self.T0 - self.TL) * np.sin(arg) + self.T0 + self.TL)
        return 0.5 * (self.T0 + self.TL) + 0.0 * np.asarray(x, dtype=float)

    def temperature_gradient(self, x):
        if self.kind == "linear":
            return -(self.T0 - self.TL) / self.L + 0.0 * np.asarray(x, dtype=float)
        if self.kind == "sinusoidal":
            w = 5.0 * np.pi / (4.0 * self.L)
            arg = w * np.asarray(x, dtype=float) + np.pi / 4.0
            return 0.5 * (self.T0 - self.TL) * w * np.cos(arg)
        return 0.0 * np.asarray(x, dtype=float)

    def temperature_curvature(self, x):
        if self.kind == "sinusoidal":
            w = 5.0 * np.pi / (4.0 * self.L)
            arg = w * np.asarray(x, dtype=float) + np.pi / 4.0
            return -0.5 * (self.T0 - self.TL) * w**2 * np.sin(arg)
        return 0.0 * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class InletConditions:
    """Steady mean state of the gas at the duct inlet (x = 0)."""

    p0: float
    T0: float
    M0: float
    gamma: float = 1.4
    R: float = 287.0

    def __post_init__(self):
        if self.p0 <= 0.0 or self.T0 <= 0.0:
            raise ValueError("inlet pressure and temperature must be positive")
        if not 0.0 < self.M0 < 1.0:
            raise ValueError("inlet Mach number must lie in (0, 1)")
        if self.gamma <= 1.0:
            raise ValueError("specific heat ratio must exceed 1")
        if self.R <= 0.0:
            raise ValueError("gas constant must be positive")

    @property
    def c0(self) -> float:
        return math.sqrt(self.gamma * self.R * self.T0)

    @property
    def u0(self) -> float:
        return self.M0 * self.c0

    @property
    def rho0(self) -> float:
        return self.p0 / (self.R * self.T0)

    def quadratic_coefficients(self) -> tuple[float, float, float]:
        """Coefficients (a1, a2, a3) of the mean-velocity quadratic
        a1*u^2 + a2*u + a3*T(x) = 0."""
        a1 = self.rho0 * self.u0
        a2 = -(self.p0 + self.rho0 * self.u0**2)
        a3 = self.p0 * self.u0 / self.T0
        return a1, a2, a3


@dataclass(frozen=True)
class MeanFlowSample:
    """Every steady quantity the acoustic coefficients need, at one position
    (or elementwise on an array of positions) for one driving frequency."""

    x: float
    Tbar: float
    ubar: float
    pbar: float
    rhobar: float
    cbar: float
    M: float
    k: float
    alpha: float
    beta: float
    dMdx: float
    dpdx: float
    d2pdx2: float


def solve_mean_velocity(profile: TemperatureProfile, inlet: InletConditions, x):
    """Subsonic mean velocity at position x.

    Solves a1*u^2 + a2*u + a3*T(x) = 0 and returns the smaller root, which is
    the one compatible with the conservation laws. The quadratic is evaluated
    in the cancellation-safe form q = -(a2 + sign(a2) sqrt(disc))/2 with roots
    q/a1 and a3*T/q.
    """
    a1, a2, a3 = inlet.quadratic_coefficients()
    T = profile.temperature(x)
    disc = a2 * a2 - 4.0 * a1 * a3 * T
    if np.any(disc < 0.0):
        raise NegativeDiscriminant(
            "no real mean-velocity root: temperature too high for a subsonic "
            f"steady flow (min discriminant {np.min(disc):.6g})"
        )
    q = -(a2 + math.copysign(1.0, a2) * np.sqrt(disc)) / 2.0
    root_small = np.minimum(q / a1, a3 * T / q)
    root_large = np.maximum(q / a1, a3 * T / q)
    if np.any(root_small <= 0.0) or np.any(root_large <= 0.0):
        raise NonPositiveRoot("mean-velocity quadratic produced a non-positive root")
    return root_small


def mean_pressure(inlet: InletConditions, ubar_x):
    """Mean pressure from the integrated momentum balance,
    p(x) = p0 + rho0*u0*(u0 - u(x))."""
    return inlet.p0 + inlet.rho0 * inlet.u0 * (inlet.u0 - np.asarray(ubar_x, dtype=float))


def mean_density(pbar, Tbar, R: float):
    """Perfect-gas density rho = p / (R T)."""
    return np.asarray(pbar, dtype=float) / (R * np.asarray(Tbar, dtype=float))


def _mach(profile, inlet, x):
    T = profile.temperature(x)
    u = solve_mean_velocity(profile, inlet, x)
    c = np.sqrt(inlet.gamma * inlet.R * T)
    return u / c


def alpha_at(profile: TemperatureProfile, inlet: InletConditions, x):
    """Normalized density gradient (1/rho) d(rho)/dx, evaluated as
    alpha = (1/(gamma M^2 - 1)) (1/T) dT/dx."""
    M = _mach(profile, inlet, x)
    denom = inlet.gamma * M**2 - 1.0
    if np.any(np.abs(denom) < SONIC_TOLERANCE):
        raise SonicSingularity("gamma*M^2 is too close to 1 for the density-gradient formula")
    T = profile.temperature(x)
    return profile.temperature_gradient(x) / (T * denom)


def dmach_dx_at(profile: TemperatureProfile, inlet: InletConditions, x):
    """Axial Mach-number gradient, dM/dx = -(M alpha / 2)(1 + gamma M^2)."""
    M = _mach(profile, inlet, x)
    alpha = alpha_at(profile, inlet, x)
    return -0.5 * M * alpha * (1.0 + inlet.gamma * M**2)


def _pressure_derivatives(profile, inlet, x):
    """First and second axial derivatives of the mean pressure in closed form.

    dp/dx follows from the steady momentum balance, dp/dx = rho u^2 alpha
    = a1 u alpha (mass conservation makes rho u = a1 everywhere). The second
    derivative comes from differentiating the velocity quadratic twice:
    u'' = -(2 a1 u'^2 + a3 T'') / (2 a1 u + a2) with u' = -alpha u, and
    p'' = -a1 u''. Both are validated against central differences in the tests.
    """
    a1, a2, a3 = inlet.quadratic_coefficients()
    u = solve_mean_velocity(profile, inlet, x)
    alpha = alpha_at(profile, inlet, x)
    Tpp = profile.temperature_curvature(x)
    denom = 2.0 * a1 * u + a2
    if np.any(np.abs(denom) < DENOMINATOR_TOLERANCE * abs(a2)):
        raise DegenerateDenominator("2*a1*u + a2 vanished in the pressure-curvature chain")
    dpdx = a1 * u * alpha
    d2pdx2 = a1 * (2.0 * a1 * alpha**2 * u**2 + a3 * Tpp) / denom
    return dpdx, d2pdx2


def beta_at(profile: TemperatureProfile, inlet: InletConditions, x):
    """Normalized density curvature (1/rho) d^2(rho)/dx^2 via the logarithmic
    chain through the perfect-gas law:

    beta = p''/p + 2 (T'/T - p'/p)(T'/T) - T''/T
    """
    T = profile.temperature(x)
    Tp = profile.temperature_gradient(x)
    Tpp = profile.temperature_curvature(x)
    u = solve_mean_velocity(profile, inlet, x)
    p = mean_pressure(inlet, u)
    dpdx, d2pdx2 = _pressure_derivatives(profile, inlet, x)
    return d2pdx2 / p + 2.0 * (Tp / T - dpdx / p) * (Tp / T) - Tpp / T


def sample(profile: TemperatureProfile, inlet: InletConditions, frequency: float, x) -> MeanFlowSample:
    """Bundle of every steady quantity at x for a given driving frequency.

    The bundled fields are mutually consistent by construction (perfect gas,
    M = u/c, k = 2 pi f / c); x may be a scalar or an array.
    """
    xu = np.asarray(x, dtype=float)
    if np.any(xu < 0.0) or np.any(xu > profile.L):
        raise ValueError(f"position outside the duct [0, {profile.L}]")
    T = profile.temperature(x)
    u = solve_mean_velocity(profile, inlet, x)
    p = mean_pressure(inlet, u)
    rho = mean_density(p, T, inlet.R)
    c = np.sqrt(inlet.gamma * inlet.R * T)
    M = u / c
    k = 2.0 * np.pi * frequency / c
    alpha = alpha_at(profile, inlet, x)
    dpdx, d2pdx2 = _pressure_derivatives(profile, inlet, x)
    beta = d2pdx2 / p + 2.0 * (profile.temperature_gradient(x) / T - dpdx / p) * (
        profile.temperature_gradient(x) / T
    ) - profile.temperature_curvature(x) / T
    dMdx = -0.5 * M * alpha * (1.0 + inlet.gamma * M**2)
    scalar = np.ndim(x) == 0
    out = lambda v: float(v) if scalar else np.asarray(v, dtype=float)
    return MeanFlowSample(
        x=out(xu),
        Tbar=out(T),
        ubar=out(u),
        pbar=out(p),
        rhobar=out(rho),
        cbar=out(c),
        M=out(M),
        k=out(k),
        alpha=out(alpha),
        beta=out(beta),
        dMdx=out(dMdx),
        dpdx=out(dpdx),
        d2pdx2=out(d2pdx2),
    )
