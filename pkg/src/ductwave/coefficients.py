"""Complex coefficients of the acoustic equations in a heterogeneous mean flow.

Two coefficient sets are built from a :class:`~ductwave.medium.MeanFlowSample`:

* ``zeta_at`` gives (zeta1, zeta2, zeta3) of the second-order pressure
  equation  zeta1 p'' + zeta2 p' + zeta3 p = 0.
* ``momentum_coeffs_at`` gives (A, B, C, D, F) of the normalized
  continuity / momentum pair
      A p + B p' + u' = 0
      C u + D p' + u' + F p = 0,
  which is what the velocity recovery and transfer training consume.

For a uniform medium (alpha = beta = dM/dx = 0) the zeta set collapses to
((1 - M^2), 2jkM, k^2), the classical uniform-mean-flow equation.

The angular frequency enters only through ``angular_frequency``; every other
function takes omega (or the sample's wavenumber k) as given.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroC, ZeroMeanFlow
from .medium import MeanFlowSample

ZERO_FLOW_TOLERANCE = 1e-12
ZERO_C_TOLERANCE = 1e-12


def angular_frequency(frequency_hz):
    """omega = 2 pi f; the single conversion point for the time convention."""
    return 2.0 * np.pi * frequency_hz


@dataclass(frozen=True)
class ZetaCoefficients:
    """Coefficients of the governing pressure equation (complex, possibly arrays)."""

    zeta1: complex
    zeta2: complex
    zeta3: complex


@dataclass(frozen=True)
class MomentumCoefficients:
    """Coefficients of the normalized continuity/momentum pair. D and F carry
    zero imaginary part but are stored complex for uniform arithmetic."""

    A: complex
    B: complex
    C: complex
    D: complex
    F: complex


def zeta_at(s: MeanFlowSample, gamma: float) -> ZetaCoefficients:
    """Pressure-equation coefficients from a mean-flow sample.

    zeta1 = 1 - M^2 + j (2 M^2 / k) dM/dx
    zeta2 = (1 - (3+gamma) M^2) alpha
            + j (2 M k + M beta / k - 2 M alpha^2 / k)
    zeta3 = k^2 + (2-gamma) M^2 beta + (4 gamma - 5) M^2 alpha^2
            + j ((2+gamma) M k alpha - 2 gamma k M^2 dM/dx)
    """
    M, k, alpha, beta, dMdx = s.M, s.k, s.alpha, s.beta, s.dMdx
    if np.any(np.abs(k) <= 0.0):
        raise ValueError("wavenumber must be nonzero")
    zeta1 = 1.0 - M**2 + 1j * (2.0 * M**2 / k) * dMdx
    zeta2 = (1.0 - (3.0 + gamma) * M**2) * alpha + 1j * (
        2.0 * M * k + M * beta / k - 2.0 * M * alpha**2 / k
    )
    zeta3 = (
        k**2
        + (2.0 - gamma) * M**2 * beta
        + (4.0 * gamma - 5.0) * M**2 * alpha**2
        + 1j * ((2.0 + gamma) * M * k * alpha - 2.0 * gamma * k * M**2 * dMdx)
    )
    return ZetaCoefficients(zeta1=zeta1, zeta2=zeta2, zeta3=zeta3)


def momentum_coeffs_at(s: MeanFlowSample, gamma: float, omega) -> MomentumCoefficients:
    """Continuity/momentum coefficients from a mean-flow sample.

    A = (j omega - gamma ubar alpha) / (gamma pbar)
    B = (M^2 / (rhobar ubar)) (1 + j M alpha / k + (M alpha / k)^2)
    C = j omega / ubar - alpha
    D = 1 / (rhobar ubar)
    F = -M^2 alpha / (rhobar ubar)
    """
    if np.any(np.asarray(s.ubar) <= ZERO_FLOW_TOLERANCE):
        raise ZeroMeanFlow("momentum coefficients are undefined for ubar <= 0")
    rho_u = s.rhobar * s.ubar
    ma_over_k = s.M * s.alpha / s.k
    A = (1j * omega - gamma * s.ubar * s.alpha) / (gamma * s.pbar)
    B = (s.M**2 / rho_u) * (1.0 + 1j * ma_over_k + ma_over_k**2)
    C = 1j * omega / s.ubar - s.alpha
    D = (1.0 / rho_u) + 0j
    F = (-(s.M**2) * s.alpha / rho_u) + 0j
    return MomentumCoefficients(A=A, B=B, C=C, D=D, F=F)


def validity_check(s: MeanFlowSample):
    """Ratio |M alpha| / k.

    The governing pressure equation was derived under |M alpha| << k; callers
    should warn when the returned ratio exceeds about 0.1.
    """
    return np.abs(s.M * s.alpha) / np.abs(s.k)


def eliminate_velocity(mc: MomentumCoefficients, p, dp):
    """Particle velocity from pressure and its gradient by eliminating u'
    between the continuity and momentum equations:

        u = ((A - F) / C) p + ((B - D) / C) dp/dx
    """
    C = np.asarray(mc.C, dtype=complex)
    if np.any(np.abs(C) < ZERO_C_TOLERANCE):
        raise ZeroC("momentum coefficient C is numerically zero")
    return ((mc.A - mc.F) / C) * np.asarray(p, dtype=complex) + (
        (mc.B - mc.D) / C
    ) * np.asarray(dp, dtype=complex)
