"""Independent ground truth for the duct acoustics boundary-value problem.

Two routes are provided:

* ``solve_bvp_shooting`` integrates the governing pressure equation as two
  complex initial-value problems with classical fixed-step RK4 and combines
  them linearly to hit the far boundary value (shooting by superposition;
  valid because the equation is linear).
* ``analytic_uniform`` evaluates the exact exponential solution available
  when the medium is uniform.

Both return a :class:`FieldSolution`, the common container for any solved
field (network-predicted fields use it too). The particle velocity can be
attached to any solution that carries the pressure gradient via
``oracle_velocity``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import coefficients, medium
from .errors import (
    DegenerateBoundarySystem,
    DegenerateHomogeneous,
    SingularZeta1,
)

ZETA1_TOLERANCE = 1e-12
HOMOGENEOUS_TOLERANCE = 1e-12
BOUNDARY_DET_TOLERANCE = 1e-12

CSV_HEADER_FULL = "x,p_re,p_im,u_re,u_im"
CSV_HEADER_PRESSURE = "x,p_re,p_im"


@dataclass(frozen=True)
class FieldSolution:
    """A complex acoustic field sampled on a grid spanning the duct.

    ``dp`` carries dp/dx when the producer integrates or differentiates it
    exactly (the shooting and analytic routes always do); it is needed for
    velocity recovery and is not part of the CSV exchange format.
    """

    x: np.ndarray
    p: np.ndarray
    u: np.ndarray | None = None
    dp: np.ndarray | None = None
    provenance: str = "unknown"

    def __post_init__(self):
        if self.x.ndim != 1 or self.x.size < 2:
            raise ValueError("grid must be a 1-D array with at least two points")
        if np.any(np.diff(self.x) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        for arr in (self.p, self.u, self.dp):
            if arr is not None and arr.shape != self.x.shape:
                raise ValueError("field arrays must match the grid shape")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def to_csv(field: FieldSolution, path) -> None:
    """Write the field as CSV with 17-significant-digit columns."""
    lines = []
    if field.u is None:
        lines.append(CSV_HEADER_PRESSURE)
        for x, p in zip(field.x, field.p):
            lines.append(f"{_fmt(x)},{_fmt(p.real)},{_fmt(p.imag)}")
    else:
        lines.append(CSV_HEADER_FULL)
        for x, p, u in zip(field.x, field.p, field.u):
            lines.append(f"{_fmt(x)},{_fmt(p.real)},{_fmt(p.imag)},{_fmt(u.real)},{_fmt(u.imag)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def from_csv(path) -> FieldSolution:
    """Read a field written by :func:`to_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    header = lines[0]
    if header not in (CSV_HEADER_FULL, CSV_HEADER_PRESSURE):
        raise ValueError(f"unrecognized field CSV header: {header!r}")
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    data = np.asarray(rows, dtype=float)
    x = data[:, 0]
    p = data[:, 1] + 1j * data[:, 2]
    u = data[:, 3] + 1j * data[:, 4] if header == CSV_HEADER_FULL else None
    return FieldSolution(x=x, p=p, u=u, provenance="imported")


def _coefficient_ratios(case, xs):
    """-zeta2/zeta1 and -zeta3/zeta1 at the positions xs."""
    s = medium.sample(case.profile, case.inlet, case.frequency, xs)
    z = coefficients.zeta_at(s, case.inlet.gamma)
    z1 = np.asarray(z.zeta1, dtype=complex)
    if np.any(np.abs(z1) < ZETA1_TOLERANCE):
        raise SingularZeta1("leading coefficient vanished on the integration grid")
    return (-np.asarray(z.zeta2, dtype=complex) / z1).tolist(), (
        -np.asarray(z.zeta3, dtype=complex) / z1
    ).tolist()


def _integrate_pair(p0a, q0a, p0b, q0b, h, n_steps, c2, c3, keep_every):
    """RK4-integrate two solutions of p'' = c2(x) p' + c3(x) p jointly.

    c2/c3 are lists of the coefficient values at every half-step position
    (2*n_steps + 1 entries). Returns the (p, q) samples of both solutions at
    every ``keep_every``-th node, endpoint included.
    """
    pa, qa, pb, qb = complex(p0a), complex(q0a), complex(p0b), complex(q0b)
    out = [(pa, qa, pb, qb)]
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(n_steps):
        c2_0, c3_0 = c2[2 * i], c3[2 * i]
        c2_m, c3_m = c2[2 * i + 1], c3[2 * i + 1]
        c2_1, c3_1 = c2[2 * i + 2], c3[2 * i + 2]

        k1pa = qa
        k1qa = c3_0 * pa + c2_0 * qa
        k1pb = qb
        k1qb = c3_0 * pb + c2_0 * qb

        p_ = pa + h2 * k1pa
        q_ = qa + h2 * k1qa
        k2pa = q_
        k2qa = c3_m * p_ + c2_m * q_
        p_ = pb + h2 * k1pb
        q_ = qb + h2 * k1qb
        k2pb = q_
        k2qb = c3_m * p_ + c2_m * q_

        p_ = pa + h2 * k2pa
        q_ = qa + h2 * k2qa
        k3pa = q_
        k3qa = c3_m * p_ + c2_m * q_
        p_ = pb + h2 * k2pb
        q_ = qb + h2 * k2qb
        k3pb = q_
        k3qb = c3_m * p_ + c2_m * q_

        p_ = pa + h * k3pa
        q_ = qa + h * k3qa
        k4pa = q_
        k4qa = c3_1 * p_ + c2_1 * q_
        p_ = pb + h * k3pb
        q_ = qb + h * k3qb
        k4pb = q_
        k4qb = c3_1 * p_ + c2_1 * q_

        pa += h6 * (k1pa + 2.0 * (k2pa + k3pa) + k4pa)
        qa += h6 * (k1qa + 2.0 * (k2qa + k3qa) + k4qa)
        pb += h6 * (k1pb + 2.0 * (k2pb + k3pb) + k4pb)
        qb += h6 * (k1qb + 2.0 * (k2qb + k3qb) + k4qb)

        if (i + 1) % keep_every == 0:
            out.append((pa, qa, pb, qb))
    return out


def solve_bvp_shooting(case, n_steps: int = 20000, n_grid: int = 500) -> FieldSolution:
    """Solve the two-point boundary-value problem by superposition shooting.

    Integrates solution A with (p, p') = (p0, 0) and homogeneous solution B
    with (p, p') = (0, 1) from the inlet, then returns A + c B with the
    complex constant c fixed by the outlet boundary value. ``n_steps`` is
    rounded up so every output grid node is an integration node (no
    interpolation anywhere).
    """
    if n_grid < 2:
        raise ValueError("need at least two grid points")
    L = case.profile.L
    n_intervals = n_grid - 1
    msub = max(1, math.ceil(n_steps / n_intervals))
    total = msub * n_intervals
    xs = np.linspace(0.0, L, 2 * total + 1)
    c2, c3 = _coefficient_ratios(case, xs)
    h = L / total

    p0, pL = complex(case.boundary.p0), complex(case.boundary.pL)
    nodes = _integrate_pair(p0, 0.0, 0.0, 1.0, h, total, c2, c3, keep_every=msub)
    b_end = nodes[-1][2]
    if abs(b_end) < HOMOGENEOUS_TOLERANCE:
        # Resonance of the shooting basis; retry with a rotated slope seed.
        nodes = _integrate_pair(p0, 0.0, 0.0, 1j, h, total, c2, c3, keep_every=msub)
        b_end = nodes[-1][2]
        if abs(b_end) < HOMOGENEOUS_TOLERANCE:
            raise DegenerateHomogeneous(
                "homogeneous shooting solution vanishes at the outlet"
            )
    c = (pL - nodes[-1][0]) / b_end

    grid = np.linspace(0.0, L, n_grid)
    pa = np.array([n[0] for n in nodes])
    qa = np.array([n[1] for n in nodes])
    pb = np.array([n[2] for n in nodes])
    qb = np.array([n[3] for n in nodes])
    return FieldSolution(
        x=grid,
        p=pa + c * pb,
        dp=qa + c * qb,
        provenance="shooting",
    )


def characteristic_wavenumbers(k: float, M: float) -> tuple[float, float]:
    """Roots of the uniform-flow dispersion relation: k/(1+M) and -k/(1-M)."""
    return k / (1.0 + M), -k / (1.0 - M)


def analytic_uniform(case, n_grid: int = 500) -> FieldSolution:
    """Exact solution for a uniform medium (constant temperature profile).

    The pressure is a combination of two exponentials whose wavenumbers solve
    the dispersion relation; the two amplitudes come from the 2x2 boundary
    system. The particle velocity follows in closed form from the momentum
    balance of the uniform medium.
    """
    if case.profile.kind != "constant":
        raise ValueError("analytic solution requires the constant temperature profile")
    L = case.profile.L
    s = medium.sample(case.profile, case.inlet, case.frequency, 0.0)
    kp, km = characteristic_wavenumbers(s.k, s.M)

    p0, pL = complex(case.boundary.p0), complex(case.boundary.pL)
    ep, em = np.exp(1j * kp * L), np.exp(1j * km * L)
    det = em - ep
    if abs(det) < BOUNDARY_DET_TOLERANCE * (abs(ep) + abs(em)):
        raise DegenerateBoundarySystem(
            "exponential boundary system is singular (duct resonance)"
        )
    c_plus = (p0 * em - pL) / det
    c_minus = (pL - p0 * ep) / det

    grid = np.linspace(0.0, L, n_grid)
    wave_p = c_plus * np.exp(1j * kp * grid)
    wave_m = c_minus * np.exp(1j * km * grid)
    p = wave_p + wave_m
    dp = 1j * (kp * wave_p + km * wave_m)
    omega = coefficients.angular_frequency(case.frequency)
    u = (s.ubar / (case.inlet.gamma * s.pbar)) * p + ((s.M**2 - 1.0) / (1j * omega * s.rhobar)) * dp
    return FieldSolution(x=grid, p=p, u=u, dp=dp, provenance="analytic")


def oracle_velocity(field: FieldSolution, case) -> FieldSolution:
    """Attach the particle velocity to a solved field via the momentum-pair
    elimination, using the exactly integrated pressure gradient (no numerical
    differentiation)."""
    if field.dp is None:
        raise ValueError("field does not carry dp/dx; solve with the shooting or analytic route")
    s = medium.sample(case.profile, case.inlet, case.frequency, field.x)
    omega = coefficients.angular_frequency(case.frequency)
    mc = coefficients.momentum_coeffs_at(s, case.inlet.gamma, omega)
    u = coefficients.eliminate_velocity(mc, field.p, field.dp)
    return replace(field, u=u)


def amplitude(field: FieldSolution) -> np.ndarray:
    """Squared pressure magnitude |p|^2 per grid point."""
    return np.real(field.p * np.conj(field.p))
