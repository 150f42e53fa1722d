import mpmath
import numpy as np
import pytest

from ductwave import coefficients, medium
from ductwave.coefficients import angular_frequency, momentum_coeffs_at, validity_check, zeta_at
from ductwave.errors import ZeroC, ZeroMeanFlow
from ductwave.medium import InletConditions, MeanFlowSample, TemperatureProfile

TABLE_INLET = InletConditions(p0=1e5, T0=1600.0, M0=0.2, gamma=1.4, R=287.0)
LINEAR = TemperatureProfile("linear", 1600.0, 800.0, 1.0)
CONSTANT = TemperatureProfile("constant", 1600.0, 800.0, 1.0)


def synthetic_sample(**kw):
    """Hand-built sample for limits the physical constructors cannot reach."""
    base = dict(
        x=0.0, Tbar=1200.0, ubar=100.0, pbar=1e5, rhobar=0.3, cbar=700.0,
        M=0.2, k=5.0, alpha=0.0, beta=0.0, dMdx=0.0, dpdx=0.0, d2pdx2=0.0,
    )
    base.update(kw)
    return MeanFlowSample(**base)


def mp_mean_state(x, f):
    """50-digit recomputation of the full coefficient chain for the linear
    profile at the reference inlet: completely independent of the package."""
    with mpmath.workdps(50):
        p0, T0, TL = mpmath.mpf(1e5), mpmath.mpf(1600), mpmath.mpf(800)
        g, R, L = mpmath.mpf("1.4"), mpmath.mpf(287), mpmath.mpf(1)
        u0 = mpmath.mpf("0.2") * mpmath.sqrt(g * R * T0)
        rho0 = p0 / (R * T0)
        a1, a2, a3 = rho0 * u0, -(p0 + rho0 * u0**2), p0 * u0 / T0
        T = T0 - (T0 - TL) / L * x
        Tp = -(T0 - TL) / L
        u = (-a2 - mpmath.sqrt(a2**2 - 4 * a1 * a3 * T)) / (2 * a1)
        p = p0 + rho0 * u0 * (u0 - u)
        rho = p / (R * T)
        c = mpmath.sqrt(g * R * T)
        M = u / c
        k = 2 * mpmath.pi * f / c
        alpha = Tp / (T * (g * M**2 - 1))
        dMdx = -M * alpha / 2 * (1 + g * M**2)
        dpdx = a1 * u * alpha
        d2pdx2 = a1 * (2 * a1 * alpha**2 * u**2) / (2 * a1 * u + a2)  # T'' = 0
        beta = d2pdx2 / p + 2 * (Tp / T - dpdx / p) * (Tp / T)
        omega = 2 * mpmath.pi * f
        return dict(
            g=g, u=u, p=p, rho=rho, M=M, k=k, alpha=alpha, beta=beta,
            dMdx=dMdx, omega=omega,
        )


class TestZeta:
    def test_uniform_reduction(self):
        # constant profile collapses to the uniform-mean-flow coefficients
        for f in (500.0, 1000.0, 1500.0, 2000.0):
            for x in (0.0, 0.31, 1.0):
                s = medium.sample(CONSTANT, TABLE_INLET, f, x)
                z = zeta_at(s, TABLE_INLET.gamma)
                assert abs(z.zeta1 - (1.0 - s.M**2)) <= 1e-12
                assert abs(z.zeta2 - 2j * s.M * s.k) <= 1e-12 * s.k
                assert abs(z.zeta3 - s.k**2) <= 1e-12 * s.k**2

    def test_no_flow_limit(self):
        s = synthetic_sample(M=0.0, alpha=0.7, beta=1.3)
        z = zeta_at(s, 1.4)
        assert z.zeta1 == 1.0
        assert z.zeta2 == 0.7
        assert z.zeta3 == 5.0**2
        assert z.zeta1.imag == z.zeta2.imag == z.zeta3.imag == 0.0

    def test_imaginary_parts_vanish_linearly_in_mach(self):
        base = synthetic_sample(alpha=0.5, beta=1.0, dMdx=-0.05)
        ims = []
        for M in (0.02, 0.01, 0.005):
            z = zeta_at(synthetic_sample(M=M, alpha=0.5, beta=1.0, dMdx=-0.05), 1.4)
            ims.append((z.zeta1.imag, z.zeta3.imag))
        for a, b in zip(ims, ims[1:]):
            # halving M at least halves the imaginary parts (they are O(M) or higher)
            assert abs(b[0]) <= 0.51 * abs(a[0]) + 1e-15
            assert abs(b[1]) <= 0.51 * abs(a[1]) + 1e-15

    def test_against_extended_precision(self):
        f, x = 500.0, 0.5
        m = mp_mean_state(mpmath.mpf("0.5"), mpmath.mpf(500))
        with mpmath.workdps(50):
            g, M, k, alpha, beta, dMdx = (
                m["g"], m["M"], m["k"], m["alpha"], m["beta"], m["dMdx"],
            )
            z1 = mpmath.mpc(1 - M**2, 2 * M**2 / k * dMdx)
            z2 = mpmath.mpc(
                (1 - (3 + g) * M**2) * alpha,
                2 * M * k + M * beta / k - 2 * M * alpha**2 / k,
            )
            z3 = mpmath.mpc(
                k**2 + (2 - g) * M**2 * beta + (4 * g - 5) * M**2 * alpha**2,
                (2 + g) * M * k * alpha - 2 * g * k * M**2 * dMdx,
            )
        s = medium.sample(LINEAR, TABLE_INLET, f, x)
        z = zeta_at(s, TABLE_INLET.gamma)
        for got, want in ((z.zeta1, z1), (z.zeta2, z2), (z.zeta3, z3)):
            assert abs(got - complex(want)) <= 1e-13 * abs(complex(want))

    def test_conjugate_symmetry(self):
        # evaluating at -omega (k flips sign) conjugates every coefficient
        s = medium.sample(LINEAR, TABLE_INLET, 500.0, 0.4)
        s_neg = medium.sample(LINEAR, TABLE_INLET, -500.0, 0.4)
        z, zn = zeta_at(s, 1.4), zeta_at(s_neg, 1.4)
        assert np.isclose(zn.zeta1, np.conj(z.zeta1), rtol=1e-14)
        assert np.isclose(zn.zeta2, np.conj(z.zeta2), rtol=1e-14)
        assert np.isclose(zn.zeta3, np.conj(z.zeta3), rtol=1e-14)


class TestMomentum:
    def test_zero_alpha_reductions(self):
        omega = angular_frequency(500.0)
        s = medium.sample(CONSTANT, TABLE_INLET, 500.0, 0.5)
        mc = momentum_coeffs_at(s, 1.4, omega)
        assert mc.F == 0.0
        assert np.isclose(mc.C, 1j * omega / s.ubar, rtol=1e-14)
        assert np.isclose(mc.B, s.M**2 / (s.rhobar * s.ubar), rtol=1e-14)
        assert np.isclose(mc.A, 1j * omega / (1.4 * s.pbar), rtol=1e-14)

    def test_d_normalization(self):
        rng = np.random.default_rng(9)
        for x in rng.uniform(0.0, 1.0, 10):
            s = medium.sample(LINEAR, TABLE_INLET, 800.0, x)
            mc = momentum_coeffs_at(s, 1.4, angular_frequency(800.0))
            assert np.isclose(mc.D * s.rhobar * s.ubar, 1.0, rtol=1e-14)
            assert mc.D.imag == 0.0
            assert mc.F.imag == 0.0
            assert np.isclose(mc.F, -(s.M**2) * s.alpha / (s.rhobar * s.ubar), rtol=1e-14)

    def test_against_extended_precision(self):
        m = mp_mean_state(mpmath.mpf("0.5"), mpmath.mpf(1000))
        with mpmath.workdps(50):
            g, u, p, rho, M, k, alpha, omega = (
                m["g"], m["u"], m["p"], m["rho"], m["M"], m["k"], m["alpha"], m["omega"],
            )
            A = (mpmath.mpc(0, 1) * omega - g * u * alpha) / (g * p)
            B = (M**2 / (rho * u)) * (1 + mpmath.mpc(0, 1) * M * alpha / k + (M * alpha / k) ** 2)
            C = mpmath.mpc(0, 1) * omega / u - alpha
        s = medium.sample(LINEAR, TABLE_INLET, 1000.0, 0.5)
        mc = momentum_coeffs_at(s, 1.4, angular_frequency(1000.0))
        for got, want in ((mc.A, A), (mc.B, B), (mc.C, C)):
            assert abs(got - complex(want)) <= 1e-13 * abs(complex(want))

    def test_conjugate_symmetry(self):
        s = medium.sample(LINEAR, TABLE_INLET, 500.0, 0.4)
        s_neg = medium.sample(LINEAR, TABLE_INLET, -500.0, 0.4)
        mc = momentum_coeffs_at(s, 1.4, angular_frequency(500.0))
        mn = momentum_coeffs_at(s_neg, 1.4, angular_frequency(-500.0))
        for a, b in ((mn.A, mc.A), (mn.B, mc.B), (mn.C, mc.C), (mn.D, mc.D), (mn.F, mc.F)):
            assert np.isclose(a, np.conj(b), rtol=1e-14)

    def test_zero_mean_flow_rejected(self):
        s = synthetic_sample(ubar=0.0)
        with pytest.raises(ZeroMeanFlow):
            momentum_coeffs_at(s, 1.4, angular_frequency(500.0))


class TestValidity:
    def test_zero_alpha(self):
        assert validity_check(synthetic_sample(alpha=0.0)) == 0.0

    def test_quoted_ratio(self):
        s = synthetic_sample(M=0.2, alpha=0.5297, k=4.5244)
        assert np.isclose(validity_check(s), 0.02342, atol=5e-6)

    def test_ratio_halves_when_frequency_doubles(self):
        s1 = medium.sample(LINEAR, TABLE_INLET, 500.0, 0.3)
        s2 = medium.sample(LINEAR, TABLE_INLET, 1000.0, 0.3)
        assert np.isclose(validity_check(s2), 0.5 * validity_check(s1), rtol=1e-12)


class TestEliminateVelocity:
    def test_zero_pressure_gives_zero_velocity(self):
        s = medium.sample(LINEAR, TABLE_INLET, 500.0, 0.5)
        mc = momentum_coeffs_at(s, 1.4, angular_frequency(500.0))
        assert coefficients.eliminate_velocity(mc, 0.0, 0.0) == 0.0

    def test_linearity(self):
        s = medium.sample(LINEAR, TABLE_INLET, 500.0, 0.5)
        mc = momentum_coeffs_at(s, 1.4, angular_frequency(500.0))
        u1 = coefficients.eliminate_velocity(mc, 1.0 + 2.0j, -0.5j)
        lam = 0.7 - 1.3j
        u2 = coefficients.eliminate_velocity(mc, lam * (1.0 + 2.0j), lam * (-0.5j))
        assert np.isclose(u2, lam * u1, rtol=1e-14)

    def test_zero_c_rejected(self):
        mc = coefficients.MomentumCoefficients(A=1.0, B=1.0, C=0.0, D=1.0, F=0.0)
        with pytest.raises(ZeroC):
            coefficients.eliminate_velocity(mc, 1.0, 1.0)
