import numpy as np
import pytest

from ductwave import optim
from ductwave.errors import NonFiniteLoss


def quadratic(A, b):
    def fun(x):
        r = A @ x - b
        return 0.5 * float(r @ r), A.T @ r

    return fun


class TestLbfgs:
    def test_quadratic_converges_to_solution(self):
        # consistent system: the optimum value is exactly zero, so the
        # gradient tolerance is reachable without roundoff interference
        rng = np.random.default_rng(1)
        A = rng.normal(size=(12, 8))
        x_true = rng.normal(size=8)
        res = optim.minimize_lbfgs(quadratic(A, A @ x_true), np.zeros(8), gradient_tolerance=1e-10)
        assert res.termination in (optim.TERMINATED_GRADIENT, optim.TERMINATED_LOSS)
        assert np.allclose(res.x, x_true, atol=1e-8)

    def test_rosenbrock(self):
        def rosen(x):
            f = 100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2
            g = np.array(
                [
                    -400.0 * x[0] * (x[1] - x[0] ** 2) - 2.0 * (1.0 - x[0]),
                    200.0 * (x[1] - x[0] ** 2),
                ]
            )
            return f, g

        res = optim.minimize_lbfgs(rosen, np.array([-1.2, 1.0]), gradient_tolerance=1e-10)
        assert np.allclose(res.x, [1.0, 1.0], atol=1e-7)
        assert res.iterations < 200

    def test_monotone_accepted_losses(self):
        rng = np.random.default_rng(2)
        A = rng.normal(size=(20, 10))
        b = rng.normal(size=20)
        seen = []
        optim.minimize_lbfgs(
            quadratic(A, b), rng.normal(size=10), max_iterations=50,
            callback=lambda it, f, g: seen.append(f),
        )
        assert all(b <= a + 1e-15 for a, b in zip(seen, seen[1:]))

    def test_restart_from_converged_point_stops_immediately(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(9, 6))
        x_true = rng.normal(size=6)
        fun = quadratic(A, A @ x_true)
        first = optim.minimize_lbfgs(fun, np.zeros(6), gradient_tolerance=1e-9)
        assert first.termination == optim.TERMINATED_GRADIENT
        again = optim.minimize_lbfgs(fun, first.x, gradient_tolerance=1e-9)
        assert again.iterations <= 1
        assert again.termination == optim.TERMINATED_GRADIENT

    def test_loss_tolerance_termination(self):
        fun = lambda x: (float(x @ x), 2.0 * x)
        res = optim.minimize_lbfgs(
            fun, np.array([3.0, -4.0]), loss_tolerance=1e-6, gradient_tolerance=0.0
        )
        assert res.termination == optim.TERMINATED_LOSS
        assert res.loss <= 1e-6

    def test_max_iterations_termination(self):
        rng = np.random.default_rng(4)
        A = rng.normal(size=(30, 30)) + 5.0 * np.eye(30)
        fun = quadratic(A, rng.normal(size=30))
        res = optim.minimize_lbfgs(fun, np.zeros(30), max_iterations=3, gradient_tolerance=1e-16)
        assert res.iterations == 3
        assert res.termination == optim.TERMINATED_MAX_ITER

    def test_non_finite_initial_point_raises(self):
        fun = lambda x: (float("inf"), x)
        with pytest.raises(NonFiniteLoss):
            optim.minimize_lbfgs(fun, np.array([1.0]))

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        A = rng.normal(size=(15, 9))
        b = rng.normal(size=15)
        x0 = rng.normal(size=9)
        r1 = optim.minimize_lbfgs(quadratic(A, b), x0, max_iterations=25)
        r2 = optim.minimize_lbfgs(quadratic(A, b), x0, max_iterations=25)
        assert np.array_equal(r1.x, r2.x)
        assert r1.loss == r2.loss and r1.n_evals == r2.n_evals
