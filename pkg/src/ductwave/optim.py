"""Limited-memory BFGS with a strong-Wolfe line search.

Deliberately self-contained so the line-search constants, memory length, and
termination reporting are all first-class knobs of the training configuration,
and so two runs with identical inputs are bit-for-bit identical.

The implementation is the standard two-loop recursion with the bracket/zoom
line search of Nocedal & Wright (Algorithms 3.5 and 3.6), cubic interpolation
in the zoom stage, and curvature pairs skipped when s.y is not safely positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteLoss

TERMINATED_GRADIENT = "gradient norm below tolerance"
TERMINATED_LOSS = "loss below tolerance"
TERMINATED_MAX_ITER = "maximum iterations reached"
TERMINATED_LINE_SEARCH = "line-search failure (best point returned)"


@dataclass
class MinimizeResult:
    x: np.ndarray
    loss: float
    grad_norm: float
    iterations: int
    n_evals: int
    termination: str


def _cubic_min(a, fa, ga, b, fb, gb):
    """Minimizer of the cubic interpolant of (f, f') at a and b; NaN if ill-posed."""
    d1 = ga + gb - 3.0 * (fa - fb) / (a - b)
    disc = d1 * d1 - ga * gb
    if disc < 0.0:
        return np.nan
    d2 = np.sign(b - a) * np.sqrt(disc)
    denom = gb - ga + 2.0 * d2
    if denom == 0.0:
        return np.nan
    return b - (b - a) * (gb + d2 - d1) / denom


def _zoom(phi, lo, hi, f0, g0, c1, c2, max_iter):
    """Nocedal & Wright Algorithm 3.6. lo/hi are (alpha, f, dphi) triples with
    lo the best point so far satisfying the sufficient-decrease condition."""
    a_lo, f_lo, g_lo = lo
    a_hi, f_hi, g_hi = hi
    for _ in range(max_iter):
        a = _cubic_min(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi)
        width = abs(a_hi - a_lo)
        lo_end, hi_end = min(a_lo, a_hi), max(a_lo, a_hi)
        if not np.isfinite(a) or a <= lo_end + 0.1 * width or a >= hi_end - 0.1 * width:
            a = 0.5 * (a_lo + a_hi)
        f, g = phi(a)
        if not np.isfinite(f) or f > f0 + c1 * a * g0 or f >= f_lo:
            a_hi, f_hi, g_hi = a, f, g
        else:
            if abs(g) <= -c2 * g0:
                return a, f, g
            if g * (a_hi - a_lo) >= 0.0:
                a_hi, f_hi, g_hi = a_lo, f_lo, g_lo
            a_lo, f_lo, g_lo = a, f, g
        if abs(a_hi - a_lo) < 1e-16 * max(1.0, abs(a_lo)):
            break
    if f_lo < f0:
        return a_lo, f_lo, g_lo
    return None


def _line_search_strong_wolfe(phi, f0, g0, c1, c2, alpha0, max_iter=30):
    """Find alpha satisfying f(a) <= f0 + c1 a g0 and |f'(a)| <= -c2 g0.

    phi(a) returns (f, dphi) along the ray. Returns (alpha, f, dphi) or None.
    """
    a_prev, f_prev, g_prev = 0.0, f0, g0
    a = alpha0
    for it in range(max_iter):
        f, g = phi(a)
        if not np.isfinite(f) or f > f0 + c1 * a * g0 or (f >= f_prev and it > 0):
            return _zoom(phi, (a_prev, f_prev, g_prev), (a, f, g), f0, g0, c1, c2, max_iter)
        if abs(g) <= -c2 * g0:
            return a, f, g
        if g >= 0.0:
            return _zoom(phi, (a, f, g), (a_prev, f_prev, g_prev), f0, g0, c1, c2, max_iter)
        a_prev, f_prev, g_prev = a, f, g
        a = 2.0 * a
    return None


def minimize_lbfgs(
    fun,
    x0,
    *,
    memory: int = 10,
    max_iterations: int = 5000,
    gradient_tolerance: float = 1e-9,
    loss_tolerance: float = 1e-18,
    wolfe_c1: float = 1e-4,
    wolfe_c2: float = 0.9,
    callback=None,
) -> MinimizeResult:
    """Minimize a smooth function with limited-memory BFGS.

    fun(x) must return (loss, gradient). Convergence is declared when the
    max-norm of the gradient drops below ``gradient_tolerance`` or the loss
    below ``loss_tolerance``. The accepted-loss sequence is monotone
    non-increasing; on line-search failure the best point seen is returned.
    """
    if memory < 1:
        raise ValueError("memory must be at least 1")
    x = np.array(x0, dtype=float)
    n_evals = 0

    def evaluate(v):
        nonlocal n_evals
        n_evals += 1
        f, g = fun(v)
        return float(f), np.asarray(g, dtype=float)

    f, g = evaluate(x)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NonFiniteLoss("objective is non-finite at the initial point")

    s_list: list[np.ndarray] = []
    y_list: list[np.ndarray] = []
    rho_list: list[float] = []

    termination = TERMINATED_MAX_ITER
    iterations = 0
    for iteration in range(max_iterations):
        gnorm = float(np.max(np.abs(g))) if g.size else 0.0
        if gnorm <= gradient_tolerance:
            termination = TERMINATED_GRADIENT
            break
        if f <= loss_tolerance:
            termination = TERMINATED_LOSS
            break

        # Two-loop recursion for the search direction.
        q = g.copy()
        alphas = []
        for s, y, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
            a = rho * (s @ q)
            alphas.append(a)
            q -= a * y
        if y_list:
            gamma = (s_list[-1] @ y_list[-1]) / (y_list[-1] @ y_list[-1])
            q *= gamma
        for (s, y, rho), a in zip(zip(s_list, y_list, rho_list), reversed(alphas)):
            b = rho * (y @ q)
            q += (a - b) * s
        d = -q

        dphi0 = float(g @ d)
        if dphi0 >= 0.0:
            # Curvature information went stale; fall back to steepest descent.
            s_list.clear()
            y_list.clear()
            rho_list.clear()
            d = -g
            dphi0 = float(g @ d)
            if dphi0 >= 0.0:
                termination = TERMINATED_GRADIENT
                break

        trial: dict[float, tuple[float, np.ndarray]] = {}

        def phi(a):
            xa = x + a * d
            fa, ga = evaluate(xa)
            trial[a] = (fa, ga)
            return fa, (float(ga @ d) if np.all(np.isfinite(ga)) else np.inf)

        alpha0 = min(1.0, 1.0 / max(1.0, float(np.sum(np.abs(g))))) if iteration == 0 else 1.0
        found = _line_search_strong_wolfe(phi, f, dphi0, wolfe_c1, wolfe_c2, alpha0)
        iterations = iteration + 1
        if found is None:
            termination = TERMINATED_LINE_SEARCH
            break
        alpha, f_new, _ = found
        f_new, g_new = trial[alpha]
        x_new = x + alpha * d

        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
            if len(s_list) > memory:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)

        x, f, g = x_new, f_new, g_new
        if callback is not None:
            callback(iteration, f, float(np.max(np.abs(g))))
    else:
        iterations = max_iterations

    return MinimizeResult(
        x=x,
        loss=f,
        grad_norm=float(np.max(np.abs(g))) if g.size else 0.0,
        iterations=iterations,
        n_evals=n_evals,
        termination=termination,
    )
