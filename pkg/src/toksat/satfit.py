"""Exponential saturation fits for discovery trajectories.

The growth of the unique-token count over cumulative audio time t (minutes)
is modeled as

    y(t) = A * (1 - exp(-k * t)) + B

with amplitude A > 0 (tokens), rate k > 0 (per minute) and early-activation
offset B >= 0 (tokens).  The time to reach 90% of the fitted asymptote is
t90 = ln(10) / k.  Fitting is damped Gauss-Newton (Levenberg-Marquardt
scaling on the normal equations) with analytic partial derivatives

    dy/dA = 1 - exp(-k t),   dy/dk = A t exp(-k t),   dy/dB = 1

and bound constraints enforced by projection after each accepted step
(A >= 1, k >= 1e-6, B >= 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discovery import DiscoveryTrajectory

LOWER_BOUNDS = np.array([1.0, 1e-6, 0.0])
DEFAULT_MAX_ITER = 200
PARAM_RTOL = 1e-8
# Condition-number ceiling for the column-normalized Jacobian at the solution.
COND_LIMIT = 1e8


class FitError(RuntimeError):
    pass


class NonConvergent(FitError):
    def __init__(self, iterations: int):
        super().__init__(f"no convergence after {iterations} iterations")
        self.iterations = iterations


class IllConditioned(FitError):
    def __init__(self, cond: float):
        super().__init__(f"Jacobian is rank-deficient at the solution (cond {cond:.3g})")
        self.cond = cond


class NonPositiveRate(ValueError):
    def __init__(self, k: float):
        super().__init__(f"saturation rate must be > 0, got {k}")


@dataclass(frozen=True)
class SaturationFit:
    A: float
    k: float
    B: float
    r_squared: float
    t90_minutes: float
    converged: bool
    iterations: int
    rss: float


def eval_saturation(A: float, k: float, B: float, t: float) -> float:
    """Model value A*(1 - exp(-k*t)) + B at time t minutes."""
    return A * (1.0 - math.exp(-k * t)) + B


def compute_t90(k: float) -> float:
    """Minutes to reach 90% of the asymptotic amplitude: ln(10)/k."""
    if not (k > 0):
        raise NonPositiveRate(k)
    return math.log(10.0) / k


def coverage_at(fit: SaturationFit, t: float) -> float:
    """Normalized coverage (value - B)/A = 1 - exp(-k*t) at time t."""
    return 1.0 - math.exp(-fit.k * t)


def absolute_coverage_at(fit: SaturationFit, t: float) -> float:
    """Alternative reading: model value as a fraction of the full asymptote A + B."""
    return eval_saturation(fit.A, fit.k, fit.B, t) / (fit.A + fit.B)


def _initial_parameters(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    b0 = float(y[0])
    a0 = max(float(np.max(y)) - b0, 1.0)
    half = b0 + a0 / 2.0
    k0 = 0.02
    for ti, yi in zip(t, y):
        if yi > half:
            k0 = math.log(2.0) / float(ti)
            break
    return np.array([a0, k0, b0], dtype=float)


def _model(theta: np.ndarray, t: np.ndarray) -> np.ndarray:
    A, k, B = theta
    return A * (1.0 - np.exp(-k * t)) + B


def _jacobian(theta: np.ndarray, t: np.ndarray) -> np.ndarray:
    A, k, _ = theta
    decay = np.exp(-k * t)
    return np.column_stack((1.0 - decay, A * t * decay, np.ones_like(t)))


def _normalized_cond(jac: np.ndarray) -> float:
    norms = np.linalg.norm(jac, axis=0)
    if np.any(norms == 0.0):
        return math.inf
    sv = np.linalg.svd(jac / norms, compute_uv=False)
    if sv[-1] == 0.0:
        return math.inf
    return float(sv[0] / sv[-1])


def fit_saturation_xy(
    t_minutes: np.ndarray, values: np.ndarray, max_iter: int = DEFAULT_MAX_ITER
) -> SaturationFit:
    """Least-squares saturation fit on raw (t, y) arrays.

    Converges when the relative parameter change of an accepted step falls
    below 1e-8.  Raises :class:`NonConvergent` at the iteration cap and
    :class:`IllConditioned` when the Jacobian is rank-deficient at the
    solution (parameters not identifiable, e.g. a flat trajectory).
    """
    t = np.asarray(t_minutes, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != y.shape:
        raise ValueError("t and y must be 1-D arrays of equal length")
    if len(t) < 4:
        raise ValueError("need at least 4 checkpoints to fit 3 parameters")

    theta = np.maximum(_initial_parameters(t, y), LOWER_BOUNDS)
    residual = y - _model(theta, t)
    rss = float(residual @ residual)
    lam = 1e-3
    growth = 2.0
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        jac = _jacobian(theta, t)
        jtj = jac.T @ jac
        jtr = jac.T @ residual
        scale = np.diag(np.diag(jtj))
        accepted = False
        for _ in range(50):
            damped = jtj + lam * scale
            try:
                delta = np.linalg.solve(damped, jtr)
            except np.linalg.LinAlgError:
                lam *= growth
                growth *= 2.0
                continue
            candidate = np.maximum(theta + delta, LOWER_BOUNDS)
            cand_residual = y - _model(candidate, t)
            cand_rss = float(cand_residual @ cand_residual)
            if cand_rss <= rss:
                step = candidate - theta
                # Gain ratio: actual RSS drop over the drop predicted by the
                # local quadratic model; drives the damping schedule.
                predicted = float(delta @ (lam * (scale @ delta) + jtr))
                rho = (rss - cand_rss) / predicted if predicted > 0 else 0.0
                theta, residual, rss = candidate, cand_residual, cand_rss
                lam = max(lam * max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3), 1e-14)
                growth = 2.0
                accepted = True
                rel_change = float(
                    np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-300))
                )
                if rel_change < PARAM_RTOL:
                    converged = True
                break
            lam *= growth
            growth *= 2.0
        if converged:
            break
        if not accepted:
            # Fifty consecutive rejections with rapidly growing damping means
            # the step has shrunk to nothing: a stationary point to float
            # precision.  The conditioning check below rejects the degenerate
            # case where the model surface is flat.
            converged = True
            break

    if not converged:
        raise NonConvergent(iterations)

    cond = _normalized_cond(_jacobian(theta, t))
    # A rate pinned at its numerical floor means the open constraint k > 0
    # has no interior optimum (flat or non-saturating data): as k -> 0 the
    # columns dy/dA and dy/dk become parallel, so the rate is unidentifiable.
    if cond > COND_LIMIT or theta[1] <= LOWER_BOUNDS[1]:
        raise IllConditioned(cond)

    tss = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - rss / tss if tss > 0 else -math.inf
    A, k, B = (float(v) for v in theta)
    return SaturationFit(
        A=A,
        k=k,
        B=B,
        r_squared=r_squared,
        t90_minutes=compute_t90(k),
        converged=True,
        iterations=iterations,
        rss=rss,
    )


def fit_saturation(trajectory: DiscoveryTrajectory, max_iter: int = DEFAULT_MAX_ITER) -> SaturationFit:
    """Fit the saturation model to a discovery trajectory.

    Callers are expected to run the stagnation screen first; fitting an
    excluded trajectory is allowed but its parameters are rarely meaningful.
    """
    return fit_saturation_xy(
        np.array(trajectory.checkpoints, dtype=float),
        np.array(trajectory.counts, dtype=float),
        max_iter=max_iter,
    )
