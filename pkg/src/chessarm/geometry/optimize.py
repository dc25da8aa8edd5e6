"""Damped least-squares minimizer shared by the pose refiners."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NoConvergence(RuntimeError):
    pass


@dataclass
class FitResult:
    x: np.ndarray
    cost: float
    iterations: int


def numeric_jacobian(fun, x: np.ndarray, eps: float = 1e-7) -> np.ndarray:
    base = fun(x)
    jac = np.empty((base.size, x.size))
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = eps
        jac[:, i] = (fun(x + step) - base) / eps
    return jac


def levenberg_marquardt(
    fun,
    x0,
    max_iterations: int = 100,
    initial_damping: float = 1e-3,
    cost_tolerance: float = 1e-12,
    step_tolerance: float = 1e-12,
) -> FitResult:
    """Minimize 0.5*||fun(x)||^2 by damped Gauss-Newton steps.

    Damping starts at initial_damping, is multiplied by 10 on a rejected
    step and divided by 10 on an accepted one.  Converges when the relative
    cost change or the step norm falls below the tolerances; raises
    NoConvergence when the iteration budget runs out first.
    """
    x = np.asarray(x0, dtype=float).copy()
    residual = fun(x)
    cost = float(residual @ residual)
    damping = initial_damping
    for iteration in range(1, max_iterations + 1):
        jac = numeric_jacobian(fun, x)
        gradient = jac.T @ residual
        hessian = jac.T @ jac
        stepped = False
        for _ in range(40):  # damping escalation budget within one iteration
            try:
                step = np.linalg.solve(hessian + damping * np.eye(x.size), -gradient)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            candidate = x + step
            candidate_residual = fun(candidate)
            candidate_cost = float(candidate_residual @ candidate_residual)
            if candidate_cost <= cost:
                improvement = cost - candidate_cost
                relative = improvement / max(cost, 1e-300)
                x, residual, cost = candidate, candidate_residual, candidate_cost
                damping = max(damping / 10.0, 1e-15)
                stepped = True
                if relative <= cost_tolerance or np.linalg.norm(step) < step_tolerance:
                    return FitResult(x, cost, iteration)
                break
            damping *= 10.0
        if not stepped:
            # no downhill step at any damping: numerically stationary
            return FitResult(x, cost, iteration)
    raise NoConvergence(f"no convergence after {max_iterations} iterations (cost {cost:.3e})")
