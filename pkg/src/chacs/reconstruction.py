"""Coefficient estimation from downsampled chaotic measurements.

The estimate minimizes  sum_m |z_m - zbar_m(alpha)|^2 + mu * ||alpha||_1,
with the l1 term handled by iterative reweighting: each outer iteration
fixes weights w_k = (alpha_k^2 + eps)^(-1/2) and solves the smooth problem

    sum_m |z_m - zbar_m(alpha)|^2 + mu * sum_k w_k * alpha_k^2

with a damped Gauss-Newton (Levenberg-Marquardt) pass over the slave-system
forward model. The problem is nonconvex; local minima are expected and
multi-restart selection is left to the caller.
"""

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from chacs import henon
from chacs.errors import DivergenceError, SolverStallError
from chacs.fileio import format_float

# Damping can grow by at most 10**_MAX_REJECTIONS within one iteration
# before the solver declares a stall.
_MAX_REJECTIONS = 50


@dataclass(frozen=True)
class IRNLSConfig:
    """Solver knobs; the defaults are the standard operating point."""

    mu: float = 1e-6
    eps: float = 1e-14
    outer_tol: float = 1e-5
    max_outer: int = 50
    max_inner: int = 200
    gradient_tol: float = 1e-10
    initial_damping: float = 1e-3

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be >= 0")
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if min(self.outer_tol, self.gradient_tol, self.initial_damping) <= 0:
            raise ValueError("tolerances and damping must be > 0")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass
class ReconstructionResult:
    alpha_hat: np.ndarray
    objective_history: np.ndarray  # one surrogate value per outer iteration
    outer_iterations: int
    converged: bool
    final_relative_change: float

    def to_json(self) -> str:
        f = format_float
        fields = [
            '"alpha": [' + ", ".join(f(v) for v in self.alpha_hat) + "]",
            f'"converged": {"true" if self.converged else "false"}',
            f'"outer_iterations": {self.outer_iterations}',
            '"objective": [' + ", ".join(f(v) for v in self.objective_history) + "]",
        ]
        return "{" + ", ".join(fields) + "}"

    @classmethod
    def from_json(cls, text: str) -> "ReconstructionResult":
        doc = json.loads(text)
        return cls(
            alpha_hat=np.asarray(doc["alpha"], dtype=float),
            objective_history=np.asarray(doc["objective"], dtype=float),
            outer_iterations=int(doc["outer_iterations"]),
            converged=bool(doc["converged"]),
            final_relative_change=float("nan"),
        )


@dataclass
class InnerResult:
    """Outcome of one weighted nonlinear least-squares pass."""

    alpha: np.ndarray
    objective_history: np.ndarray  # objective at start plus after each accepted step
    iterations: int
    termination: str  # "gradient", "step", or "max_inner"


def compute_weights(alpha_bar, eps: float) -> np.ndarray:
    """w_k = (alpha_k^2 + eps)^(-1/2); eps keeps zeros finite."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    alpha_bar = np.asarray(alpha_bar, dtype=float)
    return 1.0 / np.sqrt(alpha_bar * alpha_bar + eps)


def _evaluate(record, dictionary, alpha, sqrt_reg, want_jacobian):
    """Stacked residual [z - zbar; sqrt(mu*w)*alpha] and its Jacobian."""
    run = henon.run_excited_slave(record, alpha, dictionary,
                                  want_jacobian=want_jacobian)
    residual = np.concatenate([record.z - run.zbar, sqrt_reg * alpha])
    if not want_jacobian:
        return residual, None
    jacobian = np.vstack([-run.jacobian, np.diag(sqrt_reg)])
    return residual, jacobian


def build_regularized_residuals(record, dictionary, alpha_bar, weights,
                                mu: float):
    """Residual/Jacobian pair whose squared norm is the weighted objective.

    ||r||^2 = sum |z - zbar|^2 + mu * sum w_k * alpha_k^2.
    """
    alpha_bar = np.asarray(alpha_bar, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != alpha_bar.shape:
        raise ValueError("weights and alpha_bar must have matching shapes")
    sqrt_reg = np.sqrt(mu * weights)
    return _evaluate(record, dictionary, alpha_bar, sqrt_reg, True)


def inner_weighted_nls(record, dictionary, weights, mu: float, alpha_start,
                       config: IRNLSConfig,
                       active: Optional[np.ndarray] = None) -> InnerResult:
    """Levenberg-Marquardt minimization of the fixed-weights objective.

    Accepted steps never increase the objective; the damping grows tenfold
    on every rejected trial (including trials whose orbit diverged) and
    shrinks tenfold on acceptance. Terminates when the gradient infinity
    norm drops below ``config.gradient_tol``, when the step reaches machine
    precision, or at ``config.max_inner`` iterations. ``active`` restricts
    the optimization to a coordinate subset (used by diagnostics and tests).
    """
    weights = np.asarray(weights, dtype=float)
    sqrt_reg = np.sqrt(mu * weights)
    x = np.array(alpha_start, dtype=float)
    if active is None:
        active = np.ones(len(x), dtype=bool)
    else:
        active = np.asarray(active, dtype=bool)

    try:
        r, jac = _evaluate(record, dictionary, x, sqrt_reg, True)
    except DivergenceError as exc:
        raise SolverStallError(
            f"starting point already diverges: {exc}", alpha=x
        ) from exc

    objective = float(r @ r)
    history = [objective]
    damping = config.initial_damping
    termination = "max_inner"
    iterations = 0

    for _ in range(config.max_inner):
        gradient = 2.0 * (jac.T @ r)
        if np.max(np.abs(gradient[active])) < config.gradient_tol:
            termination = "gradient"
            break
        jac_a = jac[:, active]
        normal = jac_a.T @ jac_a
        scaling = np.clip(np.diag(normal).copy(), 1e-32, None)
        rhs = -(jac_a.T @ r)

        accepted = False
        step = np.zeros_like(x)
        for _trial in range(_MAX_REJECTIONS):
            try:
                delta = np.linalg.solve(normal + damping * np.diag(scaling), rhs)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            step[active] = delta
            x_trial = x + step
            try:
                r_trial, _ = _evaluate(record, dictionary, x_trial, sqrt_reg,
                                       False)
            except DivergenceError:
                damping *= 10.0
                continue
            trial_objective = float(r_trial @ r_trial)
            if trial_objective <= objective:
                accepted = True
                break
            damping *= 10.0
        if not accepted:
            raise SolverStallError(
                f"no acceptable step after {_MAX_REJECTIONS} damping increases",
                alpha=x.copy(),
            )

        step_norm = float(np.linalg.norm(step))
        x = x_trial
        objective = trial_objective
        history.append(objective)
        iterations += 1
        damping = max(damping * 0.1, 1e-15)
        if step_norm <= 1e-14 * (float(np.linalg.norm(x)) + 1e-14):
            termination = "step"
            break
        r, jac = _evaluate(record, dictionary, x, sqrt_reg, True)

    return InnerResult(alpha=x, objective_history=np.asarray(history),
                       iterations=iterations, termination=termination)


def irnls_reconstruct(record, dictionary, config: Optional[IRNLSConfig] = None,
                      seed=0) -> ReconstructionResult:
    """Iteratively reweighted nonlinear least squares from a random start.

    The start is uniform on [-1, 1]^N from ``seed``; each outer iteration
    refreshes the weights over all N coefficients, re-solves, and stops once
    the relative iterate change drops to ``config.outer_tol``. A solver
    stall propagates as SolverStallError with the partial result attached.
    """
    if config is None:
        config = IRNLSConfig()
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(-1.0, 1.0, record.n)
    history = []
    converged = False
    relative_change = float("inf")
    outer = 0

    for _ in range(config.max_outer):
        weights = compute_weights(alpha, config.eps)
        try:
            inner = inner_weighted_nls(record, dictionary, weights, config.mu,
                                       alpha, config)
        except SolverStallError as exc:
            exc.partial = ReconstructionResult(
                alpha_hat=exc.alpha if exc.alpha is not None else alpha,
                objective_history=np.asarray(history),
                outer_iterations=outer,
                converged=False,
                final_relative_change=relative_change,
            )
            raise
        new_alpha = inner.alpha
        history.append(inner.objective_history[-1])
        previous_norm = float(np.linalg.norm(alpha))
        change = float(np.linalg.norm(new_alpha - alpha))
        if previous_norm > 0.0:
            relative_change = change / previous_norm
        else:
            relative_change = 0.0 if change == 0.0 else float("inf")
        alpha = new_alpha
        outer += 1
        if relative_change <= config.outer_tol:
            converged = True
            break

    return ReconstructionResult(
        alpha_hat=alpha,
        objective_history=np.asarray(history),
        outer_iterations=outer,
        converged=converged,
        final_relative_change=relative_change,
    )


def l1_objective(record, dictionary, alpha, mu: float) -> float:
    """The l1-regularized data misfit; used to rank restarts without truth."""
    run = henon.run_excited_slave(record, alpha, dictionary)
    misfit = float(np.sum((record.z - run.zbar) ** 2))
    return misfit + mu * float(np.sum(np.abs(alpha)))


def reconstruct_with_restarts(record, dictionary,
                              config: Optional[IRNLSConfig] = None,
                              seeds: Sequence[int] = (0,),
                              ) -> list:
    """One reconstruction per seed; stalled restarts yield their partial result."""
    results = []
    for seed in seeds:
        try:
            results.append(irnls_reconstruct(record, dictionary, config, seed))
        except SolverStallError as exc:
            results.append(exc.partial)
    return results
