"""Gradient-based optimization of vaccination/treatment schedules.

The continuous optimal control problem is transcribed directly: the 2M
control signals sampled at the N grid nodes are the decision variables
(nonnegative box constraint), the grouped dynamics are integrated with
the same Heun scheme used for simulation, and the objective gradient is
computed by a reverse (discrete-adjoint) sweep through the integrator
steps, so it is exact for the discretized objective up to roundoff. The
solver is a projected limited-memory quasi-Newton method with an
Armijo backtracking search along the projected arc.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .control import (
    ControlSchedule,
    CostBreakdown,
    CostParams,
    constant_strategy,
    evaluate_cost,
    zero_strategy,
)
from .dynamics import EpidemicParams, TimeGrid, _integrate, simulate_grouped
from .errors import NumericalFailureError, ParameterError
from .grouping import ControlGroups, GroupedDistribution

__all__ = [
    "OptimizationProblem",
    "OptimizationResult",
    "OptimizerOptions",
    "SweepPoint",
    "objective_and_gradient",
    "finite_difference_gradient",
    "optimize",
    "sweep",
    "write_history_csv",
]


@dataclass(frozen=True)
class OptimizationProblem:
    """Everything that defines one schedule-optimization instance."""

    gd: GroupedDistribution
    cg: ControlGroups
    params: EpidemicParams
    cost: CostParams
    grid: TimeGrid

    def __post_init__(self):
        if len(self.cg.assignment) != self.gd.n_groups:
            raise ParameterError(
                f"control groups cover {len(self.cg.assignment)} groups, "
                f"distribution has {self.gd.n_groups}"
            )
        if not np.isclose(self.params.duration, self.grid.duration):
            raise ParameterError(
                f"epidemic duration {self.params.duration} does not match "
                f"grid duration {self.grid.duration}"
            )

    @property
    def n_variables(self) -> int:
        return 2 * self.cg.n_control * self.grid.n_points


@dataclass(frozen=True)
class OptimizerOptions:
    """Stopping rules and line-search settings of :func:`optimize`."""

    gradient_tol: float = 1e-6
    relative_decrease_tol: float = 1e-9
    stall_iterations: int = 5
    max_iterations: int = 2000
    memory: int = 10
    armijo_c1: float = 1e-4
    max_backtracks: int = 50


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of one optimize run; ``history`` holds J per iterate."""

    schedule: ControlSchedule
    J: float
    breakdown: CostBreakdown
    iterations: int
    converged: bool
    gradient_norm: float
    history: np.ndarray = field(repr=False)


def _split(problem: OptimizationProblem, x: np.ndarray):
    """View the flat decision vector as (M, N) vaccination/treatment arrays."""
    m, n = problem.cg.n_control, problem.grid.n_points
    if x.shape != (2 * m * n,):
        raise ParameterError(f"decision vector must have length {2 * m * n}")
    return x[: m * n].reshape(m, n), x[m * n :].reshape(m, n)


def _forward(problem, u, v):
    """Simulate and return (J, trajectory) without re-validating controls."""
    a = problem.cg.assignment
    traj = _integrate(problem.gd, problem.params, problem.grid, u_z=u[a], v_z=v[a])
    w = problem.grid.quadrature_weights()
    x = problem.cg.x
    j = float(
        w @ traj.i
        + problem.cost.b * (w @ (x @ u**2))
        + problem.cost.c * (w @ (x @ v**2))
    )
    return j, traj


def _check_finite(traj):
    bad = ~(np.isfinite(traj.s_hat).all(axis=0) & np.isfinite(traj.i_hat).all(axis=0))
    if bad.any():
        step = int(np.argmax(bad))
        raise NumericalFailureError(f"non-finite state at grid step {step}")


def objective_and_gradient(problem: OptimizationProblem, x: np.ndarray):
    """Objective value and its exact gradient for a flat decision vector.

    The vector stacks the vaccination rates (M*N, row-major) followed by
    the treatment rates. The gradient is computed by a reverse sweep
    through the Heun steps (discrete adjoint), which differentiates the
    discretized objective exactly; a finite-difference cross-check is
    available via :func:`finite_difference_gradient`.
    """
    x = np.asarray(x, dtype=float)
    if x.min() < 0:
        raise ParameterError("decision vector must be nonnegative")
    u, v = _split(problem, x)
    j, traj = _forward(problem, u, v)
    _check_finite(traj)
    if not np.isfinite(j):
        raise NumericalFailureError("objective is not finite")

    gd, cg, params, grid = problem.gd, problem.cg, problem.params, problem.grid
    beta, gamma = params.beta, params.gamma
    k_hat, q_hat, p_hat, xfrac = gd.k_hat, gd.q_hat, gd.p_hat, cg.x
    a = cg.assignment
    n, dt = grid.n_points, grid.dt
    w = grid.quadrature_weights()
    s, i = traj.s_hat, traj.i_hat
    u_z, v_z = u[a], v[a]
    bk = beta * k_hat

    # stage quantities for every step, vectorized over time
    theta = q_hat @ i  # (N,)
    infect = bk[:, None] * s * theta[None, :]
    sp = s + dt * (-infect - u_z * s)  # predictor states for step n live
    ip = i + dt * (infect - gamma * i - v_z * i)  # in column n
    theta_p = q_hat @ ip

    # reverse sweep: lam = dJ/d(state at node n+1), objective node terms included
    lam_s = np.zeros(gd.n_groups)
    lam_i = w[-1] * p_hat.copy()
    g_u = np.zeros_like(u_z)  # per-group control gradients
    g_v = np.zeros_like(v_z)
    for step in range(n - 2, -1, -1):
        u0, v0 = u_z[:, step], v_z[:, step]
        u1, v1 = u_z[:, step + 1], v_z[:, step + 1]
        sp_n, ip_n = sp[:, step], ip[:, step]
        s_n, i_n = s[:, step], i[:, step]
        # transposed-Jacobian product at the predicted state (stage 2)
        bkt = bk * theta_p[step]
        h1_s = (-bkt - u1) * lam_s + bkt * lam_i
        h1_i = beta * q_hat * np.dot(k_hat * sp_n, lam_i - lam_s) - (gamma + v1) * lam_i
        # control gradients: stage 2 uses node n+1 controls, stage 1 node n
        g_u[:, step + 1] += (-0.5 * dt) * sp_n * lam_s
        g_v[:, step + 1] += (-0.5 * dt) * ip_n * lam_i
        mu_s = lam_s + dt * h1_s
        mu_i = lam_i + dt * h1_i
        g_u[:, step] += (-0.5 * dt) * s_n * mu_s
        g_v[:, step] += (-0.5 * dt) * i_n * mu_i
        # transposed-Jacobian product at the step start (stage 1)
        bkt = bk * theta[step]
        h0_s = (-bkt - u0) * mu_s + bkt * mu_i
        h0_i = beta * q_hat * np.dot(k_hat * s_n, mu_i - mu_s) - (gamma + v0) * mu_i
        lam_s = lam_s + 0.5 * dt * (h1_s + h0_s)
        lam_i = lam_i + 0.5 * dt * (h1_i + h0_i) + w[step] * p_hat

    # collapse per-group rows onto the control groups (contiguous blocks)
    starts = np.r_[0, 1 + np.flatnonzero(np.diff(a))]
    g_u = np.add.reduceat(g_u, starts, axis=0)
    g_v = np.add.reduceat(g_v, starts, axis=0)
    # direct quadratic-cost terms
    g_u += 2.0 * problem.cost.b * xfrac[:, None] * u * w[None, :]
    g_v += 2.0 * problem.cost.c * xfrac[:, None] * v * w[None, :]
    return j, np.concatenate([g_u.ravel(), g_v.ravel()])


def finite_difference_gradient(
    problem: OptimizationProblem,
    x: np.ndarray,
    indices=None,
    relative_step: float = 1e-6,
) -> np.ndarray:
    """Central-difference gradient components, for cross-validation.

    Returns the derivative at each requested index (all of them by
    default) with step ``relative_step * max(|x_i|, 1)``. Points must be
    far enough from the boundary that both side evaluations stay valid.
    """
    x = np.asarray(x, dtype=float)
    if indices is None:
        indices = np.arange(x.size)
    out = np.empty(len(indices))
    for row, idx in enumerate(indices):
        h = relative_step * max(abs(x[idx]), 1.0)
        for sign in (+1, -1):
            xs = x.copy()
            xs[idx] += sign * h
            u, v = _split(problem, xs)
            j, _ = _forward(problem, u, v)
            if sign > 0:
                j_plus = j
            else:
                j_minus = j
        out[row] = (j_plus - j_minus) / (2 * h)
    return out


def _projected_gradient(x, g):
    """Gradient with ascent components zeroed at the active bound x=0."""
    pg = g.copy()
    pg[(x <= 0) & (g > 0)] = 0.0
    return pg


def optimize(
    problem: OptimizationProblem,
    initial: ControlSchedule | None = None,
    options: OptimizerOptions = OptimizerOptions(),
) -> OptimizationResult:
    """Minimize the objective over nonnegative control schedules.

    Projected limited-memory quasi-Newton descent from ``initial`` (the
    constant beta/2, gamma/2 heuristic by default). Stops when the
    projected gradient norm falls below ``gradient_tol``, the relative
    objective decrease stays below ``relative_decrease_tol`` for
    ``stall_iterations`` consecutive iterations, or ``max_iterations``
    is reached; a failed line search returns the best iterate found with
    ``converged=False``. The reported J never exceeds the initial J.
    """
    m, n = problem.cg.n_control, problem.grid.n_points
    if initial is None:
        initial = constant_strategy(problem.params, problem.grid, m)
    if initial.n_control != m or initial.grid.n_points != n:
        raise ParameterError("initial schedule does not match the problem layout")
    x = np.concatenate([initial.u.ravel(), initial.v.ravel()])

    j, g = objective_and_gradient(problem, x)
    history = [j]
    pairs: list[tuple[np.ndarray, np.ndarray, float]] = []
    stall = 0
    converged = False
    iterations = 0
    pg_norm = float(np.linalg.norm(_projected_gradient(x, g)))

    for iterations in range(1, options.max_iterations + 1):
        if pg_norm < options.gradient_tol:
            converged = True
            iterations -= 1
            break

        d = _lbfgs_direction(g, pairs)
        accepted = _line_search(problem, x, j, g, d, options)
        if accepted is None and pairs:
            # curvature model misleading: drop it and retry with steepest descent
            pairs.clear()
            accepted = _line_search(problem, x, j, g, -g, options)
        if accepted is None:
            break
        x_new, j_new = accepted

        _, g_new = objective_and_gradient(problem, x_new)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))
            if len(pairs) > options.memory:
                pairs.pop(0)

        decrease = (j - j_new) / max(1.0, abs(j_new))
        stall = stall + 1 if decrease < options.relative_decrease_tol else 0
        x, j, g = x_new, j_new, g_new
        history.append(j)
        pg_norm = float(np.linalg.norm(_projected_gradient(x, g)))
        if stall >= options.stall_iterations:
            converged = True
            break
    else:
        iterations = options.max_iterations

    u, v = _split(problem, x)
    schedule = ControlSchedule(u=u, v=v, grid=problem.grid)
    traj = simulate_grouped(problem.gd, problem.cg, schedule, problem.params, problem.grid)
    breakdown = evaluate_cost(traj, schedule, problem.cg, problem.cost)
    return OptimizationResult(
        schedule=schedule,
        J=j,
        breakdown=breakdown,
        iterations=iterations,
        converged=converged,
        gradient_norm=pg_norm,
        history=np.asarray(history),
    )


def _lbfgs_direction(g, pairs):
    """Two-loop recursion for -H g with the stored curvature pairs."""
    if not pairs:
        return -g
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        alpha = rho * (s @ q)
        alphas.append(alpha)
        q -= alpha * y
    s, y, _ = pairs[-1]
    q *= (s @ y) / (y @ y)
    for (s, y, rho), alpha in zip(pairs, reversed(alphas)):
        q += (alpha - rho * (y @ q)) * s
    return -q


def _line_search(problem, x, j, g, d, options):
    """Backtracking Armijo search along the projected arc x(a) = P(x + a d)."""
    alpha = 1.0
    for _ in range(options.max_backtracks):
        x_new = np.maximum(x + alpha * d, 0.0)
        step = x_new - x
        if step.any():
            u, v = _split(problem, x_new)
            j_new, _ = _forward(problem, u, v)
            if not np.isfinite(j_new):
                raise NumericalFailureError("objective is not finite in line search")
            if j_new <= j + options.armijo_c1 * float(g @ step):
                return x_new, j_new
        alpha *= 0.5
    return None


@dataclass(frozen=True)
class SweepPoint:
    """One row of a parameter sweep: objectives and per-strategy outcomes."""

    value: float
    J_optimal: float
    J_constant: float
    J_none: float
    improvement_over_constant: float
    improvement_over_none: float
    cumulative_infected_optimal: float
    cumulative_infected_constant: float
    cumulative_infected_none: float
    converged: bool
    error: str | None = None


def improvement_percent(j_reference: float, j_optimal: float) -> float:
    """Relative objective reduction (percent) against a reference strategy."""
    return (j_reference - j_optimal) / j_reference * 100.0


def sweep(
    problem: OptimizationProblem,
    name: str,
    values,
    options: OptimizerOptions = OptimizerOptions(),
) -> list[SweepPoint]:
    """Optimize at each parameter value and compare with the heuristics.

    ``name`` selects the swept parameter: the spreading rate ``beta`` or
    one of the cost weights ``b``, ``c``. Per-point failures are recorded
    in the returned row and the sweep continues.
    """
    if name not in ("beta", "b", "c"):
        raise ParameterError(f"sweep parameter must be beta, b, or c, got {name!r}")
    rows = []
    w = problem.grid.quadrature_weights()
    for value in values:
        try:
            if name == "beta":
                variant = replace(problem, params=replace(problem.params, beta=float(value)))
            else:
                variant = replace(problem, cost=replace(problem.cost, **{name: float(value)}))
            res = optimize(variant, options=options)
            const = constant_strategy(variant.params, variant.grid, variant.cg.n_control)
            none = zero_strategy(variant.grid, variant.cg.n_control)
            traj_c = simulate_grouped(variant.gd, variant.cg, const, variant.params, variant.grid)
            traj_n = simulate_grouped(variant.gd, variant.cg, none, variant.params, variant.grid)
            traj_o = simulate_grouped(
                variant.gd, variant.cg, res.schedule, variant.params, variant.grid
            )
            j_c = evaluate_cost(traj_c, const, variant.cg, variant.cost).J
            j_n = evaluate_cost(traj_n, none, variant.cg, variant.cost).J
            rows.append(
                SweepPoint(
                    value=float(value),
                    J_optimal=res.J,
                    J_constant=j_c,
                    J_none=j_n,
                    improvement_over_constant=improvement_percent(j_c, res.J),
                    improvement_over_none=improvement_percent(j_n, res.J),
                    cumulative_infected_optimal=float(w @ traj_o.i),
                    cumulative_infected_constant=float(w @ traj_c.i),
                    cumulative_infected_none=float(w @ traj_n.i),
                    converged=res.converged,
                )
            )
        except (NumericalFailureError, ParameterError) as exc:
            rows.append(
                SweepPoint(
                    value=float(value),
                    J_optimal=float("nan"),
                    J_constant=float("nan"),
                    J_none=float("nan"),
                    improvement_over_constant=float("nan"),
                    improvement_over_none=float("nan"),
                    cumulative_infected_optimal=float("nan"),
                    cumulative_infected_constant=float("nan"),
                    cumulative_infected_none=float("nan"),
                    converged=False,
                    error=str(exc),
                )
            )
    return rows


def write_history_csv(result: OptimizationResult, path) -> None:
    """Per-iteration objective values as a two-column CSV."""
    data = np.column_stack([np.arange(len(result.history)), result.history])
    np.savetxt(path, data, delimiter=",", header="iteration,J", comments="")
