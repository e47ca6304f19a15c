"""Control schedules, the cost functional, and baseline strategies.

A schedule holds one vaccination rate u_m(t) and one treatment rate
v_m(t) per control group, sampled on the integration grid. The objective
being minimized is

    J = integral of [ i(t) + b * sum_m x_m u_m(t)^2 + c * sum_m x_m v_m(t)^2 ] dt

i.e. cumulative infections plus quadratic, population-weighted control
costs; the two quadratic terms double as the resource-consumption
measure for allocation reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import EpidemicParams, TimeGrid, Trajectory
from .errors import IngestionError, ParameterError
from .grouping import ControlGroups

__all__ = [
    "CostParams",
    "ControlSchedule",
    "CostBreakdown",
    "ResourceAllocation",
    "evaluate_cost",
    "constant_strategy",
    "zero_strategy",
    "resource_allocation",
    "write_schedule_csv",
    "read_schedule_csv",
]


@dataclass(frozen=True)
class CostParams:
    """Weights of the quadratic vaccination (b) and treatment (c) costs."""

    b: float
    c: float

    def __post_init__(self):
        if not (self.b >= 0 and np.isfinite(self.b)):
            raise ParameterError(f"vaccination cost weight must be >= 0, got {self.b}")
        if not (self.c >= 0 and np.isfinite(self.c)):
            raise ParameterError(f"treatment cost weight must be >= 0, got {self.c}")


@dataclass(frozen=True)
class ControlSchedule:
    """Per-control-group vaccination and treatment rates on a time grid.

    ``u`` and ``v`` are (M, N): row m holds the rates for control group m
    at the N grid times.
    """

    u: np.ndarray
    v: np.ndarray
    grid: TimeGrid

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if u.ndim != 2 or u.shape != v.shape:
            raise ParameterError(
                f"u and v must be matching (M, N) arrays, got {u.shape} and {v.shape}"
            )
        if u.shape[1] != self.grid.n_points:
            raise ParameterError(
                f"schedule has {u.shape[1]} samples, grid has {self.grid.n_points}"
            )
        if u.min() < 0 or v.min() < 0:
            raise ParameterError("control rates must be nonnegative")

    @property
    def n_control(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class CostBreakdown:
    """Objective value split into its three integral terms."""

    J: float
    infection_term: float
    vaccination_term: float
    treatment_term: float

    def __post_init__(self):
        parts = self.infection_term + self.vaccination_term + self.treatment_term
        if abs(self.J - parts) > 1e-12 * max(1.0, abs(self.J)):
            raise ParameterError("objective must equal the sum of its terms")


@dataclass(frozen=True)
class ResourceAllocation:
    """Normalized resource shares (percent) of a control schedule.

    ``pair_shares`` is (2, M): row 0 the vaccination share per group,
    row 1 the treatment share, together summing to 100. ``group_shares``
    sums vaccination+treatment per group; ``strategy_shares`` is the
    (vaccination, treatment) split. ``no_resources`` flags an all-zero
    schedule (or zero cost weights), in which case every share is zero.
    """

    pair_shares: np.ndarray
    group_shares: np.ndarray
    strategy_shares: np.ndarray
    total: float
    no_resources: bool = False


def evaluate_cost(
    traj: Trajectory,
    schedule: ControlSchedule,
    cg: ControlGroups,
    cost: CostParams,
) -> CostBreakdown:
    """Trapezoidal evaluation of the objective for a simulated trajectory.

    The trajectory must have been produced under ``schedule`` on the same
    grid; only the grid compatibility can be (and is) checked here.
    """
    if schedule.grid.n_points != traj.grid.n_points or not np.isclose(
        schedule.grid.duration, traj.grid.duration
    ):
        raise ParameterError("schedule and trajectory use different grids")
    if schedule.n_control != cg.n_control:
        raise ParameterError(
            f"schedule has {schedule.n_control} control groups, expected {cg.n_control}"
        )
    w = traj.grid.quadrature_weights()
    infection = float(w @ traj.i)
    vaccination = float(cost.b * (w @ (cg.x @ schedule.u**2)))
    treatment = float(cost.c * (w @ (cg.x @ schedule.v**2)))
    return CostBreakdown(
        J=infection + vaccination + treatment,
        infection_term=infection,
        vaccination_term=vaccination,
        treatment_term=treatment,
    )


def constant_strategy(params: EpidemicParams, grid: TimeGrid, n_control: int) -> ControlSchedule:
    """Flat baseline: vaccinate at beta/2 and treat at gamma/2 throughout."""
    shape = (n_control, grid.n_points)
    return ControlSchedule(
        u=np.full(shape, params.beta / 2),
        v=np.full(shape, params.gamma / 2),
        grid=grid,
    )


def zero_strategy(grid: TimeGrid, n_control: int) -> ControlSchedule:
    """No-intervention baseline."""
    shape = (n_control, grid.n_points)
    return ControlSchedule(u=np.zeros(shape), v=np.zeros(shape), grid=grid)


def resource_allocation(
    schedule: ControlSchedule, cg: ControlGroups, cost: CostParams
) -> ResourceAllocation:
    """Split the deployed control resources into percentage shares.

    The resource spent on group m is the cost-functional control term:
    ``b x_m int u_m^2 dt`` for vaccination and ``c x_m int v_m^2 dt`` for
    treatment. Three normalizations are reported, each summing to 100%:
    per (strategy, group) pair, per group, and per strategy.
    """
    if schedule.n_control != cg.n_control:
        raise ParameterError(
            f"schedule has {schedule.n_control} control groups, expected {cg.n_control}"
        )
    w = schedule.grid.quadrature_weights()
    r_u = cost.b * cg.x * (schedule.u**2 @ w)
    r_v = cost.c * cg.x * (schedule.v**2 @ w)
    total = float(r_u.sum() + r_v.sum())
    m = cg.n_control
    if total <= 0.0:
        zeros = np.zeros(m)
        return ResourceAllocation(
            pair_shares=np.zeros((2, m)),
            group_shares=zeros,
            strategy_shares=np.zeros(2),
            total=0.0,
            no_resources=True,
        )
    pair = np.vstack([r_u, r_v]) / total * 100.0
    return ResourceAllocation(
        pair_shares=pair,
        group_shares=(r_u + r_v) / total * 100.0,
        strategy_shares=np.array([r_u.sum(), r_v.sum()]) / total * 100.0,
        total=total,
    )


def write_schedule_csv(schedule: ControlSchedule, path) -> None:
    """CSV export with columns t, u_1..u_M, v_1..v_M."""
    m = schedule.n_control
    header = ["t"] + [f"u_{j + 1}" for j in range(m)] + [f"v_{j + 1}" for j in range(m)]
    data = np.column_stack([schedule.grid.t, schedule.u.T, schedule.v.T])
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="")


def read_schedule_csv(path) -> ControlSchedule:
    """Read a schedule written by :func:`write_schedule_csv`.

    The time column must be uniform from 0; the remaining columns split
    evenly into vaccination and treatment rates.
    """
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise IngestionError(f"{path}: {exc}") from exc
    if data.shape[1] < 3 or (data.shape[1] - 1) % 2:
        raise IngestionError(
            f"{path}: expected columns t, u_1..u_M, v_1..v_M, got {data.shape[1]}"
        )
    t = data[:, 0]
    if len(t) < 2 or t[0] != 0:
        raise IngestionError(f"{path}: time column must start at 0 with >= 2 samples")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12):
        raise IngestionError(f"{path}: time column must be uniformly spaced")
    m = (data.shape[1] - 1) // 2
    grid = TimeGrid(len(t), float(t[-1]))
    return ControlSchedule(u=data[:, 1 : 1 + m].T, v=data[:, 1 + m :].T, grid=grid)
