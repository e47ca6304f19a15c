"""Forward integration of the mean-field epidemic models.

One Heun (explicit trapezoidal) integrator drives three views of the
same dynamics: the full per-degree-class model, the Z-grouped model, and
the grouped model with vaccination/treatment controls. Per group z with
control group m = m(z):

    ds_z/dt = -beta * k_z * s_z * Theta - s_z * u_m
    di_z/dt =  beta * k_z * s_z * Theta - gamma * i_z - i_z * v_m
    r_z     =  1 - s_z - i_z

where Theta = sum_l q_l * i_l is the infection pressure (probability
that a random edge end is infected), computed once per stage. The
per-group recovered fraction is algebraic because the flows preserve
s + i + r exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import ParameterError
from .grouping import ControlGroups, GroupedDistribution, Grouping, grouped_stats
from .network import DegreeDistribution

if TYPE_CHECKING:
    from .control import ControlSchedule

__all__ = [
    "EpidemicParams",
    "TimeGrid",
    "Trajectory",
    "DEFAULT_GRID_POINTS",
    "heun_step",
    "simulate_full",
    "simulate_grouped",
    "aggregate",
    "cumulative_infected",
    "write_trajectory_csv",
]

# Grid fine enough that the default epidemics are clamp-free and doubling
# the resolution moves the cumulative infected integral by < 1e-4.
DEFAULT_GRID_POINTS = 1001

# A clamp event is a step leaving [0,1] by more than this before clipping.
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class EpidemicParams:
    """Epidemic rates, seed fraction, and time horizon."""

    beta: float
    gamma: float
    i0: float
    duration: float

    def __post_init__(self):
        if not (self.beta >= 0 and np.isfinite(self.beta)):
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if not (self.gamma >= 0 and np.isfinite(self.gamma)):
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if not 0 <= self.i0 < 1:
            raise ParameterError(f"i0 must lie in [0, 1), got {self.i0}")
        if not (self.duration > 0 and np.isfinite(self.duration)):
            raise ParameterError(f"duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``n_points`` samples over ``[0, duration]``."""

    n_points: int
    duration: float

    def __post_init__(self):
        if self.n_points < 2:
            raise ParameterError(f"need at least 2 grid points, got {self.n_points}")
        if not (self.duration > 0 and np.isfinite(self.duration)):
            raise ParameterError(f"duration must be positive, got {self.duration}")

    @property
    def dt(self) -> float:
        return self.duration / (self.n_points - 1)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, self.duration, self.n_points)

    def quadrature_weights(self) -> np.ndarray:
        """Trapezoidal weights (dt at interior nodes, dt/2 at the ends)."""
        w = np.full(self.n_points, self.dt)
        w[0] = w[-1] = 0.5 * self.dt
        return w


@dataclass(frozen=True)
class Trajectory:
    """Per-group and aggregate state fractions over a time grid.

    ``s_hat``, ``i_hat``, ``r_hat`` are (Z, N); ``s``, ``i``, ``r`` are the
    population aggregates. ``clamp_events`` counts integration steps that
    left [0, 1] by more than 1e-12 before clipping — nonzero values flag
    an under-resolved grid.
    """

    s_hat: np.ndarray
    i_hat: np.ndarray
    r_hat: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    grid: TimeGrid
    clamp_events: int = 0


def _rhs(s, i, k_hat, q_hat, beta, gamma, u, v):
    """Flow rates for susceptible and infected fractions of each group."""
    infect = (beta * (q_hat @ i)) * (k_hat * s)
    return -infect - u * s, infect - gamma * i - v * i


def heun_step(state, controls_n, controls_np1, dt, params, gd, cg=None):
    """One Heun step of the grouped controlled dynamics.

    Parameters
    ----------
    state : (2, Z) array
        Rows are the susceptible and infected fractions per group.
    controls_n, controls_np1 : (2, M) arrays or None
        Vaccination (row 0) and treatment (row 1) rates per control group
        at the step's start and end times; None means uncontrolled.
    dt : float
    params : EpidemicParams
    gd : GroupedDistribution
    cg : ControlGroups, optional
        Required when controls are given, to spread the M control values
        over the Z groups.

    Returns
    -------
    (next_state, clamped) : ((2, Z) array, bool)
        State after the step, clipped to [0, 1]; the flag reports whether
        the unclipped step left [0, 1] by more than 1e-12.
    """
    if (controls_n is None) != (controls_np1 is None):
        raise ParameterError("controls must be given at both step endpoints")
    z = len(gd.k_hat)
    if controls_n is None:
        u_n = v_n = u_np1 = v_np1 = np.zeros(z)
    else:
        if cg is None:
            raise ParameterError("control groups required when controls are given")
        a = cg.assignment
        u_n, v_n = controls_n[0][a], controls_n[1][a]
        u_np1, v_np1 = controls_np1[0][a], controls_np1[1][a]
    s, i = state
    ds0, di0 = _rhs(s, i, gd.k_hat, gd.q_hat, params.beta, params.gamma, u_n, v_n)
    sp, ip = s + dt * ds0, i + dt * di0
    ds1, di1 = _rhs(sp, ip, gd.k_hat, gd.q_hat, params.beta, params.gamma, u_np1, v_np1)
    out = np.empty_like(state)
    out[0] = s + 0.5 * dt * (ds0 + ds1)
    out[1] = i + 0.5 * dt * (di0 + di1)
    clamped = bool(out.min() < -_CLAMP_TOL or out.max() > 1 + _CLAMP_TOL)
    np.clip(out, 0.0, 1.0, out=out)
    return out, clamped


def _integrate(gd, params, grid, u_z=None, v_z=None):
    """Run the Heun loop; ``u_z``/``v_z`` are per-group controls, (Z, N)."""
    n, dt = grid.n_points, grid.dt
    k_hat, q_hat = gd.k_hat, gd.q_hat
    z = len(k_hat)
    if u_z is None:
        u_z = v_z = np.zeros((z, n))
    beta, gamma = params.beta, params.gamma
    s = np.empty((z, n))
    i = np.empty((z, n))
    s[:, 0] = 1.0 - params.i0
    i[:, 0] = params.i0
    clamp_events = 0
    sn, inn = s[:, 0].copy(), i[:, 0].copy()
    for step in range(n - 1):
        ds0, di0 = _rhs(sn, inn, k_hat, q_hat, beta, gamma, u_z[:, step], v_z[:, step])
        sp = sn + dt * ds0
        ip = inn + dt * di0
        ds1, di1 = _rhs(sp, ip, k_hat, q_hat, beta, gamma, u_z[:, step + 1], v_z[:, step + 1])
        sn = sn + 0.5 * dt * (ds0 + ds1)
        inn = inn + 0.5 * dt * (di0 + di1)
        lo = min(sn.min(), inn.min())
        hi = max(sn.max(), inn.max())
        if lo < -_CLAMP_TOL or hi > 1 + _CLAMP_TOL:
            clamp_events += 1
        if lo < 0 or hi > 1:
            np.clip(sn, 0.0, 1.0, out=sn)
            np.clip(inn, 0.0, 1.0, out=inn)
        s[:, step + 1] = sn
        i[:, step + 1] = inn
    r = 1.0 - s - i
    s_agg, i_agg, r_agg = aggregate(s, i, gd)
    return Trajectory(
        s_hat=s, i_hat=i, r_hat=r, s=s_agg, i=i_agg, r=r_agg,
        grid=grid, clamp_events=clamp_events,
    )


def simulate_full(dist: DegreeDistribution, params: EpidemicParams, grid: TimeGrid) -> Trajectory:
    """Integrate the uncontrolled epidemic over every degree class.

    Each degree class is its own group (identity grouping), so the
    trajectory has one row per degree class.
    """
    identity = Grouping(np.arange(dist.n_classes + 1))
    return _integrate(grouped_stats(dist, identity), params, grid)


def simulate_grouped(
    gd: GroupedDistribution,
    cg: ControlGroups | None,
    schedule: "ControlSchedule | None",
    params: EpidemicParams,
    grid: TimeGrid,
) -> Trajectory:
    """Integrate the grouped epidemic, optionally under a control schedule.

    With ``schedule=None`` the uncontrolled grouped dynamics are run.
    Otherwise the schedule must be sampled on ``grid`` and nonnegative;
    its M vaccination/treatment signals are spread over the Z groups via
    ``cg.assignment``.
    """
    if schedule is None:
        return _integrate(gd, params, grid)
    if cg is None:
        raise ParameterError("control groups are required with a schedule")
    m, n = schedule.u.shape
    if m != cg.n_control or schedule.u.shape != schedule.v.shape:
        raise ParameterError(
            f"schedule has {m} control signals, expected {cg.n_control}"
        )
    if n != grid.n_points:
        raise ParameterError(
            f"schedule sampled at {n} points, grid has {grid.n_points}"
        )
    if schedule.u.min() < 0 or schedule.v.min() < 0:
        raise ParameterError("control rates must be nonnegative")
    a = cg.assignment
    return _integrate(gd, params, grid, u_z=schedule.u[a], v_z=schedule.v[a])


def aggregate(s_hat, i_hat, gd: GroupedDistribution):
    """Population-level fractions: s = sum_z p_hat_z s_z, likewise i; r = 1-s-i."""
    s = gd.p_hat @ s_hat
    i = gd.p_hat @ i_hat
    return s, i, 1.0 - s - i


def cumulative_infected(traj: Trajectory) -> float:
    """Time integral of the aggregate infected fraction (trapezoidal rule)."""
    return float(traj.grid.quadrature_weights() @ traj.i)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """CSV export: t, aggregates, then per-group s/i/r columns."""
    z = traj.s_hat.shape[0]
    header = ["t", "s", "i", "r"]
    header += [f"s_hat_{j + 1}" for j in range(z)]
    header += [f"i_hat_{j + 1}" for j in range(z)]
    header += [f"r_hat_{j + 1}" for j in range(z)]
    data = np.column_stack([traj.grid.t, traj.s, traj.i, traj.r,
                            traj.s_hat.T, traj.i_hat.T, traj.r_hat.T])
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="")
