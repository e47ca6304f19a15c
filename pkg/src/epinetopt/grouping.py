"""Equal-mass compression of degree classes.

Degree classes are merged into Z contiguous groups of roughly equal
probability mass, shrinking the ODE system from 2|K| to 2Z equations;
the Z groups are further amassed into M control groups (one vaccination
and one treatment signal each). `grouping_error` quantifies how much the
compression distorts the aggregate epidemic trajectories.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, ParameterError
from .network import DegreeDistribution

__all__ = [
    "Grouping",
    "GroupedDistribution",
    "ControlGroups",
    "partition_equal_mass",
    "grouped_stats",
    "amass_control_groups",
    "grouping_error",
    "grouping_table",
]


@dataclass(frozen=True)
class Grouping:
    """Contiguous partition of degree-class indices into groups.

    ``boundaries`` holds Z+1 offsets into the ascending degree-class
    array; group ``z`` spans classes ``boundaries[z] .. boundaries[z+1]-1``.
    """

    boundaries: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=int)
        object.__setattr__(self, "boundaries", b)
        if b.ndim != 1 or len(b) < 2 or b[0] != 0:
            raise ParameterError("boundaries must start at 0 and define >= 1 group")
        if np.any(np.diff(b) < 1):
            raise ParameterError("every group must contain at least one degree class")

    @property
    def n_groups(self) -> int:
        return len(self.boundaries) - 1

    @property
    def sizes(self) -> np.ndarray:
        """Number of degree classes per group."""
        return np.diff(self.boundaries)

    def group_of(self) -> np.ndarray:
        """Group index for each degree class (inverse of the partition)."""
        return np.repeat(np.arange(self.n_groups), self.sizes)


@dataclass(frozen=True)
class GroupedDistribution:
    """Per-group statistics of a grouped degree distribution.

    ``p_hat`` is the group probability mass, ``q_hat`` the fraction of
    edge ends attached to the group (the infection-pressure weights),
    ``k_hat`` the mass-weighted mean degree within the group.
    """

    p_hat: np.ndarray
    q_hat: np.ndarray
    k_hat: np.ndarray
    grouping: Grouping

    def __post_init__(self):
        p, q, k = (np.asarray(a, float) for a in (self.p_hat, self.q_hat, self.k_hat))
        z = self.grouping.n_groups
        if not (p.shape == q.shape == k.shape == (z,)):
            raise ParameterError("p_hat, q_hat, k_hat must have one entry per group")
        if abs(p.sum() - 1) > 1e-12 or abs(q.sum() - 1) > 1e-12:
            raise ParameterError("group masses must each sum to 1")
        if np.any(np.diff(k) <= 0):
            raise ParameterError("weighted mean degrees must increase across groups")

    @property
    def n_groups(self) -> int:
        return self.grouping.n_groups


@dataclass(frozen=True)
class ControlGroups:
    """Assignment of the Z groups to M control groups.

    ``assignment[z]`` is the control-group index of group ``z`` (monotone
    nondecreasing, so control groups are Low/Medium/High blocks of degree);
    ``x[m]`` is the population fraction covered by control group ``m``.
    """

    assignment: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=int)
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "assignment", a)
        object.__setattr__(self, "x", x)
        if a[0] != 0 or np.any(np.diff(a) < 0) or np.any(np.diff(a) > 1):
            raise ParameterError("assignment must step through 0..M-1 without gaps")
        if a[-1] != len(x) - 1:
            raise ParameterError("every control group must receive at least one group")
        if np.any(x <= 0) or abs(x.sum() - 1) > 1e-12:
            raise ParameterError("population fractions must be positive and sum to 1")

    @property
    def n_control(self) -> int:
        return len(self.x)


def _greedy_boundaries(masses: np.ndarray, n_groups: int) -> np.ndarray:
    """Close group z at the smallest index where cumulative mass >= z/n_groups.

    A feasibility guard caps each closing index so that every remaining
    group still receives at least one class; with n_groups == len(masses)
    the guard forces the identity partition.
    """
    n = len(masses)
    cum = np.cumsum(masses)
    boundaries = [0]
    for z in range(1, n_groups):
        lo = boundaries[-1]  # group must keep at least one class
        hi = n - (n_groups - z)  # leave one class for each group still open
        cut = int(np.searchsorted(cum, z / n_groups * cum[-1], side="left")) + 1
        boundaries.append(min(max(cut, lo + 1), hi))
    boundaries.append(n)
    return np.asarray(boundaries, dtype=int)


def _merge_zero_mass(boundaries: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """Drop boundaries of zero-mass groups (merging them into a neighbor)."""
    keep = [0]
    for z in range(len(boundaries) - 1):
        if masses[boundaries[z] : boundaries[z + 1]].sum() > 0:
            keep.append(boundaries[z + 1])
        else:
            # merge into the following group; a trailing empty group folds back
            if z == len(boundaries) - 2:
                keep[-1] = boundaries[z + 1]
    return np.asarray(sorted(set(keep)), dtype=int)


def partition_equal_mass(dist: DegreeDistribution, n_groups: int) -> Grouping:
    """Split the degree classes into ``n_groups`` contiguous equal-mass groups.

    Parameters
    ----------
    dist : DegreeDistribution
    n_groups : int
        Requested group count, ``1 <= n_groups <= dist.n_classes``.

    Returns
    -------
    Grouping
        Greedy partition: each group is closed at the smallest degree
        where the cumulative mass reaches z/n_groups, while guaranteeing
        every group at least one class. ``n_groups == dist.n_classes``
        yields the identity grouping. If zero-mass classes force some
        groups to carry no probability at all, those groups are merged
        into their neighbors and the achieved (smaller) count is returned
        with a warning.
    """
    if not 1 <= n_groups <= dist.n_classes:
        raise ParameterError(
            f"group count must be in [1, {dist.n_classes}], got {n_groups}"
        )
    boundaries = _greedy_boundaries(dist.pmf, n_groups)
    merged = _merge_zero_mass(boundaries, dist.pmf)
    if len(merged) < len(boundaries):
        warnings.warn(
            f"mass concentration: only {len(merged) - 1} of {n_groups} "
            "requested groups carry probability; empty groups were merged",
            stacklevel=2,
        )
        boundaries = merged
    return Grouping(boundaries)


def grouped_stats(dist: DegreeDistribution, grouping: Grouping) -> GroupedDistribution:
    """Aggregate per-group mass, edge-end mass, and mean degree.

    For group z over degree classes K_z:
    ``p_hat = sum p_k``, ``q_hat = sum k p_k / <k>`` (fraction of edge
    ends in the group), ``k_hat = sum k p_k / sum p_k``.
    """
    if grouping.boundaries[-1] != dist.n_classes:
        raise ParameterError(
            f"grouping covers {grouping.boundaries[-1]} classes, "
            f"distribution has {dist.n_classes}"
        )
    edges = grouping.boundaries
    p = dist.pmf
    kp = dist.degrees * p
    p_hat = np.add.reduceat(p, edges[:-1])
    kp_hat = np.add.reduceat(kp, edges[:-1])
    if np.any(p_hat <= 0):
        raise DegenerateDistributionError("a group carries no probability mass")
    return GroupedDistribution(
        p_hat=p_hat,
        q_hat=kp_hat / dist.mean_degree,
        k_hat=kp_hat / p_hat,
        grouping=grouping,
    )


def amass_control_groups(gd: GroupedDistribution, n_control: int) -> ControlGroups:
    """Amass the Z groups into ``n_control`` equal-mass control groups.

    Applies the same greedy rule as :func:`partition_equal_mass` to the
    group masses ``p_hat``; each control group receives one vaccination
    and one treatment signal.
    """
    z = gd.n_groups
    if not 1 <= n_control <= z:
        raise ParameterError(f"control-group count must be in [1, {z}], got {n_control}")
    boundaries = _greedy_boundaries(gd.p_hat, n_control)
    assignment = np.repeat(np.arange(n_control), np.diff(boundaries))
    x = np.add.reduceat(gd.p_hat, boundaries[:-1])
    return ControlGroups(assignment=assignment, x=x)


def grouping_error(dist: DegreeDistribution, n_groups: int, params, grid) -> float:
    """Combined relative error of the Z-grouped model against the full model.

    Simulates the uncontrolled epidemic in both representations from
    identical initial conditions and returns the relative L2 error of the
    stacked aggregate trajectories (s, i, r) sampled on the grid,
    ``||grouped - full||_2 / ||full||_2``, combining all three states in
    one norm. The identity grouping gives 0 up to roundoff.
    """
    from .dynamics import simulate_full, simulate_grouped

    full = simulate_full(dist, params, grid)
    gd = grouped_stats(dist, partition_equal_mass(dist, n_groups))
    grouped = simulate_grouped(gd, None, None, params, grid)
    num, den = 0.0, 0.0
    for a, b in ((grouped.s, full.s), (grouped.i, full.i), (grouped.r, full.r)):
        num += np.sum((a - b) ** 2)
        den += np.sum(b**2)
    return float(np.sqrt(num / den))


def grouping_table(
    dist: DegreeDistribution, gd: GroupedDistribution, cg: ControlGroups | None = None
) -> str:
    """Tabular text report: z, degree range, p_hat, q_hat, k_hat[, m]."""
    lines = ["z degree_range p_hat q_hat k_hat" + (" m" if cg is not None else "")]
    edges = gd.grouping.boundaries
    for z in range(gd.n_groups):
        lo = dist.degrees[edges[z]]
        hi = dist.degrees[edges[z + 1] - 1]
        span = f"{lo}" if lo == hi else f"{lo}-{hi}"
        row = (
            f"{z + 1} {span} {gd.p_hat[z]:.6e} {gd.q_hat[z]:.6e} {gd.k_hat[z]:.6f}"
        )
        if cg is not None:
            row += f" {cg.assignment[z] + 1}"
        lines.append(row)
    return "\n".join(lines) + "\n"
