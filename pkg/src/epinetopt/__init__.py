"""Optimal vaccination and treatment scheduling on heterogeneous networks.

The package models SIR epidemics on networks through a degree-based
mean-field description, compresses the degree classes into a small
number of groups with matched infection pressure, and computes optimal
time-varying vaccination/treatment rates by direct transcription of the
resulting control problem (Heun integration, exact discrete gradients,
projected quasi-Newton descent).

Typical flow: build a :class:`DegreeDistribution`, group it with
:func:`partition_equal_mass` + :func:`grouped_stats`, pick control
groups via :func:`amass_control_groups`, then hand everything to
:class:`OptimizationProblem` and :func:`optimize`. The ``epinetopt``
command line drives the same pipeline from a config file.
"""

from .control import (
    ControlSchedule,
    CostBreakdown,
    CostParams,
    ResourceAllocation,
    constant_strategy,
    evaluate_cost,
    read_schedule_csv,
    resource_allocation,
    write_schedule_csv,
    zero_strategy,
)
from .dynamics import (
    DEFAULT_GRID_POINTS,
    EpidemicParams,
    TimeGrid,
    Trajectory,
    cumulative_infected,
    simulate_full,
    simulate_grouped,
    write_trajectory_csv,
)
from .errors import (
    ConfigError,
    DegenerateDistributionError,
    EpinetoptError,
    IngestionError,
    NumericalFailureError,
    ParameterError,
)
from .grouping import (
    ControlGroups,
    GroupedDistribution,
    Grouping,
    amass_control_groups,
    grouped_stats,
    grouping_error,
    grouping_table,
    partition_equal_mass,
)
from .network import (
    DegreeDistribution,
    EdgeListStats,
    ExcessDistribution,
    excess_distribution,
    from_edge_list,
    load_edge_list,
    poisson_distribution,
    power_law_distribution,
    read_distribution,
    write_distribution,
)
from .optimizer import (
    OptimizationProblem,
    OptimizationResult,
    OptimizerOptions,
    SweepPoint,
    finite_difference_gradient,
    improvement_percent,
    objective_and_gradient,
    optimize,
    sweep,
    write_history_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "EpinetoptError",
    "ParameterError",
    "DegenerateDistributionError",
    "IngestionError",
    "NumericalFailureError",
    "ConfigError",
    # network
    "DegreeDistribution",
    "ExcessDistribution",
    "EdgeListStats",
    "poisson_distribution",
    "power_law_distribution",
    "excess_distribution",
    "from_edge_list",
    "load_edge_list",
    "read_distribution",
    "write_distribution",
    # grouping
    "Grouping",
    "GroupedDistribution",
    "ControlGroups",
    "partition_equal_mass",
    "grouped_stats",
    "amass_control_groups",
    "grouping_error",
    "grouping_table",
    # dynamics
    "DEFAULT_GRID_POINTS",
    "EpidemicParams",
    "TimeGrid",
    "Trajectory",
    "simulate_full",
    "simulate_grouped",
    "cumulative_infected",
    "write_trajectory_csv",
    # control
    "CostParams",
    "ControlSchedule",
    "CostBreakdown",
    "ResourceAllocation",
    "constant_strategy",
    "zero_strategy",
    "evaluate_cost",
    "resource_allocation",
    "write_schedule_csv",
    "read_schedule_csv",
    # optimizer
    "OptimizationProblem",
    "OptimizationResult",
    "OptimizerOptions",
    "SweepPoint",
    "objective_and_gradient",
    "finite_difference_gradient",
    "optimize",
    "sweep",
    "improvement_percent",
    "write_history_csv",
]
