"""Configuration-driven experiment runner.

A single INI-style config file describes an experiment end to end:
network model, degree grouping, epidemic parameters, cost weights,
time grid, solver settings, and which strategies to run. Each
subcommand turns that description into plot-ready CSV tables plus a
structured text summary. Outputs are deterministic, written atomically
(write to a sibling temp file, then rename), and the effective config —
with every default filled in — is saved next to the results so any run
can be reproduced from its own output directory.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O or ingestion error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from configparser import ConfigParser
from configparser import Error as _IniError
from dataclasses import dataclass, replace

import numpy as np

from .control import (
    ControlSchedule,
    CostBreakdown,
    CostParams,
    constant_strategy,
    evaluate_cost,
    resource_allocation,
    zero_strategy,
)
from .dynamics import (
    DEFAULT_GRID_POINTS,
    EpidemicParams,
    TimeGrid,
    Trajectory,
    cumulative_infected,
    simulate_grouped,
)
from .errors import (
    ConfigError,
    DegenerateDistributionError,
    IngestionError,
    NumericalFailureError,
    ParameterError,
)
from .grouping import amass_control_groups, grouped_stats, grouping_error, partition_equal_mass
from .network import (
    DegreeDistribution,
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
    improvement_percent,
    optimize,
    sweep,
    write_history_csv,
)

__all__ = [
    "ExperimentConfig",
    "StrategyOutcome",
    "main",
    "run_experiment",
    "run_group_error",
    "run_sweep",
]

STRATEGY_NAMES = ("optimal", "constant", "none")

_SOLVER_DEFAULTS = OptimizerOptions()

# Per-kind network fields; anything else under [network] is a typo we reject.
_NETWORK_FIELDS = {
    "power_law": {"alpha": "2.0", "k_min": "6", "k_max": "105"},
    "poisson": {"lambda": "17.5", "k_min": "1", "k_max": "45"},
    "distribution": {"path": None},
    "edge_list": {"path": None},
}

_FIELDS = {
    "network": None,  # kind-dependent, see _NETWORK_FIELDS
    "grouping": {"z": "21", "m": "3"},
    "epidemic": {"beta": "0.5", "gamma": "0.25", "i0": "0.01", "duration": "20"},
    "cost": {"b": "0.25", "c": "0.5"},
    "grid": {"points": str(DEFAULT_GRID_POINTS)},
    "solver": {
        "gradient_tol": repr(_SOLVER_DEFAULTS.gradient_tol),
        "relative_decrease_tol": repr(_SOLVER_DEFAULTS.relative_decrease_tol),
        "stall_iterations": str(_SOLVER_DEFAULTS.stall_iterations),
        "max_iterations": str(_SOLVER_DEFAULTS.max_iterations),
        "memory": str(_SOLVER_DEFAULTS.memory),
        "armijo_c1": repr(_SOLVER_DEFAULTS.armijo_c1),
        "max_backtracks": str(_SOLVER_DEFAULTS.max_backtracks),
    },
    "run": {"strategies": "optimal, constant, none", "output": "out"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description with every default filled in.

    ``network_kind`` selects how the degree distribution is built:
    ``power_law`` (exponent ``alpha``), ``poisson`` (mean ``lam``), or
    one of the file-backed kinds ``distribution`` / ``edge_list`` that
    read ``network_path``. The remaining fields mirror the config file
    sections one to one.
    """

    network_kind: str
    alpha: float | None
    lam: float | None
    k_min: int | None
    k_max: int | None
    network_path: str | None
    n_groups: int
    n_control: int
    params: EpidemicParams
    cost: CostParams
    grid: TimeGrid
    solver: OptimizerOptions
    strategies: tuple[str, ...]
    output_dir: str

    def __post_init__(self):
        if self.network_kind not in _NETWORK_FIELDS:
            raise ConfigError(
                f"network.kind: expected one of {', '.join(sorted(_NETWORK_FIELDS))}, "
                f"got {self.network_kind!r}"
            )
        if not self.strategies:
            raise ConfigError("run.strategies: at least one strategy is required")
        for name in self.strategies:
            if name not in STRATEGY_NAMES:
                raise ConfigError(
                    f"run.strategies: expected names from {STRATEGY_NAMES}, got {name!r}"
                )
        if self.n_groups < 1:
            raise ConfigError(f"grouping.z: must be >= 1, got {self.n_groups}")
        if self.n_control < 1:
            raise ConfigError(f"grouping.m: must be >= 1, got {self.n_control}")

    @classmethod
    def from_file(cls, path=None, overrides=()) -> "ExperimentConfig":
        """Parse a config file, apply ``section.key=value`` overrides.

        With ``path=None`` the built-in defaults alone are used. Every
        missing field falls back to its default; unknown sections, keys,
        or malformed values raise :class:`ConfigError` naming the field.
        """
        cp = ConfigParser(interpolation=None)
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    cp.read_file(fh, source=os.fspath(path))
            except _IniError as exc:
                raise ConfigError(f"invalid config file: {exc}") from exc
        for item in overrides:
            key, sep, value = item.partition("=")
            section, dot, option = key.strip().partition(".")
            if not (sep and dot and section and option):
                raise ConfigError(
                    f"overrides take the form section.key=value, got {item!r}"
                )
            if not cp.has_section(section):
                cp.add_section(section)
            cp.set(section, option.strip(), value.strip())
        return cls._from_parser(cp)

    @classmethod
    def _from_parser(cls, cp: ConfigParser) -> "ExperimentConfig":
        for section in cp.sections():
            if section not in _FIELDS:
                raise ConfigError(f"unknown config section [{section}]")
        kind = _get_str(cp, "network", "kind", "power_law").lower()
        if kind not in _NETWORK_FIELDS:
            raise ConfigError(
                f"network.kind: expected one of {', '.join(sorted(_NETWORK_FIELDS))}, "
                f"got {kind!r}"
            )
        allowed = set(_NETWORK_FIELDS[kind]) | {"kind"}
        _reject_unknown(cp, "network", allowed)
        for section, fields in _FIELDS.items():
            if fields is not None:
                _reject_unknown(cp, section, set(fields))

        alpha = lam = None
        k_min = k_max = None
        network_path = None
        if kind in ("power_law", "poisson"):
            defaults = _NETWORK_FIELDS[kind]
            if kind == "power_law":
                alpha = _get_float(cp, "network", "alpha", defaults["alpha"])
            else:
                lam = _get_float(cp, "network", "lambda", defaults["lambda"])
            k_min = _get_int(cp, "network", "k_min", defaults["k_min"])
            k_max = _get_int(cp, "network", "k_max", defaults["k_max"])
        else:
            network_path = _get_str(cp, "network", "path", None)
            if network_path is None:
                raise ConfigError(f"network.path: required for kind {kind!r}")

        duration = _get_float(cp, "epidemic", "duration", _FIELDS["epidemic"]["duration"])
        params = EpidemicParams(
            beta=_get_float(cp, "epidemic", "beta", _FIELDS["epidemic"]["beta"]),
            gamma=_get_float(cp, "epidemic", "gamma", _FIELDS["epidemic"]["gamma"]),
            i0=_get_float(cp, "epidemic", "i0", _FIELDS["epidemic"]["i0"]),
            duration=duration,
        )
        cost = CostParams(
            b=_get_float(cp, "cost", "b", _FIELDS["cost"]["b"]),
            c=_get_float(cp, "cost", "c", _FIELDS["cost"]["c"]),
        )
        grid = TimeGrid(
            n_points=_get_int(cp, "grid", "points", _FIELDS["grid"]["points"]),
            duration=duration,
        )
        d = _FIELDS["solver"]
        solver = OptimizerOptions(
            gradient_tol=_get_float(cp, "solver", "gradient_tol", d["gradient_tol"]),
            relative_decrease_tol=_get_float(
                cp, "solver", "relative_decrease_tol", d["relative_decrease_tol"]
            ),
            stall_iterations=_get_int(cp, "solver", "stall_iterations", d["stall_iterations"]),
            max_iterations=_get_int(cp, "solver", "max_iterations", d["max_iterations"]),
            memory=_get_int(cp, "solver", "memory", d["memory"]),
            armijo_c1=_get_float(cp, "solver", "armijo_c1", d["armijo_c1"]),
            max_backtracks=_get_int(cp, "solver", "max_backtracks", d["max_backtracks"]),
        )
        raw = _get_str(cp, "run", "strategies", _FIELDS["run"]["strategies"])
        names = [s.strip().lower() for s in raw.split(",") if s.strip()]
        strategies = tuple(dict.fromkeys(names))
        return cls(
            network_kind=kind,
            alpha=alpha,
            lam=lam,
            k_min=k_min,
            k_max=k_max,
            network_path=network_path,
            n_groups=_get_int(cp, "grouping", "z", _FIELDS["grouping"]["z"]),
            n_control=_get_int(cp, "grouping", "m", _FIELDS["grouping"]["m"]),
            params=params,
            cost=cost,
            grid=grid,
            solver=solver,
            strategies=strategies,
            output_dir=_get_str(cp, "run", "output", _FIELDS["run"]["output"]),
        )

    def effective_text(self) -> str:
        """Serialize the full configuration, defaults included.

        The text round-trips: parsing it with :meth:`from_file` rebuilds
        an identical config (floats are written with ``repr`` so no
        precision is lost).
        """
        lines = ["[network]", f"kind = {self.network_kind}"]
        if self.network_kind == "power_law":
            lines.append(f"alpha = {self.alpha!r}")
        elif self.network_kind == "poisson":
            lines.append(f"lambda = {self.lam!r}")
        if self.network_path is not None:
            lines.append(f"path = {self.network_path}")
        else:
            lines += [f"k_min = {self.k_min}", f"k_max = {self.k_max}"]
        lines += [
            "",
            "[grouping]",
            f"z = {self.n_groups}",
            f"m = {self.n_control}",
            "",
            "[epidemic]",
            f"beta = {self.params.beta!r}",
            f"gamma = {self.params.gamma!r}",
            f"i0 = {self.params.i0!r}",
            f"duration = {self.params.duration!r}",
            "",
            "[cost]",
            f"b = {self.cost.b!r}",
            f"c = {self.cost.c!r}",
            "",
            "[grid]",
            f"points = {self.grid.n_points}",
            "",
            "[solver]",
            f"gradient_tol = {self.solver.gradient_tol!r}",
            f"relative_decrease_tol = {self.solver.relative_decrease_tol!r}",
            f"stall_iterations = {self.solver.stall_iterations}",
            f"max_iterations = {self.solver.max_iterations}",
            f"memory = {self.solver.memory}",
            f"armijo_c1 = {self.solver.armijo_c1!r}",
            f"max_backtracks = {self.solver.max_backtracks}",
            "",
            "[run]",
            f"strategies = {', '.join(self.strategies)}",
            f"output = {self.output_dir}",
        ]
        return "\n".join(lines) + "\n"

    def build_distribution(self) -> DegreeDistribution:
        """Construct the degree distribution described by the network section."""
        if self.network_kind == "power_law":
            return power_law_distribution(self.alpha, self.k_min, self.k_max)
        if self.network_kind == "poisson":
            return poisson_distribution(self.lam, self.k_min, self.k_max)
        if self.network_kind == "distribution":
            return read_distribution(self.network_path)
        dist, _ = from_edge_list(load_edge_list(self.network_path))
        return dist

    def build(self):
        """Build the (distribution, grouped stats, control groups) triple."""
        dist = self.build_distribution()
        grouping = partition_equal_mass(dist, self.n_groups)
        gd = grouped_stats(dist, grouping)
        cg = amass_control_groups(gd, self.n_control)
        return dist, gd, cg


def _get_str(cp, section, key, default):
    if cp.has_option(section, key):
        return cp.get(section, key).strip()
    return default


def _get_float(cp, section, key, default) -> float:
    raw = _get_str(cp, section, key, default)
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None


def _get_int(cp, section, key, default) -> int:
    raw = _get_str(cp, section, key, default)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from None


def _reject_unknown(cp, section, allowed):
    if not cp.has_section(section):
        return
    for key in cp.options(section):
        if key not in allowed:
            raise ConfigError(f"{section}.{key}: unknown field")


# ---------------------------------------------------------------------------
# report emission


def _format(value) -> str:
    """Deterministic cell text; floats use repr so reruns are bitwise equal."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return repr(float(value))


def _atomic_write(path, text: str) -> None:
    tmp = os.fspath(path) + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_table(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format(cell) for cell in row])
    _atomic_write(path, buf.getvalue())


@dataclass(frozen=True)
class StrategyOutcome:
    """Everything recorded about one strategy of an experiment run."""

    name: str
    schedule: ControlSchedule
    trajectory: Trajectory
    breakdown: CostBreakdown
    cumulative_infected: float
    result: OptimizationResult | None = None


def _run_strategy(name: str, config: ExperimentConfig, gd, cg) -> StrategyOutcome:
    if name == "optimal":
        problem = OptimizationProblem(gd, cg, config.params, config.cost, config.grid)
        result = optimize(problem, options=config.solver)
        traj = simulate_grouped(gd, cg, result.schedule, config.params, config.grid)
        return StrategyOutcome(
            name, result.schedule, traj, result.breakdown, cumulative_infected(traj), result
        )
    if name == "constant":
        schedule = constant_strategy(config.params, config.grid, cg.n_control)
    else:
        schedule = zero_strategy(config.grid, cg.n_control)
    traj = simulate_grouped(gd, cg, schedule, config.params, config.grid)
    breakdown = evaluate_cost(traj, schedule, cg, config.cost)
    return StrategyOutcome(name, schedule, traj, breakdown, cumulative_infected(traj))


def _summary_text(config, dist, gd, cg, outcomes) -> str:
    lines = [
        "[network]",
        f"kind = {config.network_kind}",
        f"degree_range = {dist.k_min}-{dist.k_max}",
        f"classes = {dist.n_classes}",
        f"mean_degree = {_format(dist.mean_degree)}",
        "",
        "[grouping]",
        f"requested_groups = {config.n_groups}",
        f"achieved_groups = {gd.n_groups}",
        f"boundaries = {' '.join(str(int(b)) for b in gd.grouping.boundaries)}",
        f"control_groups = {cg.n_control}",
        f"x = {' '.join(_format(v) for v in cg.x)}",
    ]
    for o in outcomes:
        lines += [
            "",
            f"[strategy.{o.name}]",
            f"J = {_format(o.breakdown.J)}",
            f"infection_term = {_format(o.breakdown.infection_term)}",
            f"vaccination_term = {_format(o.breakdown.vaccination_term)}",
            f"treatment_term = {_format(o.breakdown.treatment_term)}",
            f"cumulative_infected = {_format(o.cumulative_infected)}",
            f"clamp_events = {o.trajectory.clamp_events}",
        ]
        if o.result is not None:
            lines += [
                f"iterations = {o.result.iterations}",
                f"converged = {o.result.converged}",
                f"gradient_norm = {_format(o.result.gradient_norm)}",
            ]
    by_name = {o.name: o for o in outcomes}
    if "optimal" in by_name and len(outcomes) > 1:
        lines += ["", "[improvements]"]
        j_opt = by_name["optimal"].breakdown.J
        for name in ("constant", "none"):
            if name in by_name:
                gain = improvement_percent(by_name[name].breakdown.J, j_opt)
                lines.append(f"optimal_vs_{name}_percent = {_format(gain)}")
    return "\n".join(lines) + "\n"


def _allocation_rows(name: str, schedule: ControlSchedule, cg, cost: CostParams):
    alloc = resource_allocation(schedule, cg, cost)
    if alloc.no_resources:
        return [(name, "none", "no_resources", 0.0)]
    m = cg.n_control
    rows = []
    for j in range(m):
        rows.append((name, "pair", f"u_{j + 1}", alloc.pair_shares[0, j]))
    for j in range(m):
        rows.append((name, "pair", f"v_{j + 1}", alloc.pair_shares[1, j]))
    for j in range(m):
        rows.append((name, "group", f"g_{j + 1}", alloc.group_shares[j]))
    rows.append((name, "split", "vaccination", alloc.strategy_shares[0]))
    rows.append((name, "split", "treatment", alloc.strategy_shares[1]))
    return rows


def run_experiment(config: ExperimentConfig) -> dict[str, StrategyOutcome]:
    """Run every configured strategy and write the report bundle.

    The output directory receives trajectories.csv (aggregate s/i/r per
    strategy), controls.csv (the optimized schedule when present, else
    the first strategy's), allocation.csv (percentage resource shares),
    summary.txt, the effective config, and history.csv whenever the
    optimizer ran. Returns the per-strategy outcomes keyed by name.
    """
    dist, gd, cg = config.build()
    outcomes = [_run_strategy(name, config, gd, cg) for name in config.strategies]
    out = config.output_dir
    os.makedirs(out, exist_ok=True)

    header = ["t"]
    columns = [config.grid.t]
    for o in outcomes:
        header += [f"s_{o.name}", f"i_{o.name}", f"r_{o.name}"]
        columns += [o.trajectory.s, o.trajectory.i, o.trajectory.r]
    _write_table(os.path.join(out, "trajectories.csv"), header, zip(*columns))

    shown = next((o for o in outcomes if o.name == "optimal"), outcomes[0])
    m = shown.schedule.n_control
    header = ["t"] + [f"u_{j + 1}" for j in range(m)] + [f"v_{j + 1}" for j in range(m)]
    columns = [config.grid.t, *shown.schedule.u, *shown.schedule.v]
    _write_table(os.path.join(out, "controls.csv"), header, zip(*columns))

    rows = []
    for o in outcomes:
        rows += _allocation_rows(o.name, o.schedule, cg, config.cost)
    _write_table(os.path.join(out, "allocation.csv"), ["strategy", "family", "label", "percent"], rows)

    _atomic_write(os.path.join(out, "summary.txt"), _summary_text(config, dist, gd, cg, outcomes))
    _atomic_write(os.path.join(out, "effective_config.ini"), config.effective_text())
    if shown.result is not None:
        tmp = os.path.join(out, "history.csv.tmp")
        write_history_csv(shown.result, tmp)
        os.replace(tmp, os.path.join(out, "history.csv"))
    return {o.name: o for o in outcomes}


def run_group_error(config: ExperimentConfig, z_min: int = 1, z_max: int | None = None):
    """Tabulate the grouping error for each group count in a range.

    Writes group_error.csv with one (z, combined relative error) row per
    requested Z and returns the rows. The range must stay within
    ``[1, number of degree classes]``.
    """
    dist = config.build_distribution()
    if z_max is None:
        z_max = dist.n_classes
    if not 1 <= z_min <= z_max <= dist.n_classes:
        raise ConfigError(
            f"group-error range [{z_min}, {z_max}] must lie within "
            f"[1, {dist.n_classes}]"
        )
    rows = [
        (z, grouping_error(dist, z, config.params, config.grid))
        for z in range(z_min, z_max + 1)
    ]
    os.makedirs(config.output_dir, exist_ok=True)
    _write_table(
        os.path.join(config.output_dir, "group_error.csv"),
        ["z", "combined_relative_error"],
        rows,
    )
    _atomic_write(
        os.path.join(config.output_dir, "effective_config.ini"), config.effective_text()
    )
    return rows


def run_sweep(config: ExperimentConfig, parameter: str, values):
    """Optimize across a parameter range and tabulate the outcomes.

    Delegates to the optimizer sweep (parameter ``beta``, ``b``, or
    ``c``) and writes sweep.csv; per-point failures appear in the error
    column instead of aborting the run. Returns the sweep points.
    """
    _, gd, cg = config.build()
    problem = OptimizationProblem(gd, cg, config.params, config.cost, config.grid)
    points = sweep(problem, parameter, values, config.solver)
    rows = [
        (
            p.value,
            p.J_optimal,
            p.J_constant,
            p.J_none,
            p.improvement_over_constant,
            p.improvement_over_none,
            p.cumulative_infected_optimal,
            p.cumulative_infected_constant,
            p.cumulative_infected_none,
            p.converged,
            p.error if p.error is not None else "",
        )
        for p in points
    ]
    os.makedirs(config.output_dir, exist_ok=True)
    _write_table(
        os.path.join(config.output_dir, "sweep.csv"),
        [
            "value",
            "J_optimal",
            "J_constant",
            "J_none",
            "improvement_over_constant",
            "improvement_over_none",
            "cumulative_infected_optimal",
            "cumulative_infected_constant",
            "cumulative_infected_none",
            "converged",
            "error",
        ],
        rows,
    )
    _atomic_write(
        os.path.join(config.output_dir, "effective_config.ini"), config.effective_text()
    )
    return points


# ---------------------------------------------------------------------------
# command line


def _load_config(args) -> ExperimentConfig:
    overrides = list(args.overrides)
    if args.output is not None:
        overrides.append(f"run.output={args.output}")
    return ExperimentConfig.from_file(args.config, overrides)


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    kept = tuple(s for s in config.strategies if s != "optimal")
    if not kept:
        raise ConfigError(
            "simulate runs heuristic strategies only; use optimize or compare "
            "for the optimal schedule"
        )
    run_experiment(replace(config, strategies=kept))
    return 0


def _cmd_optimize(args) -> int:
    config = _load_config(args)
    run_experiment(replace(config, strategies=("optimal",)))
    return 0


def _cmd_compare(args) -> int:
    run_experiment(_load_config(args))
    return 0


def _cmd_group_error(args) -> int:
    config = _load_config(args)
    run_group_error(config, z_min=args.z_min, z_max=args.z_max)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values: expected comma-separated numbers, got {args.values!r}")
    if not values:
        raise ConfigError("--values: at least one value is required")
    run_sweep(config, args.parameter, values)
    return 0


def _cmd_ingest(args) -> int:
    edges = load_edge_list(args.input)
    dist, stats = from_edge_list(edges, dedupe=not args.keep_duplicates)
    tmp = args.output + ".tmp"
    write_distribution(dist, tmp)
    os.replace(tmp, args.output)
    print(f"nodes = {stats.n_nodes}")
    print(f"edges = {stats.n_edges}")
    print(f"mean_degree = {_format(stats.mean_degree)}")
    print(f"classes = {stats.n_classes}")
    print(f"self_loops_dropped = {stats.n_self_loops}")
    print(f"duplicates_dropped = {stats.n_duplicates}")
    print(f"written = {args.output}")
    return 0


def _add_command(sub, name, help_text, func):
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.add_argument("-c", "--config", metavar="FILE", help="experiment config file")
    p.add_argument("--output", metavar="DIR", help="output directory (overrides run.output)")
    p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a single config field (repeatable)",
    )
    p.set_defaults(func=func)
    return p


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epinetopt",
        description="Vaccination/treatment scheduling experiments on heterogeneous networks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    _add_command(sub, "simulate", "run the configured heuristic strategies", _cmd_simulate)
    _add_command(sub, "optimize", "compute the optimal schedule only", _cmd_optimize)
    _add_command(
        sub, "compare", "run every configured strategy and report improvements", _cmd_compare
    )
    p = _add_command(
        sub, "group-error", "grouping-accuracy curve over a range of group counts", _cmd_group_error
    )
    p.add_argument("--z-min", type=int, default=1, help="smallest group count (default 1)")
    p.add_argument("--z-max", type=int, default=None, help="largest group count (default: all classes)")
    p = _add_command(sub, "sweep", "optimize across a parameter range", _cmd_sweep)
    p.add_argument("--parameter", required=True, choices=("beta", "b", "c"))
    p.add_argument("--values", required=True, help="comma-separated parameter values")
    p = sub.add_parser(
        "ingest",
        help="convert an edge list to a degree-distribution file",
        description="Convert a two-column edge list to a degree-distribution file.",
    )
    p.add_argument("--input", required=True, metavar="FILE", help="edge list, one edge per line")
    p.add_argument("--output", required=True, metavar="FILE", help="distribution file to write")
    p.add_argument("--keep-duplicates", action="store_true", help="count repeated edges")
    p.set_defaults(func=_cmd_ingest)
    parser.set_defaults(func=None)
    return parser


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage; remap its code
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    if args.func is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ConfigError, ParameterError, DegenerateDistributionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (OSError, IngestionError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
