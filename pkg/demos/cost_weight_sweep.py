"""Effect of the control price on the optimal strategy.

Sweeps the vaccination cost weight b while holding everything else at
the defaults, re-optimizing at each value, and prints how the objective,
the epidemic burden, and the vaccination/treatment split respond: as
vaccination gets expensive the optimizer shifts spending toward
treatment and tolerates more infection.

Run from the repository root:  python demos/cost_weight_sweep.py
"""

from epinetopt import (
    CostParams,
    EpidemicParams,
    OptimizationProblem,
    TimeGrid,
    amass_control_groups,
    grouped_stats,
    optimize,
    partition_equal_mass,
    power_law_distribution,
    resource_allocation,
)

dist = power_law_distribution(2.0, 6, 105)
params = EpidemicParams(beta=0.5, gamma=0.25, i0=0.01, duration=20.0)
grid = TimeGrid(1001, params.duration)
gd = grouped_stats(dist, partition_equal_mass(dist, 21))
cg = amass_control_groups(gd, 3)

print(f"{'b':>5} {'J_optimal':>10} {'cumulative_infected':>20} "
      f"{'vaccination%':>13} {'treatment%':>11}")
for b in (0.05, 0.1, 0.25, 0.5, 1.0, 2.0):
    cost = CostParams(b=b, c=0.5)
    result = optimize(OptimizationProblem(gd, cg, params, cost, grid))
    split = resource_allocation(result.schedule, cg, cost).strategy_shares
    print(f"{b:5.2f} {result.J:10.4f} {result.breakdown.infection_term:20.4f} "
          f"{split[0]:13.2f} {split[1]:11.2f}")
