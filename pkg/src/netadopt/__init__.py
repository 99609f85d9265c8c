"""Adoption dynamics of network services and cost-subsidy planning.

A service with a per-time subscription cost, heterogeneous user
affinities, and a network effect proportional to the adoption level has
piecewise-linear mean-field dynamics with up to three equilibria.  This
package provides the exact closed-form trajectories, equilibrium
classification, subsidy planners (feasibility threshold, minimum window
length, total outlay, Pareto frontier), and an independent fixed-step
RK4 / quadrature oracle used to cross-validate all of it.
"""

from .closed_form import (
    ExponentialSegment,
    LinearDriftSegment,
    LinearODE,
    PiecewiseTrajectory,
    band_exit_times,
    band_hit_time,
    band_level,
    band_ode,
    hit_time,
    noext_trajectory,
    solve_linear,
    unsubsidized_trajectory,
)
from .errors import (
    AssumptionViolationError,
    InfeasibleSubsidyError,
    InvalidParameterError,
    InvalidStepError,
    NotAnEquilibriumError,
    SingularParametersError,
)
from .model import (
    STABLE,
    UNSTABLE,
    AffinityDistribution,
    EquilibriumReport,
    ModelParams,
    UniformAffinity,
    classify_equilibria,
    interior_equilibrium,
    stability_of,
    would_adopt,
)
from .oracle import (
    SampledTrajectory,
    brute_force_equilibria,
    finite_diff,
    first_passage,
    integrate_cost,
    integrate_ode,
)
from .subsidy import (
    ConstantLevelSubsidy,
    CostResult,
    CostSignPattern,
    FullSubsidyReport,
    ParetoFrontier,
    SubsidySweepRow,
    cost_sign_pattern,
    full_subsidy_analysis,
    min_duration,
    min_duration_cost,
    min_duration_trajectory,
    min_subsidy,
    noext_cls_trajectory,
    noext_cost_at_target,
    noext_cost_decreasing_condition,
    noext_required_duration,
    noext_subsidy_cost,
    pareto_frontier,
    subsidized_trajectory,
    subsidy_interval_bounds,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AffinityDistribution",
    "AssumptionViolationError",
    "ConstantLevelSubsidy",
    "CostResult",
    "CostSignPattern",
    "EquilibriumReport",
    "ExponentialSegment",
    "FullSubsidyReport",
    "InfeasibleSubsidyError",
    "InvalidParameterError",
    "InvalidStepError",
    "LinearDriftSegment",
    "LinearODE",
    "ModelParams",
    "NotAnEquilibriumError",
    "ParetoFrontier",
    "PiecewiseTrajectory",
    "STABLE",
    "SampledTrajectory",
    "SingularParametersError",
    "SubsidySweepRow",
    "UNSTABLE",
    "UniformAffinity",
    "band_exit_times",
    "band_hit_time",
    "band_level",
    "band_ode",
    "brute_force_equilibria",
    "classify_equilibria",
    "cost_sign_pattern",
    "finite_diff",
    "first_passage",
    "full_subsidy_analysis",
    "hit_time",
    "integrate_cost",
    "integrate_ode",
    "interior_equilibrium",
    "min_duration",
    "min_duration_cost",
    "min_duration_trajectory",
    "min_subsidy",
    "noext_cls_trajectory",
    "noext_cost_at_target",
    "noext_cost_decreasing_condition",
    "noext_required_duration",
    "noext_subsidy_cost",
    "noext_trajectory",
    "pareto_frontier",
    "solve_linear",
    "stability_of",
    "subsidized_trajectory",
    "subsidy_interval_bounds",
    "sweep",
    "unsubsidized_trajectory",
    "would_adopt",
]
