"""Cost-subsidy analytics.

Without network effects a finite subsidy can only speed adoption up, so
the interesting quantities are the duration and outlay needed to reach a
target level.  With network effects and a bistable market, a constant
level subsidy can permanently flip the long-run outcome from the empty to
the full market; this module computes the minimum subsidy level that can
do it, the minimum duration at each level, the provider's total outlay,
and the duration/outlay Pareto frontier over a grid of levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .closed_form import (
    ExponentialSegment,
    PiecewiseTrajectory,
    band_hit_time,
    noext_trajectory,
    unsubsidized_trajectory,
)
from .errors import (
    AssumptionViolationError,
    InfeasibleSubsidyError,
    InvalidParameterError,
)
from .model import (
    AffinityDistribution,
    ModelParams,
    UniformAffinity,
    interior_equilibrium,
)

QUADRATURE_TOL = 1e-9
CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"


@dataclass(frozen=True, slots=True)
class ConstantLevelSubsidy:
    """A fixed cost reduction over a fixed window.

    Adopters pay cost - level on [start, start + duration] and the full
    cost afterwards.
    """

    level: float
    duration: float
    start: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.level) and self.level >= 0):
            raise InvalidParameterError("subsidy level must be finite and >= 0")
        if not (math.isfinite(self.duration) and self.duration >= 0):
            raise InvalidParameterError("subsidy duration must be finite and >= 0")

    @property
    def end(self) -> float:
        return self.start + self.duration

    def value_at(self, t: float) -> float:
        return self.level if self.start <= t <= self.end else 0.0


@dataclass(frozen=True, slots=True)
class FullSubsidyReport:
    """Outcome of a full (level == cost) subsidy of a given duration.

    The three thresholds are the durations at which the fully subsidized
    path reaches, in order, the lower band edge, the interior (tipping)
    equilibrium, and the upper band edge.  Each is None when that level
    is never reached.  Whether ``duration`` exceeds ``to_interior``
    decides the long-run outcome.
    """

    to_band_low: float | None
    to_interior: float | None
    to_band_high: float | None
    duration: float
    trajectory: PiecewiseTrajectory
    final_equilibrium: float
    cost: float


@dataclass(frozen=True, slots=True)
class CostResult:
    """Subsidy outlay with its evaluation route.

    ``value`` is None only on the knife edge where the subsidized level
    balances forever and the outlay grows without bound.
    """

    value: float | None
    method: str
    row: int
    quadrature_error: float | None = None


@dataclass(frozen=True, slots=True)
class SubsidySweepRow:
    """Per-level record of a minimum-duration subsidy sweep."""

    level: float
    normalized: float
    feasible: bool
    regime: int
    duration: float | None
    cost: float | None
    method: str
    quadrature_error: float | None


@dataclass(frozen=True, slots=True)
class ParetoFrontier:
    """Non-dominated sweep rows in (duration, cost), and the rest."""

    frontier: tuple[SubsidySweepRow, ...]
    dominated: tuple[SubsidySweepRow, ...]


# ---------------------------------------------------------------------------
# No-externality analytics (general affinity distribution)
# ---------------------------------------------------------------------------


def noext_cls_trajectory(
    dist: AffinityDistribution,
    cost: float,
    gamma: float,
    cls: ConstantLevelSubsidy,
    t0: float,
    y0: float,
) -> PiecewiseTrajectory:
    """Two-phase exponential path under a constant level subsidy, e == 0.

    During the window the level relaxes toward ccdf(cost - level), then
    toward ccdf(cost).
    """
    subsidized_limit = dist.ccdf(cost - cls.level)
    plain_limit = dist.ccdf(cost)
    if cls.duration == 0.0:
        return noext_trajectory(plain_limit, gamma, t0, y0)
    first = ExponentialSegment(t0, y0, limit=subsidized_limit, rate=-gamma)
    switch = t0 + cls.duration
    second = ExponentialSegment(switch, first.value(switch), limit=plain_limit, rate=-gamma)
    return PiecewiseTrajectory((first, second), subsidy_end=switch)


def noext_required_duration(
    dist: AffinityDistribution,
    cost: float,
    gamma: float,
    level: float,
    y0: float,
    target: float,
) -> float | None:
    """Window length needed to steer the e == 0 path from y0 to target.

    Feasible when the target lies strictly between y0 and the subsidized
    resting level ccdf(cost - level); a target equal to y0 needs no time.
    The subsidy level may be negative (a surcharge).
    """
    if target == y0:
        return 0.0
    resting = dist.ccdf(cost - level)
    if y0 < target < resting or resting < target < y0:
        return math.log((resting - y0) / (resting - target)) / gamma
    return None


def noext_subsidy_cost(
    dist: AffinityDistribution,
    cost: float,
    gamma: float,
    cls: ConstantLevelSubsidy,
    y0: float,
) -> float:
    """Provider outlay of a constant level subsidy without network effects."""
    resting = dist.ccdf(cost - cls.level)
    t = cls.duration
    return cls.level * (
        resting * t - (resting - y0) * (1.0 - math.exp(-gamma * t)) / gamma
    )


def noext_cost_at_target(
    dist: AffinityDistribution,
    cost: float,
    gamma: float,
    level: float,
    y0: float,
    target: float,
) -> float | None:
    """Outlay of running the subsidy exactly until the target is reached."""
    duration = noext_required_duration(dist, cost, gamma, level, y0, target)
    if duration is None:
        return None
    resting = dist.ccdf(cost - level)
    return level * (resting * duration - (target - y0) / gamma)


def noext_cost_decreasing_condition(
    dist: AffinityDistribution, cost: float, level: float
) -> bool:
    """Sufficient condition for the target-outlay to fall as level rises.

    For uniform affinities the condition collapses to u_max < cost
    wherever the subsidized cost does not saturate the whole population
    (once cost - level drops to u_min everyone subscribes and the outlay
    grows linearly with the level).  For other distributions it is
    ccdf(cost - level) < level * density(cost - level).
    """
    if isinstance(dist, UniformAffinity):
        return cost - level > dist.u_min and dist.u_max < cost
    u = cost - level
    return dist.ccdf(u) < level * dist.density(u)


# ---------------------------------------------------------------------------
# Subsidies with network effects
# ---------------------------------------------------------------------------


def subsidized_trajectory(
    params: ModelParams, cls: ConstantLevelSubsidy, t0: float, y0: float
) -> PiecewiseTrajectory:
    """Exact path under a constant level subsidy: run the plain dynamics
    at cost - level over the window, then at the full cost from wherever
    the window left the state.
    """
    if params.externality <= 0:
        raise InvalidParameterError(
            "externality must be > 0; use noext_cls_trajectory for e == 0"
        )
    if cls.level > params.cost:
        raise InvalidParameterError("subsidy level must not exceed the cost")
    if abs(cls.start - t0) > 1e-12:
        raise InvalidParameterError("subsidy window must start at t0")
    if cls.level == 0.0 or cls.duration == 0.0:
        return unsubsidized_trajectory(params, t0, y0)

    switch = t0 + cls.duration
    subsidized = unsubsidized_trajectory(
        params, t0, y0, effective_cost=params.cost - cls.level
    )
    after = unsubsidized_trajectory(params, switch, subsidized.value(switch))
    kept = tuple(seg for seg in subsidized.segments if seg.start_time < switch)
    return PiecewiseTrajectory(kept + after.segments, subsidy_end=switch)


def _require_planner_regime(params: ModelParams, y0: float) -> float:
    """Validate the bistable regime and low starting level; returns x_interior."""
    u_min, u_max = params.u_min, params.u_max
    c, e = params.cost, params.externality
    if not u_max <= c:
        raise AssumptionViolationError("u_max <= cost", f"{u_max} > {c}")
    if not c <= u_min + e:
        raise AssumptionViolationError(
            "cost <= u_min + externality", f"{c} > {u_min + e}"
        )
    if not 0.0 <= y0 <= 1.0:
        raise AssumptionViolationError("0 <= y0 <= 1", f"y0={y0}")
    x_int = interior_equilibrium(c, params)
    if not y0 < x_int:
        raise AssumptionViolationError(
            "y0 < interior equilibrium", f"{y0} >= {x_int}"
        )
    return x_int


def _log_duration(numerator: float, denominator: float, gamma: float) -> float | None:
    if denominator <= 0 or numerator <= 0:
        return None
    return math.log(numerator / denominator) / gamma


def full_subsidy_analysis(
    params: ModelParams, t0: float, y0: float, duration: float
) -> FullSubsidyReport:
    """Analyze a full-cost subsidy (level == cost) of the given duration.

    During the window everyone would adopt and the level relaxes toward
    1; the report carries the three duration thresholds, the complete
    path, the resulting long-run level, and the provider outlay
    cost * (duration - (1 - y0)(1 - exp(-gamma*duration)) / gamma).
    """
    x_int = _require_planner_regime(params, y0)
    if duration < 0:
        raise InvalidParameterError("duration must be >= 0")
    u_min, u_max = params.u_min, params.u_max
    c, e, gamma = params.cost, params.externality, params.gamma

    one_minus = 1.0 - y0
    to_interior = _log_duration(one_minus, 1.0 - x_int, gamma)
    to_band_high = _log_duration(one_minus * e, u_min + e - c, gamma)
    to_band_low = _log_duration(one_minus * e, u_max + e - c, gamma)

    cls = ConstantLevelSubsidy(level=c, duration=duration, start=t0)
    trajectory = (
        subsidized_trajectory(params, cls, t0, y0)
        if duration > 0
        else unsubsidized_trajectory(params, t0, y0)
    )
    outlay = c * (duration - one_minus * (1.0 - math.exp(-gamma * duration)) / gamma)
    return FullSubsidyReport(
        to_band_low=to_band_low,
        to_interior=to_interior,
        to_band_high=to_band_high,
        duration=duration,
        trajectory=trajectory,
        final_equilibrium=trajectory.final_level,
        cost=outlay,
    )


def min_subsidy(params: ModelParams, y0: float) -> float:
    """Smallest level able to flip the long-run outcome from 0 to 1.

    Levels at or below it leave the subsidized path in the low basin;
    anything strictly above sends it to full adoption.  In the degenerate
    band (externality == u_max - u_min) any positive level works.
    """
    if params.externality + params.u_min - params.u_max == 0.0:
        u_min, u_max, c = params.u_min, params.u_max, params.cost
        if not (u_max <= c <= u_min + params.externality):
            raise AssumptionViolationError(
                "u_max <= cost <= u_min + externality", f"cost={c}"
            )
        return 0.0
    x_int = _require_planner_regime(params, y0)
    return (params.externality + params.u_min - params.u_max) * (x_int - y0)


def _subsidized_band_exit(params: ModelParams, y0: float, level: float) -> float | None:
    """Time for the subsidized in-band path to reach its upper band edge."""
    ceff = params.cost - level
    return band_hit_time(params.band_high(ceff), 0.0, y0, ceff, params)


def min_duration(params: ModelParams, y0: float, level: float) -> float | None:
    """Shortest window after which the plain dynamics tip to full adoption.

    The window ends exactly when the subsidized path reaches the interior
    equilibrium of the unsubsidized dynamics.  Returns None when the
    level cannot get there (level <= min_subsidy).  Constant in the level
    once the whole climb happens above the subsidized band.
    """
    x_int = _require_planner_regime(params, y0)
    _check_level(params, level)
    if level <= min_subsidy(params, y0):
        return None
    e, gamma = params.externality, params.gamma
    s_norm = level / e
    to_interior = params.band_high() - x_int  # (c - u_min)/e - x_int
    to_start = params.band_high() - y0
    if s_norm <= to_interior:
        return band_hit_time(x_int, 0.0, y0, params.cost - level, params)
    if s_norm <= to_start:
        exit_time = _subsidized_band_exit(params, y0, level)
        if exit_time is None:
            # Rounding put the start a hair above the subsidized band
            # edge; the climb is then entirely out of band.
            return math.log((1.0 - y0) / (1.0 - x_int)) / gamma
        top = params.band_high(params.cost - level)
        return exit_time + math.log((1.0 - top) / (1.0 - x_int)) / gamma
    return math.log((1.0 - y0) / (1.0 - x_int)) / gamma


def min_duration_trajectory(
    params: ModelParams, y0: float, level: float
) -> PiecewiseTrajectory:
    """Subsidized path driven to the tipping level, starting at t = 0.

    The returned path is the subsidized dynamics run indefinitely; the
    planner's window is [0, min_duration(params, y0, level)], recorded in
    ``subsidy_end``.  At the window's end the value equals the interior
    equilibrium of the unsubsidized dynamics.

    Raises:
        InfeasibleSubsidyError: when the level is at or below min_subsidy.
    """
    _require_planner_regime(params, y0)
    _check_level(params, level)
    duration = min_duration(params, y0, level)
    if duration is None:
        raise InfeasibleSubsidyError(
            f"level {level} <= min_subsidy {min_subsidy(params, y0)}"
        )
    path = unsubsidized_trajectory(
        params, 0.0, y0, effective_cost=params.cost - level
    )
    return PiecewiseTrajectory(path.segments, subsidy_end=duration)


def _check_level(params: ModelParams, level: float) -> None:
    if not 0.0 <= level <= params.cost:
        raise InvalidParameterError(
            f"level must lie in [0, cost], got {level} with cost {params.cost}"
        )


def subsidy_interval_bounds(params: ModelParams, y0: float) -> tuple[float, float, float, float]:
    """Levels separating the five outlay formulas, in subsidy units.

    Returns (below which the start never enters the subsidized band,
    min_subsidy, above which the climb exits the subsidized band before
    tipping, above which the whole climb is out of band).
    """
    x_int = _require_planner_regime(params, y0)
    c = params.cost
    e = params.externality
    return (
        c - params.u_max - e * y0,
        min_subsidy(params, y0),
        c - params.u_min - e * x_int,
        c - params.u_min - e * y0,
    )


def _adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    """Adaptive Simpson quadrature; returns (integral, error bound)."""
    if b <= a:
        return 0.0, 0.0

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lmid, rmid = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lmid), f(rmid)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        err = (left + right - whole) / 15.0
        if depth >= 50 or abs(err) < tol:
            return left + right + err, abs(err)
        lv, le = recurse(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1)
        rv, re = recurse(mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1)
        return lv + rv, le + re

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def min_duration_cost(params: ModelParams, y0: float, level: float) -> CostResult:
    """Provider outlay of the minimum-duration subsidy at the given level.

    Closed forms cover four of the five level ranges; on the range where
    the climb exits the subsidized band partway the outlay is integrated
    by adaptive Simpson over the exact path (split at the band exit),
    with the reported error bound at most 1e-9.  Levels at or below
    min_subsidy pay for an unbounded window while the state settles back
    down; their outlay is still finite except exactly at min_subsidy with
    y0 > 0, reported as value None.
    """
    x_int = _require_planner_regime(params, y0)
    _check_level(params, level)
    c, e, gamma = params.cost, params.externality, params.gamma
    spread = params.u_max - params.u_min
    inv_a = spread / (e - spread)  # 1/a of the in-band dynamics
    b1, s_hat, b3, b4 = subsidy_interval_bounds(params, y0)

    if level <= b1:
        return CostResult(level * y0 / gamma, CLOSED_FORM, row=1)

    ceff = c - level
    if level <= s_hat:
        sub_int = interior_equilibrium(ceff, params)
        if sub_int - y0 <= 0.0:
            # Knife edge (up to rounding): the level balances forever.
            return CostResult(None if y0 > 0 else 0.0, CLOSED_FORM, row=2)
        low = params.band_low(ceff)
        inner = sub_int * math.log((sub_int - low) / (sub_int - y0)) - (y0 - low)
        return CostResult(level / gamma * (inv_a * inner + low), CLOSED_FORM, row=2)

    if level <= b3:
        sub_int = interior_equilibrium(ceff, params)
        if y0 - sub_int <= 0.0:
            return CostResult(None if y0 > 0 else 0.0, CLOSED_FORM, row=3)
        inner = sub_int * math.log((x_int - sub_int) / (y0 - sub_int)) + x_int - y0
        return CostResult(level / gamma * inv_a * inner, CLOSED_FORM, row=3)

    if level <= b4:
        duration = min_duration(params, y0, level)
        assert duration is not None
        path = min_duration_trajectory(params, y0, level)
        split = _subsidized_band_exit(params, y0, level)
        cut = duration if split is None else min(split, duration)
        v1, e1 = _adaptive_simpson(path.value, 0.0, cut, QUADRATURE_TOL / 2)
        v2, e2 = _adaptive_simpson(path.value, cut, duration, QUADRATURE_TOL / 2)
        return CostResult(
            level * (v1 + v2), QUADRATURE, row=4, quadrature_error=level * (e1 + e2)
        )

    inner = math.log((1.0 - y0) / (1.0 - x_int)) - (x_int - y0)
    return CostResult(level / gamma * inner, CLOSED_FORM, row=5)


def sweep(
    params: ModelParams,
    y0: float,
    s_grid: Sequence[float] | None = None,
    grid_points: int = 512,
) -> tuple[list[SubsidySweepRow], ParetoFrontier]:
    """Evaluate the minimum-duration planner over a grid of levels.

    The default grid spans [0, cost] with the analytic boundary levels
    inserted exactly.  Rows keep the grid order; the frontier keeps the
    rows not dominated in (duration, cost).
    """
    _require_planner_regime(params, y0)
    s_hat = min_subsidy(params, y0)
    if s_grid is None:
        bounds = [b for b in subsidy_interval_bounds(params, y0) if 0.0 <= b <= params.cost]
        grid = np.unique(np.concatenate([np.linspace(0.0, params.cost, grid_points), bounds]))
    else:
        grid = np.asarray(sorted(s_grid), dtype=float)
        if len(grid) and (grid[0] < 0.0 or grid[-1] > params.cost):
            raise InvalidParameterError("s_grid must lie within [0, cost]")

    rows: list[SubsidySweepRow] = []
    for s in grid:
        s = float(s)
        cost_result = min_duration_cost(params, y0, s)
        rows.append(
            SubsidySweepRow(
                level=s,
                normalized=s / params.externality,
                feasible=s > s_hat,
                regime=cost_result.row,
                duration=min_duration(params, y0, s),
                cost=cost_result.value,
                method=cost_result.method,
                quadrature_error=cost_result.quadrature_error,
            )
        )
    return rows, pareto_frontier(rows)


@dataclass(frozen=True, slots=True)
class CostSignPattern:
    """How outlay moves with the level across its five analytic ranges.

    ``verdicts`` holds one entry per range (None when the range has no
    interior grid pairs): rising on the first two (flat when y0 == 0,
    where the outlay is identically zero there), falling on the third,
    falling-then-rising on the fourth, rising on the fifth.
    ``switch_count`` counts slope sign changes inside the fourth range and
    ``dip_level`` is its empirical outlay minimizer.
    """

    verdicts: tuple[bool | None, ...]
    switch_count: int | None
    dip_level: float | None
    all_ok: bool


def cost_sign_pattern(
    rows: Sequence[SubsidySweepRow],
    params: ModelParams,
    y0: float,
    zero_tol: float = 1e-8,
) -> CostSignPattern:
    """Check the slope signs of the sweep's outlay against the expected
    pattern, range by range."""
    b1, s_hat, b3, b4 = subsidy_interval_bounds(params, y0)
    # The fourth range starts at the feasibility threshold when the
    # analytic bounds interleave (s_hat can exceed the band-exit bound).
    lo4 = max(b3, s_hat)
    intervals = [(0.0, b1), (b1, s_hat), (s_hat, b3), (lo4, b4), (b4, params.cost)]
    finite = [(r.level, r.cost) for r in rows if r.cost is not None]

    verdicts: list[bool | None] = []
    switch_count: int | None = None
    for k, (lo, hi) in enumerate(intervals, start=1):
        diffs = [
            c2 - c1
            for (s1, c1), (s2, c2) in zip(finite, finite[1:])
            if s1 > lo and s2 < hi
        ]
        if not diffs:
            verdicts.append(None)
            continue
        if k in (1, 2):
            if y0 == 0.0:
                verdicts.append(all(abs(d) <= zero_tol for d in diffs))
            else:
                verdicts.append(all(d > 0 for d in diffs))
        elif k == 3:
            verdicts.append(all(d < 0 for d in diffs))
        elif k == 5:
            verdicts.append(all(d > 0 for d in diffs))
        else:
            signs = [1 if d > zero_tol else (-1 if d < -zero_tol else 0) for d in diffs]
            nz = [s for s in signs if s != 0]
            switch_count = sum(1 for a, b in zip(nz, nz[1:]) if a != b)
            never_rises_then_falls = all(
                not (a == 1 and b == -1) for a, b in zip(nz, nz[1:])
            )
            verdicts.append(bool(nz) and never_rises_then_falls)

    inside = [(s, v) for s, v in finite if lo4 <= s <= b4]
    dip_level = min(inside, key=lambda pair: pair[1])[0] if inside else None
    return CostSignPattern(
        verdicts=tuple(verdicts),
        switch_count=switch_count,
        dip_level=dip_level,
        all_ok=all(v is not False for v in verdicts),
    )


def pareto_frontier(rows: Sequence[SubsidySweepRow]) -> ParetoFrontier:
    """Split rows into the (duration, cost) frontier and the dominated rest.

    A row dominates another when it is no worse in both objectives and
    strictly better in one; exact ties keep the smallest level.  Rows
    without a finite duration and cost never reach the frontier.
    """
    candidates = [r for r in rows if r.duration is not None and r.cost is not None]
    ranked = sorted(candidates, key=lambda r: (r.duration, r.cost, r.level))
    frontier: list[SubsidySweepRow] = []
    best_cost = math.inf
    for row in ranked:
        if frontier and row.duration == frontier[-1].duration and row.cost == frontier[-1].cost:
            continue  # exact tie collapses to the smallest level
        if row.cost < best_cost:
            frontier.append(row)
            best_cost = row.cost
    frontier_ids = {id(r) for r in frontier}
    dominated = tuple(r for r in rows if id(r) not in frontier_ids)
    return ParetoFrontier(frontier=tuple(frontier), dominated=dominated)
