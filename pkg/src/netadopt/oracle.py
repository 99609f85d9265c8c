"""Independent numerical ground truth for the closed forms.

Fixed-step RK4 integration of the raw dynamics, composite-Simpson cost
integration over the samples, a brute-force fixed-point scan, central
differences, and first-passage detection.  Nothing here touches the
closed-form machinery, so agreement between the two routes is meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParameterError, InvalidStepError
from .model import (
    STABLE,
    UNSTABLE,
    AffinityDistribution,
    ModelParams,
    Stability,
)

DEFAULT_STEP_SCALE = 1e-3  # dt * gamma for default integrations
MAX_STEP_SCALE = 1e-2
DEFAULT_HORIZON_SCALE = 60.0  # (t_end - t0) * gamma for limit checks

Schedule = Callable[[float], float]


@dataclass(frozen=True, eq=False)
class SampledTrajectory:
    """Uniformly sampled adoption path."""

    start_time: float
    dt: float
    levels: np.ndarray

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise InvalidStepError("dt must be > 0")

    @property
    def times(self) -> np.ndarray:
        return self.start_time + self.dt * np.arange(len(self.levels))

    @property
    def end_time(self) -> float:
        return self.start_time + self.dt * (len(self.levels) - 1)


def _rk4_span(
    f: Callable[[float, float], float], t: float, x: float, t_next: float
) -> float:
    """One RK4 step over [t, t_next] for a field smooth on that span."""
    h = t_next - t
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t_next, x + h * k3)
    return x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _rk4_const_cost(ccdf, ceff: float, e: float, gamma: float, x: float, h: float) -> float:
    """One RK4 step of xdot = gamma*(ccdf(ceff - e*x) - x), autonomous."""
    if h == 0.0:
        return x
    k1 = gamma * (ccdf(ceff - e * x) - x)
    x2 = x + 0.5 * h * k1
    k2 = gamma * (ccdf(ceff - e * x2) - x2)
    x3 = x + 0.5 * h * k2
    k3 = gamma * (ccdf(ceff - e * x3) - x3)
    x4 = x + h * k3
    k4 = gamma * (ccdf(ceff - e * x4) - x4)
    return x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_ode(
    params: ModelParams,
    dist: AffinityDistribution | None = None,
    subsidy_schedule: Schedule | None = None,
    t0: float = 0.0,
    x0: float = 0.0,
    t_end: float | None = None,
    dt: float | None = None,
    breakpoints: Sequence[float] = (),
) -> SampledTrajectory:
    """Fixed-step RK4 samples of xdot = gamma*(ccdf(c - s(t) - e*x) - x).

    With no schedule this integrates the plain dynamics.  Steps that
    straddle a schedule breakpoint (a subsidy switching on or off) are
    split there, so each RK4 evaluation sees a smooth field; the sample
    grid itself stays uniform.

    Args:
        params: Market parameters (supply cost, externality, gamma).
        dist: Affinity distribution; defaults to the uniform one implied
            by params.
        subsidy_schedule: Cost reduction s(t), or None for no subsidy.
            Objects with ``level``/``start``/``end`` attributes (constant
            level subsidies) contribute their switch times automatically.
        breakpoints: Extra known discontinuity times of the schedule.

    Raises:
        InvalidStepError: when dt*gamma exceeds 1e-2 or t_end <= t0.
    """
    gamma = params.gamma
    if dt is None:
        dt = DEFAULT_STEP_SCALE / gamma
    if t_end is None:
        t_end = t0 + DEFAULT_HORIZON_SCALE / gamma
    if dt <= 0 or dt * gamma > MAX_STEP_SCALE * (1 + 1e-12):
        raise InvalidStepError(f"need 0 < dt*gamma <= {MAX_STEP_SCALE}, got {dt * gamma}")
    if t_end <= t0:
        raise InvalidStepError("t_end must exceed t0")

    ccdf = (dist or params.affinity).ccdf
    cost, e = params.cost, params.externality

    breaks = set(float(b) for b in breakpoints)
    piecewise_constant = False
    if subsidy_schedule is None:
        schedule: Schedule = lambda t: 0.0
    else:
        schedule = _as_callable(subsidy_schedule)
        start = getattr(subsidy_schedule, "start", None)
        end = getattr(subsidy_schedule, "end", None)
        piecewise_constant = start is not None and end is not None
        if start is not None:
            breaks.add(float(start))
        if end is not None:
            breaks.add(float(end))
    n = max(1, round((t_end - t0) / dt))
    t_end = t0 + n * dt  # snap to a whole number of steps
    cuts = sorted(b for b in breaks if t0 < b < t_end)
    levels = np.empty(n + 1)
    levels[0] = x0

    if subsidy_schedule is None or piecewise_constant:
        # Constant effective cost per phase: integrate phase by phase with
        # a tight loop, splitting the straddling steps at the exact switch
        # times so every RK4 stage sees a smooth field.
        edges = [t0, *cuts, t_end]
        x, t, i = x0, t0, 1
        for a, b in zip(edges, edges[1:]):
            ceff = cost - schedule(0.5 * (a + b))
            while i <= n:
                t_next = t0 + i * dt
                if t_next > b:
                    break
                x = _rk4_const_cost(ccdf, ceff, e, gamma, x, t_next - t)
                t = t_next
                levels[i] = x
                i += 1
            if t < b:
                x = _rk4_const_cost(ccdf, ceff, e, gamma, x, b - t)
                t = b
        return SampledTrajectory(start_time=t0, dt=dt, levels=levels)

    def field(t: float, x: float) -> float:
        return gamma * (ccdf(cost - schedule(t) - e * x) - x)

    x, t = x0, t0
    for i in range(1, n + 1):
        t_next = t0 + i * dt
        for b in [b for b in cuts if t < b < t_next]:
            x = _rk4_span(field, t, x, b)
            t = b
        x = _rk4_span(field, t, x, t_next)
        t = t_next
        levels[i] = x
    return SampledTrajectory(start_time=t0, dt=dt, levels=levels)


def _as_callable(schedule) -> Schedule:
    if callable(schedule):
        return schedule
    return schedule.value_at


def _composite_simpson(y: np.ndarray, dx: float) -> float:
    """Composite Simpson over uniform samples; 3/8 rule absorbs odd tails."""
    n = len(y) - 1
    if n <= 0:
        return 0.0
    if n == 1:
        return 0.5 * dx * (y[0] + y[1])
    total = 0.0
    if n % 2 == 1:
        # Simpson 3/8 on the last three intervals, regular rule before.
        total += 3.0 * dx / 8.0 * (y[n - 3] + 3 * y[n - 2] + 3 * y[n - 1] + y[n])
        y = y[: n - 2]
        n -= 3
        if n == 0:
            return total
    total += dx / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-2:2]))
    return float(total)


def integrate_cost(sampled: SampledTrajectory, subsidy_schedule) -> float:
    """Total provider outlay: integral of s(t) * x(t) over the samples.

    For a constant level subsidy the integral is split at the window end;
    a window end falling between samples is closed with a trapezoid on
    the interpolated remainder.
    """
    if subsidy_schedule is None:
        return 0.0
    times = sampled.times
    levels = sampled.levels
    start = getattr(subsidy_schedule, "start", None)
    end = getattr(subsidy_schedule, "end", None)
    level = getattr(subsidy_schedule, "level", None)
    if start is not None and end is not None and level is not None:
        if level == 0.0:
            return 0.0
        hi = min(end, sampled.end_time)
        lo = max(start, sampled.start_time)
        if hi <= lo:
            return 0.0
        i_lo = int(math.ceil((lo - sampled.start_time) / sampled.dt - 1e-9))
        i_hi = int(math.floor((hi - sampled.start_time) / sampled.dt + 1e-9))
        total = _composite_simpson(levels[i_lo : i_hi + 1], sampled.dt)
        if times[i_hi] < hi:  # partial trailing interval
            x_hi = np.interp(hi, times, levels)
            total += 0.5 * (levels[i_hi] + x_hi) * (hi - times[i_hi])
        if times[i_lo] > lo:  # partial leading interval
            x_lo = np.interp(lo, times, levels)
            total += 0.5 * (x_lo + levels[i_lo]) * (times[i_lo] - lo)
        return float(level * total)
    schedule = _as_callable(subsidy_schedule)
    f = np.array([schedule(t) * x for t, x in zip(times, levels)])
    return _composite_simpson(f, sampled.dt)


def brute_force_equilibria(
    params: ModelParams, grid_n: int = 2000
) -> list[tuple[float, Stability]]:
    """Fixed points of would_adopt on [0, 1] by sign-change scan.

    Scans would_adopt(x) - x on a uniform grid, refines each sign change
    by bisection to 1e-12, and reads stability off the sign of the
    residual on either side.
    """
    if grid_n < 1000:
        raise InvalidParameterError("grid_n must be >= 1000")
    spread = params.u_max - params.u_min
    c, e = params.cost, params.externality

    def g(x: float) -> float:
        return min(1.0, max(0.0, (params.u_max - c + e * x) / spread)) - x

    xs = np.linspace(0.0, 1.0, grid_n + 1)
    gs = np.minimum(1.0, np.maximum(0.0, (params.u_max - c + e * xs) / spread)) - xs

    roots: list[float] = []
    for i in range(grid_n):
        if gs[i] == 0.0:
            roots.append(float(xs[i]))
        elif gs[i] * gs[i + 1] < 0.0:
            lo, hi = float(xs[i]), float(xs[i + 1])
            glo = gs[i]
            while hi - lo > 1e-13:
                mid = 0.5 * (lo + hi)
                gm = g(mid)
                if gm == 0.0:
                    lo = hi = mid
                    break
                if glo * gm < 0.0:
                    hi = mid
                else:
                    lo, glo = mid, gm
            roots.append(0.5 * (lo + hi))
    if gs[-1] == 0.0:
        roots.append(1.0)

    merged: list[float] = []
    for r in sorted(roots):
        if not merged or r - merged[-1] > 1e-9:
            merged.append(r)

    out: list[tuple[float, Stability]] = []
    delta = 1e-6
    for r in merged:
        left_ok = r < delta or g(r - delta) > 0
        right_ok = r > 1 - delta or g(r + delta) < 0
        out.append((r, STABLE if (left_ok and right_ok) else UNSTABLE))
    return out


def finite_diff(f: Callable[[float], float], at: float, h: float = 1e-6) -> float:
    """Central difference (f(at+h) - f(at-h)) / (2h)."""
    return (f(at + h) - f(at - h)) / (2.0 * h)


def first_passage(sampled: SampledTrajectory, target: float) -> float | None:
    """Linear-interpolated first time the samples cross the target level.

    Returns None when the target is never crossed before the end of the
    samples.
    """
    levels = sampled.levels
    d0 = levels[0] - target
    if d0 == 0.0:
        return sampled.start_time
    sign_changes = np.nonzero(np.diff(np.sign(levels - target)))[0]
    if len(sign_changes) == 0:
        return None
    i = int(sign_changes[0])
    x_i, x_j = levels[i], levels[i + 1]
    frac = (target - x_i) / (x_j - x_i)
    return sampled.start_time + sampled.dt * (i + float(frac))
