"""Command-line front end.

Verbs: ``equilibria``, ``simulate``, ``sweep``, ``full-subsidy``,
``noext``, ``validate``, ``reproduce``.  Every verb is a thin adapter
over the library: numbers come from there, this module only parses
configuration, formats CSV, and maps errors to exit codes (0 ok,
1 validation failure, 2 invalid input, 3 scenario outside the supported
regime).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import closed_form, oracle, subsidy
from .closed_form import PiecewiseTrajectory
from .config import REFERENCE_PATH, ScenarioConfig, load_config
from .errors import (
    AssumptionViolationError,
    InfeasibleSubsidyError,
    InvalidParameterError,
    InvalidStepError,
    SingularParametersError,
)
from .model import ModelParams, UniformAffinity, classify_equilibria

OUTPUT_DIR_ENV = "NETADOPT_OUTPUT_DIR"

TRAJECTORY_TOL = 1e-6
COST_TOL = 1e-5
MONOTONE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "inf"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _resolve_output(name: str | None, default_name: str) -> Path:
    path = Path(name or default_name)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if not path.is_absolute() and base:
        path = Path(base) / path
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _output_dir(name: str | None) -> Path:
    base = os.environ.get(OUTPUT_DIR_ENV)
    path = Path(name) if name else Path(base) if base else Path(".")
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# Scenario construction (library calls only)
# ---------------------------------------------------------------------------


def _scenario_trajectory(config: ScenarioConfig, params: ModelParams) -> PiecewiseTrajectory:
    t0, x0 = config.t0, config.x0
    if not 0.0 <= x0 <= 1.0:
        raise InvalidParameterError(f"x0 must lie in [0, 1], got {x0}")
    if params.externality == 0.0:
        dist = params.affinity
        if config.kind == "none":
            return closed_form.noext_trajectory(dist.ccdf(params.cost), params.gamma, t0, x0)
        if config.kind in ("cls", "full"):
            level = params.cost if config.kind == "full" else config.s
            cls = subsidy.ConstantLevelSubsidy(level, config.T, start=t0)
            return subsidy.noext_cls_trajectory(dist, params.cost, params.gamma, cls, t0, x0)
        raise AssumptionViolationError(
            "externality > 0", "min_duration planning needs network effects"
        )
    if config.kind == "none":
        return closed_form.unsubsidized_trajectory(params, t0, x0)
    if config.kind == "cls":
        cls = subsidy.ConstantLevelSubsidy(config.s, config.T, start=t0)
        return subsidy.subsidized_trajectory(params, cls, t0, x0)
    if config.kind == "full":
        return subsidy.full_subsidy_analysis(params, t0, x0, config.T).trajectory
    if config.t0 != 0.0:
        raise InvalidParameterError("min_duration scenarios start at t0 = 0")
    return subsidy.min_duration_trajectory(params, x0, config.s)


def _scenario_schedule(config: ScenarioConfig, params: ModelParams):
    """The subsidy window the scenario runs under, or None."""
    if config.kind == "none":
        return None
    if config.kind == "cls":
        return subsidy.ConstantLevelSubsidy(config.s, config.T, start=config.t0)
    if config.kind == "full":
        return subsidy.ConstantLevelSubsidy(params.cost, config.T, start=config.t0)
    duration = subsidy.min_duration(params, config.x0, config.s)
    if duration is None:
        raise InfeasibleSubsidyError(
            f"level {config.s} cannot reach the tipping level"
        )
    return subsidy.ConstantLevelSubsidy(config.s, duration, start=0.0)


def _sample_times(traj: PiecewiseTrajectory, t0: float, t_end: float, step: float) -> list[float]:
    n = max(1, int(math.floor((t_end - t0) / step + 1e-9)))
    times = {t0 + i * step for i in range(n + 1)}
    times.add(t_end)
    for b in traj.breakpoints:
        if t0 < b <= t_end:
            times.add(b)
    if traj.subsidy_end is not None and t0 < traj.subsidy_end <= t_end:
        times.add(traj.subsidy_end)
    return sorted(times)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def cmd_equilibria(config: ScenarioConfig) -> int:
    params = config.params()
    report = classify_equilibria(params)
    path = _resolve_output(config.output, "equilibria.csv")
    _write_csv(path, ["level", "stability"], report.equilibria)
    print(f"case {report.case_id}")
    print(f"interior equilibrium: {_fmt(report.interior)}")
    print(f"band: [{_fmt(report.band_low)}, {_fmt(report.band_high)}]")
    for level, stability in report.equilibria:
        print(f"  {_fmt(level)}  {stability}")
    print(f"wrote {path}")
    return 0


def cmd_simulate(config: ScenarioConfig) -> int:
    params = config.params()
    traj = _scenario_trajectory(config, params)
    t_end = config.run_t_end()
    if t_end <= config.t0:
        raise InvalidParameterError("t_end must exceed t0")
    if config.kind == "min_duration" and traj.subsidy_end is not None:
        t_end = min(t_end, traj.subsidy_end)
    times = _sample_times(traj, config.t0, t_end, config.run_dt())
    sub_end = traj.subsidy_end

    def phase(t: float) -> str:
        return "subsidized" if sub_end is not None and t <= sub_end else "unsubsidized"

    path = _resolve_output(config.output, "trajectory.csv")
    _write_csv(path, ["t", "x", "phase"], ((t, traj.value(t), phase(t)) for t in times))
    print(f"{len(times)} rows on [{_fmt(config.t0)}, {_fmt(t_end)}]")
    print(f"wrote {path}")
    return 0


def cmd_sweep(config: ScenarioConfig) -> int:
    if config.kind != "min_duration":
        raise InvalidParameterError("sweep requires kind = min_duration")
    params = config.params()
    rows, frontier = subsidy.sweep(params, config.x0, grid_points=config.sweep_points)
    on_frontier = {id(r) for r in frontier.frontier}
    path = _resolve_output(config.output, "sweep.csv")
    _write_csv(
        path,
        ["s", "s_over_e", "feasible", "T_hat", "S", "regime", "method", "frontier"],
        (
            (r.level, r.normalized, r.feasible, r.duration, r.cost, r.regime,
             r.method, id(r) in on_frontier)
            for r in rows
        ),
    )
    s_hat = subsidy.min_subsidy(params, config.x0)
    pattern = subsidy.cost_sign_pattern(rows, params, config.x0)
    print(f"min feasible level: {_fmt(s_hat)} (normalized {_fmt(s_hat / params.externality)})")
    print(f"frontier rows: {len(frontier.frontier)} of {len(rows)}")
    names = ("flat/rising", "rising", "falling", "falling then rising", "rising")
    verdicts = ", ".join(
        f"{name}={'ok' if v else 'empty' if v is None else 'VIOLATED'}"
        for name, v in zip(names, pattern.verdicts)
    )
    print(f"cost slope pattern: {verdicts}")
    if pattern.dip_level is not None:
        print(f"detected cost minimizer inside the numeric range: {_fmt(pattern.dip_level)}")
    print(f"wrote {path}")
    return 0


def cmd_full_subsidy(config: ScenarioConfig) -> int:
    params = config.params()
    report = subsidy.full_subsidy_analysis(params, config.t0, config.x0, config.T)
    path = _resolve_output(config.output, "full_subsidy.csv")
    _write_csv(
        path,
        ["quantity", "value"],
        [
            ("duration_to_band_low", report.to_band_low),
            ("duration_to_interior", report.to_interior),
            ("duration_to_band_high", report.to_band_high),
            ("duration", report.duration),
            ("cost", report.cost),
            ("final_equilibrium", report.final_equilibrium),
        ],
    )
    print(f"thresholds: {_fmt(report.to_band_low)}, {_fmt(report.to_interior)}, "
          f"{_fmt(report.to_band_high)}")
    print(f"duration {_fmt(report.duration)} -> final level {_fmt(report.final_equilibrium)}, "
          f"cost {_fmt(report.cost)}")
    print(f"wrote {path}")
    return 0


def cmd_noext(config: ScenarioConfig) -> int:
    params = config.params()
    if params.externality != 0.0:
        raise InvalidParameterError("the noext verb requires externality = 0")
    dist = UniformAffinity(params.u_min, params.u_max)
    cls = subsidy.ConstantLevelSubsidy(config.s, config.T, start=config.t0)
    rows: list[tuple] = [
        ("ccdf_at_cost", dist.ccdf(params.cost)),
        ("ccdf_at_subsidized_cost", dist.ccdf(params.cost - config.s)),
        ("cls_cost", subsidy.noext_subsidy_cost(dist, params.cost, params.gamma, cls, config.x0)),
        ("cost_decreasing_condition",
         subsidy.noext_cost_decreasing_condition(dist, params.cost, config.s)),
    ]
    if config.target is not None:
        duration = subsidy.noext_required_duration(
            dist, params.cost, params.gamma, config.s, config.x0, config.target
        )
        cost_at = subsidy.noext_cost_at_target(
            dist, params.cost, params.gamma, config.s, config.x0, config.target
        )
        rows += [("required_duration", duration), ("cost_at_target", cost_at)]
    path = _resolve_output(config.output, "noext.csv")
    _write_csv(path, ["quantity", "value"], rows)
    for name, value in rows:
        print(f"{name}: {_fmt(value)}")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _check(label: str, value: float, tol: float, failures: list[str]) -> None:
    ok = value <= tol
    print(f"{label} = {value:.3e} (tol {tol:g}): {'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append(label)


def _verdict(label: str, ok: bool, failures: list[str]) -> None:
    print(f"{label}: {'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append(label)


def cmd_validate(config: ScenarioConfig) -> int:
    params = config.params()
    failures: list[str] = []
    traj = _scenario_trajectory(config, params)
    schedule = _scenario_schedule(config, params)
    t0 = config.t0
    dt = config.run_dt()
    t_end = config.run_t_end()
    if config.kind == "min_duration" and traj.subsidy_end is not None:
        # Past the window the state sits on the basin boundary, where any
        # numerical perturbation is amplified; compare inside the window.
        t_end = traj.subsidy_end
    # Align the sample grid to the horizon so no step overruns it.
    dt = (t_end - t0) / max(8, math.ceil((t_end - t0) / dt))

    sampled = oracle.integrate_ode(
        params, subsidy_schedule=schedule, t0=t0, x0=config.x0, t_end=t_end, dt=dt
    )
    deviations = [
        abs(traj.value(t) - x) for t, x in zip(sampled.times, sampled.levels)
    ]
    _check("trajectory max |closed form - rk4|", max(deviations), TRAJECTORY_TOL, failures)

    smooth_end = t_end
    for b in traj.breakpoints:
        if b > t0:
            smooth_end = min(smooth_end, b)
            break
    if smooth_end - t0 >= 8 * dt:
        smooth_end = t0 + math.floor((smooth_end - t0) / dt) * dt
        runs = {}
        for k in (1, 2, 4):
            runs[k] = oracle.integrate_ode(
                params, subsidy_schedule=schedule, t0=t0, x0=config.x0,
                t_end=smooth_end, dt=dt / k,
            )
        d1 = max(abs(a - b) for a, b in zip(runs[1].levels, runs[2].levels[::2]))
        d2 = max(abs(a - b) for a, b in zip(runs[2].levels, runs[4].levels[::2]))
        # Deviations at the rounding floor carry no order information.
        ok = d1 < 1e-12 or d2 < 1e-15 or d1 / d2 >= 8.0
        _verdict(f"rk4 self-convergence (factor {d1 / max(d2, 1e-300):.1f})", ok, failures)

    analytic_cost = _analytic_cost(config, params)
    if analytic_cost is not None and schedule is not None:
        n_cost = max(1000, math.ceil(schedule.duration / dt))
        cost_dt = schedule.duration / n_cost
        window = oracle.integrate_ode(
            params, subsidy_schedule=schedule, t0=t0, x0=config.x0,
            t_end=schedule.end, dt=cost_dt,
        )
        numeric = oracle.integrate_cost(window, schedule)
        _check("cost |analytic - quadrature|", abs(analytic_cost - numeric),
               COST_TOL, failures)

    if config.kind == "min_duration":
        rows, _ = subsidy.sweep(params, config.x0, grid_points=config.sweep_points)
        durations = [r.duration for r in rows if r.duration is not None]
        drift = max(
            (b - a for a, b in zip(durations, durations[1:])), default=0.0
        )
        _verdict(f"required-duration monotone (max increase {drift:.2e})",
                 drift <= MONOTONE_TOL, failures)
        pattern = subsidy.cost_sign_pattern(rows, params, config.x0)
        _verdict("cost slope sign pattern", pattern.all_ok, failures)

    if failures:
        print(f"FAILED: {len(failures)} check(s)")
        return 1
    print("all checks passed")
    return 0


def _analytic_cost(config: ScenarioConfig, params: ModelParams) -> float | None:
    if config.kind == "full":
        return subsidy.full_subsidy_analysis(
            params, config.t0, config.x0, config.T
        ).cost
    if config.kind == "min_duration":
        return subsidy.min_duration_cost(params, config.x0, config.s).value
    if config.kind == "cls" and params.externality == 0.0:
        cls = subsidy.ConstantLevelSubsidy(config.s, config.T, start=config.t0)
        return subsidy.noext_subsidy_cost(
            params.affinity, params.cost, params.gamma, cls, config.x0
        )
    return None


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def cmd_reproduce(example_id: int, out: str | None) -> int:
    out_dir = _output_dir(out)
    writer = {1: _reproduce_1, 2: _reproduce_2, 3: _reproduce_3, 4: _reproduce_4}
    paths = writer[example_id](out_dir)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _trajectory_rows(traj: PiecewiseTrajectory, t0: float, t_end: float, step: float):
    for t in _sample_times(traj, t0, t_end, step):
        yield t, traj.value(t)


def _reproduce_1(out_dir: Path) -> list[Path]:
    # Flat-affinity service: adoption under a half-cost subsidy for a few
    # window lengths, then the duration/outlay tradeoff toward a target.
    dist = UniformAffinity(0.0, 1.0)
    cost, gamma = 0.5, 1.0
    rows = []
    for label, duration in (("0", 0.0), ("1", 1.0), ("2", 2.0)):
        cls = subsidy.ConstantLevelSubsidy(cost, duration)
        traj = subsidy.noext_cls_trajectory(dist, cost, gamma, cls, 0.0, 0.0)
        rows += [(label, t, y) for t, y in _trajectory_rows(traj, 0.0, 8.0, 0.05)]
    always = closed_form.noext_trajectory(dist.ccdf(0.0), gamma, 0.0, 0.0)
    rows += [("inf", t, y) for t, y in _trajectory_rows(always, 0.0, 8.0, 0.05)]
    p1 = out_dir / "example1_adoption.csv"
    _write_csv(p1, ["T", "t", "y"], rows)

    wide = UniformAffinity(1.0, 6.0)
    tradeoff = []
    for s in np.linspace(-0.45, 3.0, 139):
        s = float(s)
        duration = subsidy.noext_required_duration(wide, 3.0, 1.0, s, 0.0, 0.5)
        outlay = subsidy.noext_cost_at_target(wide, 3.0, 1.0, s, 0.0, 0.5)
        tradeoff.append((s, duration, outlay))
    p2 = out_dir / "example1_duration_cost.csv"
    _write_csv(p2, ["s", "duration", "cost"], tradeoff)
    return [p1, p2]


_REGIME_CASES = (
    (1.0, 2.0, 5.0, 2.0),
    (1.0, 2.0, 1.75, 0.5),
    (1.0, 2.0, 2.5, 2.0),
    (1.0, 2.0, 1.0, 0.5),
)


def _reproduce_2(out_dir: Path) -> list[Path]:
    # Four parameter rows exercising each equilibrium regime (gamma = 1).
    table, eq_rows, paths_rows = [], [], []
    for u_min, u_max, cost, externality in _REGIME_CASES:
        params = ModelParams(u_min, u_max, cost, externality, 1.0)
        report = classify_equilibria(params)
        table.append(
            (report.case_id, u_min, u_max, cost, externality,
             report.interior, report.band_low, report.band_high)
        )
        eq_rows += [(report.case_id, lvl, st) for lvl, st in report.equilibria]
        for x0 in (0.1, 1.0 / 3.0, 2.0 / 3.0, 0.9):
            traj = closed_form.unsubsidized_trajectory(params, 0.0, x0)
            paths_rows += [
                (report.case_id, x0, t, x)
                for t, x in _trajectory_rows(traj, 0.0, 10.0, 0.05)
            ]
    p1 = out_dir / "example2_cases.csv"
    _write_csv(
        p1,
        ["case_id", "u_min", "u_max", "cost", "externality",
         "interior", "band_low", "band_high"],
        table,
    )
    p2 = out_dir / "example2_equilibria.csv"
    _write_csv(p2, ["case_id", "level", "stability"], eq_rows)
    p3 = out_dir / "example2_adoption.csv"
    _write_csv(p3, ["case_id", "x0", "t", "x"], paths_rows)
    return [p1, p2, p3]


_TIPPING_PARAMS = ModelParams(1.0, 2.0, 3.0, 3.0, 1.0 / 3.0)
_TIPPING_X0 = 0.25


def _reproduce_3(out_dir: Path) -> list[Path]:
    # Full-cost subsidy around the tipping thresholds.
    params, y0 = _TIPPING_PARAMS, _TIPPING_X0
    base = subsidy.full_subsidy_analysis(params, 0.0, y0, 0.0)
    lo, mid, hi = base.to_band_low, base.to_interior, base.to_band_high
    durations = [
        0.0, lo / 2, (lo + mid) / 2, 0.95 * mid, 1.05 * mid,
        (mid + hi) / 2, (3 * hi - mid) / 2,
    ]
    rows = [
        ("duration_to_band_low", lo),
        ("duration_to_interior", mid),
        ("duration_to_band_high", hi),
    ]
    traj_rows = []
    for i, duration in enumerate(durations, start=1):
        report = subsidy.full_subsidy_analysis(params, 0.0, y0, duration)
        rows.append((f"duration_{i}", duration))
        rows.append((f"final_equilibrium_{i}", report.final_equilibrium))
        rows.append((f"cost_{i}", report.cost))
        traj = report.trajectory
        traj_rows += [
            (f"T{i}", t, traj.value(t),
             "subsidized" if traj.subsidy_end is not None and t <= traj.subsidy_end
             else "unsubsidized")
            for t in _sample_times(traj, 0.0, 12.0, 0.06)
        ]
    p1 = out_dir / "example3_thresholds.csv"
    _write_csv(p1, ["quantity", "value"], rows)
    p2 = out_dir / "example3_adoption.csv"
    _write_csv(p2, ["duration_label", "t", "y", "phase"], traj_rows)
    return [p1, p2]


_PLANNER_PARAMS = ModelParams(1.0, 2.0, 2.5, 3.0, 1.0)


def _reproduce_4(out_dir: Path) -> list[Path]:
    # Minimum-duration planner sweeps for two starting levels.
    params = _PLANNER_PARAMS
    paths = []
    summary = []
    for y0, tag in ((0.0, "0"), (0.125, "0.125")):
        rows, frontier = subsidy.sweep(params, y0)
        on_frontier = {id(r) for r in frontier.frontier}
        p = out_dir / f"example4_sweep_y0_{tag}.csv"
        _write_csv(
            p,
            ["s", "s_over_e", "feasible", "T_hat", "S", "regime", "method", "frontier"],
            (
                (r.level, r.normalized, r.feasible, r.duration, r.cost,
                 r.regime, r.method, id(r) in on_frontier)
                for r in rows
            ),
        )
        paths.append(p)
        s_hat = subsidy.min_subsidy(params, y0)
        b1, b2, b3, b4 = subsidy.subsidy_interval_bounds(params, y0)
        pattern = subsidy.cost_sign_pattern(rows, params, y0)
        e = params.externality
        summary += [
            (f"min_subsidy[y0={tag}]", s_hat),
            (f"min_subsidy_normalized[y0={tag}]", s_hat / e),
            (f"bound_band_entry_normalized[y0={tag}]", b1 / e),
            (f"bound_band_exit_normalized[y0={tag}]", b3 / e),
            (f"bound_out_of_band_normalized[y0={tag}]", b4 / e),
            (f"max_normalized[y0={tag}]", params.cost / e),
            (f"flat_duration[y0={tag}]",
             subsidy.min_duration(params, y0, params.cost)),
            (f"cost_dip_level[y0={tag}]", pattern.dip_level),
        ]
    p_sum = out_dir / "example4_summary.csv"
    _write_csv(p_sum, ["quantity", "value"], summary)
    return paths + [p_sum]


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="scenario config file (key = value lines)")
    parser.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override a config key; repeatable",
    )
    parser.add_argument("--output", help="output file path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netadopt",
        description="Adoption dynamics and cost-subsidy planning "
                    f"(config schema: {REFERENCE_PATH})",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, help_text in (
        ("equilibria", "classify the equilibrium set"),
        ("simulate", "emit an exact trajectory as CSV"),
        ("sweep", "minimum-duration subsidy sweep with Pareto frontier"),
        ("full-subsidy", "full-cost subsidy thresholds, outcome, and cost"),
        ("noext", "no-externality subsidy analytics"),
        ("validate", "closed-form vs numeric-oracle agreement checks"),
    ):
        p = sub.add_parser(verb, help=help_text)
        _add_common(p)
    p = sub.add_parser("reproduce", help="write the bundled scenario data files")
    p.add_argument("example_id", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--output", help="output directory")
    return parser


def _config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    overrides: dict[str, str] = {}
    for item in args.set:
        if "=" not in item:
            raise InvalidParameterError(f"--set needs KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.output:
        overrides["output"] = args.output
    return load_config(args.config, overrides)


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "reproduce":
            return cmd_reproduce(args.example_id, args.output)
        config = _config_from_args(args)
        handler = {
            "equilibria": cmd_equilibria,
            "simulate": cmd_simulate,
            "sweep": cmd_sweep,
            "full-subsidy": cmd_full_subsidy,
            "noext": cmd_noext,
            "validate": cmd_validate,
        }[args.verb]
        return handler(config)
    except (InvalidParameterError, SingularParametersError, InvalidStepError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AssumptionViolationError, InfeasibleSubsidyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
