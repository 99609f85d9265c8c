"""Make-the-service-free windows and the tipping duration.

In the bistable regime, giving the service away for a while pushes
adoption up; whether the market keeps growing after the window closes
depends only on whether the level got past the tipping point.  The
report's three thresholds mark when the climbing path crosses the lower
band edge, the tipping level, and the upper band edge.
"""

from netadopt import ModelParams, full_subsidy_analysis

params = ModelParams(u_min=1.0, u_max=2.0, cost=3.0, externality=3.0, gamma=1.0 / 3.0)
start = 0.25

base = full_subsidy_analysis(params, 0.0, start, 1.0)
print(f"start level {start}; free-service path reaches")
print(f"  the band edge where adoption intent wakes up at t = {base.to_band_low:.3f}")
print(f"  the tipping level at                         t = {base.to_interior:.3f}")
print(f"  the edge where everyone would subscribe at   t = {base.to_band_high:.3f}")
print()
print(f"{'window':>8} {'ends at':>8} {'outcome':>8} {'outlay':>8}")
for factor in (0.5, 0.9, 0.99, 1.01, 1.2, 2.0):
    duration = factor * base.to_interior
    report = full_subsidy_analysis(params, 0.0, start, duration)
    level_at_end = report.trajectory.value(duration)
    print(f"{duration:>8.3f} {level_at_end:>8.3f} {report.final_equilibrium:>8.0f} "
          f"{report.cost:>8.3f}")
print()
print("a window even a hair past the tipping duration flips the market;")
print("anything shorter is money spent on a service that still dies.")
