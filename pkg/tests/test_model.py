import math

import numpy as np
import pytest

from netadopt import (
    EquilibriumReport,
    InvalidParameterError,
    ModelParams,
    NotAnEquilibriumError,
    SingularParametersError,
    UniformAffinity,
    classify_equilibria,
    interior_equilibrium,
    stability_of,
    would_adopt,
)

BISTABLE = ModelParams(1.0, 2.0, 2.5, 2.0, 1.0)


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        ModelParams(2.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(1.0, 2.0, 1.0, -0.1, 1.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(1.0, 2.0, 1.0, 1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(1.0, 2.0, -1.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        ModelParams(1.0, math.inf, 1.0, 1.0, 1.0)


def test_uniform_affinity():
    dist = UniformAffinity(1.0, 6.0)
    assert dist.ccdf(0.0) == 1.0
    assert dist.ccdf(6.0) == 0.0
    assert dist.ccdf(3.0) == pytest.approx(0.6, abs=1e-15)
    assert dist.density(2.0) == pytest.approx(0.2, abs=1e-15)
    assert dist.density(7.0) == 0.0
    with pytest.raises(InvalidParameterError):
        UniformAffinity(2.0, 2.0)


def test_would_adopt_bistable_points():
    # Saturation below the band, the interior crossing, saturation above.
    assert would_adopt(0.25, BISTABLE) == 0.0
    assert would_adopt(0.5, BISTABLE) == pytest.approx(0.5, abs=1e-15)
    assert would_adopt(0.9, BISTABLE) == 1.0


def test_would_adopt_monotone_continuous():
    xs = np.linspace(-0.5, 1.5, 801)
    vals = [would_adopt(float(x), BISTABLE) for x in xs]
    assert all(b - a >= 0 for a, b in zip(vals, vals[1:]))
    gaps = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert max(gaps) <= BISTABLE.band_slope * (xs[1] - xs[0]) + 1e-12


def test_band_slope_lipschitz():
    # Inside the band the map is linear with slope externality / spread.
    lo, hi = BISTABLE.band_low(), BISTABLE.band_high()
    xs = np.linspace(lo + 1e-9, hi - 1e-9, 100)
    for a, b in zip(xs, xs[1:]):
        df = would_adopt(float(b), BISTABLE) - would_adopt(float(a), BISTABLE)
        assert df == pytest.approx(BISTABLE.band_slope * (b - a), abs=1e-12)


def test_interior_equilibrium_values():
    assert interior_equilibrium(5.0, ModelParams(1, 2, 5, 2, 1)) == pytest.approx(3.0, abs=1e-12)
    assert interior_equilibrium(2.5, ModelParams(1, 2, 2.5, 2, 1)) == pytest.approx(0.5, abs=1e-12)
    assert interior_equilibrium(2.5, ModelParams(1, 2, 2.5, 3, 1)) == pytest.approx(0.25, abs=1e-12)


def test_interior_equilibrium_singular():
    with pytest.raises(SingularParametersError):
        interior_equilibrium(1.5, ModelParams(1.0, 2.0, 1.5, 1.0, 1.0))


CASE_ROWS = [
    # (params, case, interior, band_low, band_high)
    (ModelParams(1, 2, 5.0, 2.0, 1), 1, 3.0, 1.5, 2.0),
    (ModelParams(1, 2, 1.75, 0.5, 1), 2, 0.5, -0.5, 1.5),
    (ModelParams(1, 2, 2.5, 2.0, 1), 3, 0.5, 0.25, 0.75),
    (ModelParams(1, 2, 1.0, 0.5, 1), 4, 2.0, -2.0, 0.0),
]


@pytest.mark.parametrize("params,case,interior,band_low,band_high", CASE_ROWS)
def test_classify_regime_table(params, case, interior, band_low, band_high):
    report = classify_equilibria(params)
    assert report.case_id == case
    assert report.interior == pytest.approx(interior, abs=1e-12)
    assert report.band_low == pytest.approx(band_low, abs=1e-12)
    assert report.band_high == pytest.approx(band_high, abs=1e-12)


def test_classify_equilibrium_sets():
    r1 = classify_equilibria(ModelParams(1, 2, 5.0, 2.0, 1))
    assert r1.equilibria == ((0.0, "stable"),)
    r3 = classify_equilibria(ModelParams(1, 2, 2.5, 2.0, 1))
    assert r3.equilibria == ((0.0, "stable"), (0.5, "unstable"), (1.0, "stable"))
    r4 = classify_equilibria(ModelParams(1, 2, 1.0, 0.5, 1))
    assert r4.equilibria == ((1.0, "stable"),)


def test_classify_no_externality():
    report = classify_equilibria(ModelParams(1, 2, 1.75, 0.0, 1))
    assert report.case_id == 2
    assert report.equilibria == ((0.25, "stable"),)
    assert report.band_low is None and report.band_high is None


def test_classify_residuals_tiny():
    for params, *_ in CASE_ROWS:
        for level in classify_equilibria(params).levels:
            assert abs(would_adopt(level, params) - level) <= 1e-12


def test_classify_singular_band():
    # Degenerate band with cost off the tie: strict row decides.
    low = classify_equilibria(ModelParams(1.0, 2.0, 3.0, 1.0, 1.0))
    assert low.case_id == 1 and low.levels == (0.0,) and low.interior is None
    high = classify_equilibria(ModelParams(1.0, 2.0, 1.5, 1.0, 1.0))
    assert high.case_id == 4 and high.levels == (1.0,) and high.interior is None
    with pytest.raises(SingularParametersError):
        classify_equilibria(ModelParams(1.0, 2.0, 2.0, 1.0, 1.0))


def test_stability_of():
    assert stability_of(0.5, BISTABLE) == "unstable"
    assert stability_of(0.0, BISTABLE) == "stable"
    assert stability_of(0.25, ModelParams(1, 2, 1.75, 0.0, 1)) == "stable"
    with pytest.raises(NotAnEquilibriumError):
        stability_of(0.3, BISTABLE)


def test_report_levels_properties():
    report = classify_equilibria(BISTABLE)
    assert isinstance(report, EquilibriumReport)
    assert report.levels == (0.0, 0.5, 1.0)
    assert report.stable_levels == (0.0, 1.0)


def test_case3_band_ordering():
    # In the bistable regime the band brackets the interior point in [0, 1].
    report = classify_equilibria(BISTABLE)
    assert 0.0 <= report.band_low <= report.interior <= report.band_high <= 1.0
