import math
import random

import pytest

from bizsurv import (
    FAMILY_ORDER,
    ChangePoint,
    DomainError,
    Family,
    NoChangePointError,
    Params,
    ShapeClass,
    classify_shape,
    find_change_point,
    hazard,
    n_params,
    param_names,
    survival,
    validate_params,
)
from helpers import draw_params, pattern_class, scan_pattern

X_GRID = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


def test_family_order_covers_all():
    assert len(FAMILY_ORDER) == 9
    assert set(FAMILY_ORDER) == set(Family)


def test_param_names_arity():
    assert param_names(Family.EXP) == ("sigma",)
    assert param_names(Family.WEI) == ("alpha", "sigma")
    assert param_names(Family.GAM) == ("beta", "sigma")
    assert param_names(Family.GGD) == ("alpha", "beta", "sigma")
    assert n_params(Family.EXP) == 1
    assert n_params(Family.BUR) == 3
    for family in FAMILY_ORDER:
        assert n_params(family) == len(param_names(family))


# --- survival anchors --------------------------------------------------------


def test_survival_anchors():
    cases = [
        (Family.EXP, Params(sigma=2.0), 1.0, math.exp(-0.5)),
        (Family.WEI, Params(sigma=1.0, alpha=2.0), 1.0, math.exp(-1.0)),
        (Family.GAM, Params(sigma=2.0, beta=1.0), 1.0, math.exp(-0.5)),
        (Family.GAM, Params(sigma=1.0, beta=2.0), 1.0, 2.0 / math.e),
        (Family.GGD, Params(sigma=1.0, alpha=2.0, beta=2.0), 1.0, math.exp(-1.0)),
        (Family.PA2, Params(sigma=1.0, alpha=2.0), 1.0, 0.25),
        (Family.FSK, Params(sigma=1.0, beta=2.0), 1.0, 0.5),
        (Family.BUR, Params(sigma=1.0, alpha=1.5, beta=2.0), 1.0, 2.0 ** -1.5),
        (Family.GPL, Params(sigma=1.0, alpha=1.5, beta=0.0), 2.0, 3.0 ** -1.5),
        (Family.GPL, Params(sigma=1.0, alpha=2.0, beta=1.0), math.e - 1.0, math.exp(-1.0)),
        (Family.DAG, Params(sigma=1.0, alpha=1.0, beta=2.0), 1.0, 0.5),
        (Family.DAG, Params(sigma=1.0, alpha=1.0, beta=2.0), 2.0, 0.2),
    ]
    for family, theta, x, expected in cases:
        assert math.isclose(survival(family, theta, x), expected, rel_tol=1e-12), family


def test_hazard_anchors():
    cases = [
        (Family.EXP, Params(sigma=2.0), 3.7, 0.5),
        (Family.WEI, Params(sigma=1.0, alpha=2.0), 1.5, 3.0),
        (Family.GAM, Params(sigma=1.0, beta=2.0), 1.0, 0.5),
        (Family.PA2, Params(sigma=1.0, alpha=2.0), 1.0, 1.0),
        (Family.FSK, Params(sigma=1.0, beta=2.0), 1.0, 1.0),
        (Family.BUR, Params(sigma=1.0, alpha=3.0, beta=2.0), 1.0, 3.0),
        (Family.GPL, Params(sigma=1.0, alpha=2.0, beta=1.0), math.e - 1.0, 1.5 / math.e),
    ]
    for family, theta, x, expected in cases:
        assert math.isclose(hazard(family, theta, x), expected, rel_tol=1e-12), family


def test_survival_boundary_values():
    rng = random.Random(11)
    for family in FAMILY_ORDER:
        for _ in range(5):
            theta = draw_params(family, rng)
            assert survival(family, theta, 0.0) == 1.0
            assert survival(family, theta, math.inf) == 0.0
            values = [survival(family, theta, x) for x in X_GRID]
            for v in values:
                assert 0.0 <= v <= 1.0
            for lo, hi in zip(values, values[1:]):
                assert hi <= lo + 1e-15


def test_hazard_positive():
    rng = random.Random(12)
    for family in FAMILY_ORDER:
        for _ in range(5):
            theta = draw_params(family, rng)
            for x in X_GRID:
                assert hazard(family, theta, x) > 0.0


# --- nested reductions -------------------------------------------------------


def _assert_same_distribution(fam_a, theta_a, fam_b, theta_b):
    for x in X_GRID:
        sa = survival(fam_a, theta_a, x)
        sb = survival(fam_b, theta_b, x)
        assert math.isclose(sa, sb, rel_tol=1e-12, abs_tol=1e-300), (fam_a, fam_b, x)
        ha = hazard(fam_a, theta_a, x)
        hb = hazard(fam_b, theta_b, x)
        assert math.isclose(ha, hb, rel_tol=1e-9), (fam_a, fam_b, x)


def test_nested_reductions():
    rng = random.Random(20260401)
    for _ in range(10):
        a = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
        b = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
        s = math.exp(rng.uniform(math.log(0.3), math.log(8.0)))
        _assert_same_distribution(
            Family.GGD, Params(sigma=s, alpha=1.0, beta=b), Family.GAM, Params(sigma=s, beta=b)
        )
        _assert_same_distribution(
            Family.GGD, Params(sigma=s, alpha=a, beta=a), Family.WEI, Params(sigma=s, alpha=a)
        )
        _assert_same_distribution(
            Family.GGD, Params(sigma=s, alpha=1.0, beta=1.0), Family.EXP, Params(sigma=s)
        )
        _assert_same_distribution(
            Family.BUR, Params(sigma=s, alpha=a, beta=1.0), Family.PA2, Params(sigma=s, alpha=a)
        )
        _assert_same_distribution(
            Family.BUR, Params(sigma=s, alpha=1.0, beta=b), Family.FSK, Params(sigma=s, beta=b)
        )
        _assert_same_distribution(
            Family.GPL, Params(sigma=s, alpha=a, beta=0.0), Family.PA2, Params(sigma=s, alpha=a)
        )


# --- hazard consistency with survival ---------------------------------------


def test_hazard_matches_log_survival_slope():
    rng = random.Random(99)
    for family in FAMILY_ORDER:
        for _ in range(8):
            theta = draw_params(family, rng)
            for x in (0.3, 1.1, 4.0):
                delta = x * 1e-6
                s_lo = survival(family, theta, x - delta)
                s_hi = survival(family, theta, x + delta)
                if s_hi <= 0.0 or s_lo <= 0.0:
                    continue
                slope = (math.log(s_lo) - math.log(s_hi)) / (2.0 * delta)
                h = hazard(family, theta, x)
                assert math.isclose(h, slope, rel_tol=1e-4, abs_tol=1e-12), (family, theta, x)


# --- parameter and argument validation ---------------------------------------


def test_validate_params_rejects_bad_vectors():
    with pytest.raises(DomainError):
        validate_params(Family.EXP, Params(sigma=0.0))
    with pytest.raises(DomainError):
        validate_params(Family.EXP, Params(sigma=-1.0))
    with pytest.raises(DomainError):
        validate_params(Family.EXP, Params(sigma=math.nan))
    # extra parameter the family does not use
    with pytest.raises(DomainError):
        validate_params(Family.EXP, Params(sigma=1.0, alpha=2.0))
    # missing parameter
    with pytest.raises(DomainError):
        validate_params(Family.WEI, Params(sigma=1.0))
    with pytest.raises(DomainError):
        validate_params(Family.WEI, Params(sigma=1.0, alpha=0.0))
    # GPL allows beta in (-1, inf) but nothing at or below -1
    validate_params(Family.GPL, Params(sigma=1.0, alpha=1.0, beta=-0.5))
    with pytest.raises(DomainError):
        validate_params(Family.GPL, Params(sigma=1.0, alpha=1.0, beta=-1.0))
    with pytest.raises(DomainError):
        validate_params(Family.BUR, Params(sigma=1.0, alpha=1.0, beta=-2.0))


def test_function_argument_domains():
    theta = Params(sigma=1.0)
    with pytest.raises(DomainError):
        survival(Family.EXP, theta, -0.5)
    with pytest.raises(DomainError):
        survival(Family.EXP, theta, math.nan)
    with pytest.raises(DomainError):
        hazard(Family.EXP, theta, 0.0)
    with pytest.raises(DomainError):
        hazard(Family.EXP, theta, math.inf)


# --- shape classification ----------------------------------------------------


def test_known_shape_calls():
    assert classify_shape(Family.EXP, Params(sigma=3.0)).shape_class is ShapeClass.CFR
    assert classify_shape(Family.WEI, Params(sigma=1.0, alpha=0.5)).shape_class is ShapeClass.DFR
    assert classify_shape(Family.WEI, Params(sigma=1.0, alpha=2.0)).shape_class is ShapeClass.IFR
    assert classify_shape(Family.WEI, Params(sigma=1.0, alpha=1.0)).shape_class is ShapeClass.CFR
    assert classify_shape(Family.PA2, Params(sigma=1.0, alpha=2.0)).shape_class is ShapeClass.DFR
    assert classify_shape(Family.GAM, Params(sigma=1.0, beta=0.5)).shape_class is ShapeClass.DFR
    assert classify_shape(Family.GAM, Params(sigma=1.0, beta=3.0)).shape_class is ShapeClass.IFR
    assert classify_shape(Family.FSK, Params(sigma=1.0, beta=0.8)).shape_class is ShapeClass.DFR
    assert classify_shape(Family.FSK, Params(sigma=1.0, beta=2.0)).shape_class is ShapeClass.UBT


def test_classify_matches_scan_oracle():
    rng = random.Random(20260814)
    for family in FAMILY_ORDER:
        for _ in range(20):
            theta = draw_params(family, rng)
            got = classify_shape(family, theta).shape_class.value
            expected = pattern_class(scan_pattern(family, theta))
            assert expected is not None, (family, theta)
            assert got == expected, (family, theta)


def test_fsk_analytic_change_point():
    # Log-logistic hazard peaks at sigma * (beta - 1)^(1/beta) for beta > 1.
    report = classify_shape(Family.FSK, Params(sigma=1.0, beta=2.0))
    assert report.shape_class is ShapeClass.UBT
    assert report.change_point_months == pytest.approx(12.0, abs=0.01)
    assert not report.change_point_beyond_horizon

    report = classify_shape(Family.FSK, Params(sigma=2.0, beta=3.0))
    expected_months = 2.0 * 2.0 ** (1.0 / 3.0) * 12.0
    assert report.change_point_months == pytest.approx(expected_months, abs=0.01)


def test_bur_change_point_ignores_alpha():
    # alpha scales the Burr hazard without moving its mode
    r1 = classify_shape(Family.BUR, Params(sigma=1.0, alpha=0.5, beta=2.0))
    r2 = classify_shape(Family.BUR, Params(sigma=1.0, alpha=5.0, beta=2.0))
    assert r1.shape_class is ShapeClass.UBT
    assert r1.change_point_months == pytest.approx(12.0, abs=0.01)
    assert r2.change_point_months == pytest.approx(12.0, abs=0.01)


def test_change_point_beyond_horizon():
    cp = find_change_point(
        Family.FSK, Params(sigma=1.0, beta=2.0), search_horizon_years=0.5, kind="max"
    )
    assert cp == ChangePoint(months=6.0, beyond_horizon=True)


def test_monotone_hazards_have_no_change_point():
    with pytest.raises(NoChangePointError):
        find_change_point(Family.EXP, Params(sigma=1.0))
    with pytest.raises(NoChangePointError):
        find_change_point(Family.WEI, Params(sigma=1.0, alpha=2.0))
    with pytest.raises(NoChangePointError):
        find_change_point(Family.PA2, Params(sigma=1.0, alpha=1.0))


def test_change_point_is_local_extremum():
    rng = random.Random(5150)
    checked = 0
    for family in (Family.FSK, Family.BUR, Family.DAG, Family.GGD):
        for _ in range(20):
            theta = draw_params(family, rng)
            report = classify_shape(family, theta)
            if report.change_point_months is None or report.change_point_beyond_horizon:
                continue
            months = report.change_point_months
            x0 = months / 12.0
            # probe outside the 0.01-month reporting tolerance of the extremum
            rel = min(0.5, max(1e-3, 0.05 / months))
            h0 = hazard(family, theta, x0)
            h_lo = hazard(family, theta, x0 * (1.0 - rel))
            h_hi = hazard(family, theta, x0 * (1.0 + rel))
            slack = 1e-9 * abs(h0)
            if report.shape_class in (ShapeClass.UBT, ShapeClass.BT_UBT):
                assert h0 >= max(h_lo, h_hi) - slack, (family, theta)
            else:
                assert h0 <= min(h_lo, h_hi) + slack, (family, theta)
            checked += 1
    assert checked >= 10


def test_classify_rejects_invalid_params():
    with pytest.raises(DomainError):
        classify_shape(Family.WEI, Params(sigma=1.0))
    with pytest.raises(DomainError):
        find_change_point(Family.FSK, Params(sigma=1.0, beta=2.0), search_horizon_years=0.0)
    with pytest.raises(DomainError):
        find_change_point(Family.FSK, Params(sigma=1.0, beta=2.0), kind="sideways")
