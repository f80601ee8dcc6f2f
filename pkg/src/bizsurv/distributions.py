"""Parametric lifetime families for establishment survival modeling.

Nine families share one interface: a survival function S(x), a hazard
function h(x), and a hazard-shape classification over the classes
constant (CFR), increasing (IFR), decreasing (DFR), upside-down bathtub
(UBT), bathtub (BT) and bathtub-then-upside-down-bathtub (BT+UBT).

Parameters live in a single ``Params`` record: ``alpha`` and ``beta`` are
shapes, ``sigma`` is the scale in years.  Each family uses a fixed subset
(see ``param_names``); all must be positive except GPL's beta, which only
needs beta > -1.  Times are in years; change-points are reported in
months.

Hazards are evaluated in log space wherever the naive formula would
overflow or cancel (gamma-type tails, Dagum near zero), so monotonicity
scans stay meaningful across the whole x range used by shape
classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NoChangePointError
from .special import _gamma_tail_parts, regularized_upper_gamma

__all__ = [
    "FAMILY_ORDER",
    "ChangePoint",
    "Family",
    "Params",
    "ShapeClass",
    "ShapeReport",
    "classify_shape",
    "find_change_point",
    "hazard",
    "n_params",
    "param_names",
    "survival",
    "validate_params",
]


class Family(str, enum.Enum):
    """Tags for the nine supported lifetime families."""

    EXP = "EXP"  # exponential
    WEI = "WEI"  # Weibull
    GAM = "GAM"  # gamma
    GGD = "GGD"  # generalized gamma
    PA2 = "PA2"  # Pareto type II (Lomax)
    FSK = "FSK"  # Fisk (log-logistic)
    BUR = "BUR"  # Burr XII
    GPL = "GPL"  # generalized power law
    DAG = "DAG"  # Dagum

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


#: Canonical family ordering used for deterministic iteration and tie-breaks.
FAMILY_ORDER: tuple[Family, ...] = (
    Family.EXP,
    Family.WEI,
    Family.GAM,
    Family.GGD,
    Family.PA2,
    Family.FSK,
    Family.BUR,
    Family.GPL,
    Family.DAG,
)


class ShapeClass(str, enum.Enum):
    """Qualitative hazard shapes."""

    CFR = "CFR"
    IFR = "IFR"
    DFR = "DFR"
    UBT = "UBT"
    BT = "BT"
    BT_UBT = "BT+UBT"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True, kw_only=True)
class Params:
    """Parameter vector; unused fields stay None for families that omit them."""

    sigma: float
    alpha: float | None = None
    beta: float | None = None


@dataclass(frozen=True)
class ShapeReport:
    """Shape classification, with the hazard change-point when one exists."""

    shape_class: ShapeClass
    change_point_months: float | None = None
    change_point_beyond_horizon: bool = False


@dataclass(frozen=True)
class ChangePoint:
    """Location of a hazard extremum in months since birth."""

    months: float
    beyond_horizon: bool = False


def _exp(w: float) -> float:
    try:
        return math.exp(w)
    except OverflowError:
        return math.inf


def _pow(base: float, e: float) -> float:
    # base > 0; maps overflow to inf instead of raising
    try:
        return base**e
    except OverflowError:
        return math.inf


def _log1p_pow(u: float, e: float) -> float:
    """log(1 + u**e) for u > 0, robust when u**e overflows."""
    w = e * math.log(u)
    if w > 709.0:
        return w
    return math.log1p(math.exp(w))


# --- survival functions ----------------------------------------------------


def _sv_exp(p: Params, x: float) -> float:
    return _exp(-(x / p.sigma))


def _sv_wei(p: Params, x: float) -> float:
    return _exp(-_pow(x / p.sigma, p.alpha))


def _sv_gam(p: Params, x: float) -> float:
    return regularized_upper_gamma(p.beta, x / p.sigma)


def _sv_ggd(p: Params, x: float) -> float:
    z = _pow(x / p.sigma, p.alpha)
    if math.isinf(z):
        return 0.0
    return regularized_upper_gamma(p.beta / p.alpha, z)


def _sv_pa2(p: Params, x: float) -> float:
    return _exp(-p.alpha * math.log1p(x / p.sigma))


def _sv_fsk(p: Params, x: float) -> float:
    t = _pow(x / p.sigma, p.beta)
    return 0.0 if math.isinf(t) else 1.0 / (1.0 + t)


def _sv_bur(p: Params, x: float) -> float:
    return _exp(-p.alpha * _log1p_pow(x / p.sigma, p.beta))


def _sv_gpl(p: Params, x: float) -> float:
    ell = math.log1p(x / p.sigma)
    return _exp(-p.alpha * _pow(ell, p.beta + 1.0) / _pow(1.0 + ell, p.beta))


def _sv_dag(p: Params, x: float) -> float:
    return -math.expm1(-p.alpha * _log1p_pow(x / p.sigma, -p.beta))


# --- hazard functions ------------------------------------------------------


def _hz_exp(p: Params, x: float) -> float:
    return 1.0 / p.sigma


def _hz_wei(p: Params, x: float) -> float:
    return (p.alpha / p.sigma) * _pow(x / p.sigma, p.alpha - 1.0)


def _gamma_type_hazard(a: float, z: float, u: float, shape: float, sigma: float) -> float:
    """Hazard of GAM (shape=1, z=u) and GGD (z=u**alpha, a=beta/alpha).

    On the continued-fraction branch the e^{-z} z^a factor cancels against
    the tail analytically, leaving shape / (sigma * u * C); the series
    branch assembles the ratio in log space.
    """
    if math.isinf(z):
        # deep Weibull-like tail: h -> (shape/sigma) * u**(shape-1)
        return (shape / sigma) * _pow(u, shape - 1.0)
    cf_branch, value = _gamma_tail_parts(a, z)
    if cf_branch:
        return shape / (sigma * u * value)
    if value <= 0.0:
        return math.inf
    log_h = (
        math.log(shape)
        - math.log(sigma)
        + (a * shape - 1.0) * math.log(u)
        - z
        - math.lgamma(a)
        - math.log(value)
    )
    return _exp(log_h)


def _hz_gam(p: Params, x: float) -> float:
    u = x / p.sigma
    return _gamma_type_hazard(p.beta, u, u, 1.0, p.sigma)


def _hz_ggd(p: Params, x: float) -> float:
    u = x / p.sigma
    return _gamma_type_hazard(p.beta / p.alpha, _pow(u, p.alpha), u, p.alpha, p.sigma)


def _hz_pa2(p: Params, x: float) -> float:
    return (p.alpha / p.sigma) / (1.0 + x / p.sigma)


def _hz_fsk(p: Params, x: float) -> float:
    u = x / p.sigma
    return (p.beta / p.sigma) / (_pow(u, 1.0 - p.beta) + u)


def _hz_bur(p: Params, x: float) -> float:
    u = x / p.sigma
    return (p.alpha * p.beta / p.sigma) / (_pow(u, 1.0 - p.beta) + u)


def _hz_gpl(p: Params, x: float) -> float:
    u = x / p.sigma
    ell = math.log1p(u)
    num = (p.alpha / p.sigma) * (p.beta + 1.0 + ell) * _pow(ell, p.beta)
    return num / ((1.0 + u) * _pow(1.0 + ell, p.beta + 1.0))


def _hz_dag(p: Params, x: float) -> float:
    u = x / p.sigma
    ln1pt = _log1p_pow(u, -p.beta)
    log_num = (
        math.log(p.alpha * p.beta / p.sigma)
        - (p.beta + 1.0) * math.log(u)
        - (p.alpha + 1.0) * ln1pt
    )
    if ln1pt == 0.0:
        # u**-beta underflowed; S ~ alpha * u**-beta, so h -> beta / (sigma * u)
        return _exp(log_num - math.log(p.alpha) + p.beta * math.log(u))
    return _exp(log_num) / -math.expm1(-p.alpha * ln1pt)


# --- shape rules -----------------------------------------------------------


def _rule_exp(p: Params) -> ShapeClass:
    return ShapeClass.CFR


def _rule_wei(p: Params) -> ShapeClass:
    if p.alpha == 1.0:
        return ShapeClass.CFR
    return ShapeClass.DFR if p.alpha < 1.0 else ShapeClass.IFR


def _rule_gam(p: Params) -> ShapeClass:
    if p.beta == 1.0:
        return ShapeClass.CFR
    return ShapeClass.DFR if p.beta < 1.0 else ShapeClass.IFR


def _rule_ggd(p: Params) -> ShapeClass:
    a, b = p.alpha, p.beta
    if b < 1.0:
        return ShapeClass.DFR if a <= 1.0 else ShapeClass.BT
    if b == 1.0:
        if a == 1.0:
            return ShapeClass.CFR
        return ShapeClass.DFR if a < 1.0 else ShapeClass.IFR
    return ShapeClass.UBT if a < 1.0 else ShapeClass.IFR


def _rule_pa2(p: Params) -> ShapeClass:
    return ShapeClass.DFR


def _rule_fsk(p: Params) -> ShapeClass:
    return ShapeClass.DFR if p.beta <= 1.0 else ShapeClass.UBT


def _rule_bur(p: Params) -> ShapeClass:
    return ShapeClass.DFR if p.beta <= 1.0 else ShapeClass.UBT


def _rule_gpl(p: Params) -> ShapeClass:
    return ShapeClass.DFR if p.beta <= 0.0 else ShapeClass.UBT


# --- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class _FamilyOps:
    names: tuple[str, ...]
    survival: Callable[[Params, float], float]
    hazard: Callable[[Params, float], float]
    rule: Callable[[Params], ShapeClass] | None  # None -> classify numerically


_OPS: dict[Family, _FamilyOps] = {
    Family.EXP: _FamilyOps(("sigma",), _sv_exp, _hz_exp, _rule_exp),
    Family.WEI: _FamilyOps(("alpha", "sigma"), _sv_wei, _hz_wei, _rule_wei),
    Family.GAM: _FamilyOps(("beta", "sigma"), _sv_gam, _hz_gam, _rule_gam),
    Family.GGD: _FamilyOps(("alpha", "beta", "sigma"), _sv_ggd, _hz_ggd, _rule_ggd),
    Family.PA2: _FamilyOps(("alpha", "sigma"), _sv_pa2, _hz_pa2, _rule_pa2),
    Family.FSK: _FamilyOps(("beta", "sigma"), _sv_fsk, _hz_fsk, _rule_fsk),
    Family.BUR: _FamilyOps(("alpha", "beta", "sigma"), _sv_bur, _hz_bur, _rule_bur),
    Family.GPL: _FamilyOps(("alpha", "beta", "sigma"), _sv_gpl, _hz_gpl, _rule_gpl),
    Family.DAG: _FamilyOps(("alpha", "beta", "sigma"), _sv_dag, _hz_dag, None),
}


def param_names(family: Family) -> tuple[str, ...]:
    """Names of the parameters the family uses, in canonical order."""
    return _OPS[Family(family)].names


def n_params(family: Family) -> int:
    """Number of free parameters (the K in the AIC penalty)."""
    return len(param_names(family))


def validate_params(family: Family, theta: Params) -> None:
    """Raise DomainError unless theta is a valid vector for the family.

    Exactly the family's parameters must be present; sigma and alpha must
    be positive, beta positive except for GPL where beta > -1 suffices.
    """
    family = Family(family)
    names = param_names(family)
    for name in ("alpha", "beta", "sigma"):
        value = getattr(theta, name)
        if name not in names:
            if value is not None:
                raise DomainError(f"{family} does not take parameter {name!r}")
            continue
        if value is None:
            raise DomainError(f"{family} requires parameter {name!r}")
        if not math.isfinite(value):
            raise DomainError(f"{family} parameter {name!r} must be finite, got {value!r}")
        if name == "beta" and family is Family.GPL:
            if value <= -1.0:
                raise DomainError(f"GPL requires beta > -1, got {value!r}")
        elif value <= 0.0:
            raise DomainError(f"{family} parameter {name!r} must be positive, got {value!r}")


def _check_x(x: float, *, allow_inf: bool, positive: bool) -> float:
    x = float(x)
    if math.isnan(x) or x < 0.0 or (positive and x == 0.0):
        kind = "positive" if positive else "nonnegative"
        raise DomainError(f"x must be a {kind} real, got {x!r}")
    if math.isinf(x) and not allow_inf:
        raise DomainError("x must be finite")
    return x


def survival(family: Family, theta: Params, x: float) -> float:
    """Survival probability S(x) at age x years.

    Accepts x = 0 (returns exactly 1) and x = inf (returns exactly 0).
    """
    family = Family(family)
    validate_params(family, theta)
    x = _check_x(x, allow_inf=True, positive=False)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    s = _OPS[family].survival(theta, x)
    return min(1.0, max(0.0, s))


def hazard(family: Family, theta: Params, x: float) -> float:
    """Instantaneous hazard h(x) at age x > 0 years (finite)."""
    family = Family(family)
    validate_params(family, theta)
    x = _check_x(x, allow_inf=False, positive=True)
    return _OPS[family].hazard(theta, x)


# --- shape classification ---------------------------------------------------

_SCAN_LO = 1.0e-4  # years
_SCAN_HI = 1.0e3  # years
_SCAN_POINTS = 1000
_FLAT_RTOL = 1.0e-9
_CHANGE_POINT_TOL_MONTHS = 0.01


def _sign_runs(values: list[float]) -> list[tuple[int, int]]:
    """Compress consecutive hazard differences into (sign, index) runs.

    Differences below ``_FLAT_RTOL`` relative to the local level are
    treated as flat and dropped.  Returns one (sign, i) entry per retained
    difference; sign is +1 or -1 and i indexes the left grid point.
    """
    signed: list[tuple[int, int]] = []
    for i in range(len(values) - 1):
        a, b = values[i], values[i + 1]
        if math.isnan(a) or math.isnan(b):
            raise DomainError("hazard scan produced NaN")
        diff = b - a
        scale = max(abs(a), abs(b))
        if scale == 0.0 or abs(diff) <= _FLAT_RTOL * scale:
            continue
        signed.append((1 if diff > 0.0 else -1, i))
    return signed


def _compressed_pattern(signed: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Collapse a signed-difference list into runs (sign, first_i, last_i)."""
    runs: list[tuple[int, int, int]] = []
    for sign, i in signed:
        if runs and runs[-1][0] == sign:
            runs[-1] = (sign, runs[-1][1], i)
        else:
            runs.append((sign, i, i))
    return runs


def _scan(family: Family, theta: Params, lo: float, hi: float, n: int):
    grid = np.logspace(math.log10(lo), math.log10(hi), n)
    values = [_OPS[family].hazard(theta, float(x)) for x in grid]
    return grid, values, _compressed_pattern(_sign_runs(values))


def _pattern_class(runs: list[tuple[int, int, int]]) -> ShapeClass | None:
    signs = tuple(r[0] for r in runs)
    if signs == ():
        return ShapeClass.CFR
    if signs == (1,):
        return ShapeClass.IFR
    if signs == (-1,):
        return ShapeClass.DFR
    if signs == (1, -1):
        return ShapeClass.UBT
    if signs == (-1, 1):
        return ShapeClass.BT
    if signs == (-1, 1, -1):
        return ShapeClass.BT_UBT
    return None


def _scan_classify(family: Family, theta: Params) -> ShapeClass:
    _, _, runs = _scan(family, theta, _SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    cls = _pattern_class(runs)
    if cls is None:
        raise DomainError(
            f"hazard sign pattern {[r[0] for r in runs]} for {family} is not a supported shape"
        )
    return cls


def classify_shape(
    family: Family, theta: Params, *, search_horizon_years: float = 50.0
) -> ShapeReport:
    """Classify the hazard shape and locate its change-point when one exists.

    Closed-form shape rules drive the eight analytic families; Dagum (and
    any rule outcome of UBT/BT, as cross-validation) is classified by a
    dense monotonicity scan of the hazard on a log grid.  The change-point
    is filled in for UBT/BT shapes via ``find_change_point``.
    """
    family = Family(family)
    validate_params(family, theta)
    rule = _OPS[family].rule
    if rule is None:
        cls = _scan_classify(family, theta)
    else:
        cls = rule(theta)
        if cls in (ShapeClass.UBT, ShapeClass.BT):
            scanned = _scan_classify(family, theta)
            if scanned is not cls:
                cls = scanned
    if cls in (ShapeClass.UBT, ShapeClass.BT):
        kind = "max" if cls is ShapeClass.UBT else "min"
        cp = find_change_point(
            family, theta, search_horizon_years=search_horizon_years, kind=kind
        )
        return ShapeReport(cls, cp.months, cp.beyond_horizon)
    return ShapeReport(cls)


def find_change_point(
    family: Family,
    theta: Params,
    *,
    search_horizon_years: float = 50.0,
    kind: str | None = None,
) -> ChangePoint:
    """Locate the hazard extremum (months) on (0, horizon] to 0.01 months.

    ``kind`` forces the extremum type ("max" for UBT, "min" for BT); when
    None it is inferred from the scan.  A hazard monotone over the window
    raises NoChangePointError; an extremum pinned at the horizon boundary
    comes back flagged ``beyond_horizon`` with months = horizon * 12.
    """
    family = Family(family)
    validate_params(family, theta)
    if not (math.isfinite(search_horizon_years) and search_horizon_years > 0):
        raise DomainError(f"search horizon must be positive, got {search_horizon_years!r}")
    if kind not in (None, "max", "min"):
        raise DomainError(f"kind must be 'max', 'min' or None, got {kind!r}")
    lo = min(_SCAN_LO, search_horizon_years / 2.0)
    grid, values, runs = _scan(family, theta, lo, search_horizon_years, 2 * _SCAN_POINTS)

    flips: list[tuple[str, int, int]] = []  # (kind, bracket_lo_i, bracket_hi_i)
    for left, right in zip(runs, runs[1:]):
        flip = "max" if (left[0], right[0]) == (1, -1) else "min"
        flips.append((flip, left[2], right[1] + 1))
    wanted = [f for f in flips if kind is None or f[0] == kind]

    if not wanted:
        signs = tuple(r[0] for r in runs)
        if kind == "max" and signs == (1,):
            return ChangePoint(search_horizon_years * 12.0, beyond_horizon=True)
        if kind == "min" and signs == (-1,):
            return ChangePoint(search_horizon_years * 12.0, beyond_horizon=True)
        raise NoChangePointError(
            f"{family} hazard is monotone on (0, {search_horizon_years}] years; "
            "no interior change-point"
        )

    # with several candidates of the right kind, keep the most extreme one
    def extremity(f: tuple[str, int, int]) -> float:
        seg = values[f[1] : f[2] + 1]
        return max(seg) if f[0] == "max" else -min(seg)

    flip_kind, i_lo, i_hi = max(wanted, key=extremity)
    a, b = float(grid[i_lo]), float(grid[i_hi])
    sign = -1.0 if flip_kind == "max" else 1.0
    res = minimize_scalar(
        lambda x: sign * _OPS[family].hazard(theta, x),
        bounds=(a, b),
        method="bounded",
        options={"xatol": _CHANGE_POINT_TOL_MONTHS / 12.0 / 4.0},
    )
    return ChangePoint(float(res.x) * 12.0)
