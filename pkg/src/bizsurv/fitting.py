"""Maximum-likelihood fitting of lifetime families to censused cohorts.

The data likelihood is the interval-censored form
sum_j w_j * log(S(a_{j-1}) - S(a_j)) with two weighting strategies:

* ``pt``: w_j is the raw death count D_j (every death is known only up
  to its interval);
* ``lt``: w_j is the withdrawal-corrected pseudo-count
  N * (S_LT(a_{j-1}) - S_LT(a_j)) from the life-table curve, which keeps
  the total weight at N = sum(D) but redistributes it for unobserved
  exits.  Pseudo-counts are real-valued and deliberately not rounded.

Optimization is a derivative-free simplex (Nelder-Mead) in an
unconstrained reparameterization: log for positive parameters, log(1+b)
for GPL's beta.  Restarts come from a fixed grid of shape values crossed
with a scale seeded at the Peto-Turnbull median lifetime, so fits are
deterministic.  Standard errors come from the observed information
matrix (finite-difference Hessian of -logL at the optimum, in the
original parameter space); a singular or non-positive-definite Hessian
leaves ``std_errors`` absent rather than failing the fit.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .distributions import Family, Params, param_names, survival, validate_params
from .errors import BizsurvError, ConvergenceError, DomainError, FitFailureError
from .nonparametric import Cohort, life_table_estimate, peto_turnbull_closed_form

__all__ = [
    "FitOptions",
    "FitResult",
    "Strategy",
    "fit_mle",
    "interval_log_likelihood",
    "observed_information_se",
    "standard_errors",
]

_SENTINEL = 1.0e30  # objective value for rejected points inside the optimizer
_SHAPE_START_GRID = (0.3, 0.7, 1.0, 1.5, 3.0)
_POLISH_ROUNDS = 3


class Strategy(str, enum.Enum):
    """Weighting strategy for the interval-censored likelihood."""

    LIFE_TABLE = "lt"
    PETO_TURNBULL = "pt"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True, kw_only=True)
class FitOptions:
    """Optimizer knobs; the defaults match the documented behavior."""

    restarts: int = 20
    tol: float = 1.0e-9
    max_iter: int = 10_000
    horizon_years: float = 50.0

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise DomainError(f"restarts must be at least 1, got {self.restarts!r}")
        if not (self.tol > 0.0 and math.isfinite(self.tol)):
            raise DomainError(f"tol must be a positive real, got {self.tol!r}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if not (self.horizon_years > 0.0 and math.isfinite(self.horizon_years)):
            raise DomainError(
                f"horizon_years must be a positive real, got {self.horizon_years!r}"
            )


@dataclass(frozen=True)
class FitResult:
    """A fitted family with its likelihood, AIC and (when available) SEs."""

    family: Family
    params: Params
    std_errors: tuple[float, ...] | None
    log_lik: float
    aic: float
    n_params: int
    converged: bool
    n_restarts_used: int


def _strategy_weights(cohort: Cohort, strategy: Strategy) -> list[float]:
    if strategy is Strategy.PETO_TURNBULL:
        return [float(d) for d in cohort.deaths]
    est = life_table_estimate(cohort)
    curve = [1.0, *est.values]
    n = float(sum(cohort.deaths))
    return [n * (curve[j] - curve[j + 1]) for j in range(cohort.n_intervals)]


def _weighted_log_lik(
    family: Family, theta: Params, boundaries: Sequence[float], weights: Sequence[float]
) -> float:
    total = 0.0
    s_prev = 1.0
    for j, w in enumerate(weights):
        s_next = survival(family, theta, boundaries[j + 1])
        if w > 0.0:
            p = s_prev - s_next
            if p <= 0.0:
                return -math.inf
            total += w * math.log(p)
        s_prev = s_next
    return total


def interval_log_likelihood(
    family: Family, theta: Params, cohort: Cohort, strategy: Strategy = Strategy.PETO_TURNBULL
) -> float:
    """Interval-censored log-likelihood of theta for the cohort.

    Returns -inf when any weighted interval gets zero or negative
    probability under theta (typically survival underflow); zero-weight
    intervals are skipped under the usual 0 * log(0) = 0 convention.
    """
    family = Family(family)
    validate_params(family, theta)
    weights = _strategy_weights(cohort, Strategy(strategy))
    return _weighted_log_lik(family, theta, cohort.boundaries, weights)


# --- reparameterization ------------------------------------------------------


def _to_params(family: Family, names: tuple[str, ...], y: Sequence[float]) -> Params:
    fields: dict[str, float] = {}
    for name, v in zip(names, y):
        if name == "beta" and family is Family.GPL:
            fields[name] = math.expm1(v) if v < 700.0 else math.inf
        else:
            fields[name] = math.exp(v) if v < 700.0 else math.inf
    return Params(**fields)


def _from_params(family: Family, names: tuple[str, ...], theta: Params) -> list[float]:
    out = []
    for name in names:
        value = getattr(theta, name)
        if name == "beta" and family is Family.GPL:
            out.append(math.log1p(value))
        else:
            out.append(math.log(value))
    return out


def _initial_scale(cohort: Cohort) -> float:
    """Scale seed: the first age where the Peto-Turnbull curve drops below 1/2.

    When the curve stays at or above 1/2 through every finite boundary,
    the last finite boundary is used.
    """
    est = peto_turnbull_closed_form(cohort)
    for age, value in est.points:
        if math.isfinite(age) and value < 0.5:
            return age
    return cohort.boundaries[-2]


def _start_grid(
    family: Family, names: tuple[str, ...], sigma0: float, restarts: int
) -> list[list[float]]:
    """Deterministic restart points in the unconstrained space.

    Shape coordinates take log(v) for v in the fixed grid (for GPL's beta
    the same log(v) start means beta = v - 1, covering both hazard
    basins); the scale always starts at log(sigma0).  The product grid is
    enumerated in a fixed order and truncated to the restart budget.
    """
    n_shapes = len(names) - 1
    log_sigma0 = math.log(sigma0)
    if n_shapes == 0:
        return [[log_sigma0]]
    starts = []
    for combo in itertools.product(_SHAPE_START_GRID, repeat=n_shapes):
        starts.append([math.log(v) for v in combo] + [log_sigma0])
        if len(starts) == restarts:
            break
    return starts


def fit_mle(
    family: Family,
    cohort: Cohort,
    strategy: Strategy = Strategy.PETO_TURNBULL,
    options: FitOptions | None = None,
) -> FitResult:
    """Maximum-likelihood fit of one family to a cohort.

    Runs Nelder-Mead from every restart point, keeps the best optimum,
    then polishes it with fresh simplices until no further improvement.
    Raises FitFailureError when no restart reaches a finite likelihood.
    """
    family = Family(family)
    strategy = Strategy(strategy)
    options = options or FitOptions()
    names = param_names(family)
    weights = _strategy_weights(cohort, strategy)
    boundaries = cohort.boundaries

    def objective(y: np.ndarray) -> float:
        theta = _to_params(family, names, y)
        try:
            ll = _weighted_log_lik(family, theta, boundaries, weights)
        except (DomainError, ConvergenceError, OverflowError):
            return _SENTINEL
        return -ll if math.isfinite(ll) else _SENTINEL

    nm_options = {
        "maxiter": options.max_iter,
        "maxfev": options.max_iter,
        "xatol": options.tol,
        "fatol": options.tol,
    }
    starts = _start_grid(family, names, _initial_scale(cohort), options.restarts)
    best = None
    for y0 in starts:
        res = minimize(objective, np.asarray(y0), method="Nelder-Mead", options=nm_options)
        if best is None or res.fun < best.fun:
            best = res
    if best is None or best.fun >= _SENTINEL:
        raise FitFailureError(
            f"no {family} restart reached a finite likelihood for strategy {strategy} "
            f"({len(starts)} starts)"
        )
    for _ in range(_POLISH_ROUNDS):
        res = minimize(objective, best.x, method="Nelder-Mead", options=nm_options)
        improved = res.fun < best.fun - 1.0e-10
        if res.fun < best.fun or (
            res.success and not best.success and res.fun <= best.fun + 1.0e-10
        ):
            best = res
        if not improved:
            break

    theta = _to_params(family, names, best.x)
    log_lik = _weighted_log_lik(family, theta, boundaries, weights)
    k = len(names)
    fit = FitResult(
        family=family,
        params=theta,
        std_errors=None,
        log_lik=log_lik,
        aic=-2.0 * log_lik + 2.0 * k,
        n_params=k,
        converged=bool(best.success),
        n_restarts_used=len(starts),
    )
    if fit.converged:
        fit = replace(fit, std_errors=standard_errors(fit, cohort, strategy))
    return fit


def observed_information_se(
    neg_log_lik: Callable[[Sequence[float]], float],
    theta: Sequence[float],
    *,
    rel_step: float = 1.0e-4,
) -> tuple[float, ...] | None:
    """Standard errors from a finite-difference observed information matrix.

    Central differences with per-coordinate step rel_step * |theta_i|
    (with a small absolute floor for near-zero coordinates) build the
    Hessian of ``neg_log_lik`` at ``theta``; the SEs are the square roots
    of the inverse's diagonal.  Returns None when the Hessian is not
    finite and positive definite.
    """
    x0 = np.asarray(theta, dtype=float)
    n = x0.size
    steps = np.maximum(rel_step * np.abs(x0), 1.0e-7)

    def f(x: np.ndarray) -> float:
        return float(neg_log_lik(list(x)))

    f0 = f(x0)
    hess = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = steps[i]
        hess[i, i] = (f(x0 + ei) - 2.0 * f0 + f(x0 - ei)) / steps[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = steps[j]
            mixed = (
                f(x0 + ei + ej) - f(x0 + ei - ej) - f(x0 - ei + ej) + f(x0 - ei - ej)
            ) / (4.0 * steps[i] * steps[j])
            hess[i, j] = hess[j, i] = mixed
    if not np.isfinite(hess).all():
        return None
    try:
        eigenvalues = np.linalg.eigvalsh(hess)
    except np.linalg.LinAlgError:
        return None
    if eigenvalues.min() <= 0.0:
        return None
    cov = np.linalg.inv(hess)
    diag = np.diag(cov)
    if (diag <= 0.0).any():
        return None
    return tuple(float(v) for v in np.sqrt(diag))


def standard_errors(
    fit: FitResult, cohort: Cohort, strategy: Strategy = Strategy.PETO_TURNBULL
) -> tuple[float, ...] | None:
    """Observed-information standard errors for a converged fit.

    Returns None (fit retained, SEs unavailable) when the Hessian at the
    optimum is singular or not positive definite.
    """
    if not fit.converged:
        raise DomainError("standard errors require a converged fit")
    family = Family(fit.family)
    strategy = Strategy(strategy)
    names = param_names(family)
    theta0 = [getattr(fit.params, name) for name in names]

    def neg_log_lik(vec: Sequence[float]) -> float:
        theta = Params(**dict(zip(names, vec)))
        try:
            ll = interval_log_likelihood(family, theta, cohort, strategy)
        except BizsurvError:
            return math.inf
        return -ll

    return observed_information_se(neg_log_lik, theta0)
