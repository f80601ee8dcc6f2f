"""Nonparametric survival estimation for annually censused birth cohorts.

A ``Cohort`` holds per-interval counts from an establishment age table:
``active`` (N_j, alive at the interval start), ``entrants`` (E_j, late
joiners counted mid-interval) and ``deaths`` (D_j, exits during the
interval).  Interval boundaries are ages in years, starting at 0 and
ending at infinity.

Two estimators target these data.  The modified life-table estimator
corrects each at-risk denominator with half the net unobserved
withdrawal flow W'_j, where W'_j is pinned down exactly by the flow
identity N_j + E_j - D_j - W'_j = N_{j+1}.  The Peto-Turnbull estimator
is the nonparametric MLE for pure interval censoring; on contiguous
intervals it collapses to the closed form 1 - cum(D)/sum(D).  The
general Turnbull EM iteration is included as a cross-check and for
overlapping interval data.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConvergenceError, DegenerateCohortError, DomainError

__all__ = [
    "Cohort",
    "EstimateMethod",
    "SurvivalEstimate",
    "cohort_intervals",
    "compute_w_prime",
    "life_table_estimate",
    "peto_turnbull_closed_form",
    "turnbull_em",
    "turnbull_intervals",
]


class EstimateMethod(str, enum.Enum):
    """Which estimator produced a survival curve."""

    LIFE_TABLE = "life_table"
    PETO_TURNBULL = "peto_turnbull"
    TURNBULL_EM = "turnbull_em"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def _as_counts(name: str, values: Sequence[int]) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise DomainError(f"{name} must contain integers, got {v!r}")
        if v < 0:
            raise DomainError(f"{name} must be nonnegative, got {v!r}")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class Cohort:
    """Counts for one birth cohort over contiguous age intervals.

    ``boundaries`` has k+2 ages 0 = a_0 < a_1 < ... < a_k < a_{k+1} = inf,
    defining k+1 intervals.  ``active`` and ``deaths`` have one entry per
    interval; ``entrants`` covers only the k finite intervals (no one can
    join after the last census).  The final interval is absorbing:
    deaths[-1] == active[-1].
    """

    birth_year: int
    boundaries: tuple[float, ...]
    active: tuple[int, ...]
    entrants: tuple[int, ...]
    deaths: tuple[int, ...]

    def __post_init__(self) -> None:
        if isinstance(self.birth_year, bool) or not isinstance(self.birth_year, int):
            raise DomainError(f"birth_year must be an integer, got {self.birth_year!r}")
        bounds = tuple(float(b) for b in self.boundaries)
        if len(bounds) < 2:
            raise DomainError("boundaries needs at least two ages (one interval)")
        if bounds[0] != 0.0:
            raise DomainError(f"first boundary must be 0, got {bounds[0]!r}")
        if not math.isinf(bounds[-1]):
            raise DomainError("last boundary must be infinite")
        if any(not (a < b) for a, b in zip(bounds, bounds[1:])):
            raise DomainError(f"boundaries must be strictly increasing, got {bounds}")
        if any(math.isnan(b) for b in bounds):
            raise DomainError("boundaries must not contain NaN")
        object.__setattr__(self, "boundaries", bounds)
        object.__setattr__(self, "active", _as_counts("active", self.active))
        object.__setattr__(self, "entrants", _as_counts("entrants", self.entrants))
        object.__setattr__(self, "deaths", _as_counts("deaths", self.deaths))
        k1 = len(bounds) - 1
        if len(self.active) != k1 or len(self.deaths) != k1:
            raise DomainError(
                f"active and deaths need {k1} entries (one per interval), "
                f"got {len(self.active)} and {len(self.deaths)}"
            )
        if len(self.entrants) != k1 - 1:
            raise DomainError(
                f"entrants needs {k1 - 1} entries (finite intervals only), "
                f"got {len(self.entrants)}"
            )
        if self.active[0] <= 0:
            raise DomainError("the cohort must start with a positive active count")
        if self.deaths[-1] != self.active[-1]:
            raise DomainError(
                "the last interval is absorbing: deaths[-1] must equal active[-1], "
                f"got {self.deaths[-1]} vs {self.active[-1]}"
            )

    @property
    def n_intervals(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class SurvivalEstimate:
    """A survival curve evaluated at the interval end-points a_1..a_{k+1}."""

    method: EstimateMethod
    points: tuple[tuple[float, float], ...]
    sample_size: int

    @property
    def ages(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(s for _, s in self.points)


def compute_w_prime(cohort: Cohort) -> tuple[int, ...]:
    """Net unobserved withdrawal flow W'_j per interval (last is 0).

    W'_j = N_j + E_j - D_j - N_{j+1}: whatever of the interval's inflow is
    neither dead nor observed at the next census left the frame unseen.
    Negative values mean the next census gained units the flows cannot
    explain.  The absorbing final interval has no next census, so its
    W' is fixed at zero.
    """
    w = []
    for j in range(cohort.n_intervals - 1):
        e = cohort.entrants[j]
        w.append(cohort.active[j] + e - cohort.deaths[j] - cohort.active[j + 1])
    w.append(0)
    return tuple(w)


def life_table_estimate(cohort: Cohort) -> SurvivalEstimate:
    """Life-table survival curve with half-interval withdrawal correction.

    The conditional death probability in interval j is
    q_j = D_j / (N_j + E_j - W'_j / 2); a negative W'_j therefore
    *increases* the denominator.  Survival is the running product of
    (1 - q_j), evaluated at each interval's right end-point.
    """
    w = compute_w_prime(cohort)
    k1 = cohort.n_intervals
    points = []
    surv = 1.0
    for j in range(k1):
        e = cohort.entrants[j] if j < k1 - 1 else 0
        denom = cohort.active[j] + e - w[j] / 2.0
        if denom <= 0.0:
            raise DegenerateCohortError(
                f"interval {j + 1}: at-risk denominator {denom} is not positive"
            )
        q = cohort.deaths[j] / denom
        if q > 1.0:
            raise DegenerateCohortError(
                f"interval {j + 1}: death probability {q} exceeds 1"
            )
        surv *= 1.0 - q
        points.append((cohort.boundaries[j + 1], surv))
    return SurvivalEstimate(
        EstimateMethod.LIFE_TABLE, tuple(points), sum(cohort.deaths)
    )


def peto_turnbull_closed_form(cohort: Cohort) -> SurvivalEstimate:
    """Closed-form nonparametric MLE for contiguous interval-censored deaths.

    With every death assigned to one of the contiguous intervals, the
    NPMLE puts mass D_j / N on interval j (N = sum of deaths), so the
    curve at a_j is 1 - (D_1 + ... + D_j) / N.  Defined only at the
    interval end-points; the cohort type guarantees contiguity.
    """
    n = sum(cohort.deaths)
    if n == 0:
        raise DegenerateCohortError("all interval death counts are zero")
    points = []
    cum = 0
    for j in range(cohort.n_intervals):
        cum += cohort.deaths[j]
        points.append((cohort.boundaries[j + 1], 1.0 - cum / n))
    return SurvivalEstimate(EstimateMethod.PETO_TURNBULL, tuple(points), n)


def cohort_intervals(
    cohort: Cohort,
) -> tuple[list[tuple[float, float]], list[int]]:
    """The cohort's death intervals as (L, R] pairs with frequencies.

    Zero-frequency intervals are dropped, matching ``turnbull_em``'s
    requirement of positive frequencies.
    """
    intervals = []
    freqs = []
    for j, d in enumerate(cohort.deaths):
        if d > 0:
            intervals.append((cohort.boundaries[j], cohort.boundaries[j + 1]))
            freqs.append(d)
    return intervals, freqs


def turnbull_intervals(
    intervals: Sequence[tuple[float, float]]
) -> list[tuple[float, float]]:
    """Intervals of possible support for the NPMLE of censored data.

    A candidate (q, p] qualifies when q is some observation's left
    end-point, p is some observation's right end-point, and no other
    end-point falls strictly inside (q, p).  The result is disjoint and
    sorted.
    """
    lefts = sorted({l for l, _ in intervals})
    rights = sorted({r for _, r in intervals})
    cuts = sorted(set(lefts) | set(rights))
    out = []
    for q in lefts:
        for p in rights:
            if q < p and not any(q < v < p for v in cuts):
                out.append((q, p))
    return out


def _validate_observations(
    intervals: Sequence[tuple[float, float]], freqs: Sequence[int]
) -> None:
    if len(intervals) == 0:
        raise DomainError("at least one observation interval is required")
    if len(intervals) != len(freqs):
        raise DomainError(
            f"{len(intervals)} intervals but {len(freqs)} frequencies"
        )
    for left, right in intervals:
        if math.isnan(left) or math.isnan(right) or math.isinf(left):
            raise DomainError(f"invalid interval ({left!r}, {right!r}]")
        if not left < right:
            raise DomainError(f"interval ({left!r}, {right!r}] is empty")
    for f in freqs:
        if isinstance(f, bool) or not isinstance(f, int) or f <= 0:
            raise DomainError(f"frequencies must be positive integers, got {f!r}")


def turnbull_em(
    intervals: Sequence[tuple[float, float]],
    freqs: Sequence[int],
    *,
    tol: float = 1.0e-10,
    max_sweeps: int = 100_000,
) -> SurvivalEstimate:
    """Self-consistent NPMLE over (L, R] observation intervals.

    Starts from uniform mass on the Turnbull intervals and applies the EM
    self-consistency update until the largest per-interval mass change in
    a sweep drops below ``tol``.  The survival curve is reported at the
    Turnbull intervals' right end-points.  Exhausting ``max_sweeps``
    raises ConvergenceError carrying the residual.
    """
    _validate_observations(intervals, freqs)
    if not (tol > 0.0 and math.isfinite(tol)):
        raise DomainError(f"tol must be a positive real, got {tol!r}")
    if max_sweeps < 1:
        raise DomainError(f"max_sweeps must be at least 1, got {max_sweeps!r}")
    support = turnbull_intervals(intervals)
    m = len(support)
    members = []
    for left, right in intervals:
        row = [j for j, (q, p) in enumerate(support) if left <= q and p <= right]
        if not row:
            raise DomainError(
                f"observation ({left!r}, {right!r}] contains no support interval"
            )
        members.append(row)
    n = sum(freqs)
    mass = [1.0 / m] * m
    for _ in range(max_sweeps):
        new = [0.0] * m
        for row, f in zip(members, freqs):
            total = sum(mass[j] for j in row)
            for j in row:
                new[j] += f * mass[j] / total
        new = [v / n for v in new]
        residual = max(abs(a - b) for a, b in zip(new, mass))
        mass = new
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"Turnbull EM did not reach tol={tol} in {max_sweeps} sweeps "
            f"(residual {residual})"
        )
    points = []
    cum = 0.0
    for (_, p), s in zip(support, mass):
        cum += s
        points.append((p, max(0.0, 1.0 - cum)))
    return SurvivalEstimate(EstimateMethod.TURNBULL_EM, tuple(points), n)
