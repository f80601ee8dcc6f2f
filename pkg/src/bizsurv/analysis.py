"""Cohort-level hazard-shape analysis across families and strategies.

``analyze_cohort`` fits every requested family under each weighting
strategy, ranks the fits by AIC, classifies the hazard shape of every
model with delta <= 20 (the same inclusion rule the reporting tables
use) and locates change-points for UBT/BT shapes.  Per-family failures
are recorded without aborting the remaining families; a strategy whose
fits all fail is an error.

``summarize_shapes`` aggregates reports across cohorts into the
support-class counts per family and the shape-class counts among
best-supported models.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .distributions import (
    FAMILY_ORDER,
    Family,
    ShapeClass,
    ShapeReport,
    classify_shape,
)
from .errors import BizsurvError, RankingError
from .fitting import FitOptions, FitResult, Strategy, fit_mle
from .nonparametric import Cohort
from .selection import ModelRanking, SupportClass, rank_models

__all__ = [
    "CohortShapeReport",
    "ShapeEntry",
    "ShapeSummary",
    "StrategyAnalysis",
    "analyze_cohort",
    "summarize_shapes",
]

_SHAPE_DELTA_CUTOFF = 20.0


@dataclass(frozen=True)
class ShapeEntry:
    """A supported model (delta <= 20) with its hazard shape."""

    family: Family
    delta: float
    support_class: SupportClass
    shape: ShapeReport
    fit: FitResult


@dataclass(frozen=True)
class StrategyAnalysis:
    """Everything one weighting strategy produced for a cohort."""

    strategy: Strategy
    ranking: ModelRanking
    entries: tuple[ShapeEntry, ...]
    failures: tuple[tuple[Family, str], ...]


@dataclass(frozen=True)
class CohortShapeReport:
    """Per-strategy rankings and shape calls for one birth cohort."""

    birth_year: int
    analyses: Mapping[Strategy, StrategyAnalysis]

    def __post_init__(self) -> None:
        object.__setattr__(self, "analyses", MappingProxyType(dict(self.analyses)))


def analyze_cohort(
    cohort: Cohort,
    families: Sequence[Family] | None = None,
    strategies: Sequence[Strategy] = (Strategy.LIFE_TABLE, Strategy.PETO_TURNBULL),
    options: FitOptions | None = None,
) -> CohortShapeReport:
    """Fit, rank and shape-classify the families for one cohort.

    Deterministic given identical inputs and options.  Raises
    RankingError when a requested strategy ends with zero converged fits.
    """
    families = tuple(Family(f) for f in (families or FAMILY_ORDER))
    strategies = tuple(Strategy(s) for s in strategies)
    options = options or FitOptions()
    analyses: dict[Strategy, StrategyAnalysis] = {}
    for strategy in strategies:
        fits: list[FitResult] = []
        failures: list[tuple[Family, str]] = []
        for family in families:
            try:
                fits.append(fit_mle(family, cohort, strategy, options))
            except BizsurvError as exc:
                failures.append((family, str(exc)))
        if not fits:
            raise RankingError(
                f"every family failed to fit cohort {cohort.birth_year} "
                f"under strategy {strategy}"
            )
        ranking = rank_models(fits)
        entries = tuple(
            ShapeEntry(
                family=r.family,
                delta=r.delta,
                support_class=r.support_class,
                shape=classify_shape(
                    r.family, r.fit.params, search_horizon_years=options.horizon_years
                ),
                fit=r.fit,
            )
            for r in ranking.entries
            if r.delta <= _SHAPE_DELTA_CUTOFF
        )
        analyses[strategy] = StrategyAnalysis(
            strategy=strategy,
            ranking=ranking,
            entries=entries,
            failures=tuple(failures),
        )
    return CohortShapeReport(birth_year=cohort.birth_year, analyses=analyses)


@dataclass(frozen=True)
class ShapeSummary:
    """Aggregated counts across cohorts.

    ``support_counts[strategy][family][support_class]`` counts rankings;
    ``best_shape_counts[strategy][shape_class]`` counts hazard shapes
    among best-supported models.
    """

    support_counts: Mapping[str, Mapping[str, Mapping[str, int]]]
    best_shape_counts: Mapping[str, Mapping[str, int]]


def _zero_support_counts() -> dict[str, dict[str, int]]:
    return {f.value: {c.value: 0 for c in SupportClass} for f in FAMILY_ORDER}


def _zero_shape_counts() -> dict[str, int]:
    return {s.value: 0 for s in ShapeClass}


def summarize_shapes(reports: Iterable[CohortShapeReport]) -> ShapeSummary:
    """Tally support classes per family and shapes among best models."""
    support: dict[str, dict[str, dict[str, int]]] = {}
    shapes: dict[str, dict[str, int]] = {}
    for report in reports:
        for strategy, analysis in report.analyses.items():
            by_family = support.setdefault(strategy.value, _zero_support_counts())
            by_shape = shapes.setdefault(strategy.value, _zero_shape_counts())
            for ranked in analysis.ranking.entries:
                counts = by_family.setdefault(
                    ranked.family.value, {c.value: 0 for c in SupportClass}
                )
                counts[ranked.support_class.value] += 1
            for entry in analysis.entries:
                if entry.support_class is SupportClass.BEST:
                    by_shape[entry.shape.shape_class.value] += 1
    return ShapeSummary(support_counts=support, best_shape_counts=shapes)
