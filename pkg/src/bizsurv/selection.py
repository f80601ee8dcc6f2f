"""AIC-based ranking of fitted lifetime families.

AIC = -2 logL + 2K; ranking is by delta = AIC - min(AIC) over converged
fits.  Support classes follow the usual information-theoretic cut-offs
with inclusive boundaries: delta <= 2 substantial support ("best"),
2 < delta <= 20 little support, delta > 20 essentially none.  Fits that
failed to converge never enter the delta computation but are carried
along with a distinguished marker.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .distributions import FAMILY_ORDER, Family
from .errors import DomainError, RankingError
from .fitting import FitResult

__all__ = ["ModelRanking", "RankedModel", "SupportClass", "rank_models", "support_class"]


class SupportClass(str, enum.Enum):
    """Strength of evidence for a model given the best AIC in its set."""

    BEST = "best"
    LITTLE_SUPPORT = "little_support"
    NO_SUPPORT = "no_support"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def support_class(delta: float) -> SupportClass:
    """Map an AIC delta to its support class (boundaries inclusive)."""
    if math.isnan(delta) or delta < 0.0:
        raise DomainError(f"AIC delta must be nonnegative, got {delta!r}")
    if delta <= 2.0:
        return SupportClass.BEST
    if delta <= 20.0:
        return SupportClass.LITTLE_SUPPORT
    return SupportClass.NO_SUPPORT


@dataclass(frozen=True)
class RankedModel:
    """One converged fit with its delta and support class."""

    family: Family
    aic: float
    delta: float
    support_class: SupportClass
    fit: FitResult


@dataclass(frozen=True)
class ModelRanking:
    """Converged fits sorted by delta; non-converged fits kept separately."""

    entries: tuple[RankedModel, ...]
    failed: tuple[FitResult, ...]


def rank_models(fits: list[FitResult]) -> ModelRanking:
    """Rank fits of one cohort/strategy by AIC delta.

    Ties sort by the canonical family order, so rankings are
    deterministic.  Raises RankingError when no fit converged.
    """
    if not fits:
        raise RankingError("no fits to rank")
    usable = [f for f in fits if f.converged and math.isfinite(f.aic)]
    failed = tuple(f for f in fits if not (f.converged and math.isfinite(f.aic)))
    if not usable:
        raise RankingError(f"none of the {len(fits)} fits converged")
    aic_min = min(f.aic for f in usable)
    entries = [
        RankedModel(
            family=f.family,
            aic=f.aic,
            delta=f.aic - aic_min,
            support_class=support_class(f.aic - aic_min),
            fit=f,
        )
        for f in usable
    ]
    entries.sort(key=lambda r: (r.delta, FAMILY_ORDER.index(r.family)))
    return ModelRanking(tuple(entries), failed)
