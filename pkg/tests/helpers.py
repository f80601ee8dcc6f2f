"""Shared oracles and generators for the test suite."""

import math
import random

import numpy as np

from bizsurv import Family, Params, hazard

SHAPE_LO, SHAPE_HI = 0.25, 4.0
SIGMA_LO, SIGMA_HI = 0.2, 10.0


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def draw_params(family: Family, rng: random.Random) -> Params:
    """A random valid parameter vector, bounded away from degeneracy."""
    sigma = _log_uniform(rng, SIGMA_LO, SIGMA_HI)
    shape = lambda: _log_uniform(rng, SHAPE_LO, SHAPE_HI)  # noqa: E731
    if family is Family.EXP:
        return Params(sigma=sigma)
    if family in (Family.WEI, Family.PA2):
        return Params(sigma=sigma, alpha=shape())
    if family in (Family.GAM, Family.FSK):
        return Params(sigma=sigma, beta=shape())
    if family is Family.GPL:
        return Params(sigma=sigma, alpha=shape(), beta=rng.uniform(-0.9, 3.0))
    return Params(sigma=sigma, alpha=shape(), beta=shape())


def scan_pattern(
    family: Family,
    theta: Params,
    lo: float = 1e-4,
    hi: float = 1e3,
    n: int = 1000,
    rtol: float = 1e-9,
) -> tuple[int, ...]:
    """Compressed sign pattern of hazard increments on a log grid."""
    grid = np.logspace(math.log10(lo), math.log10(hi), n)
    values = [hazard(family, theta, float(x)) for x in grid]
    signs: list[int] = []
    for a, b in zip(values, values[1:]):
        if abs(b - a) <= rtol * max(abs(a), abs(b)):
            continue
        s = 1 if b > a else -1
        if not signs or signs[-1] != s:
            signs.append(s)
    return tuple(signs)


PATTERN_CLASSES = {
    (): "CFR",
    (1,): "IFR",
    (-1,): "DFR",
    (1, -1): "UBT",
    (-1, 1): "BT",
    (-1, 1, -1): "BT+UBT",
}


def pattern_class(pattern: tuple[int, ...]) -> str | None:
    return PATTERN_CLASSES.get(pattern)
