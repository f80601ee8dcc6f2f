import math
import random
from pathlib import Path

import pytest

from bizsurv import Cohort

DATA_DIR = Path(__file__).parent / "data"

TABLE1_BOUNDARIES = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, math.inf)
TABLE1_N = (522626, 416101, 368585, 329142, 299830, 277495)
TABLE1_E = (0, 10739, 9604, 8475, 7541)
TABLE1_D = (100616, 59673, 44888, 37860, 30658, 277495)

LIFE_TABLE_2011 = (0.8064, 0.6938, 0.6110, 0.5425, 0.4885, 0.0)
PETO_TURNBULL_2011 = (0.8175, 0.7092, 0.6278, 0.5591, 0.5034, 0.0)
W_PRIME_2011 = (5909, -1418, 4159, -73, -782, 0)


def make_cohort_2011() -> Cohort:
    return Cohort(
        birth_year=2011,
        boundaries=TABLE1_BOUNDARIES,
        active=TABLE1_N,
        entrants=TABLE1_E,
        deaths=TABLE1_D,
    )


def random_closed_cohort(
    rng: random.Random,
    *,
    max_n: int = 10**6,
    min_intervals: int = 3,
    max_intervals: int = 10,
) -> Cohort:
    """A consistent cohort with no entrants or withdrawals.

    Every interval gets at least one death, so the death intervals map
    one-to-one onto Turnbull support intervals.
    """
    k = rng.randint(min_intervals, max_intervals)
    widths = [rng.uniform(0.25, 3.0) for _ in range(k - 1)]
    boundaries = [0.0]
    for w in widths:
        boundaries.append(boundaries[-1] + w)
    boundaries.append(math.inf)

    total = rng.randint(k * 10, max_n)
    cuts = sorted(rng.sample(range(1, total), k - 1))
    deaths = []
    prev = 0
    for c in cuts:
        deaths.append(c - prev)
        prev = c
    deaths.append(total - prev)

    active = [total]
    for d in deaths[:-1]:
        active.append(active[-1] - d)
    entrants = [0] * (k - 1)
    return Cohort(
        birth_year=2000,
        boundaries=tuple(boundaries),
        active=tuple(active),
        entrants=tuple(entrants),
        deaths=tuple(deaths),
    )


@pytest.fixture(scope="session")
def bds_csv_path() -> Path:
    return DATA_DIR / "bds_2011.csv"


@pytest.fixture(scope="session")
def cohort_json_path() -> Path:
    return DATA_DIR / "cohort_two_interval.json"


@pytest.fixture(scope="session")
def cohort_2011() -> Cohort:
    return make_cohort_2011()
