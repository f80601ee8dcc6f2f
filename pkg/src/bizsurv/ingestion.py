"""Reading establishment age tables and assembling birth cohorts.

The expected input is a UTF-8 CSV in the Business Dynamics Statistics
style with (at least) the columns ``year``, ``estab_age``, ``estabs``,
``estabs_entry`` and ``estabs_exit``.  Header matching is
case-insensitive and order-free; spaces and dashes count as underscores,
so ``estab age`` or ``Estabs-Entry`` work too.  Age cells may carry a
census label prefix ("a) 0") and may be bands ("6 to 10", "26+", "left
censored"); banded rows are parsed and kept but never enter cohort
assembly.

A birth cohort for year y uses these diagonals of the table:

* N_j   = estabs        at (y + j - 1, age j - 1)   j = 1..6
* D_j   = estabs_exit   at (y + j,     age j)       j = 1..5
* E_j   = estabs_entry  at (y + j,     age j)       j = 2..5, E_1 = 0
* N_6 doubles as D_6 (the final interval is absorbing).

with interval boundaries {0, 1, 2, 3, 4, 5, inf} years.  A cohort can
also be supplied directly as a JSON document with keys
``birth_year``, ``boundaries``, ``N``, ``E`` and ``D`` (the last
boundary may be the string "inf" or "Infinity").
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .errors import DomainError, IncompleteCohortError, ParseError, SchemaError
from .nonparametric import Cohort

__all__ = [
    "BdsRow",
    "build_cohort",
    "cohort_to_bds_rows",
    "complete_birth_years",
    "load_cohort_json",
    "parse_bds_csv",
]

_REQUIRED_COLUMNS = ("year", "estab_age", "estabs", "estabs_entry", "estabs_exit")
_COHORT_SPAN = 6  # ages 0..5 feed a cohort; older ages are banded in BDS files
_STANDARD_BOUNDARIES = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, math.inf)
_LABEL_PREFIX = re.compile(r"^[a-z]\)\s*", re.IGNORECASE)


@dataclass(frozen=True)
class BdsRow:
    """One parsed table row; ``age`` is None for banded age categories."""

    year: int
    age: int | None
    band: str | None
    estabs: int
    estabs_entry: int
    estabs_exit: int
    line: int

    @property
    def banded(self) -> bool:
        return self.age is None


def _normalize_header(cell: str) -> str:
    return re.sub(r"[\s\-]+", "_", cell.strip().lower())


def _parse_int(cell: str, column: str, line: int) -> int:
    text = cell.strip().replace(",", "")
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(f"line {line}: column {column!r}: not an integer: {cell!r}")
    return int(text)


def _parse_age(cell: str) -> tuple[int | None, str | None]:
    text = _LABEL_PREFIX.sub("", cell.strip())
    if re.fullmatch(r"\d+", text):
        return int(text), None
    return None, text


def _open_text(source: str | Path | IO[str] | IO[bytes]) -> tuple[IO[str], bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), True
    data = source.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8")), False
    return io.StringIO(data), False


def parse_bds_csv(source: str | Path | IO[str] | IO[bytes]) -> list[BdsRow]:
    """Parse an establishment age table from a path or open stream.

    Raises SchemaError when a required column is missing and ParseError
    (with the line number) for malformed cells.  Unknown columns are
    ignored; rows keep their source line for later messages.
    """
    stream, owned = _open_text(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty input: no header row") from None
        columns = {_normalize_header(cell): i for i, cell in enumerate(header)}
        missing = [c for c in _REQUIRED_COLUMNS if c not in columns]
        if missing:
            raise SchemaError(
                f"missing required column(s) {missing}; found {sorted(columns)}"
            )
        rows = []
        for line_no, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) < len(header):
                raise ParseError(
                    f"line {line_no}: expected {len(header)} cells, got {len(record)}"
                )
            age, band = _parse_age(record[columns["estab_age"]])
            rows.append(
                BdsRow(
                    year=_parse_int(record[columns["year"]], "year", line_no),
                    age=age,
                    band=band,
                    estabs=_parse_int(record[columns["estabs"]], "estabs", line_no),
                    estabs_entry=_parse_int(
                        record[columns["estabs_entry"]], "estabs_entry", line_no
                    ),
                    estabs_exit=_parse_int(
                        record[columns["estabs_exit"]], "estabs_exit", line_no
                    ),
                    line=line_no,
                )
            )
        return rows
    finally:
        if owned:
            stream.close()


def _index_rows(rows: Iterable[BdsRow]) -> dict[tuple[int, int], BdsRow]:
    index: dict[tuple[int, int], BdsRow] = {}
    for row in rows:
        if row.banded:
            continue
        key = (row.year, row.age)
        if key in index:
            raise SchemaError(
                f"duplicate rows for (year={row.year}, age={row.age}) at lines "
                f"{index[key].line} and {row.line}; disaggregated files must be "
                "filtered to one row per (year, age)"
            )
        index[key] = row
    return index


def build_cohort(rows: Sequence[BdsRow], birth_year: int) -> Cohort:
    """Assemble the birth cohort for ``birth_year`` from parsed rows.

    Requires the six diagonal rows (birth_year + i, age = i) for
    i = 0..5; extra years, ages and bands are ignored.  Raises
    IncompleteCohortError naming the first missing (year, age).
    """
    index = _index_rows(rows)
    diagonal = []
    for i in range(_COHORT_SPAN):
        key = (birth_year + i, i)
        if key not in index:
            raise IncompleteCohortError(
                f"missing row for year={key[0]}, age={key[1]} "
                f"(needed by the {birth_year} cohort)"
            )
        diagonal.append(index[key])
    active = [row.estabs for row in diagonal]
    deaths = [diagonal[j].estabs_exit for j in range(1, _COHORT_SPAN)] + [active[-1]]
    entrants = [0] + [diagonal[j].estabs_entry for j in range(2, _COHORT_SPAN)]
    return Cohort(
        birth_year=birth_year,
        boundaries=_STANDARD_BOUNDARIES,
        active=tuple(active),
        entrants=tuple(entrants),
        deaths=tuple(deaths),
    )


def complete_birth_years(rows: Sequence[BdsRow]) -> list[int]:
    """Birth years whose full six-row diagonal is present, ascending."""
    index = _index_rows(rows)
    years = sorted({year - age for (year, age) in index})
    return [
        y
        for y in years
        if all((y + i, i) in index for i in range(_COHORT_SPAN))
    ]


def cohort_to_bds_rows(cohort: Cohort) -> list[BdsRow]:
    """Serialize a standard six-interval cohort back to table rows.

    Inverse of ``build_cohort`` up to the cells that assembly ignores
    (entries at age 0 and 1, exits at age 0), which are written as zero.
    """
    if cohort.boundaries != _STANDARD_BOUNDARIES:
        raise DomainError(
            "only cohorts on the standard {0,1,2,3,4,5,inf} boundaries round-trip "
            "to table rows"
        )
    rows = []
    for i in range(_COHORT_SPAN):
        rows.append(
            BdsRow(
                year=cohort.birth_year + i,
                age=i,
                band=None,
                estabs=cohort.active[i],
                estabs_entry=cohort.entrants[i - 1] if i >= 2 else 0,
                estabs_exit=cohort.deaths[i - 1] if i >= 1 else 0,
                line=i + 2,
            )
        )
    return rows


def _coerce_boundary(value: object, position: int) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf", ".inf"):
            return math.inf
        raise SchemaError(f"boundaries[{position}]: unrecognized value {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"boundaries[{position}]: expected a number, got {value!r}")
    return float(value)


def _require_int_list(doc: Mapping[str, object], key: str) -> list[int]:
    values = doc[key]
    if not isinstance(values, list):
        raise SchemaError(f"{key!r} must be a list")
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"{key}[{i}]: expected an integer, got {v!r}")
        out.append(v)
    return out


def load_cohort_json(source: str | Path | IO[str] | IO[bytes] | Mapping) -> Cohort:
    """Load a cohort from a JSON document {birth_year, boundaries, N, E, D}.

    Count keys use the table initials: N = active at interval start,
    E = entrants, D = deaths.  The final boundary must be infinite,
    written as "inf", "Infinity" or a non-strict Infinity token.
    """
    if isinstance(source, Mapping):
        doc: object = source
    else:
        stream, owned = _open_text(source)
        try:
            doc = json.load(stream)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        finally:
            if owned:
                stream.close()
    if not isinstance(doc, Mapping):
        raise SchemaError("cohort document must be a JSON object")
    missing = [k for k in ("birth_year", "boundaries", "N", "E", "D") if k not in doc]
    if missing:
        raise SchemaError(f"cohort document lacks key(s) {missing}")
    birth_year = doc["birth_year"]
    if isinstance(birth_year, bool) or not isinstance(birth_year, int):
        raise SchemaError(f"birth_year must be an integer, got {birth_year!r}")
    bounds_raw = doc["boundaries"]
    if not isinstance(bounds_raw, list):
        raise SchemaError("'boundaries' must be a list")
    boundaries = tuple(_coerce_boundary(v, i) for i, v in enumerate(bounds_raw))
    try:
        return Cohort(
            birth_year=birth_year,
            boundaries=boundaries,
            active=tuple(_require_int_list(doc, "N")),
            entrants=tuple(_require_int_list(doc, "E")),
            deaths=tuple(_require_int_list(doc, "D")),
        )
    except DomainError as exc:
        raise SchemaError(f"invalid cohort document: {exc}") from exc
