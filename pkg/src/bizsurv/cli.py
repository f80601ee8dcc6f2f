"""Command-line surface: estimate, fit and report subcommands.

Exit codes: 0 success, 2 input/usage error, 3 data or schema error,
4 fit/ranking failure, 1 internal error.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import click
from click.core import ParameterSource

from . import __version__
from .analysis import analyze_cohort
from .distributions import FAMILY_ORDER, Family
from .errors import (
    BizsurvError,
    ConvergenceError,
    DegenerateCohortError,
    DomainError,
    FitFailureError,
    IncompleteCohortError,
    ParseError,
    RankingError,
    SchemaError,
)
from .fitting import FitOptions, Strategy
from .ingestion import (
    BdsRow,
    build_cohort,
    complete_birth_years,
    load_cohort_json,
    parse_bds_csv,
)
from .nonparametric import Cohort
from .plots import render_report_figures
from .report import (
    estimate_csv_rows,
    estimate_document,
    fit_csv_rows,
    fit_document,
    report_documents,
    shape_params_csv_rows,
    support_csv_rows,
    survival_csv_rows,
    write_csv,
    write_json,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_DATA = 3
EXIT_FIT = 4

_DATA_ERRORS = (
    ParseError,
    SchemaError,
    IncompleteCohortError,
    DegenerateCohortError,
    DomainError,
)
_FIT_ERRORS = (FitFailureError, ConvergenceError, RankingError)

_CONFIG_KEYS = frozenset(
    {
        "input",
        "cohort",
        "strategy",
        "families",
        "restarts",
        "tol",
        "horizon_years",
        "out",
        "format",
    }
)


class _CodedError(click.ClickException):
    """ClickException carrying one of the documented exit codes."""

    def __init__(self, message: str, exit_code: int) -> None:
        super().__init__(message)
        self.exit_code = exit_code


def _input_error(message: str) -> _CodedError:
    return _CodedError(message, EXIT_INPUT)


def _dispatch(work: Callable[[], None]) -> None:
    try:
        work()
    except click.ClickException:
        raise
    except _DATA_ERRORS as exc:
        raise _CodedError(str(exc), EXIT_DATA) from exc
    except _FIT_ERRORS as exc:
        raise _CodedError(str(exc), EXIT_FIT) from exc
    except OSError as exc:
        raise _CodedError(str(exc), EXIT_INPUT) from exc
    except BizsurvError as exc:
        raise _CodedError(str(exc), EXIT_INTERNAL) from exc


# --- config file -------------------------------------------------------------


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except OSError as exc:
        raise _input_error(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _input_error(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise _input_error("config file must contain a JSON object")
    unknown = sorted(set(document) - _CONFIG_KEYS)
    if unknown:
        raise _input_error(f"unknown config keys: {', '.join(unknown)}")
    return document


def _merge(ctx: click.Context, config: Mapping, param: str, key: str, current: Any) -> Any:
    """Config supplies a value only when the flag was not given explicitly."""
    if key in config and ctx.get_parameter_source(param) != ParameterSource.COMMANDLINE:
        return config[key]
    return current


# --- option normalization ----------------------------------------------------


def _as_tags(value: Any, name: str) -> tuple[str, ...]:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",")]
        return tuple(p for p in parts if p)
    if isinstance(value, (list, tuple)):
        if not all(isinstance(item, (str, int)) for item in value):
            raise _input_error(f"{name} entries must be strings or integers")
        return tuple(str(item).strip() for item in value)
    raise _input_error(f"{name} must be a string or a list")


def _normalize_inputs(value: Any) -> list[Path]:
    paths = [Path(p) for p in _as_tags(value, "input")]
    if not paths:
        raise _input_error("at least one --input file is required")
    return paths


def _normalize_cohorts(value: Any) -> frozenset[int] | None:
    tags = _as_tags(value, "cohort")
    if not tags:
        raise _input_error("empty cohort selection")
    if len(tags) == 1 and tags[0].lower() == "all":
        return None
    years = set()
    for tag in tags:
        try:
            years.add(int(tag))
        except ValueError:
            raise _input_error(f"cohort must be 'all' or birth years, got {tag!r}") from None
    return frozenset(years)


def _normalize_strategies(value: Any) -> tuple[Strategy, ...]:
    if not isinstance(value, str) or value not in ("lt", "pt", "both"):
        raise _input_error(f"strategy must be one of lt, pt, both; got {value!r}")
    if value == "both":
        return (Strategy.LIFE_TABLE, Strategy.PETO_TURNBULL)
    return (Strategy(value),)


def _normalize_families(value: Any) -> tuple[Family, ...]:
    tags = _as_tags(value, "families")
    if not tags:
        raise _input_error("empty family selection")
    if len(tags) == 1 and tags[0].lower() == "all":
        return tuple(FAMILY_ORDER)
    families = []
    for tag in tags:
        try:
            family = Family(tag.upper())
        except ValueError:
            valid = ", ".join(f.value for f in FAMILY_ORDER)
            raise _input_error(f"unknown family {tag!r}; valid tags: {valid}") from None
        if family not in families:
            families.append(family)
    return tuple(families)


def _normalize_formats(value: Any, allowed: tuple[str, ...]) -> tuple[str, ...]:
    tags = tuple(t.lower() for t in _as_tags(value, "format"))
    if not tags:
        raise _input_error("empty format selection")
    for tag in tags:
        if tag not in allowed:
            raise _input_error(
                f"unknown format {tag!r}; valid formats: {', '.join(allowed)}"
            )
    return tuple(dict.fromkeys(tags))


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _input_error(f"{name} must be an integer, got {value!r}")
    return value


def _as_float(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _input_error(f"{name} must be a number, got {value!r}")
    return float(value)


def _fit_options(restarts: Any, tol: Any, horizon_years: Any) -> FitOptions:
    try:
        return FitOptions(
            restarts=_as_int(restarts, "restarts"),
            tol=_as_float(tol, "tol"),
            horizon_years=_as_float(horizon_years, "horizon_years"),
        )
    except DomainError as exc:
        raise _input_error(str(exc)) from exc


# --- cohort loading ----------------------------------------------------------


def _load_sources(paths: Sequence[Path]) -> tuple[dict[int, Cohort], list[BdsRow]]:
    cohorts: dict[int, Cohort] = {}
    rows: list[BdsRow] = []
    for path in paths:
        if not path.is_file():
            raise _input_error(f"input file not found: {path}")
        if path.suffix.lower() == ".json":
            cohort = load_cohort_json(path)
            if cohort.birth_year in cohorts:
                raise SchemaError(
                    f"duplicate cohort definition for birth year {cohort.birth_year}"
                )
            cohorts[cohort.birth_year] = cohort
        else:
            rows.extend(parse_bds_csv(path))
    return cohorts, rows


def _select_cohorts(
    paths: Sequence[Path], requested: frozenset[int] | None
) -> list[Cohort]:
    cohorts, rows = _load_sources(paths)
    if rows:
        for year in complete_birth_years(rows):
            if year in cohorts:
                raise SchemaError(f"duplicate cohort definition for birth year {year}")
            cohorts[year] = build_cohort(rows, year)
    if requested is None:
        selected = sorted(cohorts)
    else:
        missing = sorted(requested - set(cohorts))
        if missing:
            raise _input_error(
                "requested cohorts not found in inputs: "
                + ", ".join(str(y) for y in missing)
            )
        selected = sorted(requested)
    if not selected:
        raise _input_error("inputs contain no complete cohort")
    return [cohorts[year] for year in selected]


# --- output writing ----------------------------------------------------------


def _json_job(path: Path, document: Mapping) -> tuple[Path, Callable[[Path], None]]:
    return path, lambda p: write_json(p, document)


def _csv_job(
    path: Path, fields: tuple[str, ...], rows: list[dict]
) -> tuple[Path, Callable[[Path], None]]:
    return path, lambda p: write_csv(p, fields, rows)


def _write_all(out_dir: Path, jobs: Sequence[tuple[Path, Callable[[Path], None]]]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for path, write in jobs:
        write(path)
        click.echo(f"wrote {path}")


# --- commands ----------------------------------------------------------------


def _common_options(fn):
    fn = click.option(
        "--config",
        "config_path",
        type=str,
        default=None,
        help="JSON file mirroring the flags; explicit flags win.",
    )(fn)
    fn = click.option(
        "--out",
        "out_dir",
        type=str,
        default=".",
        show_default=True,
        help="Output directory (created if missing).",
    )(fn)
    fn = click.option(
        "--cohort",
        "cohort_spec",
        type=str,
        default="all",
        show_default=True,
        help="Comma-separated birth years, or 'all'.",
    )(fn)
    fn = click.option(
        "--input",
        "inputs",
        multiple=True,
        type=str,
        help="Input file (.json cohort or establishment-counts CSV); repeatable.",
    )(fn)
    return fn


def _fit_flags(fn):
    fn = click.option(
        "--horizon-years",
        "horizon_years",
        type=float,
        default=50.0,
        show_default=True,
        help="Search horizon for hazard change points.",
    )(fn)
    fn = click.option(
        "--tol", type=float, default=1.0e-9, show_default=True, help="Optimizer tolerance."
    )(fn)
    fn = click.option(
        "--restarts",
        type=int,
        default=20,
        show_default=True,
        help="Multi-start count per family.",
    )(fn)
    fn = click.option(
        "--families",
        default="all",
        show_default=True,
        help="Comma-separated family tags (EXP, WEI, GAM, GGD, PA2, FSK, BUR, GPL, DAG) or 'all'.",
    )(fn)
    fn = click.option(
        "--strategy",
        type=click.Choice(["lt", "pt", "both"]),
        default="both",
        show_default=True,
        help="Pseudo-count weighting for the fit likelihood.",
    )(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="bizsurv")
def main() -> None:
    """Survival analysis of business establishment birth cohorts."""


@main.command()
@_common_options
@click.option(
    "--format",
    "formats",
    default="csv,json",
    show_default=True,
    help="Comma-separated subset of: csv, json.",
)
@click.pass_context
def estimate(ctx, inputs, cohort_spec, out_dir, config_path, formats) -> None:
    """Write per-cohort nonparametric survival tables."""

    def work() -> None:
        config = _load_config(config_path)
        paths = _normalize_inputs(_merge(ctx, config, "inputs", "input", inputs))
        requested = _normalize_cohorts(_merge(ctx, config, "cohort_spec", "cohort", cohort_spec))
        out = Path(_merge(ctx, config, "out_dir", "out", out_dir))
        fmts = _normalize_formats(
            _merge(ctx, config, "formats", "format", formats), ("csv", "json")
        )
        cohorts = _select_cohorts(paths, requested)
        jobs = []
        for cohort in cohorts:
            document = estimate_document(cohort)
            stem = out / f"estimate_{cohort.birth_year}"
            if "csv" in fmts:
                fields, rows = estimate_csv_rows(document)
                jobs.append(_csv_job(stem.with_suffix(".csv"), fields, rows))
            if "json" in fmts:
                jobs.append(_json_job(stem.with_suffix(".json"), document))
        _write_all(out, jobs)

    _dispatch(work)


@main.command()
@_common_options
@_fit_flags
@click.option(
    "--format",
    "formats",
    default="csv,json",
    show_default=True,
    help="Comma-separated subset of: csv, json.",
)
@click.pass_context
def fit(
    ctx,
    inputs,
    cohort_spec,
    out_dir,
    config_path,
    strategy,
    families,
    restarts,
    tol,
    horizon_years,
    formats,
) -> None:
    """Fit the parametric families and write AIC rankings."""

    def work() -> None:
        config = _load_config(config_path)
        paths = _normalize_inputs(_merge(ctx, config, "inputs", "input", inputs))
        requested = _normalize_cohorts(_merge(ctx, config, "cohort_spec", "cohort", cohort_spec))
        out = Path(_merge(ctx, config, "out_dir", "out", out_dir))
        strategies = _normalize_strategies(_merge(ctx, config, "strategy", "strategy", strategy))
        picked = _normalize_families(_merge(ctx, config, "families", "families", families))
        options = _fit_options(
            _merge(ctx, config, "restarts", "restarts", restarts),
            _merge(ctx, config, "tol", "tol", tol),
            _merge(ctx, config, "horizon_years", "horizon_years", horizon_years),
        )
        fmts = _normalize_formats(
            _merge(ctx, config, "formats", "format", formats), ("csv", "json")
        )
        cohorts = _select_cohorts(paths, requested)
        jobs = []
        for cohort in cohorts:
            report = analyze_cohort(
                cohort, families=picked, strategies=strategies, options=options
            )
            for strat in strategies:
                document = fit_document(cohort.birth_year, report.analyses[strat])
                stem = out / f"fit_{cohort.birth_year}_{strat.value}"
                if "csv" in fmts:
                    fields, rows = fit_csv_rows(document)
                    jobs.append(_csv_job(stem.with_suffix(".csv"), fields, rows))
                if "json" in fmts:
                    jobs.append(_json_job(stem.with_suffix(".json"), document))
        _write_all(out, jobs)

    _dispatch(work)


_REPORT_CSV_ROWS = {
    "survival_rates": survival_csv_rows,
    "support_counts": support_csv_rows,
    "shape_params": shape_params_csv_rows,
}


@main.command()
@_common_options
@_fit_flags
@click.option(
    "--format",
    "formats",
    default="csv,json,svg",
    show_default=True,
    help="Comma-separated subset of: csv, json, svg.",
)
@click.pass_context
def report(
    ctx,
    inputs,
    cohort_spec,
    out_dir,
    config_path,
    strategy,
    families,
    restarts,
    tol,
    horizon_years,
    formats,
) -> None:
    """Aggregate cohorts into survival, support-count and shape-parameter reports."""

    def work() -> None:
        config = _load_config(config_path)
        paths = _normalize_inputs(_merge(ctx, config, "inputs", "input", inputs))
        requested = _normalize_cohorts(_merge(ctx, config, "cohort_spec", "cohort", cohort_spec))
        out = Path(_merge(ctx, config, "out_dir", "out", out_dir))
        strategies = _normalize_strategies(_merge(ctx, config, "strategy", "strategy", strategy))
        picked = _normalize_families(_merge(ctx, config, "families", "families", families))
        options = _fit_options(
            _merge(ctx, config, "restarts", "restarts", restarts),
            _merge(ctx, config, "tol", "tol", tol),
            _merge(ctx, config, "horizon_years", "horizon_years", horizon_years),
        )
        fmts = _normalize_formats(
            _merge(ctx, config, "formats", "format", formats), ("csv", "json", "svg")
        )
        cohorts = _select_cohorts(paths, requested)
        reports = [
            analyze_cohort(cohort, families=picked, strategies=strategies, options=options)
            for cohort in cohorts
        ]
        documents = report_documents(cohorts, reports)
        jobs = []
        for name, document in documents.items():
            if "csv" in fmts:
                fields, rows = _REPORT_CSV_ROWS[name](document)
                jobs.append(_csv_job(out / f"{name}.csv", fields, rows))
            if "json" in fmts:
                jobs.append(_json_job(out / f"{name}.json", document))
        _write_all(out, jobs)
        if "svg" in fmts:
            for path in render_report_figures(documents, out):
                click.echo(f"wrote {path}")

    _dispatch(work)


if __name__ == "__main__":
    main()
