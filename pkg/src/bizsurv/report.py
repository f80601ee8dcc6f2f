"""Building and writing the CSV/JSON documents the CLI emits.

Every JSON document carries ``version`` and ``kind`` fields and
validates against the schema of the same kind shipped under
``bizsurv/schemas``.  Floats are rounded to 10 significant digits in
JSON; CSV mirrors the conventional display precision instead (4 decimals
for survival probabilities, 1 decimal for change-point months).
Infinite interval boundaries serialize as the string "inf".  Output is
byte-deterministic for identical inputs: stable row ordering, fixed
float formatting and newline conventions.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .analysis import CohortShapeReport, StrategyAnalysis, summarize_shapes
from .distributions import Family, param_names
from .nonparametric import (
    Cohort,
    SurvivalEstimate,
    compute_w_prime,
    life_table_estimate,
    peto_turnbull_closed_form,
)

__all__ = [
    "SCHEMA_VERSION",
    "estimate_document",
    "fit_document",
    "load_schema",
    "report_documents",
    "write_csv",
    "write_json",
]

SCHEMA_VERSION = 1

_SHAPE_PARAM_FAMILIES = (Family.WEI, Family.GAM)


def load_schema(kind: str) -> dict:
    """Load the shipped JSON schema for a document kind."""
    resource = importlib.resources.files("bizsurv.schemas") / f"{kind}.schema.json"
    return json.loads(resource.read_text(encoding="utf-8"))


def _round_sig(x: float, digits: int = 10) -> float:
    return float(f"{x:.{digits}g}")


def jsonify(value):
    """Recursively prepare a document for JSON: round floats, name inf."""
    if isinstance(value, dict):
        return {k: jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if isinstance(value, bool) or isinstance(value, int) or value is None:
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return _round_sig(value)
    return value


def write_json(path: Path, document: Mapping) -> None:
    path.write_text(
        json.dumps(jsonify(dict(document)), indent=2) + "\n", encoding="utf-8"
    )


def write_csv(path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in fieldnames})


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.10g}"
    return str(value)


def _fmt4(x: float) -> str:
    return f"{x:.4f}"


def _fmt1(x: float) -> str:
    return f"{x:.1f}"


# --- estimate ----------------------------------------------------------------


def estimate_document(
    cohort: Cohort,
    life_table: SurvivalEstimate | None = None,
    peto_turnbull: SurvivalEstimate | None = None,
) -> dict:
    """The per-cohort nonparametric estimate document."""
    lt = life_table or life_table_estimate(cohort)
    pt = peto_turnbull or peto_turnbull_closed_form(cohort)
    w = compute_w_prime(cohort)
    intervals = []
    for j in range(cohort.n_intervals):
        intervals.append(
            {
                "j": j + 1,
                "start": cohort.boundaries[j],
                "end": cohort.boundaries[j + 1],
                "active": cohort.active[j],
                "entrants": cohort.entrants[j] if j < cohort.n_intervals - 1 else None,
                "deaths": cohort.deaths[j],
                "net_withdrawals": w[j],
                "survival_life_table": lt.values[j],
                "survival_peto_turnbull": pt.values[j],
            }
        )
    return {
        "version": SCHEMA_VERSION,
        "kind": "cohort_estimates",
        "birth_year": cohort.birth_year,
        "sample_size": pt.sample_size,
        "intervals": intervals,
    }


_ESTIMATE_FIELDS = (
    "birth_year",
    "j",
    "start",
    "end",
    "active",
    "entrants",
    "deaths",
    "net_withdrawals",
    "survival_life_table",
    "survival_peto_turnbull",
)


def estimate_csv_rows(document: Mapping) -> tuple[tuple[str, ...], list[dict]]:
    rows = []
    for item in document["intervals"]:
        row = dict(item)
        row["birth_year"] = document["birth_year"]
        row["survival_life_table"] = _fmt4(item["survival_life_table"])
        row["survival_peto_turnbull"] = _fmt4(item["survival_peto_turnbull"])
        rows.append(row)
    return _ESTIMATE_FIELDS, rows


# --- fit ---------------------------------------------------------------------


def _params_mapping(fit) -> dict:
    names = param_names(fit.family)
    params = {name: getattr(fit.params, name) for name in names}
    errors = (
        dict(zip(names, fit.std_errors)) if fit.std_errors is not None else None
    )
    return {"params": params, "std_errors": errors}


def fit_document(birth_year: int, analysis: StrategyAnalysis) -> dict:
    """The per-cohort, per-strategy model ranking document."""
    shape_by_family = {entry.family: entry.shape for entry in analysis.entries}
    models = []
    for ranked in analysis.ranking.entries:
        shape = shape_by_family.get(ranked.family)
        models.append(
            {
                "family": ranked.family.value,
                "n_params": ranked.fit.n_params,
                "log_lik": ranked.fit.log_lik,
                "aic": ranked.aic,
                "delta": ranked.delta,
                "support_class": ranked.support_class.value,
                "converged": ranked.fit.converged,
                "n_restarts_used": ranked.fit.n_restarts_used,
                **_params_mapping(ranked.fit),
                "shape_class": shape.shape_class.value if shape else None,
                "change_point_months": shape.change_point_months if shape else None,
                "change_point_beyond_horizon": (
                    shape.change_point_beyond_horizon if shape else False
                ),
            }
        )
    failures = [
        {"family": family.value, "error": message}
        for family, message in analysis.failures
    ] + [
        {"family": fit.family.value, "error": "did not converge"}
        for fit in analysis.ranking.failed
    ]
    return {
        "version": SCHEMA_VERSION,
        "kind": "model_ranking",
        "birth_year": birth_year,
        "strategy": analysis.strategy.value,
        "models": models,
        "failures": failures,
    }


_FIT_FIELDS = (
    "birth_year",
    "strategy",
    "family",
    "n_params",
    "log_lik",
    "aic",
    "delta",
    "support_class",
    "converged",
    "alpha",
    "beta",
    "sigma",
    "se_alpha",
    "se_beta",
    "se_sigma",
    "shape_class",
    "change_point_months",
    "change_point_beyond_horizon",
)


def fit_csv_rows(document: Mapping) -> tuple[tuple[str, ...], list[dict]]:
    rows = []
    for model in document["models"]:
        errors = model["std_errors"] or {}
        cp = model["change_point_months"]
        rows.append(
            {
                "birth_year": document["birth_year"],
                "strategy": document["strategy"],
                "family": model["family"],
                "n_params": model["n_params"],
                "log_lik": model["log_lik"],
                "aic": model["aic"],
                "delta": model["delta"],
                "support_class": model["support_class"],
                "converged": model["converged"],
                "alpha": model["params"].get("alpha"),
                "beta": model["params"].get("beta"),
                "sigma": model["params"].get("sigma"),
                "se_alpha": errors.get("alpha"),
                "se_beta": errors.get("beta"),
                "se_sigma": errors.get("sigma"),
                "shape_class": model["shape_class"],
                "change_point_months": _fmt1(cp) if cp is not None else None,
                "change_point_beyond_horizon": model["change_point_beyond_horizon"],
            }
        )
    return _FIT_FIELDS, rows


# --- report ------------------------------------------------------------------


def survival_rates_document(cohorts: Sequence[Cohort]) -> dict:
    """Survival at each finite age, by cohort and estimator (chart data)."""
    rows = []
    for cohort in cohorts:
        for method, estimate in (
            ("life_table", life_table_estimate(cohort)),
            ("peto_turnbull", peto_turnbull_closed_form(cohort)),
        ):
            for age, value in estimate.points:
                if math.isfinite(age):
                    rows.append(
                        {
                            "birth_year": cohort.birth_year,
                            "method": method,
                            "age_years": age,
                            "survival": value,
                        }
                    )
    return {"version": SCHEMA_VERSION, "kind": "survival_rates", "rows": rows}


def support_counts_document(reports: Sequence[CohortShapeReport]) -> dict:
    """Support-class counts per family, plus shapes among best models."""
    summary = summarize_shapes(reports)
    support_rows = []
    for strategy in sorted(summary.support_counts):
        for family, counts in summary.support_counts[strategy].items():
            support_rows.append(
                {
                    "strategy": strategy,
                    "family": family,
                    "best": counts["best"],
                    "little_support": counts["little_support"],
                    "no_support": counts["no_support"],
                }
            )
    shape_rows = []
    for strategy in sorted(summary.best_shape_counts):
        for shape_class, count in summary.best_shape_counts[strategy].items():
            shape_rows.append(
                {"strategy": strategy, "shape_class": shape_class, "count": count}
            )
    return {
        "version": SCHEMA_VERSION,
        "kind": "support_counts",
        "rows": support_rows,
        "best_shape_counts": shape_rows,
    }


def shape_params_document(reports: Sequence[CohortShapeReport]) -> dict:
    """Weibull/gamma shape-parameter estimates with standard errors."""
    rows = []
    for report in reports:
        for strategy in sorted(report.analyses, key=lambda s: s.value):
            analysis = report.analyses[strategy]
            for ranked in analysis.ranking.entries:
                if ranked.family not in _SHAPE_PARAM_FAMILIES:
                    continue
                names = param_names(ranked.family)
                shape_name = "alpha" if ranked.family is Family.WEI else "beta"
                index = names.index(shape_name)
                se = (
                    ranked.fit.std_errors[index]
                    if ranked.fit.std_errors is not None
                    else None
                )
                rows.append(
                    {
                        "birth_year": report.birth_year,
                        "strategy": strategy.value,
                        "family": ranked.family.value,
                        "param": shape_name,
                        "estimate": getattr(ranked.fit.params, shape_name),
                        "std_error": se,
                    }
                )
    return {"version": SCHEMA_VERSION, "kind": "shape_params", "rows": rows}


_SURVIVAL_FIELDS = ("birth_year", "method", "age_years", "survival")
_SUPPORT_FIELDS = ("strategy", "family", "best", "little_support", "no_support")
_SHAPE_PARAM_FIELDS = (
    "birth_year",
    "strategy",
    "family",
    "param",
    "estimate",
    "std_error",
)


def survival_csv_rows(document: Mapping) -> tuple[tuple[str, ...], list[dict]]:
    rows = [dict(r, survival=_fmt4(r["survival"])) for r in document["rows"]]
    return _SURVIVAL_FIELDS, rows


def support_csv_rows(document: Mapping) -> tuple[tuple[str, ...], list[dict]]:
    return _SUPPORT_FIELDS, [dict(r) for r in document["rows"]]


def shape_params_csv_rows(document: Mapping) -> tuple[tuple[str, ...], list[dict]]:
    return _SHAPE_PARAM_FIELDS, [dict(r) for r in document["rows"]]


def report_documents(
    cohorts: Sequence[Cohort], reports: Sequence[CohortShapeReport]
) -> dict[str, dict]:
    """All three report documents keyed by kind."""
    return {
        "survival_rates": survival_rates_document(cohorts),
        "support_counts": support_counts_document(reports),
        "shape_params": shape_params_document(reports),
    }
