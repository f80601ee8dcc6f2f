"""Render report documents as SVG figures."""

from __future__ import annotations

import os
from typing import Any, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "bizsurv"

import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "plot_shape_params",
    "plot_support_counts",
    "plot_survival_rates",
    "render_report_figures",
]

# Stripping the creation date keeps repeated renders byte-identical.
_SVG_METADATA = {"Date": None}

_METHOD_LABELS = {"life_table": "life table", "peto_turnbull": "Peto-Turnbull"}
_METHOD_STYLES = {"life_table": "--", "peto_turnbull": "-"}
_STRATEGY_LABELS = {"lt": "life-table weights", "pt": "Peto-Turnbull weights"}
_SUPPORT_LABELS = (
    ("best", "best"),
    ("little_support", "little support"),
    ("no_support", "no support"),
)
_SUPPORT_COLORS = {"best": "#2b7a3d", "little_support": "#d9a440", "no_support": "#b3b3b3"}


def _save(fig: Any, path: str | os.PathLike[str]) -> None:
    fig.savefig(os.fspath(path), format="svg", metadata=_SVG_METADATA)
    plt.close(fig)


def plot_survival_rates(document: Mapping[str, Any], path: str | os.PathLike[str]) -> None:
    """Line chart of survival against age, one line per cohort and estimator."""
    rows = document["rows"]
    series: dict[tuple[int, str], list[tuple[float, float]]] = {}
    for row in rows:
        key = (row["birth_year"], row["method"])
        series.setdefault(key, []).append((row["age_years"], row["survival"]))
    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=100)
    for (year, method), points in sorted(series.items()):
        points.sort()
        ages = [0.0] + [p[0] for p in points]
        values = [1.0] + [p[1] for p in points]
        ax.plot(
            ages,
            values,
            _METHOD_STYLES.get(method, "-"),
            marker="o",
            markersize=3,
            label=f"{year} ({_METHOD_LABELS.get(method, method)})",
        )
    ax.set_xlabel("age (years)")
    ax.set_ylabel("fraction surviving")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_support_counts(document: Mapping[str, Any], path: str | os.PathLike[str]) -> None:
    """Stacked bar chart of support-class counts per family, one panel per strategy."""
    rows = document["rows"]
    strategies: list[str] = []
    for row in rows:
        if row["strategy"] not in strategies:
            strategies.append(row["strategy"])
    n_panels = max(len(strategies), 1)
    fig, axes = plt.subplots(
        1, n_panels, figsize=(5.0 * n_panels, 4.0), dpi=100, squeeze=False
    )
    for ax, strategy in zip(axes[0], strategies):
        subset = [row for row in rows if row["strategy"] == strategy]
        families = [row["family"] for row in subset]
        positions = range(len(families))
        bottoms = [0.0] * len(subset)
        for key, label in _SUPPORT_LABELS:
            heights = [row[key] for row in subset]
            ax.bar(
                positions,
                heights,
                bottom=bottoms,
                label=label,
                color=_SUPPORT_COLORS[key],
            )
            bottoms = [b + h for b, h in zip(bottoms, heights)]
        ax.set_xticks(list(positions))
        ax.set_xticklabels(families, fontsize=8)
        ax.set_ylabel("cohorts")
        ax.set_title(_STRATEGY_LABELS.get(strategy, strategy), fontsize=10)
        ax.legend(fontsize=8)
    if not strategies:
        axes[0][0].set_axis_off()
    fig.tight_layout()
    _save(fig, path)


def plot_shape_params(document: Mapping[str, Any], path: str | os.PathLike[str]) -> None:
    """Errorbar chart of fitted shape parameters by cohort birth year."""
    rows = document["rows"]
    series: dict[tuple[str, str, str], list[tuple[int, float, float]]] = {}
    for row in rows:
        key = (row["strategy"], row["family"], row["param"])
        err = row["std_error"]
        series.setdefault(key, []).append(
            (row["birth_year"], row["estimate"], 0.0 if err is None else err)
        )
    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=100)
    markers = {"WEI": "o", "GAM": "s"}
    for (strategy, family, param), points in sorted(series.items()):
        points.sort()
        years = [p[0] for p in points]
        estimates = [p[1] for p in points]
        errors = [p[2] for p in points]
        ax.errorbar(
            years,
            estimates,
            yerr=errors,
            marker=markers.get(family, "o"),
            markersize=4,
            capsize=3,
            linestyle="-" if strategy == "pt" else "--",
            label=f"{family} {param} ({strategy})",
        )
    ax.axhline(1.0, color="black", linewidth=0.8, alpha=0.5)
    ax.set_xlabel("cohort birth year")
    ax.set_ylabel("shape estimate")
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


_FIGURES = (
    ("survival_rates", plot_survival_rates),
    ("support_counts", plot_support_counts),
    ("shape_params", plot_shape_params),
)


def render_report_figures(
    documents: Mapping[str, Mapping[str, Any]], out_dir: str | os.PathLike[str]
) -> Sequence[str]:
    """Write one SVG per report document into out_dir; returns the paths written."""
    written: list[str] = []
    for name, renderer in _FIGURES:
        target = os.path.join(os.fspath(out_dir), f"{name}.svg")
        renderer(documents[name], target)
        written.append(target)
    return written
