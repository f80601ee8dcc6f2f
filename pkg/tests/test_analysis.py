import pytest

import bizsurv.analysis
from bizsurv import (
    Family,
    FitFailureError,
    FitOptions,
    RankingError,
    ShapeClass,
    Strategy,
    SupportClass,
    analyze_cohort,
    summarize_shapes,
)
from bizsurv.report import fit_document

FAST_OPTIONS = FitOptions(restarts=5)


def test_analyze_cohort_structure(cohort_2011):
    report = analyze_cohort(
        cohort_2011,
        families=(Family.EXP, Family.WEI),
        strategies=(Strategy.PETO_TURNBULL,),
        options=FAST_OPTIONS,
    )
    assert report.birth_year == 2011
    assert set(report.analyses) == {Strategy.PETO_TURNBULL}
    analysis = report.analyses[Strategy.PETO_TURNBULL]
    assert analysis.strategy is Strategy.PETO_TURNBULL
    assert [r.family for r in analysis.ranking.entries] == [Family.WEI, Family.EXP]
    assert analysis.ranking.entries[0].delta == 0.0
    assert analysis.failures == ()

    # EXP trails WEI by far more than 20, so only WEI carries a shape entry
    assert [e.family for e in analysis.entries] == [Family.WEI]
    entry = analysis.entries[0]
    assert entry.support_class is SupportClass.BEST
    assert entry.shape.shape_class is ShapeClass.DFR
    assert entry.fit.converged


def test_analyze_cohort_both_strategies_differ(cohort_2011):
    report = analyze_cohort(
        cohort_2011,
        families=(Family.WEI,),
        strategies=(Strategy.LIFE_TABLE, Strategy.PETO_TURNBULL),
        options=FAST_OPTIONS,
    )
    lt = report.analyses[Strategy.LIFE_TABLE].entries[0].fit
    pt = report.analyses[Strategy.PETO_TURNBULL].entries[0].fit
    assert lt.params != pt.params
    assert lt.converged and pt.converged


def test_analyze_cohort_is_deterministic(cohort_2011):
    kwargs = dict(
        families=(Family.EXP, Family.GAM),
        strategies=(Strategy.PETO_TURNBULL,),
        options=FAST_OPTIONS,
    )
    one = analyze_cohort(cohort_2011, **kwargs)
    two = analyze_cohort(cohort_2011, **kwargs)
    doc_one = fit_document(2011, one.analyses[Strategy.PETO_TURNBULL])
    doc_two = fit_document(2011, two.analyses[Strategy.PETO_TURNBULL])
    assert doc_one == doc_two


def test_analyze_cohort_records_family_failures(cohort_2011, monkeypatch):
    real_fit = bizsurv.analysis.fit_mle

    def flaky_fit(family, cohort, strategy, options):
        if family is Family.EXP:
            raise FitFailureError("no usable starting point")
        return real_fit(family, cohort, strategy, options)

    monkeypatch.setattr(bizsurv.analysis, "fit_mle", flaky_fit)
    report = analyze_cohort(
        cohort_2011,
        families=(Family.EXP, Family.WEI),
        strategies=(Strategy.PETO_TURNBULL,),
        options=FAST_OPTIONS,
    )
    analysis = report.analyses[Strategy.PETO_TURNBULL]
    assert analysis.failures == ((Family.EXP, "no usable starting point"),)
    assert [r.family for r in analysis.ranking.entries] == [Family.WEI]


def test_analyze_cohort_raises_when_everything_fails(cohort_2011, monkeypatch):
    def doomed_fit(family, cohort, strategy, options):
        raise FitFailureError("nope")

    monkeypatch.setattr(bizsurv.analysis, "fit_mle", doomed_fit)
    with pytest.raises(RankingError):
        analyze_cohort(
            cohort_2011,
            families=(Family.EXP,),
            strategies=(Strategy.PETO_TURNBULL,),
            options=FAST_OPTIONS,
        )


def test_summarize_shapes_counts(cohort_2011):
    report = analyze_cohort(
        cohort_2011,
        families=(Family.EXP, Family.WEI),
        strategies=(Strategy.PETO_TURNBULL,),
        options=FAST_OPTIONS,
    )
    summary = summarize_shapes([report, report])
    counts = summary.support_counts["pt"]
    assert counts["WEI"]["best"] == 2
    assert counts["WEI"]["little_support"] == 0
    assert counts["EXP"]["no_support"] == 2
    assert counts["GGD"]["best"] == 0
    shapes = summary.best_shape_counts["pt"]
    assert shapes["DFR"] == 2
    assert shapes["UBT"] == 0


def test_summarize_shapes_empty():
    summary = summarize_shapes([])
    assert summary.support_counts == {}
    assert summary.best_shape_counts == {}
