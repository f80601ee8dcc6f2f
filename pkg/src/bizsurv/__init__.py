"""Survival analysis of business establishment cohorts from census age tables."""

from .analysis import (
    CohortShapeReport,
    ShapeEntry,
    ShapeSummary,
    StrategyAnalysis,
    analyze_cohort,
    summarize_shapes,
)
from .distributions import (
    FAMILY_ORDER,
    ChangePoint,
    Family,
    Params,
    ShapeClass,
    ShapeReport,
    classify_shape,
    find_change_point,
    hazard,
    n_params,
    param_names,
    survival,
    validate_params,
)
from .errors import (
    BizsurvError,
    ConvergenceError,
    DegenerateCohortError,
    DomainError,
    FitFailureError,
    IncompleteCohortError,
    NoChangePointError,
    ParseError,
    RankingError,
    SchemaError,
)
from .fitting import (
    FitOptions,
    FitResult,
    Strategy,
    fit_mle,
    interval_log_likelihood,
    observed_information_se,
    standard_errors,
)
from .ingestion import (
    BdsRow,
    build_cohort,
    cohort_to_bds_rows,
    complete_birth_years,
    load_cohort_json,
    parse_bds_csv,
)
from .nonparametric import (
    Cohort,
    EstimateMethod,
    SurvivalEstimate,
    cohort_intervals,
    compute_w_prime,
    life_table_estimate,
    peto_turnbull_closed_form,
    turnbull_em,
    turnbull_intervals,
)
from .selection import ModelRanking, RankedModel, SupportClass, rank_models, support_class
from .special import ln_gamma, regularized_lower_gamma

__version__ = "0.1.0"

__all__ = [
    "BdsRow",
    "BizsurvError",
    "ChangePoint",
    "Cohort",
    "CohortShapeReport",
    "ConvergenceError",
    "DegenerateCohortError",
    "DomainError",
    "EstimateMethod",
    "FAMILY_ORDER",
    "Family",
    "FitFailureError",
    "FitOptions",
    "FitResult",
    "IncompleteCohortError",
    "ModelRanking",
    "NoChangePointError",
    "Params",
    "ParseError",
    "RankedModel",
    "RankingError",
    "SchemaError",
    "ShapeClass",
    "ShapeEntry",
    "ShapeReport",
    "ShapeSummary",
    "Strategy",
    "StrategyAnalysis",
    "SupportClass",
    "SurvivalEstimate",
    "analyze_cohort",
    "build_cohort",
    "classify_shape",
    "cohort_intervals",
    "cohort_to_bds_rows",
    "complete_birth_years",
    "compute_w_prime",
    "find_change_point",
    "fit_mle",
    "hazard",
    "interval_log_likelihood",
    "life_table_estimate",
    "ln_gamma",
    "load_cohort_json",
    "n_params",
    "observed_information_se",
    "param_names",
    "parse_bds_csv",
    "peto_turnbull_closed_form",
    "rank_models",
    "regularized_lower_gamma",
    "standard_errors",
    "summarize_shapes",
    "support_class",
    "survival",
    "turnbull_em",
    "turnbull_intervals",
    "validate_params",
]
