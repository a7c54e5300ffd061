"""Combinatorial capability model of product variety and complexity.

Exact-rational and log-domain evaluation of variety, average product
length, diversification stages and the hump, plus brute-force and Monte
Carlo oracles, development trajectories, figure datasets, and a CLI.
"""

from .core import (
    BACKENDS,
    EXACT,
    LOGFLOAT,
    UNBOUNDED,
    CrossCheck,
    ModelParams,
    Stage,
    avg_length,
    binomial,
    checked_rho,
    classify_stage,
    cross_validate,
    hump_condition,
    variety,
    variety_delta,
)
from .errors import CapModelError, DomainError, ResourceLimitError
from .figures import FigureData, FigureSeries, figure_dataset
from .oracle import (
    MODES,
    PER_LENGTH_BINOMIAL,
    PER_SUBSET,
    OracleReport,
    RecipeBookSample,
    empirical_stats,
    enumerate_products,
    sample_recipe_book,
    trial_seed,
    validate_expectations,
)
from .scalars import LogScalar, as_rational
from .trajectory import (
    Trajectory,
    TrajectoryPoint,
    default_n_max,
    evaluate_point,
    find_hump_onset,
    hump_onsets_nondecreasing,
    run_trajectory,
    sweep_range,
)

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "EXACT",
    "LOGFLOAT",
    "UNBOUNDED",
    "CapModelError",
    "CrossCheck",
    "DomainError",
    "FigureData",
    "FigureSeries",
    "LogScalar",
    "MODES",
    "ModelParams",
    "OracleReport",
    "PER_LENGTH_BINOMIAL",
    "PER_SUBSET",
    "RecipeBookSample",
    "ResourceLimitError",
    "Stage",
    "Trajectory",
    "TrajectoryPoint",
    "as_rational",
    "avg_length",
    "binomial",
    "checked_rho",
    "classify_stage",
    "cross_validate",
    "default_n_max",
    "empirical_stats",
    "enumerate_products",
    "evaluate_point",
    "figure_dataset",
    "find_hump_onset",
    "hump_condition",
    "hump_onsets_nondecreasing",
    "run_trajectory",
    "sample_recipe_book",
    "sweep_range",
    "trial_seed",
    "validate_expectations",
    "variety",
    "variety_delta",
    "__version__",
]
