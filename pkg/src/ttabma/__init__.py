"""Model averaging over test-time-augmentation prediction columns.

Prediction tables hold one probability column per augmented view of each
test sample. Candidate logistic models over column subsets are scored
with a BIC likelihood proxy, combined by posterior weight, and compared
against the plain column mean. ``ttabma.logreg.BACKEND`` reports whether
the compiled solver kernel or the NumPy fallback is active.
"""

from .bma import (
    BmaConfig,
    BmaSummary,
    CandidateModel,
    bayes_factor,
    generate_candidates,
    posterior_weight,
    run_bma,
)
from .data import PredictionTable, SyntheticConfig, load_csv, save_csv, synthesize
from .logreg import (
    BACKEND,
    DesignMatrix,
    FitConfig,
    FittedModel,
    bic,
    fit_logistic,
    log_likelihood,
)
from .metrics import ConfusionCounts, MetricValue, confusion, mean_std
from .predict import (
    AggregatedPrediction,
    UncertaintyReport,
    column_accuracies,
    predict_bma,
    predict_mean,
    uncertainty,
)
from .report import run_aggregate, run_simulation, to_json

__version__ = "0.1.0"

__all__ = [
    "AggregatedPrediction",
    "BACKEND",
    "BmaConfig",
    "BmaSummary",
    "CandidateModel",
    "ConfusionCounts",
    "DesignMatrix",
    "FitConfig",
    "FittedModel",
    "MetricValue",
    "PredictionTable",
    "SyntheticConfig",
    "UncertaintyReport",
    "bayes_factor",
    "bic",
    "column_accuracies",
    "confusion",
    "fit_logistic",
    "generate_candidates",
    "load_csv",
    "log_likelihood",
    "mean_std",
    "posterior_weight",
    "predict_bma",
    "predict_mean",
    "run_aggregate",
    "run_bma",
    "run_simulation",
    "save_csv",
    "synthesize",
    "to_json",
    "uncertainty",
]
