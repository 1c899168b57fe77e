"""Software effort estimation from Use Case Points.

The package couples three learned stages (productivity clustering, a
Gaussian-kernel SVM over environmental factors, and an RBF network for
effort) with the classic fixed-ratio estimators and an evaluation kit
built on unbiased error measures.
"""

__version__ = "0.1.0"

from .ucp import (
    ActorCounts,
    DEFAULT_WEIGHTS,
    FactorRatings,
    UcpBreakdown,
    UseCaseCounts,
    WeightTable,
    classify_use_case,
    compute_ef,
    compute_tcf,
    compute_uaw,
    compute_ucp,
    compute_uuc,
    compute_uucp,
    load_weights,
)

__all__ = [
    "ActorCounts",
    "DEFAULT_WEIGHTS",
    "FactorRatings",
    "UcpBreakdown",
    "UseCaseCounts",
    "WeightTable",
    "classify_use_case",
    "compute_ef",
    "compute_tcf",
    "compute_uaw",
    "compute_ucp",
    "compute_uuc",
    "compute_uucp",
    "load_weights",
]
