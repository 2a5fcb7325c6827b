"""Structural balance in signed networks: walk-based metrics, sign-shuffle
null-model significance, and balance-maximizing sign prediction."""

__version__ = "0.1.0"

from .exceptions import ConvergenceDomainError, EdgeListError
from .graph import (
    SignedNetwork,
    SignMask,
    negative_fraction,
    parse_edge_list,
    parse_layered_edge_list,
    planted_faction_network,
    serialize_edge_list,
    split_adjacency,
    switch_nodes,
)
from .measures import BalanceConfig, all_measures, b_eb, b_sa, b_strong, b_weak, imbalance
from .nullmodel import EtaReport, eta_report, shuffle_signs
from .evaluation import ConfusionCounts, accuracy, all_positive_baseline, nmi
from .prediction import (
    AnnealSchedule,
    MultiPredictionReport,
    PredictionOutcome,
    PredictionReport,
    anneal_multi,
    loo_crossval,
    multi_crossval,
    predict_single,
)
from .spectral import (
    DetState,
    FlipUpdate,
    ResolventState,
    det_lemma_flip,
    det_state,
    leading_eigenvalue,
    log_det_ratio,
    resolvent,
    trace_exp,
    woodbury_flip,
)

__all__ = [
    "__version__",
    "ConvergenceDomainError",
    "EdgeListError",
    "SignedNetwork",
    "SignMask",
    "negative_fraction",
    "parse_edge_list",
    "parse_layered_edge_list",
    "planted_faction_network",
    "serialize_edge_list",
    "split_adjacency",
    "switch_nodes",
    "BalanceConfig",
    "all_measures",
    "b_eb",
    "b_sa",
    "b_strong",
    "b_weak",
    "imbalance",
    "EtaReport",
    "eta_report",
    "shuffle_signs",
    "ConfusionCounts",
    "accuracy",
    "all_positive_baseline",
    "nmi",
    "AnnealSchedule",
    "MultiPredictionReport",
    "PredictionOutcome",
    "PredictionReport",
    "anneal_multi",
    "loo_crossval",
    "multi_crossval",
    "predict_single",
    "DetState",
    "FlipUpdate",
    "ResolventState",
    "det_lemma_flip",
    "det_state",
    "leading_eigenvalue",
    "log_det_ratio",
    "resolvent",
    "trace_exp",
    "woodbury_flip",
]
