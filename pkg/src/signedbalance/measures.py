"""The four walk-based balance metrics and a unified imbalance orientation.

Two of the metrics count imbalanced closed walks with a geometric length
discount (``weak`` counts walks closing exactly one negative edge,
``strong`` counts walks with an odd number of negative edges); the other
two are trace ratios with factorial (``eb``) or geometric (``sa``)
discounts.  ``imbalance`` maps all four onto a common scale where lower
means more balanced and 0 is attainable only by balanced configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .exceptions import ConvergenceDomainError
from .graph import SignedNetwork

METRICS = ("weak", "strong", "eb", "sa")

DEFAULT_ALPHA = 2.0


@dataclass(frozen=True)
class BalanceConfig:
    """Metric selector plus decay parameter.

    ``alpha`` rescales the spectral shift as ``alpha * leading_eigenvalue``
    and must exceed 1 for the walk sums to converge; the implied decay
    length is ``1 / ln(alpha)`` walk steps.  A fixed ``shift`` overrides
    the per-network choice, which is what the prediction routines use to
    keep candidate energies comparable.
    """

    metric: str = "weak"
    alpha: float = DEFAULT_ALPHA
    shift: float | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if not self.alpha > 1.0:
            raise ValueError("alpha must exceed 1")
        if self.shift is not None and self.shift <= 0.0:
            raise ValueError("fixed shift must be positive")

    @property
    def decay_length(self) -> float:
        return 1.0 / np.log(self.alpha)


def resolve_shift(net: SignedNetwork, cfg: BalanceConfig) -> float:
    """Spectral shift for this network under ``cfg``.

    ``weak`` scales the leading eigenvalue of the positive part; the other
    shift-based metrics scale the leading eigenvalue of the unsigned
    adjacency, which dominates every sign reassignment on fixed positions.
    An eigenvalue of exactly 0 (no positive edges / no edges) is floored to
    1 so the shift stays positive; every metric then takes its exact limit
    value regardless of the floor.
    """
    if cfg.shift is not None:
        return cfg.shift
    base = net.pos_adj if cfg.metric == "weak" else net.unsigned_adj
    lam = spectral.leading_eigenvalue(base)
    if lam <= 0.0:
        lam = 1.0
    return cfg.alpha * lam


def b_weak(net: SignedNetwork, cfg: BalanceConfig | None = None) -> float:
    """Geometrically discounted count of closed walks through exactly one
    negative edge; 0 when the network has no negative edges."""
    cfg = _coerce(cfg, "weak")
    state = spectral.resolvent(net.pos_adj, resolve_shift(net, cfg), net.neg_adj)
    return state.trace_nr


def b_strong(net: SignedNetwork, cfg: BalanceConfig | None = None) -> float:
    """Quarter log-determinant ratio of the shifted signed and unsigned
    adjacencies; non-negative, and 0 iff the two spectra coincide."""
    cfg = _coerce(cfg, "strong")
    shift = resolve_shift(net, cfg)
    return 0.25 * spectral.log_det_ratio(net.pos_adj, net.neg_adj, shift)


def b_eb(net: SignedNetwork) -> float:
    """Factorial-discount trace-exponential ratio mapped to [0, 1).

    Parameter-free: the ratio K of Tr exp(signed) to Tr exp(unsigned) is
    computed in the log domain and folded through (1-K)/(1+K), evaluated
    as -tanh(log(K)/2) so extreme ratios cannot overflow.
    """
    log_k = spectral.trace_exp(net.signed_adj) - spectral.trace_exp(net.unsigned_adj)
    return float(-np.tanh(0.5 * log_k))


def eb_complement(net: SignedNetwork) -> float:
    """1 - b_eb, evaluated as 2K/(1+K) without saturating near 1.

    On dense imbalanced networks K is astronomically small and b_eb rounds
    to exactly 1.0 in double precision; statistics that need the spread of
    values near 1 (the null-model z-score) must work on this complement.
    """
    log_k = spectral.trace_exp(net.signed_adj) - spectral.trace_exp(net.unsigned_adj)
    k = float(np.exp(log_k))
    return 2.0 * k / (1.0 + k)


def b_sa(net: SignedNetwork, cfg: BalanceConfig | None = None) -> float:
    """Geometric-discount trace ratio, including the order-0 term.

    Equals 1 exactly for balanced networks and stays within (-1, 1].
    Shares its shift convention with :func:`b_strong` so that the two
    can be compared on equal footing.
    """
    cfg = _coerce(cfg, "sa")
    shift = resolve_shift(net, cfg)
    signed_eig = np.linalg.eigvalsh(net.signed_adj)
    unsigned_eig = np.linalg.eigvalsh(net.unsigned_adj)
    signed_terms = 1.0 - signed_eig / shift
    unsigned_terms = 1.0 - unsigned_eig / shift
    if signed_terms.min() <= 0.0 or unsigned_terms.min() <= 0.0:
        raise ConvergenceDomainError(
            "shift is at or inside the spectrum; walk sums do not converge"
        )
    return float(np.sum(1.0 / signed_terms) / np.sum(1.0 / unsigned_terms))


def imbalance(net: SignedNetwork, cfg: BalanceConfig) -> float:
    """Uniform minimization orientation: lower is always more balanced.

    weak/strong/eb pass through; sa maps through (1 - value)/2 so that the
    perfectly balanced case sits at 0 for every metric.
    """
    if cfg.metric == "weak":
        return b_weak(net, cfg)
    if cfg.metric == "strong":
        return b_strong(net, cfg)
    if cfg.metric == "eb":
        return b_eb(net)
    return (1.0 - b_sa(net, cfg)) / 2.0


def all_measures(net: SignedNetwork, alpha: float = DEFAULT_ALPHA) -> dict[str, float]:
    """Convenience: the four raw metric values at a common alpha."""
    return {
        "weak": b_weak(net, BalanceConfig("weak", alpha)),
        "strong": b_strong(net, BalanceConfig("strong", alpha)),
        "eb": b_eb(net),
        "sa": b_sa(net, BalanceConfig("sa", alpha)),
    }


def _coerce(cfg: BalanceConfig | None, metric: str) -> BalanceConfig:
    if cfg is None:
        return BalanceConfig(metric=metric)
    if cfg.metric != metric:
        raise ValueError(f"config metric {cfg.metric!r} does not match {metric!r}")
    return cfg
