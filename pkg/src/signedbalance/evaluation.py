"""Accuracy and normalized mutual information between sign vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    """Counts of the four (true, predicted) sign configurations."""

    pos_pos: int
    pos_neg: int
    neg_pos: int
    neg_neg: int

    @property
    def total(self) -> int:
        return self.pos_pos + self.pos_neg + self.neg_pos + self.neg_neg

    @classmethod
    def from_vectors(cls, truth, pred) -> "ConfusionCounts":
        t, p = _validate_pair(truth, pred)
        return cls(
            pos_pos=int(np.sum((t > 0) & (p > 0))),
            pos_neg=int(np.sum((t > 0) & (p < 0))),
            neg_pos=int(np.sum((t < 0) & (p > 0))),
            neg_neg=int(np.sum((t < 0) & (p < 0))),
        )


def _validate_pair(truth, pred) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(truth, dtype=np.int64)
    p = np.asarray(pred, dtype=np.int64)
    if t.shape != p.shape:
        raise ValueError("sign vectors must have equal length")
    if t.size == 0:
        raise ValueError("sign vectors must be non-empty")
    if np.any(np.abs(t) != 1) or np.any(np.abs(p) != 1):
        raise ValueError("sign vectors must contain only +1/-1")
    return t, p


def accuracy(truth, pred) -> float:
    """Fraction of positions where the two sign vectors agree."""
    t, p = _validate_pair(truth, pred)
    return float(np.mean(t == p))


def _entropy(probs: np.ndarray) -> float:
    nz = probs[probs > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def nmi(truth, pred) -> float:
    """Mutual information normalized by the mean entropy of the two vectors.

    Natural-log entropies (the normalization cancels the base); 0*log 0 is
    taken as 0.  When both vectors are constant the mean entropy vanishes
    and the value is taken as 1 if the vectors are identical or exactly
    opposite (the continuity limit of a bijective mapping), else 0.
    Invariant under a global sign flip of either argument.
    """
    counts = ConfusionCounts.from_vectors(truth, pred)
    total = counts.total
    joint = np.array(
        [
            [counts.pos_pos, counts.pos_neg],
            [counts.neg_pos, counts.neg_neg],
        ]
    ) / total
    p_true = joint.sum(axis=1)
    p_pred = joint.sum(axis=0)
    h_true = _entropy(p_true)
    h_pred = _entropy(p_pred)
    denom = 0.5 * (h_true + h_pred)
    if denom == 0.0:
        t = np.asarray(truth, dtype=np.int64)
        p = np.asarray(pred, dtype=np.int64)
        return 1.0 if (np.array_equal(t, p) or np.array_equal(t, -p)) else 0.0
    info = 0.0
    for a in range(2):
        for b in range(2):
            pj = joint[a, b]
            if pj > 0.0:
                info += pj * np.log(pj / (p_true[a] * p_pred[b]))
    return float(min(max(info / denom, 0.0), 1.0))


def all_positive_baseline(truth) -> tuple[float, float]:
    """(accuracy, nmi) of guessing every sign positive.

    The accuracy is the positive fraction of the truth; the NMI is 0 by the
    degenerate-prediction convention, since a constant guess carries no
    information about the true signs.
    """
    t = np.asarray(truth, dtype=np.int64)
    if t.size == 0:
        raise ValueError("sign vector must be non-empty")
    if np.any(np.abs(t) != 1):
        raise ValueError("sign vectors must contain only +1/-1")
    return float(np.mean(t > 0)), 0.0
