"""Dense symmetric linear-algebra kernels for walk-based balance metrics.

Provides leading eigenvalues, resolvents, log-determinant ratios,
trace-exponentials, and exact O(n^2) updates of cached resolvents and
inverses when a single edge sign flips.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from . import _kernels
from .exceptions import ConvergenceDomainError

POWER_ITER_TOL = 1e-10
POWER_ITER_MAX = 100_000
_STAGNATION_WINDOW = 500

POSITIVE_TO_NEGATIVE = "positive_to_negative"
NEGATIVE_TO_POSITIVE = "negative_to_positive"


@dataclass(frozen=True)
class FlipUpdate:
    """A single edge sign reversal between nodes ``i`` and ``j``."""

    i: int
    j: int
    direction: str

    def __post_init__(self):
        if self.direction not in (POSITIVE_TO_NEGATIVE, NEGATIVE_TO_POSITIVE):
            raise ValueError(f"unknown flip direction: {self.direction!r}")
        if self.i == self.j:
            raise ValueError("flip endpoints must differ")

    @property
    def source_sign(self) -> int:
        return 1 if self.direction == POSITIVE_TO_NEGATIVE else -1


@dataclass(frozen=True)
class ResolventState:
    """Snapshot of (shift*I - pos_adj)^-1 with the cached walk-count trace.

    Value-semantic: flips return new states, so snapshots can be shared
    across threads.  ``trace_nr`` is half the trace of neg_adj times the
    resolvent, i.e. the weak imbalance at this shift.
    """

    shift: float
    matrix: np.ndarray
    pos_adj: np.ndarray
    neg_adj: np.ndarray
    trace_nr: float


@dataclass(frozen=True)
class DetState:
    """Snapshot of (shift*I - signed_adj)^-1 plus both log-determinants.

    ``log_det_unsigned`` refers to (shift*I - unsigned_adj) and never
    changes under sign flips (edge positions are fixed).
    """

    shift: float
    inverse: np.ndarray
    pos_adj: np.ndarray
    neg_adj: np.ndarray
    log_det: float
    log_det_unsigned: float


def leading_eigenvalue(matrix: np.ndarray, tol: float = POWER_ITER_TOL) -> float:
    """Most positive eigenvalue of a symmetric matrix.

    Power iteration with a deterministic start vector; falls back to a full
    symmetric eigendecomposition when the iteration stagnates (degenerate
    leading modulus, e.g. bipartite graphs) or converges to a negative
    dominant eigenvalue.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = matrix.shape[0]
    if n == 0:
        return 0.0
    vec = np.full(n, 1.0 / np.sqrt(n))
    best_resid = np.inf
    since_best = 0
    for _ in range(POWER_ITER_MAX):
        nxt = matrix @ vec
        norm = np.linalg.norm(nxt)
        if norm < 1e-300:
            break  # start vector (numerically) annihilated: decide by eigh
        nxt /= norm
        ray = float(nxt @ (matrix @ nxt))
        resid = float(np.linalg.norm(matrix @ nxt - ray * nxt))
        if resid <= tol * max(1.0, abs(ray)):
            if ray >= 0.0:
                return ray
            break  # dominant eigenvalue negative: most positive needs eigh
        if resid < best_resid - tol:
            best_resid = resid
            since_best = 0
        else:
            since_best += 1
            if since_best >= _STAGNATION_WINDOW:
                break
        vec = nxt
    return float(np.linalg.eigvalsh(matrix)[-1])


def _spd_factor(matrix: np.ndarray):
    try:
        return sla.cho_factor(matrix, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        raise ConvergenceDomainError(
            "shift is at or inside the spectrum; walk sums do not converge"
        ) from exc


def _spd_inverse(matrix: np.ndarray) -> np.ndarray:
    factor = _spd_factor(matrix)
    inv = sla.cho_solve(factor, np.eye(matrix.shape[0]), check_finite=False)
    return (inv + inv.T) / 2.0


def _spd_logdet(matrix: np.ndarray) -> float:
    factor, _ = _spd_factor(matrix)
    return float(2.0 * np.sum(np.log(np.diag(factor))))


def _neg_edge_arrays(neg_adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    iu, iv = np.nonzero(np.triu(neg_adj))
    return iu.astype(np.int64), iv.astype(np.int64)


def _half_trace_nr(neg_adj: np.ndarray, resolvent_matrix: np.ndarray) -> float:
    return float(np.sum(neg_adj * resolvent_matrix) / 2.0)


def resolvent(pos_adj: np.ndarray, shift: float, neg_adj: np.ndarray | None = None) -> ResolventState:
    """Build (shift*I - pos_adj)^-1 through a symmetric factorization.

    Requires the shift to exceed the leading eigenvalue of ``pos_adj``
    (signalled as :class:`ConvergenceDomainError` otherwise).  All entries
    of the result are non-negative: they are geometric sums of walk counts.
    """
    n = pos_adj.shape[0]
    if neg_adj is None:
        neg_adj = np.zeros_like(pos_adj)
    mat = _spd_inverse(shift * np.eye(n) - pos_adj)
    return ResolventState(
        shift=float(shift),
        matrix=mat,
        pos_adj=pos_adj.copy(),
        neg_adj=neg_adj.copy(),
        trace_nr=_half_trace_nr(neg_adj, mat),
    )


def log_det_ratio(pos_adj: np.ndarray, neg_adj: np.ndarray, shift: float) -> float:
    """log det(shift*I - signed) - log det(shift*I - unsigned), always >= 0.

    Zero exactly when the signed and unsigned adjacency matrices share a
    spectrum (e.g. a two-faction clusterable network).
    """
    n = pos_adj.shape[0]
    eye = np.eye(n)
    signed = pos_adj - neg_adj
    unsigned = pos_adj + neg_adj
    return _spd_logdet(shift * eye - signed) - _spd_logdet(shift * eye - unsigned)


def det_state(pos_adj: np.ndarray, neg_adj: np.ndarray, shift: float) -> DetState:
    """Factorize both shifted matrices and cache the signed-part inverse."""
    n = pos_adj.shape[0]
    eye = np.eye(n)
    signed_mat = shift * eye - (pos_adj - neg_adj)
    unsigned_mat = shift * eye - (pos_adj + neg_adj)
    return DetState(
        shift=float(shift),
        inverse=_spd_inverse(signed_mat),
        pos_adj=pos_adj.copy(),
        neg_adj=neg_adj.copy(),
        log_det=_spd_logdet(signed_mat),
        log_det_unsigned=_spd_logdet(unsigned_mat),
    )


def trace_exp(matrix: np.ndarray) -> float:
    """log of the trace of the matrix exponential of a symmetric matrix.

    Evaluated in the log domain from the full eigenvalue set, so it cannot
    overflow for eigenvalues up to roughly +-700.
    """
    eig = np.linalg.eigvalsh(matrix)
    top = float(eig[-1])
    return top + float(np.log(np.sum(np.exp(eig - top))))


def _check_flip_source(state, flip: FlipUpdate) -> None:
    i, j = flip.i, flip.j
    if flip.source_sign > 0:
        if state.pos_adj[i, j] != 1:
            raise ValueError(f"edge ({i},{j}) is not currently positive")
    else:
        if state.neg_adj[i, j] != 1:
            raise ValueError(f"edge ({i},{j}) is not currently negative")


def _toggled_adjacency(state, flip: FlipUpdate) -> tuple[np.ndarray, np.ndarray]:
    i, j = flip.i, flip.j
    pos = state.pos_adj.copy()
    neg = state.neg_adj.copy()
    if flip.source_sign > 0:
        pos[i, j] = pos[j, i] = 0.0
        neg[i, j] = neg[j, i] = 1.0
    else:
        neg[i, j] = neg[j, i] = 0.0
        pos[i, j] = pos[j, i] = 1.0
    return pos, neg


def woodbury_flip(state: ResolventState, flip: FlipUpdate) -> ResolventState:
    """Resolvent after toggling one edge between the positive and negative
    parts, computed as a rank-2 correction in O(n^2).

    Refuses (``ConvergenceDomainError``) when the flip would push the
    leading eigenvalue of the positive part across the shift.
    """
    _check_flip_source(state, flip)
    i, j, s = flip.i, flip.j, flip.source_sign
    mat = state.matrix
    rii, rjj, rij = mat[i, i], mat[j, j], mat[i, j]
    if s < 0:
        tk = 1.0 - rij
        det = tk * tk - rii * rjj
        if det <= 0.0 or tk <= 0.0:
            raise ConvergenceDomainError(
                "flip would cross the convergence boundary at this shift"
            )
    new_mat = mat.copy()
    _kernels.weak_flip_commit(new_mat, i, j, s)
    pos, neg = _toggled_adjacency(state, flip)
    return ResolventState(
        shift=state.shift,
        matrix=new_mat,
        pos_adj=pos,
        neg_adj=neg,
        trace_nr=_half_trace_nr(neg, new_mat),
    )


def det_lemma_flip(state: DetState, flip: FlipUpdate) -> tuple[float, DetState]:
    """Log-determinant change and updated state for one sign flip.

    The change is read off four cached entries of the inverse in O(1); the
    inverse itself is refreshed by a rank-2 update in O(n^2).  The unsigned
    log-determinant is untouched (edge positions do not move).
    """
    _check_flip_source(state, flip)
    i, j, s = flip.i, flip.j, flip.source_sign
    det, tk = _kernels.strong_flip_delta(state.inverse, i, j, s)
    if det <= 0.0 or tk <= 0.0:
        raise ConvergenceDomainError(
            "flip would cross the convergence boundary at this shift"
        )
    delta = float(np.log(det))
    new_inv = state.inverse.copy()
    _kernels.strong_flip_commit(new_inv, i, j, s)
    pos, neg = _toggled_adjacency(state, flip)
    new_state = replace(
        state,
        inverse=new_inv,
        pos_adj=pos,
        neg_adj=neg,
        log_det=state.log_det + delta,
    )
    return delta, new_state


def weak_flip_energy_delta(state: ResolventState, flip: FlipUpdate) -> float:
    """Change of the weak imbalance (half-trace) for a flip, without
    committing the O(n^2) update; O(n + negative-edge-count)."""
    _check_flip_source(state, flip)
    i, j, s = flip.i, flip.j, flip.source_sign
    neg_u, neg_v = _neg_edge_arrays(state.neg_adj)
    d_energy, det, tk = _kernels.weak_flip_delta(state.matrix, neg_u, neg_v, i, j, s)
    if det <= 0.0 or tk <= 0.0:
        raise ConvergenceDomainError(
            "flip would cross the convergence boundary at this shift"
        )
    return float(d_energy)
