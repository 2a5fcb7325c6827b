"""Independent brute-force oracles: truncated walk sums, triangle censuses,
exhaustive cycle enumeration, and exhaustive sign search.

These deliberately share no numerical code with the spectral kernels (only
the graph type), so agreement between the two routes is a meaningful check.
All operations here are desk-scale and size-guarded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SignedNetwork, SignMask
from .measures import BalanceConfig, imbalance, resolve_shift

MAX_ENUM_NODES = 14
MAX_SEARCH_HIDDEN = 16


@dataclass(frozen=True)
class TriangleCensus:
    """Triangle counts by number of negative edges (0 through 3)."""

    t0: int
    t1: int
    t2: int
    t3: int

    @property
    def total(self) -> int:
        return self.t0 + self.t1 + self.t2 + self.t3


def _oracle_shift(net: SignedNetwork, alpha: float, weak: bool) -> float:
    base = net.pos_adj if weak else net.unsigned_adj
    lam = float(np.linalg.eigvalsh(base)[-1]) if net.n else 0.0
    if lam <= 0.0:
        lam = 1.0
    return alpha * lam


def weak_series_terms(net: SignedNetwork, alpha: float, terms: int) -> np.ndarray:
    """First ``terms`` contributions of the weak walk sum, by walk length.

    Term k is half the sum over negative edges of length-(k-1) positive
    walk counts between their endpoints, divided by shift**k; evaluated by
    explicit matrix powers.
    """
    if terms < 1:
        raise ValueError("need at least one term")
    shift = _oracle_shift(net, alpha, weak=True)
    pos = net.pos_adj
    neg = net.neg_adj
    out = np.empty(terms)
    power = np.eye(net.n)  # positive-walk counts of length k-1
    zk = 1.0
    for k in range(1, terms + 1):
        zk *= shift
        out[k - 1] = 0.5 * float(np.sum(neg * power)) / zk
        if k < terms:
            power = power @ pos
    return out


def strong_series_terms(net: SignedNetwork, alpha: float, terms: int) -> np.ndarray:
    """First ``terms`` contributions of the strong walk sum, by length.

    Term k is (Tr unsigned^k - Tr signed^k) / (4 k shift^k); the k-th
    numerator over 4k counts closed walks with an odd number of negative
    edges, exactly for k = 3.
    """
    if terms < 1:
        raise ValueError("need at least one term")
    shift = _oracle_shift(net, alpha, weak=False)
    signed = net.signed_adj
    unsigned = net.unsigned_adj
    out = np.empty(terms)
    pow_s = np.eye(net.n)
    pow_u = np.eye(net.n)
    zk = 1.0
    for k in range(1, terms + 1):
        pow_s = pow_s @ signed
        pow_u = pow_u @ unsigned
        zk *= shift
        out[k - 1] = (float(np.trace(pow_u)) - float(np.trace(pow_s))) / (4.0 * k * zk)
    return out


def truncated_b_weak(net: SignedNetwork, alpha: float, terms: int) -> float:
    """Partial-sum evaluation of the weak metric (oracle route)."""
    return float(weak_series_terms(net, alpha, terms).sum())


def truncated_b_strong(net: SignedNetwork, alpha: float, terms: int) -> float:
    """Partial-sum evaluation of the strong metric (oracle route)."""
    return float(strong_series_terms(net, alpha, terms).sum())


def triangle_census(net: SignedNetwork) -> TriangleCensus:
    """Exhaustive triangle count over node triples, split by negative edges."""
    adj = net.unsigned_adj
    sgn = net.signed_adj
    counts = [0, 0, 0, 0]
    n = net.n
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j] == 0.0:
                continue
            for k in range(j + 1, n):
                if adj[i, k] == 0.0 or adj[j, k] == 0.0:
                    continue
                negatives = int(sgn[i, j] < 0) + int(sgn[i, k] < 0) + int(sgn[j, k] < 0)
                counts[negatives] += 1
    return TriangleCensus(*counts)


def enumerate_imbalanced_cycles(net: SignedNetwork, max_len: int) -> dict[int, tuple[int, int]]:
    """Exact counts of imbalanced simple cycles per length.

    Returns {length: (weak_count, strong_count)} for 3 <= length <=
    max_len, where weak means exactly one negative edge and strong means an
    odd number.  Exhaustive DFS, guarded to n <= 14; each cycle is counted
    once (smallest node as anchor, orientation fixed by second < last).
    """
    if net.n > MAX_ENUM_NODES:
        raise ValueError(f"cycle enumeration is limited to n <= {MAX_ENUM_NODES}")
    if max_len < 3:
        return {}
    adj = net.unsigned_adj
    sgn = net.signed_adj
    n = net.n
    neighbors = [np.nonzero(adj[i])[0].tolist() for i in range(n)]
    counts = {k: [0, 0] for k in range(3, max_len + 1)}

    def dfs(anchor: int, current: int, visited: set, length: int, negatives: int):
        for nxt in neighbors[current]:
            if nxt == anchor:
                if length >= 3 and path[1] < current:
                    neg_total = negatives + int(sgn[current, anchor] < 0)
                    if neg_total == 1:
                        counts[length][0] += 1
                    if neg_total % 2 == 1:
                        counts[length][1] += 1
                continue
            if nxt <= anchor or nxt in visited or length >= max_len:
                continue
            visited.add(nxt)
            path.append(nxt)
            dfs(anchor, nxt, visited, length + 1, negatives + int(sgn[current, nxt] < 0))
            path.pop()
            visited.remove(nxt)

    for anchor in range(n):
        path = [anchor]
        dfs(anchor, anchor, {anchor}, 1, 0)
    return {k: (c[0], c[1]) for k, c in counts.items()}


def exhaustive_sign_search(
    net: SignedNetwork, mask: SignMask, cfg: BalanceConfig
) -> dict[int, int]:
    """True argmin of the configured imbalance over all hidden-sign choices.

    Evaluates every one of the 2^k assignments from scratch at a shift held
    fixed across candidates (the same convention annealing uses).  Exact
    energy ties are resolved toward the assignment with more positive signs,
    then lexicographically (positive before negative, in hidden-index order).
    """
    mask.validate_against(net)
    hidden = np.array(sorted(mask.hidden_edges), dtype=np.int64)
    k = hidden.size
    if k == 0:
        raise ValueError("hidden set is empty")
    if k > MAX_SEARCH_HIDDEN:
        raise ValueError(f"exhaustive search is limited to {MAX_SEARCH_HIDDEN} hidden signs")
    if cfg.shift is None and cfg.metric in ("weak", "strong", "sa"):
        cfg = BalanceConfig(cfg.metric, cfg.alpha, _anneal_shift(net, cfg))
    best_energy = np.inf
    best_key = None
    best_assignment = None
    signs = net.signs.copy()
    for bits in range(1 << k):
        chosen = np.array([1 if (bits >> t) & 1 == 0 else -1 for t in range(k)], dtype=np.int64)
        signs[hidden] = chosen
        energy = imbalance(net.with_signs(signs), cfg)
        # genuinely tied assignments differ only by rounding noise
        tol = 1e-12 * max(1.0, abs(energy), abs(best_energy) if best_key else 0.0)
        key = (-int(np.sum(chosen > 0)), tuple(int(c < 0) for c in chosen))
        if energy < best_energy - tol:
            best_energy = energy
            best_key = key
            best_assignment = chosen.copy()
        elif energy <= best_energy + tol and (best_key is None or key < best_key):
            best_energy = min(best_energy, energy)
            best_key = key
            best_assignment = chosen.copy()
    return {int(e): int(s) for e, s in zip(hidden, best_assignment)}


def _anneal_shift(net: SignedNetwork, cfg: BalanceConfig) -> float:
    # Shared with the annealing convention: the unsigned leading eigenvalue
    # dominates every candidate sign assignment, so one shift covers all.
    return resolve_shift(net, BalanceConfig("strong", cfg.alpha))
