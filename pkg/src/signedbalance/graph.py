"""Signed-network data model, edge-list ingestion, and synthetic generators.

A signed network is an undirected simple graph whose edges carry a +1 or -1
label.  Node labels are arbitrary whitespace-free strings, interned to dense
integer indices in first-appearance order so that matrix-level results are
reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .exceptions import EdgeListError

SIGN_TOKENS = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}


@dataclass(frozen=True)
class SignedNetwork:
    """Immutable signed graph: interned labels plus parallel edge arrays.

    Edges are stored endpoint-sorted (u < v), without self-loops or
    duplicate pairs, in first-appearance order.  Instances are safe to
    share across threads; all "mutating" operations return new values.
    """

    node_labels: tuple[str, ...]
    edge_u: np.ndarray
    edge_v: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        eu = np.ascontiguousarray(self.edge_u, dtype=np.int64)
        ev = np.ascontiguousarray(self.edge_v, dtype=np.int64)
        sg = np.ascontiguousarray(self.signs, dtype=np.int64)
        if not (eu.shape == ev.shape == sg.shape):
            raise ValueError("edge arrays must have identical length")
        n = len(self.node_labels)
        if eu.size:
            if eu.min() < 0 or ev.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(eu >= ev):
                raise ValueError("edges must satisfy u < v (no self-loops)")
            if not np.all(np.abs(sg) == 1):
                raise ValueError("signs must be +1 or -1")
            pairs = set(zip(eu.tolist(), ev.tolist()))
            if len(pairs) != eu.size:
                raise ValueError("duplicate edge pair")
        for arr, name in ((eu, "edge_u"), (ev, "edge_v"), (sg, "signs")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return len(self.node_labels)

    @property
    def m(self) -> int:
        return int(self.edge_u.size)

    @cached_property
    def pos_adj(self) -> np.ndarray:
        """Symmetric 0/1 adjacency of the positive edges (read-only)."""
        return self._adjacency(self.signs > 0)

    @cached_property
    def neg_adj(self) -> np.ndarray:
        """Symmetric 0/1 adjacency of the negative edges (read-only)."""
        return self._adjacency(self.signs < 0)

    @cached_property
    def unsigned_adj(self) -> np.ndarray:
        a = self.pos_adj + self.neg_adj
        a.setflags(write=False)
        return a

    @cached_property
    def signed_adj(self) -> np.ndarray:
        a = self.pos_adj - self.neg_adj
        a.setflags(write=False)
        return a

    @cached_property
    def edge_index(self) -> Mapping[tuple[int, int], int]:
        return {
            (int(u), int(v)): k
            for k, (u, v) in enumerate(zip(self.edge_u, self.edge_v))
        }

    def _adjacency(self, keep: np.ndarray) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        u = self.edge_u[keep]
        v = self.edge_v[keep]
        a[u, v] = 1.0
        a[v, u] = 1.0
        a.setflags(write=False)
        return a

    def with_signs(self, signs: np.ndarray) -> "SignedNetwork":
        """New network with the same edge positions and replaced signs."""
        return SignedNetwork(self.node_labels, self.edge_u, self.edge_v, np.array(signs))

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for u, v, s in zip(self.edge_u, self.edge_v, self.signs):
            yield int(u), int(v), int(s)


@dataclass(frozen=True)
class SignMask:
    """A set of edges whose signs are treated as unknown, with a candidate
    assignment for them (keys must cover the hidden set exactly)."""

    hidden_edges: frozenset[int]
    candidate_assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "hidden_edges", frozenset(int(e) for e in self.hidden_edges))
        assignment = {int(k): int(v) for k, v in self.candidate_assignment.items()}
        if not assignment:
            assignment = {e: 1 for e in self.hidden_edges}
        object.__setattr__(self, "candidate_assignment", assignment)
        if set(self.candidate_assignment) != set(self.hidden_edges):
            raise ValueError("candidate_assignment keys must equal hidden_edges")
        if any(v not in (-1, 1) for v in self.candidate_assignment.values()):
            raise ValueError("candidate signs must be +1 or -1")

    def validate_against(self, net: SignedNetwork) -> None:
        if self.hidden_edges and max(self.hidden_edges) >= net.m:
            raise ValueError("hidden edge index outside the host network")


def parse_edge_list(text: str, conflict_policy: str = "error") -> SignedNetwork:
    """Parse a whitespace-separated ``u v s`` edge list into a network.

    Sign tokens are +, -, +1, -1, or 1.  Lines starting with '#' and blank
    lines are skipped.  Node labels are interned in first-appearance order.
    ``conflict_policy`` controls pairs that appear with both signs:
    ``"error"`` rejects them, ``"negative_wins"`` keeps a single negative
    edge.  Duplicates with identical signs merge silently.
    """
    if conflict_policy not in ("error", "negative_wins"):
        raise ValueError(f"unknown conflict_policy: {conflict_policy!r}")
    labels: list[str] = []
    index: dict[str, int] = {}
    order: list[tuple[int, int]] = []
    sign_of: dict[tuple[int, int], int] = {}

    def intern(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 3:
            raise EdgeListError(f"line {ln}: expected 'u v s', got {len(fields)} field(s)")
        if len(fields) > 3:
            raise EdgeListError(f"line {ln}: too many fields (layered input has 4 columns: 'layer u v s')")
        lu, lv, tok = fields
        if tok not in SIGN_TOKENS:
            raise EdgeListError(f"line {ln}: malformed sign token {tok!r}")
        if lu == lv:
            raise EdgeListError(f"line {ln}: self-loop on node {lu!r}")
        s = SIGN_TOKENS[tok]
        u, v = intern(lu), intern(lv)
        if u > v:
            u, v = v, u
        key = (u, v)
        if key not in sign_of:
            sign_of[key] = s
            order.append(key)
        elif sign_of[key] != s:
            if conflict_policy == "error":
                raise EdgeListError(
                    f"line {ln}: conflicting signs for pair ({lu!r}, {lv!r})"
                )
            sign_of[key] = -1
    eu = np.array([u for u, _ in order], dtype=np.int64)
    ev = np.array([v for _, v in order], dtype=np.int64)
    sg = np.array([sign_of[k] for k in order], dtype=np.int64)
    return SignedNetwork(tuple(labels), eu, ev, sg)


def parse_layered_edge_list(
    text: str, conflict_policy: str = "error"
) -> list[tuple[str, SignedNetwork]]:
    """Parse a 4-column ``layer u v s`` file into one network per layer.

    Layers are returned in lexicographic order; within each layer the
    3-column rules of :func:`parse_edge_list` apply.
    """
    chunks: dict[str, list[str]] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise EdgeListError(f"line {ln}: expected 'layer u v s', got {len(fields)} field(s)")
        chunks.setdefault(fields[0], []).append(" ".join(fields[1:]))
    return [
        (layer, parse_edge_list("\n".join(chunks[layer]), conflict_policy))
        for layer in sorted(chunks)
    ]


def serialize_edge_list(net: SignedNetwork) -> str:
    """Inverse of :func:`parse_edge_list` for networks without isolated nodes.

    Isolated nodes cannot be expressed in the edge-list format and are
    dropped on a round trip; they contribute nothing to any metric.
    """
    lines = [
        f"{net.node_labels[u]} {net.node_labels[v]} {'+1' if s > 0 else '-1'}"
        for u, v, s in net.edges()
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def split_adjacency(net: SignedNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Writable copies of the positive/negative adjacency matrices."""
    return net.pos_adj.copy(), net.neg_adj.copy()


def switch_nodes(net: SignedNetwork, subset: Iterable[int]) -> SignedNetwork:
    """Gauge switch: flip the sign of every edge with exactly one endpoint
    in ``subset``.  Edge positions are unchanged; applying the same switch
    twice restores the original network.
    """
    sset = frozenset(int(i) for i in subset)
    if sset and (min(sset) < 0 or max(sset) >= net.n):
        raise ValueError("switch subset contains node index out of range")
    in_s = np.zeros(net.n, dtype=bool)
    in_s[list(sset)] = True
    crossing = in_s[net.edge_u] ^ in_s[net.edge_v]
    return net.with_signs(np.where(crossing, -net.signs, net.signs))


def negative_fraction(net: SignedNetwork) -> float:
    """Fraction of edges that are negative; errors on an empty network."""
    if net.m == 0:
        raise ValueError("negative_fraction of an empty network is undefined")
    return float(np.count_nonzero(net.signs < 0) / net.m)


def planted_faction_network(
    n: int,
    factions: int,
    density: float,
    noise: float,
    rng_seed,
) -> SignedNetwork:
    """Random network of antagonistic factions.

    Nodes are split into ``factions`` contiguous near-equal groups; each
    pair is joined independently with probability ``density``; edges are
    positive inside a group and negative between groups, then each sign is
    flipped independently with probability ``noise``.  With ``noise=0`` the
    result has no simple cycle with exactly one negative edge, and with two
    factions no cycle with an odd number of negative edges.
    """
    if factions < 1 or n < factions:
        raise ValueError("need n >= factions >= 1")
    if not (0.0 < density <= 1.0):
        raise ValueError("density must be in (0, 1]")
    if not (0.0 <= noise < 1.0):
        raise ValueError("noise must be in [0, 1)")
    rng = np.random.default_rng(rng_seed)
    base, extra = divmod(n, factions)
    sizes = [base + (1 if g < extra else 0) for g in range(factions)]
    faction_of = np.repeat(np.arange(factions), sizes)
    eu, ev, sg = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                s = 1 if faction_of[i] == faction_of[j] else -1
                if noise > 0.0 and rng.random() < noise:
                    s = -s
                eu.append(i)
                ev.append(j)
                sg.append(s)
    labels = tuple(str(i) for i in range(n))
    return SignedNetwork(
        labels,
        np.array(eu, dtype=np.int64),
        np.array(ev, dtype=np.int64),
        np.array(sg, dtype=np.int64),
    )
