"""Built-in oracle agreement checks behind the ``verify`` CLI subcommand.

``quick`` cross-checks the closed-form metric evaluations against the
independent truncated-series, census, and flip-recompute oracles in a few
seconds; ``full`` adds exhaustive cycle enumeration and an annealing vs
exhaustive-search comparison.
"""

from __future__ import annotations

import numpy as np

from . import oracles, spectral
from .graph import SignMask, SignedNetwork, parse_edge_list, planted_faction_network, switch_nodes
from .measures import BalanceConfig, all_measures, b_strong, b_weak, imbalance
from .prediction import AnnealSchedule, anneal_multi

SERIES_TERMS = 60


def _random_signed_net(n: int, density: float, neg_frac: float, seed: int) -> SignedNetwork:
    rng = np.random.default_rng(seed)
    eu, ev, sg = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                eu.append(i)
                ev.append(j)
                sg.append(-1 if rng.random() < neg_frac else 1)
    return SignedNetwork(
        tuple(str(i) for i in range(n)),
        np.array(eu, dtype=np.int64),
        np.array(ev, dtype=np.int64),
        np.array(sg, dtype=np.int64),
    )


def _check(name, passed, detail) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _check_point_values() -> dict:
    net = parse_edge_list("a b +\nb c +\na c -")
    vals = all_measures(net, alpha=2.0)
    expect = {
        "weak": 1.0 / (12.0 * np.sqrt(2.0)),
        "strong": 0.25 * np.log(54.0 / 50.0),
        "eb": (1.0 - (np.exp(-2) + 2 * np.e) / (np.exp(2) + 2 / np.e))
        / (1.0 + (np.exp(-2) + 2 * np.e) / (np.exp(2) + 2 / np.e)),
        "sa": 25.0 / 27.0,
    }
    worst = max(abs(vals[k] - expect[k]) for k in expect)
    return _check("triangle_point_values", worst <= 1e-6, f"max abs err {worst:.2e}")


def _check_series_agreement() -> dict:
    worst = 0.0
    for seed in range(5):
        net = _random_signed_net(10, 0.4, 0.3, seed)
        bw = b_weak(net, BalanceConfig("weak", 2.0))
        bs = b_strong(net, BalanceConfig("strong", 2.0))
        tw = oracles.truncated_b_weak(net, 2.0, SERIES_TERMS)
        ts = oracles.truncated_b_strong(net, 2.0, SERIES_TERMS)
        if bw > 0:
            worst = max(worst, abs(bw - tw) / bw)
        if bs > 0:
            worst = max(worst, abs(bs - ts) / bs)
    return _check("series_agreement", worst <= 1e-6, f"max rel err {worst:.2e}")


def _check_k3_exactness() -> dict:
    worst = 0.0
    for seed in range(5):
        net = _random_signed_net(10, 0.4, 0.3, seed)
        census = oracles.triangle_census(net)
        shift_w = oracles._oracle_shift(net, 2.0, weak=True)
        shift_s = oracles._oracle_shift(net, 2.0, weak=False)
        wk3 = oracles.weak_series_terms(net, 2.0, 3)[2] * shift_w**3
        sk3 = oracles.strong_series_terms(net, 2.0, 3)[2] * shift_s**3
        worst = max(worst, abs(wk3 - census.t1), abs(sk3 - (census.t1 + census.t3)))
    return _check("k3_exactness", worst <= 1e-9, f"max abs err {worst:.2e}")


def _check_flip_fidelity() -> dict:
    net = _random_signed_net(30, 0.3, 0.3, 11)
    shift = 2.0 * spectral.leading_eigenvalue(net.unsigned_adj)
    res = spectral.resolvent(net.pos_adj, shift, net.neg_adj)
    det = spectral.det_state(net.pos_adj, net.neg_adj, shift)
    rng = np.random.default_rng(12)
    worst = 0.0
    for e in rng.choice(net.m, size=min(30, net.m), replace=False):
        i, j, s = int(net.edge_u[e]), int(net.edge_v[e]), int(net.signs[e])
        direction = spectral.POSITIVE_TO_NEGATIVE if s > 0 else spectral.NEGATIVE_TO_POSITIVE
        flip = spectral.FlipUpdate(i, j, direction)
        new_res = spectral.woodbury_flip(res, flip)
        ref = spectral.resolvent(new_res.pos_adj, shift, new_res.neg_adj)
        scale = np.abs(ref.matrix).max()
        worst = max(worst, np.abs(new_res.matrix - ref.matrix).max() / scale)
        delta, new_det = spectral.det_lemma_flip(det, flip)
        ref_det = spectral.det_state(new_det.pos_adj, new_det.neg_adj, shift)
        worst = max(worst, abs(new_det.log_det - ref_det.log_det) / max(1.0, abs(ref_det.log_det)))
    return _check("flip_fidelity", worst <= 1e-8, f"max rel err {worst:.2e}")


def _check_balance_fixtures() -> dict:
    two = planted_faction_network(12, 2, 1.0, 0.0, 5)
    three = planted_faction_network(12, 3, 1.0, 0.0, 5)
    vals2 = all_measures(two)
    vals3 = all_measures(three)
    ok = (
        vals2["weak"] == 0.0
        and vals2["strong"] <= 1e-10
        and vals2["eb"] <= 1e-10
        and vals2["sa"] >= 1.0 - 1e-10
        and vals3["weak"] == 0.0
        and vals3["strong"] > 0.0
    )
    rng = np.random.default_rng(6)
    drift = 0.0
    for _ in range(10):
        subset = np.nonzero(rng.random(two.n) < 0.5)[0]
        sw = switch_nodes(two, subset)
        sv = all_measures(sw)
        drift = max(
            drift,
            abs(sv["strong"] - vals2["strong"]),
            abs(sv["eb"] - vals2["eb"]),
            abs(sv["sa"] - vals2["sa"]),
        )
    return _check(
        "balance_fixtures", ok and drift <= 1e-10, f"fixtures {ok}, switch drift {drift:.2e}"
    )


def _check_cycle_enumeration() -> dict:
    ok = True
    details = []
    for g, seed in ((2, 3), (3, 4)):
        net = planted_faction_network(9, g, 0.7, 0.0, seed)
        counts = oracles.enumerate_imbalanced_cycles(net, max_len=7)
        weak_total = sum(w for w, _ in counts.values())
        strong_total = sum(s for _, s in counts.values())
        details.append(f"g={g}: weak={weak_total} strong={strong_total}")
        if weak_total != 0:
            ok = False
        if g == 2 and strong_total != 0:
            ok = False
    return _check("cycle_enumeration", ok, "; ".join(details))


def _check_census_vs_enumeration() -> dict:
    ok = True
    for seed in range(3):
        net = _random_signed_net(10, 0.4, 0.3, 20 + seed)
        census = oracles.triangle_census(net)
        counts = oracles.enumerate_imbalanced_cycles(net, max_len=3)
        weak3, strong3 = counts.get(3, (0, 0))
        if weak3 != census.t1 or strong3 != census.t1 + census.t3:
            ok = False
    return _check("census_vs_enumeration", ok, "triangle counts agree" if ok else "mismatch")


def _check_anneal_vs_exhaustive() -> dict:
    net = planted_faction_network(12, 2, 0.8, 0.0, 9)
    rng = np.random.default_rng(10)
    hidden = frozenset(int(e) for e in rng.choice(net.m, size=6, replace=False))
    cfg = BalanceConfig("strong", 2.0)
    mask = SignMask(hidden)
    best = oracles.exhaustive_sign_search(net, mask, cfg)
    from .prediction import anneal_shift_config

    fixed = anneal_shift_config(net, cfg)
    signs = net.signs.copy()
    for e, s in best.items():
        signs[e] = s
    best_energy = imbalance(net.with_signs(signs), fixed)
    hits = 0
    runs = 10
    for seed in range(runs):
        schedule = AnnealSchedule(t0=0.1, tau=500, steps=5000, seed=seed)
        got = anneal_multi(net, mask, cfg, schedule)
        for e, s in got.items():
            signs[e] = s
        if imbalance(net.with_signs(signs), fixed) <= best_energy + 1e-9:
            hits += 1
    return _check("anneal_vs_exhaustive", hits >= 8, f"{hits}/{runs} runs reached the optimum")


def run_verification(level: str = "quick") -> dict:
    checks = [
        _check_point_values(),
        _check_series_agreement(),
        _check_k3_exactness(),
        _check_flip_fidelity(),
        _check_balance_fixtures(),
    ]
    if level == "full":
        checks += [
            _check_cycle_enumeration(),
            _check_census_vs_enumeration(),
            _check_anneal_vs_exhaustive(),
        ]
    return {"checks": checks, "passed": all(c["passed"] for c in checks)}
