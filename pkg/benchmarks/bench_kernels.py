#!/usr/bin/env python3
"""Benchmark the annealing kernels: numba @njit lane vs pure-numpy lane.

The two lanes share one source implementation (see
signedbalance._kernels); this script times both directly, regardless of
the SIGNEDBALANCE_DISABLE_NUMBA selection, and reports the speedup.

Usage: python3 benchmarks/bench_kernels.py [--nodes 40] [--steps 20000]
"""

import argparse
import time

import numpy as np
import scipy.linalg as sla

from signedbalance import _kernels
from signedbalance.graph import planted_faction_network
from signedbalance.measures import BalanceConfig
from signedbalance.prediction import anneal_shift_config


def _setup(nodes: int, hidden_frac: float, seed: int):
    net = planted_faction_network(nodes, 2, 1.0, 0.0, seed)
    cfg = anneal_shift_config(net, BalanceConfig("weak", 2.0))
    rng = np.random.default_rng(seed)
    hidden = np.sort(rng.choice(net.m, size=int(hidden_frac * net.m), replace=False)).astype(np.int64)
    signs = net.signs.copy()
    signs[hidden] = rng.integers(0, 2, size=hidden.size) * 2 - 1
    return net, cfg.shift, hidden, signs


def _weak_state(net, shift, signs):
    n = net.n
    pos = np.zeros((n, n))
    keep = signs > 0
    pos[net.edge_u[keep], net.edge_v[keep]] = 1.0
    pos[net.edge_v[keep], net.edge_u[keep]] = 1.0
    factor = sla.cho_factor(shift * np.eye(n) - pos, lower=True)
    res = sla.cho_solve(factor, np.eye(n))
    res = (res + res.T) / 2.0
    neg_u_buf = np.zeros(net.m, dtype=np.int64)
    neg_v_buf = np.zeros(net.m, dtype=np.int64)
    mask = signs < 0
    cnt = int(mask.sum())
    neg_u_buf[:cnt] = net.edge_u[mask]
    neg_v_buf[:cnt] = net.edge_v[mask]
    energy = float(res[neg_u_buf[:cnt], neg_v_buf[:cnt]].sum())
    return res, energy, neg_u_buf, neg_v_buf, cnt


def _strong_state(net, shift, signs):
    n = net.n
    mat = np.zeros((n, n))
    vals = signs.astype(float)
    mat[net.edge_u, net.edge_v] = vals
    mat[net.edge_v, net.edge_u] = vals
    factor = sla.cho_factor(shift * np.eye(n) - mat, lower=True)
    inv = sla.cho_solve(factor, np.eye(n))
    return (inv + inv.T) / 2.0


def bench_weak(fn, net, shift, hidden, signs, steps, seed):
    res, energy, nub, nvb, cnt = _weak_state(net, shift, signs)
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, hidden.size, size=steps)
    uniforms = rng.random(steps)
    sg = signs.copy()
    start = time.perf_counter()
    fn(res, energy, net.edge_u, net.edge_v, sg, hidden, nub, nvb, cnt,
       choices, uniforms, 0, 0.1, 1e4, 10**9)
    return time.perf_counter() - start


def bench_strong(fn, net, shift, hidden, signs, steps, seed):
    inv = _strong_state(net, shift, signs)
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, hidden.size, size=steps)
    uniforms = rng.random(steps)
    sg = signs.copy()
    start = time.perf_counter()
    fn(inv, 0.0, net.edge_u, net.edge_v, sg, hidden, choices, uniforms,
       0, 0.1, 1e4, 10**9)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=40)
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--hidden-frac", type=float, default=0.5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    net, shift, hidden, signs = _setup(args.nodes, args.hidden_frac, args.seed)
    print(f"network: n={net.n} m={net.m}, {hidden.size} hidden signs, {args.steps} MC steps")
    if not _kernels.HAVE_NUMBA:
        print("numba not importable: only the numpy lane is available")

    rows = []
    for label, py_fn, jit_fn, runner in (
        ("weak", _kernels.anneal_weak_segment_py, _kernels.anneal_weak_segment_jit, bench_weak),
        ("strong", _kernels.anneal_strong_segment_py, _kernels.anneal_strong_segment_jit, bench_strong),
    ):
        t_py = runner(py_fn, net, shift, hidden, signs, args.steps, args.seed)
        if jit_fn is not None:
            runner(jit_fn, net, shift, hidden, signs, 100, args.seed)  # warm the JIT
            t_jit = runner(jit_fn, net, shift, hidden, signs, args.steps, args.seed)
        else:
            t_jit = float("nan")
        rows.append((label, t_py, t_jit))

    print(f"{'kernel':<8} {'numpy(s)':>10} {'numba(s)':>10} {'steps/s numpy':>14} {'steps/s numba':>14} {'speedup':>8}")
    for label, t_py, t_jit in rows:
        speed_py = args.steps / t_py
        speed_jit = args.steps / t_jit if t_jit == t_jit else float("nan")
        speedup = t_py / t_jit if t_jit == t_jit else float("nan")
        print(f"{label:<8} {t_py:>10.3f} {t_jit:>10.3f} {speed_py:>14.0f} {speed_jit:>14.0f} {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
