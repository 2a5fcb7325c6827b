"""Hot numeric kernels: rank-2 sign-flip updates and annealing inner loops.

Every kernel is written once as plain numpy and compiled with numba's
``@njit`` when available.  Setting the environment variable
``SIGNEDBALANCE_DISABLE_NUMBA=1`` (or any non-empty value other than
``0``/``false``) selects the uncompiled pure-numpy path; the module
attributes ``*_py`` and ``*_jit`` expose both paths for benchmarking.

Conventions shared by all kernels:
  * ``resolvent`` is the dense symmetric inverse of (shift*I - pos_adj),
    ``inverse`` the dense symmetric inverse of (shift*I - signed_adj).
  * ``s`` is the current sign (+1/-1) of the edge being flipped; the flip
    always toggles it, moving the edge between the positive and negative
    adjacency parts simultaneously.
  * Capacitance validity: a flip is in-domain iff the returned 2x2
    determinant and its diagonal are both positive.
"""

from __future__ import annotations

import math
import os

import numpy as np

ENV_DISABLE = "SIGNEDBALANCE_DISABLE_NUMBA"


def _disabled_by_env() -> bool:
    val = os.environ.get(ENV_DISABLE, "").strip().lower()
    return val not in ("", "0", "false", "no")


try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()


def weak_flip_delta(resolvent, neg_u, neg_v, i, j, s):
    """Energy change of the walk-count imbalance if edge (i,j) flips sign.

    ``neg_u``/``neg_v`` are the endpoints of the *current* negative edges
    (including (i,j) itself when s == -1).  Returns (d_energy, cap_det,
    cap_diag); the flip is in-domain iff cap_det > 0 and cap_diag > 0.
    """
    rii = resolvent[i, i]
    rjj = resolvent[j, j]
    rij = resolvent[i, j]
    ri = resolvent[i]
    rj = resolvent[j]
    a0 = 2.0 * np.dot(ri[neg_u], ri[neg_v])
    b0 = 2.0 * np.dot(rj[neg_u], rj[neg_v])
    c0 = np.dot(ri[neg_u], rj[neg_v]) + np.dot(ri[neg_v], rj[neg_u])
    if s > 0:
        tk = 1.0 + rij
        det = tk * tk - rii * rjj
        q = -(tk * c0 - 0.5 * rjj * a0 - 0.5 * rii * b0) / det
        dr = -(tk * (rii * rjj + rij * rij) - 2.0 * rii * rjj * rij) / det
        d_energy = q + (rij + dr)
    else:
        tk = 1.0 - rij
        det = tk * tk - rii * rjj
        q = (tk * c0 + 0.5 * rjj * a0 + 0.5 * rii * b0) / det
        dr = (tk * (rii * rjj + rij * rij) + 2.0 * rii * rjj * rij) / det
        d_energy = q - (rij + dr)
    return d_energy, det, tk


def weak_flip_commit(resolvent, i, j, s):
    """Rank-2 in-place update of the resolvent for a sign flip of (i,j)."""
    rii = resolvent[i, i]
    rjj = resolvent[j, j]
    rij = resolvent[i, j]
    if s > 0:
        tk = 1.0 + rij
        det = tk * tk - rii * rjj
        k12 = -rjj / det
        k21 = -rii / det
        sgn = -1.0
    else:
        tk = 1.0 - rij
        det = tk * tk - rii * rjj
        k12 = rjj / det
        k21 = rii / det
        sgn = 1.0
    kdg = tk / det
    xi = resolvent[:, i].copy()
    xj = resolvent[:, j].copy()
    y1 = resolvent[j, :].copy()
    y2 = resolvent[i, :].copy()
    w1 = kdg * xi + k21 * xj
    w2 = k12 * xi + kdg * xj
    n = resolvent.shape[0]
    resolvent += sgn * (w1.reshape(n, 1) * y1.reshape(1, n) + w2.reshape(n, 1) * y2.reshape(1, n))


def strong_flip_delta(inverse, i, j, s):
    """Log-determinant capacitance for flipping edge (i,j) in the signed part.

    Returns (cap_det, cap_diag); the new log-determinant of
    (shift*I - signed_adj) exceeds the old one by log(cap_det), valid iff
    cap_det > 0 and cap_diag > 0.
    """
    gii = inverse[i, i]
    gjj = inverse[j, j]
    gij = inverse[i, j]
    tk = 1.0 + 2.0 * s * gij
    det = tk * tk - 4.0 * gii * gjj
    return det, tk


def strong_flip_commit(inverse, i, j, s):
    """Rank-2 in-place update of the signed-part inverse for a flip of (i,j)."""
    gii = inverse[i, i]
    gjj = inverse[j, j]
    gij = inverse[i, j]
    p = 0.5 * s + gij  # 1/(2s) == s/2 for s in {-1, +1}
    dm = p * p - gii * gjj
    m12 = -gjj / dm
    m21 = -gii / dm
    mdg = p / dm
    xi = inverse[:, i].copy()
    xj = inverse[:, j].copy()
    y1 = inverse[j, :].copy()
    y2 = inverse[i, :].copy()
    w1 = mdg * xi + m21 * xj
    w2 = m12 * xi + mdg * xj
    n = inverse.shape[0]
    inverse -= w1.reshape(n, 1) * y1.reshape(1, n) + w2.reshape(n, 1) * y2.reshape(1, n)


def _refresh_neg_buffers(edge_u, edge_v, signs, neg_u_buf, neg_v_buf):
    mask = signs < 0
    cnt = int(mask.sum())
    neg_u_buf[:cnt] = edge_u[mask]
    neg_v_buf[:cnt] = edge_v[mask]
    return cnt


def anneal_weak_segment(
    resolvent,
    energy,
    edge_u,
    edge_v,
    signs,
    hidden,
    neg_u_buf,
    neg_v_buf,
    neg_count,
    choices,
    uniforms,
    step_offset,
    t0,
    tau,
    accept_cap,
):
    """Metropolis sweep over hidden-edge flips under the walk-count energy.

    Runs until ``choices`` is exhausted or ``accept_cap`` flips were
    accepted (the caller then refreshes the resolvent from scratch to bound
    floating-point drift).  Mutates ``resolvent``, ``signs`` and the
    negative-edge gather buffers in place.  Returns
    (steps_consumed, energy, accepted, neg_count).
    """
    accepted = 0
    nsteps = choices.shape[0]
    n = resolvent.shape[0]
    for t in range(nsteps):
        h = hidden[choices[t]]
        i = edge_u[h]
        j = edge_v[h]
        s = signs[h]
        neg_u = neg_u_buf[:neg_count]
        neg_v = neg_v_buf[:neg_count]
        rii = resolvent[i, i]
        rjj = resolvent[j, j]
        rij = resolvent[i, j]
        riu = resolvent[i][neg_u]
        riv = resolvent[i][neg_v]
        rju = resolvent[j][neg_u]
        rjv = resolvent[j][neg_v]
        a0 = 2.0 * np.dot(riu, riv)
        b0 = 2.0 * np.dot(rju, rjv)
        c0 = np.dot(riu, rjv) + np.dot(riv, rju)
        if s > 0:
            tk = 1.0 + rij
            det = tk * tk - rii * rjj
            q = -(tk * c0 - 0.5 * rjj * a0 - 0.5 * rii * b0) / det
            dr = -(tk * (rii * rjj + rij * rij) - 2.0 * rii * rjj * rij) / det
            d_energy = q + (rij + dr)
        else:
            tk = 1.0 - rij
            det = tk * tk - rii * rjj
            if det <= 0.0 or tk <= 0.0:
                raise ValueError("sign flip crossed the convergence boundary; shift too small")
            q = (tk * c0 + 0.5 * rjj * a0 + 0.5 * rii * b0) / det
            dr = (tk * (rii * rjj + rij * rij) + 2.0 * rii * rjj * rij) / det
            d_energy = q - (rij + dr)
        temp = t0 * math.exp(-(step_offset + t) / tau)
        if d_energy <= 0.0 or (temp > 0.0 and uniforms[t] < math.exp(-d_energy / temp)):
            if s > 0:
                k12 = -rjj / det
                k21 = -rii / det
                sgn = -1.0
            else:
                k12 = rjj / det
                k21 = rii / det
                sgn = 1.0
            kdg = tk / det
            xi = resolvent[:, i].copy()
            xj = resolvent[:, j].copy()
            y1 = resolvent[j, :].copy()
            y2 = resolvent[i, :].copy()
            w1 = kdg * xi + k21 * xj
            w2 = k12 * xi + kdg * xj
            resolvent += sgn * (
                w1.reshape(n, 1) * y1.reshape(1, n) + w2.reshape(n, 1) * y2.reshape(1, n)
            )
            signs[h] = -s
            energy += d_energy
            mask = signs < 0
            neg_count = int(mask.sum())
            neg_u_buf[:neg_count] = edge_u[mask]
            neg_v_buf[:neg_count] = edge_v[mask]
            accepted += 1
            if accepted >= accept_cap:
                return t + 1, energy, accepted, neg_count
    return nsteps, energy, accepted, neg_count


def anneal_strong_segment(
    inverse,
    energy,
    edge_u,
    edge_v,
    signs,
    hidden,
    choices,
    uniforms,
    step_offset,
    t0,
    tau,
    accept_cap,
):
    """Metropolis sweep under the log-determinant (even-cycle) energy.

    Same contract as :func:`anneal_weak_segment`; the maintained state is
    the inverse of (shift*I - signed_adj) and the quarter-log-determinant
    energy offset.  Returns (steps_consumed, energy, accepted).
    """
    accepted = 0
    nsteps = choices.shape[0]
    n = inverse.shape[0]
    for t in range(nsteps):
        h = hidden[choices[t]]
        i = edge_u[h]
        j = edge_v[h]
        s = signs[h]
        gii = inverse[i, i]
        gjj = inverse[j, j]
        gij = inverse[i, j]
        tk = 1.0 + 2.0 * s * gij
        det = tk * tk - 4.0 * gii * gjj
        if det <= 0.0 or tk <= 0.0:
            raise ValueError("sign flip crossed the convergence boundary; shift too small")
        d_energy = 0.25 * math.log(det)
        temp = t0 * math.exp(-(step_offset + t) / tau)
        if d_energy <= 0.0 or (temp > 0.0 and uniforms[t] < math.exp(-d_energy / temp)):
            p = 0.5 * s + gij
            dm = p * p - gii * gjj
            m12 = -gjj / dm
            m21 = -gii / dm
            mdg = p / dm
            xi = inverse[:, i].copy()
            xj = inverse[:, j].copy()
            y1 = inverse[j, :].copy()
            y2 = inverse[i, :].copy()
            w1 = mdg * xi + m21 * xj
            w2 = m12 * xi + mdg * xj
            inverse -= w1.reshape(n, 1) * y1.reshape(1, n) + w2.reshape(n, 1) * y2.reshape(1, n)
            signs[h] = -s
            energy += d_energy
            accepted += 1
            if accepted >= accept_cap:
                return t + 1, energy, accepted
    return nsteps, energy, accepted


# Keep the uncompiled implementations addressable for benchmarks and for
# the numpy fallback path, then bind the public names to the selected lane.
weak_flip_delta_py = weak_flip_delta
weak_flip_commit_py = weak_flip_commit
strong_flip_delta_py = strong_flip_delta
strong_flip_commit_py = strong_flip_commit
anneal_weak_segment_py = anneal_weak_segment
anneal_strong_segment_py = anneal_strong_segment

if HAVE_NUMBA:
    _jit = numba.njit(cache=True)
    weak_flip_delta_jit = _jit(weak_flip_delta_py)
    weak_flip_commit_jit = _jit(weak_flip_commit_py)
    strong_flip_delta_jit = _jit(strong_flip_delta_py)
    strong_flip_commit_jit = _jit(strong_flip_commit_py)
    anneal_weak_segment_jit = _jit(anneal_weak_segment_py)
    anneal_strong_segment_jit = _jit(anneal_strong_segment_py)
else:  # pragma: no cover
    weak_flip_delta_jit = None
    weak_flip_commit_jit = None
    strong_flip_delta_jit = None
    strong_flip_commit_jit = None
    anneal_weak_segment_jit = None
    anneal_strong_segment_jit = None

if USE_NUMBA:
    weak_flip_delta = weak_flip_delta_jit
    weak_flip_commit = weak_flip_commit_jit
    strong_flip_delta = strong_flip_delta_jit
    strong_flip_commit = strong_flip_commit_jit
    anneal_weak_segment = anneal_weak_segment_jit
    anneal_strong_segment = anneal_strong_segment_jit


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
