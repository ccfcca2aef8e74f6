"""Gaussian-input diversity-multiplexing tradeoffs with causal or predictive
mismatched CSIT.

Each tradeoff value is the minimum, over the (m+1)^B region index vectors k,
of a small linear program in the eigenvalue exponents alpha[b, i] of the
normalised true channel.  Positive-part terms in the budget constraint are
handled by the epigraph transform in `lp`.
"""

import itertools
import math

import numpy as np

from .lp import LpProblem, epigraph_transform, solve_lp
from .model import ChannelConfig, dmt_uniform

SAT_TOL = 1e-6
FLOOR_SNAP = 1e-12


def _weights(cfg):
    m, n = cfg.m, cfg.n
    return [2 * (i + 1) - 1 + n - m for i in range(m)]


def _snap_floor(x):
    return int(math.floor(x + FLOOR_SNAP))


def region_indices(cfg):
    """All (m+1)^B region index vectors, lexicographic."""
    return itertools.product(range(cfg.m + 1), repeat=cfg.blocks)


def build_causal_lp(k, r, delta, u, cfg: ChannelConfig):
    """Exponent LP of the causal-CSIT tradeoff for one region vector k.

    Variables are alpha[b, i] (row-major, b = 0..B-1, i = 0..m-1, exponents
    ordered largest first within a block).  The additive constant B*n*m*delta
    of the objective is NOT included; callers add it after solving.
    """
    if not math.isfinite(delta):
        raise ValueError("build_causal_lp needs finite delta; use the saturation search")
    m, n, B = cfg.m, cfg.n, cfg.blocks
    if not (0 <= r <= m and delta >= 0 and 1 <= u <= B):
        raise ValueError(f"bad causal parameters r={r}, delta={delta}, u={u}")
    w = _weights(cfg)
    nv = B * m

    def idx(b, i):
        return b * m + i

    c = np.zeros(nv)
    bounds = []
    for b in range(B):
        for i in range(m):
            c[idx(b, i)] = w[i]
            if i < m - k[b]:
                bounds.append((0.0, math.inf))
            else:
                bounds.append((-delta, 0.0))

    rows = []
    for b in range(B):
        for i in range(m - 1):
            a = np.zeros(nv)
            a[idx(b, i)] = 1.0
            a[idx(b, i + 1)] = -1.0
            rows.append((a, ">=", 0.0))

    # p_b = 1 + n*m*delta*(b-u)_+ + sum_{b'<=b-u} sum_{i>m-k_b'} w_i*alpha[b',i]
    p_const = []
    p_lin = []
    for b in range(B):
        bb = b + 1
        p_const.append(1.0 + n * m * delta * max(bb - u, 0))
        lin = np.zeros(nv)
        for bp in range(min(bb - u, B)):
            for i in range(m - k[bp], m):
                lin[idx(bp, i)] += w[i]
        p_lin.append(lin)

    terms = []
    for b in range(B):
        for i in range(m):
            a = p_lin[b].copy()
            a[idx(b, i)] -= 1.0
            terms.append((a, p_const[b] - delta))

    base = LpProblem(c, rows, bounds)
    return epigraph_transform(terms, B * r, base)


def dmt_causal(r, delta, u, cfg: ChannelConfig):
    """Achievable DMT with causal CSIT of delay u and quality exponent delta
    (delta may be +inf: resolved by a doubling saturation search, since causal
    diversity is always finite)."""
    m = cfg.m
    if not 0 <= r <= m:
        raise ValueError(f"multiplexing gain {r} outside [0, {m}]")
    if not 1 <= u <= cfg.blocks:
        raise ValueError(f"delay u={u} outside [1, {cfg.blocks}]")
    if r >= m:
        return 0.0
    if math.isinf(delta):
        prev = None
        stable = 0
        d = 1.0
        for _ in range(64):
            val = dmt_causal(r, d, u, cfg)
            if prev is not None and abs(val - prev) < SAT_TOL:
                stable += 1
                if stable >= 2:
                    return val
            else:
                stable = 0
            prev = val
            d *= 2.0
        raise RuntimeError("causal saturation search did not converge")

    const = cfg.blocks * cfg.n * cfg.m * delta
    best = math.inf
    for k in region_indices(cfg):
        sol = solve_lp(build_causal_lp(k, r, delta, u, cfg))
        if sol.status == "optimal":
            best = min(best, const + sol.value)
    if math.isinf(best):
        raise RuntimeError("no feasible region: causal exponent program is empty")
    return max(best, 0.0)


def dmt_causal_vector(r, delta, u, n, B):
    """Closed-form causal DMT for vector channels (min(nt, nr) = 1) with n
    antennas on the other side."""
    if not (0 <= r <= 1 and u >= 1 and n >= 1 and B >= 1):
        raise ValueError(f"bad vector-channel parameters r={r}, u={u}, n={n}, B={B}")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    fl = _snap_floor(B * r)
    if B - u - B * r <= FLOOR_SNAP:
        return n * B * (1.0 - r)
    # optimal coefficients: the first takes the fractional budget remainder,
    # every later one sits exactly at its power exponent
    # 1 + n*sum_{j<=i-u} min(a_j, delta)
    a = [0.0] * (B - fl + 1)  # 1-based
    a[1] = 1.0 - B * r + fl
    for i in range(2, B - fl + 1):
        a[i] = 1.0 + n * sum(min(a[j], delta) for j in range(1, i - u + 1))
    return n * sum(a[1:])


def build_predictive_lp(k, r, delta, t, cfg: ChannelConfig):
    """Exponent LP of the predictive-CSIT tradeoff for one region vector k.

    Only the m - k_b leading exponents of each block are free variables; the
    power exponents p_b(k) are constants.  Returns None when the region is
    infeasible outright (fixed budget spend exceeds B*r).  The constant part
    of the objective, sum_b delta*(n-k_b)*(m-k_b), IS included (via a fixed
    offset returned alongside).
    """
    if not math.isfinite(delta):
        raise ValueError("build_predictive_lp needs finite delta")
    m, n, B = cfg.m, cfg.n, cfg.blocks
    if not (0 <= r <= m and delta >= 0 and t >= 0):
        raise ValueError(f"bad predictive parameters r={r}, delta={delta}, t={t}")

    w = _weights(cfg)
    p = [
        1.0 + delta * sum((n - k[bp]) * (m - k[bp]) for bp in range(min(B, b + 1 + t)))
        for b in range(B)
    ]
    budget = B * r - sum(k[b] * p[b] for b in range(B))
    const = delta * sum((n - k[b]) * (m - k[b]) for b in range(B))
    if budget < -1e-12:
        return None, const
    cols = [(b, i) for b in range(B) for i in range(m - k[b])]
    nv = len(cols)
    if nv == 0:
        return "empty", const
    c = np.array([w[i] for _, i in cols])
    bounds = [(0.0, math.inf)] * nv
    terms = []
    for j, (b, _i) in enumerate(cols):
        a = np.zeros(nv)
        a[j] = -1.0
        terms.append((a, p[b] - delta))
    base = LpProblem(c, [], bounds)
    return epigraph_transform(terms, budget, base), const


def dmt_predictive(r, delta, t, cfg: ChannelConfig):
    """Achievable DMT with predictive CSIT of horizon t and quality exponent
    delta.  Perfect predictive CSIT (delta = +inf) yields infinite diversity
    for every r < m."""
    m = cfg.m
    if not 0 <= r <= m:
        raise ValueError(f"multiplexing gain {r} outside [0, {m}]")
    if t < 0:
        raise ValueError("predictive horizon t must be >= 0")
    if r >= m:
        return 0.0
    if math.isinf(delta):
        return math.inf

    best = math.inf
    for k in region_indices(cfg):
        prob, const = build_predictive_lp(k, r, delta, t, cfg)
        if prob is None:
            continue
        if prob == "empty":
            best = min(best, const)
            continue
        sol = solve_lp(prob)
        if sol.status == "optimal":
            best = min(best, const + sol.value)
    if math.isinf(best):
        raise RuntimeError("no feasible region: predictive exponent program is empty")
    return max(best, 0.0)


def dmt_none(r, cfg: ChannelConfig):
    """No-CSIT baseline (uniform power)."""
    return dmt_uniform(r, cfg)
