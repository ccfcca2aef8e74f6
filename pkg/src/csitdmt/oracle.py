"""Brute-force validators, kept deliberately dumb.

Everything here scans a regular grid and evaluates the exponent programs
directly from their defining formulas, with no code shared with the lp/dmt/rdt
modules.  Used by the test suite to certify the LP and closed-form outputs.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

GRID_CAP = 10**8
_CHUNK = 1 << 20


@dataclass
class GridSpec:
    """Exhaustive-scan description of  min objective(x)  over a box grid.

    bounds: per-variable (lo, hi, step).  Feasibility is the closed budget
    constraint sum_j (pos_terms(x)_j)_+ <= budget (skipped when pos_terms is
    None) and-ed with the optional `feasible` predicate.  All evaluators are
    vectorized: they take an (N, nvars) array.
    """

    bounds: list
    objective: callable
    budget: float = math.inf
    pos_terms: callable = None
    feasible: callable = None
    cap: int = GRID_CAP


@dataclass
class GridResult:
    value: float
    argmin: np.ndarray
    feasible: bool  # False: no feasible grid point ("infeasible-on-grid")


def brute_force_min(g: GridSpec) -> GridResult:
    counts = []
    los = []
    steps = []
    for lo, hi, step in g.bounds:
        if step <= 0 or hi < lo:
            raise ValueError("grid bounds need step > 0 and hi >= lo")
        counts.append(int(math.floor((hi - lo) / step + 1e-9)) + 1)
        los.append(lo)
        steps.append(step)
    total = 1
    for c in counts:
        total *= c
    if total > g.cap:
        raise ValueError(f"grid has {total} points, exceeding the cap {g.cap}")
    counts = np.array(counts)
    los = np.array(los, dtype=float)
    steps = np.array(steps, dtype=float)

    best = math.inf
    best_x = None
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        idx = np.stack(np.unravel_index(flat, counts), axis=1)
        X = los + idx * steps
        mask = np.ones(len(X), dtype=bool)
        if g.pos_terms is not None:
            terms = np.asarray(g.pos_terms(X))
            mask &= np.maximum(terms, 0.0).sum(axis=1) <= g.budget + 1e-12
        if g.feasible is not None:
            mask &= g.feasible(X)
        if not mask.any():
            continue
        obj = np.asarray(g.objective(X[mask]))
        j = int(np.argmin(obj))
        if obj[j] < best:
            best = float(obj[j])
            best_x = X[mask][j].copy()
    if best_x is None:
        return GridResult(math.inf, np.array([]), False)
    return GridResult(best, best_x, True)


def exact_outage_rayleigh_siso(P, R):
    """Closed-form SISO Rayleigh outage with uniform power:
    Pr{log2(1 + P*g) < R} = 1 - exp(-(2**R - 1)/P)."""
    if P <= 0 or R <= 0:
        raise ValueError("need P > 0 and R > 0")
    return -math.expm1(-(2.0**R - 1.0) / P)


# ---------------------------------------------------------------------------
# exponent-program oracles, transcribed independently from the formulas
# ---------------------------------------------------------------------------

def _weights(m, n):
    # pdf exponent weights for ordered eigenvalue exponents, largest first
    return np.array([2.0 * (i + 1) - 1 + n - m for i in range(m)])


def causal_dmt_grid(r, delta, u, nt, nr, B, step, cap=GRID_CAP):
    """Grid minimum of the causal-CSIT DMT exponent program (min over all
    region index vectors k).  delta must be finite."""
    m, n = min(nt, nr), max(nt, nr)
    w = _weights(m, n)
    hi = 1.0 + B * n * m * (1.0 + delta)
    best = math.inf
    feasible_any = False
    for k in itertools.product(range(m + 1), repeat=B):
        bounds = []
        for b in range(B):
            for i in range(m):
                if i < m - k[b]:
                    bounds.append((0.0, hi, step))
                else:
                    bounds.append((-delta, 0.0, step) if delta > 0 else (0.0, 0.0, step))

        def ordering(X, k=k):
            ok = np.ones(len(X), dtype=bool)
            for b in range(B):
                blk = X[:, b * m : (b + 1) * m]
                for i in range(m - 1):
                    ok &= blk[:, i] >= blk[:, i + 1] - 1e-12
            return ok

        def power_exps(X, k=k):
            # p_b = 1 + n*m*delta*(b-u)_+ + sum_{b'<=b-u} sum_{i>m-k_b'} w_i * alpha
            N = len(X)
            p = np.empty((N, B))
            for b in range(B):
                val = 1.0 + n * m * delta * max(b + 1 - u, 0)
                acc = np.full(N, val)
                for bp in range(min(b + 1 - u, B)):
                    for i in range(m - k[bp], m):
                        acc = acc + w[i] * X[:, bp * m + i]
                p[:, b] = acc
            return p

        def terms(X, k=k):
            p = power_exps(X)
            out = np.empty((len(X), B * m))
            for b in range(B):
                for i in range(m):
                    out[:, b * m + i] = p[:, b] - delta - X[:, b * m + i]
            return out

        def objective(X, k=k):
            obj = np.full(len(X), B * n * m * delta)
            for b in range(B):
                for i in range(m):
                    obj = obj + w[i] * X[:, b * m + i]
            return obj

        res = brute_force_min(
            GridSpec(bounds, objective, budget=B * r, pos_terms=terms,
                     feasible=ordering, cap=cap)
        )
        if res.feasible:
            feasible_any = True
            best = min(best, res.value)
    return best if feasible_any else math.inf


def predictive_dmt_grid(r, delta, t, nt, nr, B, step, cap=GRID_CAP):
    """Grid minimum of the predictive-CSIT DMT exponent program."""
    m, n = min(nt, nr), max(nt, nr)
    w = _weights(m, n)
    hi = 1.0 + B * n * m * (1.0 + delta)
    best = math.inf
    feasible_any = False
    for k in itertools.product(range(m + 1), repeat=B):
        p = [
            1.0 + delta * sum((n - k[bp]) * (m - k[bp]) for bp in range(min(B, b + 1 + t)))
            for b in range(B)
        ]
        spent = sum(k[b] * p[b] for b in range(B))
        budget = B * r - spent
        if budget < -1e-12:
            continue
        nvar = sum(m - k[b] for b in range(B))
        const_obj = delta * sum((n - k[b]) * (m - k[b]) for b in range(B))
        if nvar == 0:
            feasible_any = True
            best = min(best, const_obj)
            continue
        bounds = [(0.0, hi, step)] * nvar
        cols = []
        for b in range(B):
            for i in range(m - k[b]):
                cols.append((b, i))

        def terms(X, p=p, cols=cols):
            out = np.empty((len(X), len(cols)))
            for j, (b, _i) in enumerate(cols):
                out[:, j] = p[b] - delta - X[:, j]
            return out

        def objective(X, cols=cols, const_obj=const_obj):
            obj = np.full(len(X), const_obj)
            for j, (_b, i) in enumerate(cols):
                obj = obj + w[i] * X[:, j]
            return obj

        res = brute_force_min(
            GridSpec(bounds, objective, budget=budget, pos_terms=terms, cap=cap)
        )
        if res.feasible:
            feasible_any = True
            best = min(best, res.value)
    return best if feasible_any else math.inf


def causal_vector_dmt_grid(r, delta, u, n, B, step, cap=GRID_CAP):
    """Grid minimum of the vector-channel (m = 1) causal exponent program in
    the shifted variables a_b >= 0:  minimize n*sum a_b subject to
    sum (p_b(a) - a_b)_+ <= B*r with p_b(a) = 1 + n*sum_{b'<=b-u} min(a_b', delta)."""
    hi = 1.0 + B * n * (1.0 + min(delta, 1e6))
    bounds = [(0.0, hi, step)] * B

    def power_exps(X):
        p = np.empty((len(X), B))
        for b in range(B):
            acc = np.full(len(X), 1.0)
            for bp in range(min(b + 1 - u, B)):
                acc = acc + n * np.minimum(X[:, bp], delta)
            p[:, b] = acc
        return p

    def terms(X):
        return power_exps(X) - X

    def objective(X):
        return n * X.sum(axis=1)

    res = brute_force_min(GridSpec(bounds, objective, budget=B * r, pos_terms=terms, cap=cap))
    return res.value if res.feasible else math.inf


def rdt_causal_grid(R, M, delta, u, nt, nr, B, step, cap=GRID_CAP):
    """Grid minimum of the causal discrete-input exponent program over the
    per-link coefficients a[b, tx, rx] >= 0."""
    hi = 1.0 + B * nt * nr * (1.0 + min(delta, 1e6))
    nvar = B * nt * nr
    bounds = [(0.0, hi, step)] * nvar
    max_weak = B * R / M  # strict upper bound on the number of weak links

    def _links(X):
        return X.reshape(len(X), B, nt, nr)

    def feasible(X):
        A = _links(X)
        amin = A.min(axis=3)  # (N, B, nt)
        pbar = np.empty((len(X), B))
        clipped = np.minimum(A, delta).sum(axis=(2, 3))
        for b in range(B):
            pbar[:, b] = 1.0 + clipped[:, :max(b + 1 - u, 0)].sum(axis=1)
        weak = (amin < pbar[:, :, None] - 1e-9).sum(axis=(1, 2))
        return weak < max_weak - 1e-9

    def objective(X):
        return X.sum(axis=1)

    res = brute_force_min(GridSpec(bounds, objective, feasible=feasible, cap=cap))
    return res.value if res.feasible else math.inf


def rdt_predictive_grid(R, M, delta, t, nt, nr, B, step, cap=GRID_CAP):
    """Grid minimum of the predictive discrete-input exponent program."""
    hi = 1.0 + B * nt * nr * (1.0 + min(delta, 1e6)) * (1.0 + B)
    nvar = B * nt * nr
    bounds = [(0.0, hi, step)] * nvar
    max_weak = B * R / M

    def feasible(X):
        A = X.reshape(len(X), B, nt, nr)
        amin = A.min(axis=3)
        clipped = np.minimum(A, delta).sum(axis=(2, 3))
        pbar = np.empty((len(X), B))
        for b in range(B):
            pbar[:, b] = 1.0 + clipped[:, :min(B, b + 1 + t)].sum(axis=1)
        weak = (amin < pbar[:, :, None] - 1e-9).sum(axis=(1, 2))
        return weak < max_weak - 1e-9

    def objective(X):
        return X.sum(axis=1)

    res = brute_force_min(GridSpec(bounds, objective, feasible=feasible, cap=cap))
    return res.value if res.feasible else math.inf
