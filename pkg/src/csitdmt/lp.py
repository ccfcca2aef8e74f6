"""Dense simplex solver plus the positive-part epigraph transform.

The tradeoff theorems reduce to tiny piecewise-linear programs with
constraints of the form sum_j (e_j)_+ < budget.  `epigraph_transform`
rewrites each positive part with an auxiliary variable s_j >= e_j, s_j >= 0,
and `solve_lp` solves the resulting LP with a two-phase tableau simplex
(Dantzig pricing, Bland fallback after repeated degenerate pivots).  Strict
inequalities are handled by solving the closed (<=) program and flagging
discontinuities with `strict_inequality_probe`.
"""

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    def njit(*args, **kwargs):
        def deco(f):
            return f
        return deco if not (args and callable(args[0])) else args[0]

TAU_FEAS = 1e-9
TAU_OPT = 1e-9
TAU_DISC = 1e-6

_RELATIONS = ("<=", "=", ">=")


class LpStructureError(ValueError):
    """Malformed problem: dimension mismatch, bad relation, infinite data."""


class LpProbeError(RuntimeError):
    """A sub-solve of the strict-inequality probe failed."""

    def __init__(self, eps, status):
        super().__init__(f"probe solve at budget-eps (eps={eps}) returned {status}")
        self.eps = eps
        self.status = status


@dataclass
class LpProblem:
    """minimize c.x  s.t.  rows (a, rel, b) with rel in {<=, =, >=} and
    per-variable bounds (lo, hi), +-inf allowed."""

    objective: np.ndarray
    constraints: list
    bounds: list

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        nv = self.objective.size
        if not np.all(np.isfinite(self.objective)):
            raise LpStructureError("objective coefficients must be finite")
        if len(self.bounds) != nv:
            raise LpStructureError("bounds length does not match objective length")
        norm_rows = []
        for a, rel, b in self.constraints:
            a = np.asarray(a, dtype=float)
            if a.size != nv:
                raise LpStructureError("constraint row length does not match objective")
            if rel not in _RELATIONS:
                raise LpStructureError(f"unknown relation {rel!r}")
            if not (np.all(np.isfinite(a)) and math.isfinite(b)):
                raise LpStructureError("constraint coefficients must be finite")
            norm_rows.append((a, rel, float(b)))
        self.constraints = norm_rows
        for lo, hi in self.bounds:
            if lo > hi:
                raise LpStructureError(f"bound lo={lo} exceeds hi={hi}")


@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float
    x: np.ndarray | None


@njit(cache=True)
def _pivot_loop(T, basis, allowed, tol, bland_after):
    """Run the simplex on tableau T in place.  Returns 0 optimal, 1 unbounded,
    2 iteration limit."""
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    degen = 0
    bland = False
    for _ in range(20000):
        enter = -1
        if bland:
            for j in range(ncols):
                if allowed[j] and T[m, j] < -tol:
                    enter = j
                    break
        else:
            best = -tol
            for j in range(ncols):
                if allowed[j] and T[m, j] < best:
                    best = T[m, j]
                    enter = j
        if enter == -1:
            return 0
        leave = -1
        best_ratio = 1e300
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, ncols] / a
                if ratio < best_ratio - 1e-12:
                    best_ratio = ratio
                    leave = i
                elif ratio <= best_ratio + 1e-12 and leave >= 0 and basis[i] < basis[leave]:
                    leave = i
        if leave == -1:
            return 1
        if best_ratio < tol:
            degen += 1
            if degen >= bland_after:
                bland = True
        else:
            degen = 0
        piv = T[leave, enter]
        T[leave, :] /= piv
        for i in range(m + 1):
            if i != leave:
                f = T[i, enter]
                if f != 0.0:
                    T[i, :] -= f * T[leave, :]
                    T[i, enter] = 0.0
        basis[leave] = enter
    return 2


def _set_cost_row(T, basis, costs):
    m = T.shape[0] - 1
    T[m, :] = 0.0
    T[m, : costs.size] = costs
    for i in range(m):
        cb = costs[basis[i]] if basis[i] < costs.size else 0.0
        if cb != 0.0:
            T[m, :] -= cb * T[i, :]


def solve_lp(p: LpProblem) -> LpSolution:
    """Two-phase dense simplex.  Deterministic: identical input gives
    bitwise-identical output."""
    c = p.objective
    nv = c.size

    for j, (lo, hi) in enumerate(p.bounds):
        if c[j] != 0.0 and np.isneginf(lo):
            raise LpStructureError(
                f"variable {j} is unbounded below but has a nonzero objective "
                "coefficient; substitute a finite lower bound"
            )

    # substitute variables so every tableau column is >= 0
    col_of = []
    ncols = 0
    ub_rows = []
    for lo, hi in p.bounds:
        if np.isfinite(lo):
            col_of.append(("shift", ncols, lo))
            if np.isfinite(hi):
                ub_rows.append((ncols, hi - lo))
            ncols += 1
        elif np.isfinite(hi):
            col_of.append(("mirror", ncols, hi))
            ncols += 1
        else:
            col_of.append(("split", ncols, ncols + 1))
            ncols += 2

    c_std = np.zeros(ncols)
    for j in range(nv):
        kind, col, aux = col_of[j][0], col_of[j][1], col_of[j][2]
        if kind == "shift":
            c_std[col] += c[j]
        elif kind == "mirror":
            c_std[col] -= c[j]
        else:
            c_std[col] += c[j]
            c_std[aux] -= c[j]
    obj_shift = 0.0
    for j in range(nv):
        kind, _, aux = col_of[j]
        if kind == "shift":
            obj_shift += c[j] * aux
        elif kind == "mirror":
            obj_shift += c[j] * aux

    rows = []
    for a, rel, b in p.constraints:
        arow = np.zeros(ncols)
        rhs = b
        for j in range(nv):
            if a[j] == 0.0:
                continue
            kind, col, aux = col_of[j]
            if kind == "shift":
                arow[col] += a[j]
                rhs -= a[j] * aux
            elif kind == "mirror":
                arow[col] -= a[j]
                rhs -= a[j] * aux
            else:
                arow[col] += a[j]
                arow[aux] -= a[j]
        rows.append((arow, rel, rhs))
    for col, ub in ub_rows:
        arow = np.zeros(ncols)
        arow[col] = 1.0
        rows.append((arow, "<=", ub))

    nrows = len(rows)
    n_le = sum(1 for _, rel, b in rows if (rel == "<=" and b >= 0) or (rel == ">=" and b < 0))
    n_ge = sum(1 for _, rel, b in rows if (rel == ">=" and b >= 0) or (rel == "<=" and b < 0))
    n_art = nrows - n_le
    tot = ncols + n_le + n_ge + n_art

    T = np.zeros((nrows + 1, tot + 1))
    basis = np.empty(nrows, dtype=np.int64)
    slack_at = ncols
    art_at = ncols + n_le + n_ge
    art_cols = []
    for i, (arow, rel, rhs) in enumerate(rows):
        if rhs < 0:
            arow = -arow
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        T[i, :ncols] = arow
        T[i, tot] = rhs
        if rel == "<=":
            T[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        else:
            if rel == ">=":
                T[i, slack_at] = -1.0
                slack_at += 1
            T[i, art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1

    allowed = np.ones(tot, dtype=np.bool_)

    if art_cols:
        phase1 = np.zeros(tot)
        phase1[art_cols] = 1.0
        _set_cost_row(T, basis, phase1)
        status = _pivot_loop(T, basis, allowed, TAU_OPT, 50)
        if status == 2:
            raise RuntimeError("simplex iteration limit in phase 1")
        if -T[nrows, tot] > 1e-7:
            return LpSolution("infeasible", math.nan, None)
        # drive residual artificials out of the basis (or ignore redundant rows)
        art_set = set(art_cols)
        for i in range(nrows):
            if basis[i] in art_set:
                for j in range(ncols + n_le + n_ge):
                    if abs(T[i, j]) > 1e-9:
                        piv = T[i, j]
                        T[i, :] /= piv
                        for ii in range(nrows + 1):
                            if ii != i and T[ii, j] != 0.0:
                                T[ii, :] -= T[ii, j] * T[i, :]
                                T[ii, j] = 0.0
                        basis[i] = j
                        break
        for jc in art_cols:
            allowed[jc] = False

    costs = np.zeros(tot)
    costs[:ncols] = c_std
    _set_cost_row(T, basis, costs)
    status = _pivot_loop(T, basis, allowed, TAU_OPT, 50)
    if status == 2:
        raise RuntimeError("simplex iteration limit in phase 2")
    if status == 1:
        return LpSolution("unbounded", -math.inf, None)

    y = np.zeros(tot)
    for i in range(nrows):
        y[basis[i]] = T[i, tot]
    x = np.zeros(nv)
    for j in range(nv):
        kind, col, aux = col_of[j]
        if kind == "shift":
            x[j] = aux + y[col]
        elif kind == "mirror":
            x[j] = aux - y[col]
        else:
            x[j] = y[col] - y[aux]
    return LpSolution("optimal", float(c @ x), x)


def constraint_violation(p: LpProblem, x):
    """Largest (scaled) violation of any constraint or bound at x."""
    worst = 0.0
    for a, rel, b in p.constraints:
        v = float(a @ x)
        scale = max(1.0, abs(b), float(np.abs(a).max() * np.abs(x).max()))
        if rel == "<=":
            worst = max(worst, (v - b) / scale)
        elif rel == ">=":
            worst = max(worst, (b - v) / scale)
        else:
            worst = max(worst, abs(v - b) / scale)
    for j, (lo, hi) in enumerate(p.bounds):
        scale = max(1.0, abs(x[j]))
        if np.isfinite(lo):
            worst = max(worst, (lo - x[j]) / scale)
        if np.isfinite(hi):
            worst = max(worst, (x[j] - hi) / scale)
    return worst


def epigraph_transform(terms, budget, base: LpProblem) -> LpProblem:
    """Append auxiliaries s_j with s_j >= e_j, s_j >= 0, sum s_j <= budget.

    Each term is (a, const) describing the affine e_j = a.x + const in the
    base variables.  The base objective is untouched, so s_j = (e_j)_+ is
    always optimal and the LP value equals the original piecewise-linear
    program with constraint sum (e_j)_+ <= budget.
    """
    nv = base.objective.size
    nt = len(terms)
    c = np.concatenate([base.objective, np.zeros(nt)])
    bounds = list(base.bounds) + [(0.0, math.inf)] * nt
    rows = []
    for a, rel, b in base.constraints:
        rows.append((np.concatenate([a, np.zeros(nt)]), rel, b))
    for j, (a, const) in enumerate(terms):
        a = np.asarray(a, dtype=float)
        if a.size != nv:
            raise LpStructureError("epigraph term length does not match base variables")
        row = np.concatenate([a, np.zeros(nt)])
        row[nv + j] = -1.0
        rows.append((row, "<=", -float(const)))
    srow = np.zeros(nv + nt)
    srow[nv:] = 1.0
    rows.append((srow, "<=", float(budget)))
    return LpProblem(c, rows, bounds)


def strict_inequality_probe(build, budget, eps_list):
    """Compare the closed (<=) optimum with the budget -> budget- limit.

    `build(budget)` must return an LpProblem.  Solves at the exact budget and
    at budget - eps for every eps, extrapolates the open-constraint limit, and
    reports whether the two differ beyond TAU_DISC.
    """
    eps_list = list(eps_list)
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ValueError("eps_list must be strictly positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")

    closed = solve_lp(build(budget))
    if closed.status != "optimal":
        raise LpProbeError(0.0, closed.status)
    vals = []
    for eps in eps_list:
        sol = solve_lp(build(budget - eps))
        if sol.status != "optimal":
            raise LpProbeError(eps, sol.status)
        vals.append(sol.value)
    if len(vals) >= 2:
        e1, e2 = eps_list[-2], eps_list[-1]
        v1, v2 = vals[-2], vals[-1]
        open_limit = v2 - e2 * (v1 - v2) / (e1 - e2)
    else:
        open_limit = vals[-1]
    discontinuous = abs(closed.value - open_limit) > TAU_DISC
    return closed.value, open_limit, discontinuous
