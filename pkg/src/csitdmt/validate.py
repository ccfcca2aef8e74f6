"""Self-check suites runnable from the command line (`csitdmt validate`).

Each suite returns {"suite", "passed", "checks": [{"name", "passed", "detail"}]}.
These are quick cross-validations; the full test suite pins tighter grids.
"""

import math

import numpy as np

from . import oracle
from .dmt import dmt_causal, dmt_causal_vector, dmt_predictive
from .model import ChannelConfig, CsitSpec, dmt_uniform, singleton_bound
from .rdt import rdt_causal, rdt_causal_saturation_delta, rdt_gain_rate_threshold
from .sim import PowerPolicy, simulate_outage

SUITES = ("closed-form-vs-lp", "lp-vs-oracle", "sim-vs-exact", "thresholds")


def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": detail}


def run_suite(name):
    if name == "closed-form-vs-lp":
        checks = _closed_form_vs_lp()
    elif name == "lp-vs-oracle":
        checks = _lp_vs_oracle()
    elif name == "sim-vs-exact":
        checks = _sim_vs_exact()
    elif name == "thresholds":
        checks = _thresholds()
    else:
        raise ValueError(f"unknown validation suite {name!r}; choose from {SUITES}")
    return {"suite": name, "passed": all(c["passed"] for c in checks), "checks": checks}


def _closed_form_vs_lp():
    checks = []
    for nt, nr in [(1, 1), (1, 2), (2, 1)]:
        for B in (2, 3):
            cfg = ChannelConfig(nt, nr, B)
            for u in (1, 2):
                for delta in (0.0, 0.5, 1.0):
                    worst = 0.0
                    for r in np.arange(0.0, 1.0001, 0.1):
                        lp = dmt_causal(float(r), delta, u, cfg)
                        cf = dmt_causal_vector(float(r), delta, u, cfg.n, B)
                        worst = max(worst, abs(lp - cf))
                    checks.append(_check(
                        f"vector {nt}x{nr} B={B} u={u} delta={delta}",
                        worst < 1e-6, f"max |lp - closed| = {worst:.2e}"))
    return checks


def _lp_vs_oracle():
    checks = []
    step = 0.05
    for (nt, nr, B, u, delta, r) in [
        (1, 1, 2, 1, 1.0, 0.0),
        (1, 2, 2, 1, 0.5, 0.5),
        (2, 2, 1, 1, 0.5, 0.5),
    ]:
        cfg = ChannelConfig(nt, nr, B)
        lp = dmt_causal(r, delta, u, cfg)
        br = oracle.causal_dmt_grid(r, delta, u, nt, nr, B, step)
        tol = step * B * cfg.m
        checks.append(_check(
            f"causal {nt}x{nr} B={B} u={u} delta={delta} r={r}",
            abs(lp - br) <= tol, f"lp={lp:.4f} oracle={br:.4f} tol={tol}"))
    for (nt, nr, B, t, delta, r) in [(1, 1, 2, 0, 0.5, 0.5), (1, 1, 2, 1, 0.5, 0.5)]:
        cfg = ChannelConfig(nt, nr, B)
        lp = dmt_predictive(r, delta, t, cfg)
        br = oracle.predictive_dmt_grid(r, delta, t, nt, nr, B, step)
        tol = step * B * cfg.m
        checks.append(_check(
            f"predictive {nt}x{nr} B={B} t={t} delta={delta} r={r}",
            abs(lp - br) <= tol, f"lp={lp:.4f} oracle={br:.4f} tol={tol}"))
    return checks


def _sim_vs_exact(trials=200_000, seed=1234):
    checks = []
    cfg = ChannelConfig(1, 1, 1)
    csit = CsitSpec("none")
    for P in (10.0, 100.0, 1000.0):
        est = simulate_outage(cfg, csit, PowerPolicy("uniform"), P, 1.0, trials, seed)
        exact = oracle.exact_outage_rayleigh_siso(P, 1.0)
        err = abs(est.p_out - exact)
        checks.append(_check(
            f"SISO uniform P={P:g}", err <= 4 * max(est.ci95, 1e-12),
            f"sim={est.p_out:.3e} exact={exact:.3e} ci95={est.ci95:.1e}"))
    return checks


def _thresholds():
    checks = []
    cfg = ChannelConfig(2, 2, 4)
    # causal CSIT gives nothing at high multiplexing gain for u = 3
    ok = True
    for r in (1.25, 1.5, 1.75):
        ok &= abs(dmt_causal(r, 1.0, 3, cfg) - dmt_uniform(r, cfg)) < 1e-6
    gain = dmt_causal(1.0, 1.0, 3, cfg) > dmt_uniform(1.0, cfg) + 1e-6
    checks.append(_check("2x2 B=4 u=3 no-gain boundary at r=1.25", ok and gain))
    # vector case: exactly n*B*(1-r) when u >= B*(1-r)
    ok = True
    for (u, B, n, r) in [(3, 4, 2, 0.5), (2, 2, 1, 0.3), (4, 4, 1, 0.0)]:
        if u >= B * (1 - r):
            ok &= abs(dmt_causal_vector(r, 2.0, u, n, B) - n * B * (1 - r)) < 1e-12
    checks.append(_check("vector no-gain case u >= B(1-r)", ok))
    # RDT gain iff R below (B-u)/B * M * nt
    cfgr = ChannelConfig(2, 2, 4)
    u, M = 2, 4
    thr = rdt_gain_rate_threshold(M, u, cfgr)
    ok = True
    for R in np.arange(0.25, M * cfgr.nt, 0.25):
        gain = rdt_causal(float(R), M, math.inf, u, cfgr) > singleton_bound(float(R), M, cfgr)
        ok &= gain == (R <= thr)
    checks.append(_check("RDT causal gain threshold", ok, f"threshold R={thr}"))
    # RDT saturation in delta
    R = 2.0
    dstar = rdt_causal_saturation_delta(R, M, u, cfgr)
    v0 = rdt_causal(R, M, dstar, u, cfgr)
    ok = all(abs(rdt_causal(R, M, dstar * f, u, cfgr) - v0) < 1e-12 for f in (1.5, 4.0, 100.0))
    checks.append(_check("RDT causal delta saturation", ok, f"delta* = {dstar}"))
    return checks
