"""Command-line front end: tradeoff sweeps, outage simulation, validation.

Subcommands: baseline, dmt, rdt, simulate, validate.  Sweeps emit CSV
(`x,diversity,curve_id`) or JSON, optionally with a rendered PNG figure
next to the data file (--plot).  Output is byte-identical across runs with
identical flags and seed.
"""

import argparse
import concurrent.futures
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import validate as validate_mod
from .dmt import dmt_causal, dmt_causal_vector, dmt_predictive
from .model import (ChannelConfig, CsitSpec, TradeoffCurve, dmt_uniform,
                    singleton_bound, singleton_exponent)
from .rdt import rdt_causal, rdt_predictive
from .sim import PowerPolicy, estimate_diversity, simulate_outage

BREAKPOINT_EPS = 1e-9


@dataclass
class SweepConfig:
    kind: str  # dmt-causal | dmt-predictive | dmt-vector | rdt-causal | rdt-predictive | baseline
    cfg: ChannelConfig
    csit_list: list  # CsitSpec per curve (empty for baseline)
    grid: tuple  # (start, stop, step)
    bits_per_symbol: int | None = None
    threads: int = 1


def _fmt(v):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def _grid_points(start, stop, step):
    if step <= 0 or stop < start:
        raise ValueError("grid needs step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9))
    pts = [start + i * step for i in range(n + 1)]
    if pts[-1] < stop - 1e-9:
        pts.append(stop)
    return pts


def _dmt_grid(start, stop, step, m):
    pts = set(round(x, 12) for x in _grid_points(start, stop, step))
    for k in range(int(math.ceil(start)), int(math.floor(stop)) + 1):
        if 0 <= k <= m:
            pts.add(float(k))
    return sorted(pts)


def _rdt_grid(start, stop, step, M, cfg):
    """Rate grid plus samples straddling each Singleton-bound breakpoint."""
    pts = set(round(x, 12) for x in _grid_points(start, stop, step))
    for j in range(0, cfg.blocks * cfg.nt + 1):
        Rstar = M * (cfg.nt - j / cfg.blocks)
        for cand in (Rstar - BREAKPOINT_EPS, Rstar + BREAKPOINT_EPS):
            if start <= cand <= stop and 0 < cand < M * cfg.nt:
                pts.add(cand)
    return sorted(pts)


def _curve_label(kind, csit):
    if csit is None:
        return kind
    de = "inf" if math.isinf(csit.delta) else f"{csit.delta:g}"
    if csit.mode == "causal":
        return f"{kind}_u{csit.u}_de{de}"
    if csit.mode == "predictive":
        return f"{kind}_t{csit.t}_de{de}"
    return f"{kind}_de{de}"


def _point_eval(kind, cfg, csit, M):
    if kind == "baseline-dmt":
        return lambda x: dmt_uniform(x, cfg)
    if kind == "baseline-rdt":
        return lambda x: float(singleton_bound(x, M, cfg))
    if kind == "dmt-causal":
        return lambda x: dmt_causal(x, csit.delta, csit.u, cfg)
    if kind == "dmt-predictive":
        return lambda x: dmt_predictive(x, csit.delta, csit.t, cfg)
    if kind == "dmt-vector":
        if cfg.m != 1:
            raise ValueError("dmt-vector needs min(nt, nr) = 1")
        return lambda x: dmt_causal_vector(x, csit.delta, csit.u, cfg.n, cfg.blocks)
    if kind == "rdt-causal":
        return lambda x: rdt_causal(x, M, csit.delta, csit.u, cfg)
    if kind == "rdt-predictive":
        return lambda x: rdt_predictive(x, M, csit.delta, csit.t, cfg)
    raise ValueError(f"unknown curve kind {kind!r}")


def run_sweep(sweep: SweepConfig):
    """Evaluate every requested curve over the grid; returns TradeoffCurves
    in input order (grid points may be dispatched to a thread pool)."""
    start, stop, step = sweep.grid
    if sweep.kind.startswith("rdt") or (sweep.kind == "baseline" and sweep.bits_per_symbol):
        xs = _rdt_grid(start, stop, step, sweep.bits_per_symbol, sweep.cfg)
    else:
        xs = _dmt_grid(start, stop, step, sweep.cfg.m)
    if not xs:
        raise ValueError("empty sweep grid")

    curves = []
    if sweep.kind == "baseline":
        specs = [("baseline-dmt", None)] if not sweep.bits_per_symbol else [("baseline-rdt", None)]
        if sweep.bits_per_symbol is None and sweep.csit_list:
            raise ValueError("baseline takes no CSIT specs")
    else:
        specs = [(sweep.kind, csit) for csit in sweep.csit_list]
        if not specs:
            raise ValueError("no CSIT specs given for the sweep")

    for kind, csit in specs:
        fn = _point_eval(kind, sweep.cfg, csit, sweep.bits_per_symbol)
        if sweep.threads > 1:
            with concurrent.futures.ThreadPoolExecutor(sweep.threads) as pool:
                ds = list(pool.map(fn, xs))
        else:
            ds = [fn(x) for x in xs]
        curve = TradeoffCurve(kind=kind, cfg=sweep.cfg, csit=csit,
                              label=_curve_label(kind, csit))
        for x, d in zip(xs, ds):
            curve.points.append((x, d))
        curves.append(curve)
    return curves


def curves_to_csv(curves):
    lines = ["x,diversity,curve_id"]
    for c in curves:
        for x, d in c.points:
            lines.append(f"{_fmt(x)},{_fmt(d)},{c.label}")
    return "\n".join(lines) + "\n"


def curves_to_json(curves):
    payload = {"curves": []}
    for c in curves:
        payload["curves"].append({
            "curve_id": c.label,
            "kind": c.kind,
            "channel": {"nt": c.cfg.nt, "nr": c.cfg.nr, "blocks": c.cfg.blocks},
            "csit": None if c.csit is None else {
                "mode": c.csit.mode, "u": c.csit.u, "t": c.csit.t,
                "delta": "inf" if math.isinf(c.csit.delta) else c.csit.delta},
            "points": [[_num(x), _num(d)] for x, d in c.points],
        })
    return json.dumps(payload, indent=2) + "\n"


def _num(v):
    return "inf" if (isinstance(v, float) and math.isinf(v)) else v


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_delta_list(s):
    vals = []
    for tok in s.split(","):
        tok = tok.strip()
        vals.append(math.inf if tok in ("inf", "Inf", "INF") else float(tok))
    return vals


def _parse_int_list(s):
    return [int(t) for t in s.split(",")]


def _parse_grid(s):
    parts = s.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {s!r} must be start:stop:step")
    return float(parts[0]), float(parts[1]), float(parts[2])


def _csit_specs(args, cfg):
    deltas = _parse_delta_list(args.delta) if args.delta else [0.0]
    specs = []
    if args.delay is not None and args.predict is not None:
        raise ValueError("--delay and --predict are mutually exclusive")
    if args.delay is not None:
        for u in _parse_int_list(args.delay):
            for de in deltas:
                s = CsitSpec("causal", u=u, delta=de)
                s.validate_for(cfg)
                specs.append(s)
    elif args.predict is not None:
        for t in _parse_int_list(args.predict):
            for de in deltas:
                specs.append(CsitSpec("predictive", t=t, delta=de))
    else:
        raise ValueError("one of --delay or --predict is required")
    return specs


def _add_common(sp, channel=True):
    if channel:
        # required, but may arrive via --config defaults; checked in _channel
        sp.add_argument("--nt", type=int)
        sp.add_argument("--nr", type=int)
        sp.add_argument("--blocks", type=int)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--plot", action="store_true",
                    help="also render a PNG next to --out")
    sp.add_argument("--threads", type=int,
                    default=int(os.environ.get("CSITDMT_THREADS", "1")))
    sp.add_argument("--config", help="JSON file of flag defaults")


def build_parser():
    ap = argparse.ArgumentParser(prog="csitdmt",
                                 description="Tradeoff curves and outage simulation for "
                                             "MIMO block-fading channels with causal/"
                                             "predictive CSIT")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("baseline", help="no-CSIT baselines (uniform DMT / Singleton RDT)")
    _add_common(sp)
    sp.add_argument("--grid", default=None, help="r grid start:stop:step")
    sp.add_argument("--rate-grid", default=None, help="R grid start:stop:step (Singleton)")
    sp.add_argument("--bits-per-symbol", type=int, default=None)

    sp = sub.add_parser("dmt", help="Gaussian-input diversity-multiplexing tradeoff")
    _add_common(sp)
    sp.add_argument("--delay", help="causal CSIT delay u (comma list)")
    sp.add_argument("--predict", help="predictive CSIT horizon t (comma list)")
    sp.add_argument("--delta", help="CSIT quality exponents, comma list, 'inf' allowed")
    sp.add_argument("--grid", default="0:0:0.01", help="r grid start:stop:step")
    sp.add_argument("--method", choices=("lp", "closed-form"), default="lp",
                    help="closed-form is the vector-channel (m=1) recursion")

    sp = sub.add_parser("rdt", help="discrete-input rate-diversity tradeoff")
    _add_common(sp)
    sp.add_argument("--delay")
    sp.add_argument("--predict")
    sp.add_argument("--delta")
    sp.add_argument("--rate-grid", required=True, help="R grid start:stop:step")
    sp.add_argument("--bits-per-symbol", type=int, required=True)

    sp = sub.add_parser("simulate", help="Monte-Carlo outage probability sweep over SNR")
    _add_common(sp)
    sp.add_argument("--delay")
    sp.add_argument("--predict")
    sp.add_argument("--delta", default="0")
    sp.add_argument("--rate", type=float, required=True)
    sp.add_argument("--snr-grid-db", required=True, help="SNR grid in dB, start:stop:step")
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--policy", choices=("uniform", "exponent"), default="uniform")
    sp.add_argument("--input", choices=("gaussian", "discrete"), default="gaussian")
    sp.add_argument("--bits-per-symbol", type=int, default=None)

    sp = sub.add_parser("validate", help="run a named cross-validation suite")
    sp.add_argument("suite", choices=validate_mod.SUITES)
    sp.add_argument("--out")
    return ap


def _apply_config(argv):
    """Expand a --config JSON file into flags (explicit flags win)."""
    if "--config" not in argv:
        return argv
    path = argv[argv.index("--config") + 1]
    with open(path, encoding="utf-8") as fh:
        conf = json.load(fh)
    if not isinstance(conf, dict):
        raise ValueError("--config file must hold a JSON object of flag values")
    extra = []
    for key, value in conf.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue  # command line overrides the config file
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        else:
            extra.extend([flag, str(value)])
    return argv + extra


def _channel(args):
    for name in ("nt", "nr", "blocks"):
        if getattr(args, name) is None:
            raise ValueError(f"--{name} is required (flag or --config entry)")
    return ChannelConfig(args.nt, args.nr, args.blocks)


def _cmd_sweep(args):
    cfg = _channel(args)
    if args.command == "baseline":
        if args.rate_grid:
            if not args.bits_per_symbol:
                raise ValueError("--rate-grid needs --bits-per-symbol")
            sweep = SweepConfig("baseline", cfg, [], _parse_grid(args.rate_grid),
                                bits_per_symbol=args.bits_per_symbol, threads=args.threads)
        else:
            grid = _parse_grid(args.grid) if args.grid else (0.0, float(cfg.m), 0.01)
            sweep = SweepConfig("baseline", cfg, [], grid, threads=args.threads)
    elif args.command == "dmt":
        specs = _csit_specs(args, cfg)
        kind = "dmt-causal" if specs[0].mode == "causal" else "dmt-predictive"
        if args.method == "closed-form":
            if kind != "dmt-causal":
                raise ValueError("--method closed-form applies to causal CSIT only")
            kind = "dmt-vector"
        sweep = SweepConfig(kind, cfg, specs, _parse_grid(args.grid), threads=args.threads)
    else:  # rdt
        specs = _csit_specs(args, cfg)
        kind = "rdt-causal" if specs[0].mode == "causal" else "rdt-predictive"
        sweep = SweepConfig(kind, cfg, specs, _parse_grid(args.rate_grid),
                            bits_per_symbol=args.bits_per_symbol, threads=args.threads)

    curves = run_sweep(sweep)
    text = curves_to_csv(curves) if args.format == "csv" else curves_to_json(curves)
    _write(text, args.out)
    if args.plot:
        if not args.out:
            raise ValueError("--plot needs --out to name the figure file")
        from .plots import render_curves
        render_curves(curves, os.path.splitext(args.out)[0] + ".png",
                      title=f"{sweep.kind} {cfg.nt}x{cfg.nr} B={cfg.blocks}")
    return 0


def _cmd_simulate(args):
    cfg = _channel(args)
    deltas = _parse_delta_list(args.delta)
    if len(deltas) != 1:
        raise ValueError("simulate takes a single --delta value")
    if args.delay is not None:
        csit = CsitSpec("causal", u=int(args.delay), delta=deltas[0])
        csit.validate_for(cfg)
    elif args.predict is not None:
        csit = CsitSpec("predictive", t=int(args.predict), delta=deltas[0])
    else:
        csit = CsitSpec("none", delta=deltas[0])
    policy = PowerPolicy(args.policy)
    start, stop, step = _parse_grid(args.snr_grid_db)
    ests = []
    for snr_db in _grid_points(start, stop, step):
        P = 10.0 ** (snr_db / 10.0)
        ests.append((snr_db, simulate_outage(
            cfg, csit, policy, P, args.rate, args.trials, args.seed,
            input_kind=args.input, M=args.bits_per_symbol)))

    label = f"sim_{args.policy}_{args.input}"
    if args.format == "csv":
        lines = ["x,p_out,ci95,trials,curve_id"]
        for snr_db, e in ests:
            lines.append(f"{_fmt(snr_db)},{_fmt(e.p_out)},{_fmt(e.ci95)},{e.trials},{label}")
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "curve_id": label,
            "channel": {"nt": cfg.nt, "nr": cfg.nr, "blocks": cfg.blocks},
            "csit": {"mode": csit.mode, "u": csit.u, "t": csit.t,
                     "delta": "inf" if math.isinf(csit.delta) else csit.delta},
            "rate": args.rate, "trials": args.trials, "seed": args.seed,
            "points": [{"snr_db": s, "p_out": e.p_out, "ci95": e.ci95}
                       for s, e in ests],
        }
        if all(e.p_out > 0 for _, e in ests) and len(ests) >= 3:
            slope, stderr = estimate_diversity([(e.P, e.p_out) for _, e in ests])
            payload["diversity_slope"] = {"slope": slope, "stderr": stderr}
        text = json.dumps(payload, indent=2) + "\n"
    _write(text, args.out)
    if args.plot:
        if not args.out:
            raise ValueError("--plot needs --out to name the figure file")
        from .plots import render_outage
        render_outage({label: [e for _, e in ests]},
                      os.path.splitext(args.out)[0] + ".png")
    return 0


def _cmd_validate(args):
    report = validate_mod.run_suite(args.suite)
    _write(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["passed"] else 1


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config(argv)
        args = ap.parse_args(argv)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_sweep(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
