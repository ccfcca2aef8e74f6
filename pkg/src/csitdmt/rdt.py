"""Rate-diversity tradeoffs for discrete 2**M-ary input constellations.

Both tradeoffs are closed forms in the Singleton exponent d_S(R): a short
recursion for causal CSIT and a two-branch formula for predictive CSIT.
"""

import math
from dataclasses import dataclass

from .model import ChannelConfig, singleton_exponent


@dataclass(frozen=True)
class RdtParams:
    """Derived quantities of one RDT operating point."""

    R: float
    M: int
    d_s: int
    b_hat: int

    @classmethod
    def at(cls, R, M, cfg: ChannelConfig):
        d_s = singleton_exponent(R, M, cfg)
        return cls(R=float(R), M=int(M), d_s=d_s, b_hat=d_s // cfg.nt)


def _causal_coeffs(count, delta, u, cfg: ChannelConfig):
    """a_1..a_count of the causal recursion: a_b = 1 up to the CSIT delay,
    then a_b = a_{b-1} + nt*nr*min(delta, a_{b-u})."""
    g = cfg.nt * cfg.nr
    a = [0.0] * (count + 1)  # 1-based
    for b in range(1, count + 1):
        if b <= u:
            a[b] = 1.0
        else:
            a[b] = a[b - 1] + g * min(delta, a[b - u])
    return a[1:]


def rdt_causal(R, M, delta, u, cfg: ChannelConfig):
    """Optimal RDT with causal CSIT of delay u (always finite, even for
    perfect CSIT)."""
    if u < 1:
        raise ValueError("delay u must be >= 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    p = RdtParams.at(R, M, cfg)
    a = _causal_coeffs(p.b_hat + 1, delta, u, cfg)
    head = sum(a[: p.b_hat])
    return cfg.nr * cfg.nt * head + cfg.nr * (p.d_s - p.b_hat * cfg.nt) * a[p.b_hat]


def rdt_causal_saturation_delta(R, M, u, cfg: ChannelConfig):
    """Smallest CSIT quality exponent beyond which rdt_causal no longer
    improves: a_{ceil(d_S/nt) - u} of the perfect-CSIT recursion.  Returns 0
    when CSIT provides no gain at this rate (index <= 0)."""
    p = RdtParams.at(R, M, cfg)
    idx = math.ceil(p.d_s / cfg.nt) - u
    if idx <= 0:
        return 0.0
    a = _causal_coeffs(idx, math.inf, u, cfg)
    return a[idx - 1]


def rdt_predictive(R, M, delta, t, cfg: ChannelConfig):
    """Optimal RDT with predictive CSIT of horizon t; +inf for perfect CSIT."""
    if t < 0:
        raise ValueError("horizon t must be >= 0")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    p = RdtParams.at(R, M, cfg)
    if math.isinf(delta):
        return math.inf
    nr, nt = cfg.nr, cfg.nt
    if t >= p.b_hat:
        return nr * p.d_s * (1.0 + nr * p.d_s * delta)
    gap = p.b_hat - t
    return nr * (
        p.d_s
        + nr * delta * (gap * (p.b_hat + t + 1) / 2.0 * nt**2 + p.d_s * (p.d_s - nt * gap))
    )


def rdt_gain_rate_threshold(M, u, cfg: ChannelConfig):
    """Causal CSIT improves on the Singleton bound iff R <= (B-u)/B * M * nt."""
    return (cfg.blocks - u) / cfg.blocks * M * cfg.nt
