"""Channel / CSIT configuration types and the two no-CSIT baselines."""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ChannelConfig:
    """MIMO block-fading channel dimensions: nt x nr antennas, B i.i.d. blocks."""

    nt: int
    nr: int
    blocks: int

    def __post_init__(self):
        if self.nt < 1 or self.nr < 1 or self.blocks < 1:
            raise ValueError("nt, nr and blocks must all be >= 1")

    @property
    def m(self):
        return min(self.nt, self.nr)

    @property
    def n(self):
        return max(self.nt, self.nr)


@dataclass(frozen=True)
class CsitSpec:
    """Transmitter-side channel knowledge.

    mode is one of "none", "causal", "predictive", "full".  For causal CSIT,
    `u` is the delay in blocks (estimates of blocks 1..b-u known at block b);
    for predictive CSIT, `t` is the look-ahead (blocks 1..min(B, b+t) known).
    `delta` is the CSIT quality exponent: the estimation noise variance decays
    as P**-delta, so delta = 0 is useless CSIT and delta = inf is perfect.
    """

    mode: str
    u: int | None = None
    t: int | None = None
    delta: float = 0.0

    def __post_init__(self):
        if self.mode not in ("none", "causal", "predictive", "full"):
            raise ValueError(f"unknown CSIT mode {self.mode!r}")
        if self.mode == "causal":
            if self.u is None or self.u < 1:
                raise ValueError("causal CSIT needs delay u >= 1")
        if self.mode == "predictive":
            if self.t is None or self.t < 0:
                raise ValueError("predictive CSIT needs horizon t >= 0")
        if self.delta < 0:
            raise ValueError("CSIT quality exponent delta must be >= 0")

    def validate_for(self, cfg: ChannelConfig):
        if self.mode == "causal" and self.u > cfg.blocks:
            raise ValueError(f"delay u={self.u} exceeds block count {cfg.blocks}")


@dataclass(frozen=True)
class RatePoint:
    """Operating point on the x-axis: multiplexing gain r, or a fixed rate R
    with a 2**M-point constellation."""

    kind: str  # "multiplexing" | "rate"
    value: float
    bits_per_symbol: int | None = None

    def __post_init__(self):
        if self.kind not in ("multiplexing", "rate"):
            raise ValueError(f"unknown rate-point kind {self.kind!r}")
        if self.kind == "rate" and (self.bits_per_symbol is None or self.bits_per_symbol < 1):
            raise ValueError("fixed-rate point needs bits_per_symbol >= 1")

    def check_domain(self, cfg: ChannelConfig):
        if self.kind == "multiplexing":
            if not 0 <= self.value <= cfg.m:
                raise ValueError(f"multiplexing gain {self.value} outside [0, {cfg.m}]")
        else:
            cap = self.bits_per_symbol * cfg.nt
            if not 0 < self.value < cap:
                raise ValueError(f"rate {self.value} outside (0, {cap})")


@dataclass
class TradeoffCurve:
    """Ordered (x, diversity) samples of one DMT or RDT curve."""

    kind: str  # e.g. "dmt-causal", "rdt-predictive", "baseline"
    cfg: ChannelConfig
    csit: CsitSpec | None
    points: list = field(default_factory=list)
    label: str = ""

    def add(self, x, d):
        self.points.append((float(x), float(d)))

    def check_shape(self, tol=1e-9):
        """x strictly increasing, diversity nonincreasing and nonnegative."""
        for (x0, d0), (x1, d1) in zip(self.points, self.points[1:]):
            if x1 <= x0:
                raise ValueError("x grid not strictly increasing")
            if d1 > d0 + tol:
                raise ValueError(f"diversity increases from {d0} to {d1} at x={x1}")
        for _, d in self.points:
            if d < -tol:
                raise ValueError("negative diversity on curve")


def dmt_uniform(r, cfg: ChannelConfig):
    """Uniform-power (no CSIT) DMT: the piecewise-linear curve through the
    points (k, B*(nt-k)*(nr-k)) for k = 0..min(nt, nr)."""
    m = cfg.m
    if not 0 <= r <= m:
        raise ValueError(f"multiplexing gain {r} outside [0, {m}]")

    def corner(k):
        return cfg.blocks * (cfg.nt - k) * (cfg.nr - k)

    k = int(math.floor(r))
    if k >= m:
        return float(corner(m))
    frac = r - k
    return float((1 - frac) * corner(k) + frac * corner(k + 1))


def singleton_exponent(R, M, cfg: ChannelConfig):
    """Block-diversity exponent d_S(R) = 1 + floor(B*(nt - R/M)).

    floor() is evaluated as written (with a 1e-12 guard against float jitter),
    so at an exact breakpoint the higher, left-limit value is returned.
    """
    if not 0 < R < M * cfg.nt:
        raise ValueError(f"rate {R} outside (0, {M * cfg.nt})")
    v = cfg.blocks * (cfg.nt - R / M)
    return 1 + int(math.floor(v + 1e-12))


def singleton_bound(R, M, cfg: ChannelConfig):
    """Singleton bound on the outage diversity of 2**M-ary constellations:
    nr * d_S(R)."""
    return cfg.nr * singleton_exponent(R, M, cfg)
