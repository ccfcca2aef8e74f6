"""Finite-SNR Monte-Carlo outage simulator.

Draws Rayleigh block-fading channels together with their noisy CSIT
(estimation noise variance P**-delta), allocates power either uniformly or by
the asymptotic exponent rule, and estimates the outage probability of the
per-codeword average mutual information.  Trials are processed in fixed-size
batches with per-batch RNG substreams, so results are reproducible for a
given seed and parallelisable.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .model import ChannelConfig, CsitSpec

BATCH = 1 << 15
EIG_FLOOR = 1e-300


@dataclass(frozen=True)
class PowerPolicy:
    """"uniform": P/nt per antenna.  "exponent": P**p_b/nt per antenna with
    p_b from the asymptotic exponent rule applied to the CSIT window."""

    kind: str  # "uniform" | "exponent"

    def __post_init__(self):
        if self.kind not in ("uniform", "exponent"):
            raise ValueError(f"unknown power policy {self.kind!r}")


@dataclass
class OutageEstimate:
    P: float
    rate: float
    p_out: float
    trials: int
    ci95: float


def mutual_info_gaussian(S):
    """log2 det(I + S S^H) in bits per channel use."""
    S = np.asarray(S)
    if not np.all(np.isfinite(S)):
        raise ValueError("channel matrix has non-finite entries")
    nr, nt = S.shape[-2], S.shape[-1]
    if nr == 1 or nt == 1:
        # det(I + s s^H) = 1 + |s|^2 for vector channels; skip slogdet
        return np.log1p(np.sum(np.abs(S) ** 2, axis=(-1, -2))) / math.log(2.0)
    gram = np.eye(nr) + S @ np.conj(np.swapaxes(S, -1, -2))
    sign, logdet = np.linalg.slogdet(gram)
    return logdet / math.log(2.0)


def qam_constellation(M):
    """Unit-average-energy constellation with 2**M points: BPSK for M = 1,
    square QAM for even M, PSK otherwise."""
    if M < 1:
        raise ValueError("M must be >= 1")
    if M == 1:
        pts = np.array([-1.0 + 0j, 1.0 + 0j])
    elif M % 2 == 0:
        side = 2 ** (M // 2)
        axis = np.arange(side) * 2.0 - (side - 1)
        pts = (axis[:, None] + 1j * axis[None, :]).ravel()
    else:
        pts = np.exp(2j * np.pi * np.arange(2**M) / 2**M)
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def mutual_info_discrete(S, M, constellation=None, noise_samples=512, seed=0):
    """Mutual information of a uniform discrete input through channel S,
    Monte-Carlo over the receiver noise with antithetic pairing.

    Returns (bits, standard_error)."""
    S = np.asarray(S, dtype=complex)
    if not np.all(np.isfinite(S)):
        raise ValueError("channel matrix has non-finite entries")
    nr, nt = S.shape
    if constellation is None:
        constellation = qam_constellation(M)
    constellation = np.asarray(constellation, dtype=complex)
    if constellation.size != 2**M:
        raise ValueError("constellation size must be 2**M")
    K = 2 ** (M * nt)
    if K > 2**16:
        raise ValueError(f"2**(M*nt) = {K} input vectors exceed the enumeration cap; reduce M or nt")

    grid = np.stack(
        np.meshgrid(*([np.arange(2**M)] * nt), indexing="ij"), axis=-1
    ).reshape(K, nt)
    X = constellation[grid]  # (K, nt)
    V = X @ S.T  # (K, nr): received mean per input vector

    rng = np.random.default_rng(seed)
    half = max(1, noise_samples // 2)
    z = (rng.standard_normal((half, nr)) + 1j * rng.standard_normal((half, nr))) / np.sqrt(2.0)
    z = np.concatenate([z, -z], axis=0)  # antithetic pairs
    nz = z.shape[0]

    per_x = np.empty((K, nz))
    for a in range(K):
        # metric over candidate x' and noise draws: (nz, K)
        diff = V[a][None, None, :] - V[None, :, :] + z[:, None, :]
        metric = -np.sum(np.abs(diff) ** 2, axis=2) + np.sum(np.abs(z) ** 2, axis=1)[:, None]
        mx = metric.max(axis=1)
        per_x[a] = (mx + np.log(np.exp(metric - mx[:, None]).sum(axis=1))) / math.log(2.0)
    inner = per_x.mean(axis=0)  # (nz,) average over inputs for each noise draw
    mi_samples = M * nt - inner
    mi = float(mi_samples.mean())
    stderr = float(mi_samples.std(ddof=1) / math.sqrt(nz)) if nz > 1 else 0.0
    return mi, stderr


def csit_noise_variance(P, delta):
    """CSIT noise variance P**-delta, capped at the channel variance."""
    if math.isinf(delta):
        return 0.0
    return min(P ** (-delta), 1.0)


def _draw_block(rng, count, cfg, sigma2):
    """One batch of channels: returns (H, H_hat) of shape (count, B, nr, nt)."""
    shape = (count, cfg.blocks, cfg.nr, cfg.nt)
    s_hat = math.sqrt(max(1.0 - sigma2, 0.0) / 2.0)
    s_err = math.sqrt(sigma2 / 2.0)
    H_hat = s_hat * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    E = s_err * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return H_hat + E, H_hat


def _csit_window(csit: CsitSpec, b, B):
    """Number of leading blocks whose estimates are known at block b (1-based)."""
    if csit.mode == "none":
        return 0
    if csit.mode == "causal":
        return max(b - csit.u, 0)
    if csit.mode == "predictive":
        return min(B, b + csit.t)
    return B  # full


def power_exponents(H_hat, P, csit: CsitSpec, cfg: ChannelConfig):
    """Asymptotic power-exponent rule: p_b = 1 + sum over the CSIT window of
    sum_i (2i-1+n-m) * alpha_hat[b', i], clipped to [0, p_max].

    H_hat: (N, B, nr, nt).  Returns (N, B)."""
    N, B = H_hat.shape[0], cfg.blocks
    m, n = cfg.m, cfg.n
    logP = math.log(P)
    # Gram on the smaller side; eigenvalues ascending = exponents descending
    if cfg.nr <= cfg.nt:
        gram = H_hat @ np.conj(np.swapaxes(H_hat, -1, -2))
    else:
        gram = np.conj(np.swapaxes(H_hat, -1, -2)) @ H_hat
    lam = np.linalg.eigvalsh(gram)  # (N, B, m) ascending
    lam = np.maximum(lam, EIG_FLOOR)
    alpha = -np.log(lam) / logP  # descending exponents, alpha[..., 0] largest
    w = np.array([2.0 * (i + 1) - 1 + n - m for i in range(m)])
    per_block = alpha @ w  # (N, B)
    p = np.ones((N, B))
    for b in range(1, B + 1):
        win = _csit_window(csit, b, B)
        if win > 0:
            p[:, b - 1] += per_block[:, :win].sum(axis=1)
    p_max = 1.0 + B * n * m * (1.0 + (csit.delta if math.isfinite(csit.delta) else 1.0))
    return np.clip(p, 0.0, p_max)


def _ensemble_power_norm(cfg, csit, P, trials, children, sigma2):
    """Normalisation for the exponent rule: the raw asymptotic powers P**p_b
    overshoot the long-term budget by a slowly growing factor at finite SNR,
    so they are rescaled such that the mean of (1/B) sum_b tr(P_b) over the
    actual simulation ensemble is exactly P.  One extra pass over the same
    RNG substreams keeps the run deterministic."""
    total = 0.0
    done = 0
    for child in children:
        count = min(BATCH, trials - done)
        rng = np.random.default_rng(child)
        _, H_hat = _draw_block(rng, count, cfg, sigma2)
        p_exp = power_exponents(H_hat, P, csit, cfg)
        total += float(np.power(P, p_exp).mean() * count)
        done += count
    return max(1.0, total / trials / P)


def realized_average_power(cfg: ChannelConfig, csit: CsitSpec, P, draws, seed):
    """Empirical mean of (1/B) sum_b tr(P_b) under the normalised exponent
    rule, for power-accounting checks."""
    sigma2 = csit_noise_variance(P, csit.delta)
    ss = np.random.SeedSequence(seed)
    n_batches = (draws + BATCH - 1) // BATCH
    children = ss.spawn(n_batches)
    nu = _ensemble_power_norm(cfg, csit, P, draws, children, sigma2)
    total = 0.0
    done = 0
    for child in children:
        count = min(BATCH, draws - done)
        rng = np.random.default_rng(child)
        _, H_hat = _draw_block(rng, count, cfg, sigma2)
        p_exp = power_exponents(H_hat, P, csit, cfg)
        total += float((np.power(P, p_exp) / nu).mean() * count)
        done += count
    return total / draws


def simulate_outage(cfg: ChannelConfig, csit: CsitSpec, policy: PowerPolicy,
                    P, rate, trials, seed, input_kind="gaussian", M=None,
                    constellation=None, noise_samples=512):
    """Monte-Carlo outage probability at SNR P and target rate (bits/use).

    Outage is the event that the per-codeword average block mutual
    information falls below `rate`.  Deterministic for a fixed seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if P <= 0:
        raise ValueError("P must be > 0")
    if input_kind not in ("gaussian", "discrete"):
        raise ValueError(f"unknown input kind {input_kind!r}")
    if input_kind == "discrete" and M is None:
        raise ValueError("discrete input needs M (bits per symbol)")

    sigma2 = csit_noise_variance(P, csit.delta)
    ss = np.random.SeedSequence(seed)
    n_batches = (trials + BATCH - 1) // BATCH
    children = ss.spawn(n_batches)
    nu = 1.0
    if policy.kind == "exponent":
        nu = _ensemble_power_norm(cfg, csit, P, trials, children, sigma2)
    outages = 0
    done = 0
    for child in children:
        count = min(BATCH, trials - done)
        rng = np.random.default_rng(child)
        H, H_hat = _draw_block(rng, count, cfg, sigma2)
        if policy.kind == "uniform":
            scale = np.full((count, cfg.blocks), math.sqrt(P / cfg.nt))
        else:
            p_exp = power_exponents(H_hat, P, csit, cfg)
            scale = np.sqrt(np.power(P, p_exp) / (nu * cfg.nt))
        if input_kind == "gaussian":
            S = scale[:, :, None, None] * H
            mi = mutual_info_gaussian(S)  # (count, B)
        else:
            mi = np.empty((count, cfg.blocks))
            for ti in range(count):
                for b in range(cfg.blocks):
                    mi[ti, b], _ = mutual_info_discrete(
                        scale[ti, b] * H[ti, b], M, constellation,
                        noise_samples=noise_samples, seed=child.spawn(1)[0])
        avg = mi.mean(axis=1)
        outages += int(np.count_nonzero(avg < rate))
        done += count
    p_out = outages / trials
    ci95 = 1.96 * math.sqrt(max(p_out * (1.0 - p_out), 0.0) / trials)
    ci95 = min(max(ci95, 0.0), 1.0)
    return OutageEstimate(P=float(P), rate=float(rate), p_out=p_out,
                          trials=trials, ci95=ci95)


def estimate_diversity(points):
    """Least-squares slope of -log p_out against log P, with standard error."""
    points = list(points)
    if len(points) < 3:
        raise ValueError("need at least 3 (P, p_out) points")
    for P, p in points:
        if p <= 0:
            raise ValueError(
                f"p_out = 0 at P = {P}: increase trials or lower the SNR range")
    x = np.log([P for P, _ in points])
    y = -np.log([p for _, p in points])
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)
