"""Brute-force Poisson-point-process simulation of the network.

One trial places the typical receiver at the origin, draws the D2D and BS
interferers in a disk, draws the MRT gain of the direct link, and draws the
nearest adversary's distance together with an independent interference
field around the adversary. The interference sums are stored per unit
transmit power, so a single :class:`SampleBatch` serves every (p_s, rho, tau)
point of a grid.

Trials are split into fixed-size streams, each with its own counter-based
generator (Philox keyed by ``(seed, stream index)``). Results therefore do not
depend on how many workers process the streams.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .analytics import InterferenceFieldParams, InterferenceLaw, rate_threshold
from .core import NetworkConfig, ProbabilityEstimate, Scheme, Strategy

STREAM_TRIALS = 1000


class Kind(str, enum.Enum):
    SINR_PS = "SinrPS"
    PH_PS = "PhPS"
    SINR_TS = "SinrTS"
    PH_TS = "PhTS"
    FA = "FA"
    MD = "MD"
    INTERFERENCE_CDF = "InterferenceCdfAt"


def default_radius(config: NetworkConfig, p_s: float, ratio: float = 1e-3) -> float:
    """Radius beyond which the mean interference is below ``ratio`` times the median.

    The mean contribution from outside radius b is
    2 pi (lam_D P_H1 p_s + lam_B P_C1 p_C) b^(2 - alpha) / (alpha - 2).
    """
    law = InterferenceLaw(InterferenceFieldParams.from_config(p_s, config))
    hi = law.scale
    while law.cdf(hi) < 0.5:
        hi *= 4.0
    median = optimize.brentq(lambda t: float(law.cdf(t)) - 0.5, law.lower_support, hi)
    mass = (config.lambda_d * config.p_active_d * p_s
            + config.lambda_b * config.p_active_b * config.p_cell)
    b2 = (2.0 * math.pi * mass / ((config.alpha - 2.0) * ratio * median)) ** (2.0 / (config.alpha - 2.0))
    return math.sqrt(b2)


@dataclass(frozen=True)
class SimWindow:
    """Simulation disk radius (m; None means :func:`default_radius`), trials and seed."""

    radius: float | None = None
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class TrialDraw:
    """A single fully materialized trial, for inspection."""

    d2d_points: np.ndarray      # (n, 2) coordinates around the receiver
    d2d_active: np.ndarray      # Bernoulli(P_H1) flags
    bs_points: np.ndarray
    bs_active: np.ndarray
    direct_gain: float
    interferer_gains: np.ndarray  # D2D gains followed by BS gains
    nearest_adv_dist: float


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def draw_trial(rng: np.random.Generator, config: NetworkConfig, radius: float) -> TrialDraw:
    area = math.pi * radius * radius

    def points(lam):
        n = rng.poisson(lam * area)
        r = radius * np.sqrt(rng.random(n))
        phi = rng.uniform(0.0, 2.0 * math.pi, n)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi)])

    d2d = points(config.lambda_d)
    bs = points(config.lambda_b)
    return TrialDraw(
        d2d_points=d2d,
        d2d_active=rng.random(len(d2d)) < config.p_active_d,
        bs_points=bs,
        bs_active=rng.random(len(bs)) < config.p_active_b,
        direct_gain=float(rng.gamma(config.m_antennas)),
        interferer_gains=rng.standard_exponential(len(d2d) + len(bs)),
        nearest_adv_dist=float(np.sqrt(rng.standard_exponential() / (math.pi * config.lambda_a))),
    )


def trial_interference(draw: TrialDraw, p_s, config) -> float:
    """I^S + I^C at the origin for one materialized trial."""
    n = len(draw.d2d_points)
    gd, gb = draw.interferer_gains[:n], draw.interferer_gains[n:]
    rd = np.hypot(*draw.d2d_points.T)[draw.d2d_active]
    rb = np.hypot(*draw.bs_points.T)[draw.bs_active]
    return float(p_s * np.sum(gd[draw.d2d_active] * rd ** -config.alpha)
                 + config.p_cell * np.sum(gb[draw.bs_active] * rb ** -config.alpha))


def _field(rng, n, lam_active, radius, alpha):
    """Per-trial sums of Exp(1) g * r^-alpha over active points (thinned PPP)."""
    counts = rng.poisson(lam_active * math.pi * radius * radius, size=n)
    total = int(counts.sum())
    u = rng.random(total)
    g = rng.standard_exponential(total)
    contrib = g * (radius * radius * u) ** (-alpha / 2.0)
    owner = np.repeat(np.arange(n), counts)
    return np.bincount(owner, weights=contrib, minlength=n), counts


@dataclass
class SampleBatch:
    """Per-trial draws; interference parts are per unit transmit power."""

    config: NetworkConfig
    radius: float
    d2d_rx: np.ndarray
    bs_rx: np.ndarray
    direct_gain: np.ndarray
    d2d_adv: np.ndarray
    bs_adv: np.ndarray
    adv_gain: np.ndarray
    adv_dist: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.direct_gain)

    def interference_rx(self, p_s):
        return p_s * self.d2d_rx + self.config.p_cell * self.bs_rx

    def interference_adv(self, p_s):
        return p_s * self.d2d_adv + self.config.p_cell * self.bs_adv

    def adversary_signal(self, p_s):
        return p_s * self.adv_gain * self.adv_dist ** -self.config.alpha


def _simulate_stream(seed, stream, n, config, radius):
    rng = stream_generator(seed, stream)
    a = config.alpha
    lam_d = config.lambda_d * config.p_active_d
    lam_b = config.lambda_b * config.p_active_b
    d2d_rx, _ = _field(rng, n, lam_d, radius, a)
    bs_rx, _ = _field(rng, n, lam_b, radius, a)
    direct = rng.gamma(config.m_antennas, size=n)
    d2d_adv, _ = _field(rng, n, lam_d, radius, a)
    bs_adv, _ = _field(rng, n, lam_b, radius, a)
    adv_gain = rng.standard_exponential(n)
    adv_dist = np.sqrt(rng.standard_exponential(n) / (math.pi * config.lambda_a))
    return d2d_rx, bs_rx, direct, d2d_adv, bs_adv, adv_gain, adv_dist


def simulate(config: NetworkConfig, window: SimWindow, p_ref: float | None = None,
             workers: int = 1) -> SampleBatch:
    """Draw ``window.trials`` independent trials.

    ``p_ref`` only matters when the window radius is left to the default;
    the smallest transmit power of interest gives the most demanding radius.
    """
    radius = window.radius or default_radius(config, p_ref if p_ref else config.ps_min)
    sizes = [STREAM_TRIALS] * (window.trials // STREAM_TRIALS)
    if window.trials % STREAM_TRIALS:
        sizes.append(window.trials % STREAM_TRIALS)

    def job(k):
        return _simulate_stream(window.seed, k, sizes[k], config, radius)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(k) for k in range(len(sizes))]
    cols = [np.concatenate(c) for c in zip(*parts)]
    return SampleBatch(config, radius, *cols)


def _indicator(kind: Kind, target, batch: SampleBatch):
    cfg = batch.config
    if kind in (Kind.SINR_PS, Kind.PH_PS, Kind.SINR_TS, Kind.PH_TS):
        st: Strategy = target
        want = Scheme.PS if kind in (Kind.SINR_PS, Kind.PH_PS) else Scheme.TS
        if st.scheme is not want:
            raise ValueError(f"{kind.value} needs a {want.value} strategy")
        p, rho = st.p_s, st.rho
        signal = p * batch.direct_gain * cfg.r_link ** -cfg.alpha
        interf = batch.interference_rx(p)
        if kind is Kind.SINR_PS:
            th = rate_threshold(st, cfg)
            return rho * signal >= th * (rho * (interf + cfg.noise_rf) + cfg.noise_rx)
        if kind is Kind.SINR_TS:
            th = rate_threshold(st, cfg)
            return signal >= th * (interf + cfg.noise_rf + cfg.noise_rx)
        if kind is Kind.PH_PS:
            return (1 - rho) * (signal + interf + cfg.noise_rf) + cfg.noise_rx >= cfg.ph_threshold
        return (1 - rho) * (signal + interf + cfg.noise_rf + cfg.noise_rx) >= cfg.ph_threshold
    p, level = target
    if kind is Kind.FA:
        # H0: the typical transmitter is silent
        return batch.interference_adv(p) + cfg.noise_adv >= level
    if kind is Kind.MD:
        return batch.adversary_signal(p) + batch.interference_adv(p) + cfg.noise_adv < level
    if kind is Kind.INTERFERENCE_CDF:
        return batch.interference_rx(p) <= level
    raise ValueError(f"unknown kind {kind!r}")


def estimate(kind, target, config: NetworkConfig, window: SimWindow,
             batch: SampleBatch | None = None) -> ProbabilityEstimate:
    """Empirical probability of the event named by ``kind``.

    ``target`` is a :class:`Strategy` for the link kinds and ``(p_s, tau)``
    (or ``(p_s, t)`` for the interference CDF) otherwise. Pass a precomputed
    ``batch`` to evaluate many targets on the same draws.
    """
    kind = Kind(kind)
    if batch is None:
        p_ref = target.p_s if isinstance(target, Strategy) else target[0]
        batch = simulate(config, window, p_ref=p_ref)
    hits = int(np.count_nonzero(_indicator(kind, target, batch)))
    return ProbabilityEstimate.from_counts(hits, batch.trials)


def empirical_cdf(samples, grid):
    """Right-continuous empirical CDF of ``samples`` evaluated on ``grid``."""
    samples = np.sort(np.asarray(samples, dtype=float))
    if len(samples) < 1000:
        raise ValueError("empirical_cdf needs at least 1000 samples")
    grid = np.asarray(grid, dtype=float)
    values = np.searchsorted(samples, grid, side="right") / len(samples)
    return list(zip(grid.tolist(), values.tolist()))
