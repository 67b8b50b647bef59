"""Link reliability (SINR coverage) and harvested-power probabilities.

The direct gain under MRT with M antennas is Gamma(M, 1), so conditioned on
the interference I the coverage event g >= s (I + c) has probability
Q(M, s (I + c)) (regularized upper incomplete gamma). Averaging over I with
the binomial expansion and regrouping by the power of I gives

    P = sum_{n=0}^{M-1} E[(s I)^n e^{-s I}] / n! * Q(M - n, s c).

The moment terms come from the derivatives of the Laplace transform.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..core import Scheme, Strategy
from .convolution import convolve
from .inversion import DEFAULT_QUADRATURE, InterferenceLaw, QuadratureSpec
from .laplace import InterferenceFieldParams, log_scaled_moments


def rate_threshold(strategy: Strategy, config) -> float:
    """SINR threshold for delivering the packet in the decoding time."""
    duration = config.slot_s * (strategy.rho if strategy.scheme is Scheme.TS else 1.0)
    return 2.0 ** (config.packet_bits / duration) - 1.0


def _gamma_coverage(s, noise_term, m, params) -> float:
    """P(g >= s I + noise_term) for g ~ Gamma(m, 1)."""
    if math.isinf(s) or math.isinf(noise_term):
        return 0.0
    log_mu = log_scaled_moments(s, m - 1, params)
    n = np.arange(m)
    weights = np.exp(log_mu - special.gammaln(n + 1.0))
    q = special.gammaincc(m - n, noise_term) if noise_term > 0 else np.ones(m)
    return float(min(1.0, max(0.0, np.sum(weights * q))))


def _require(strategy, scheme):
    if Scheme(strategy.scheme) is not scheme:
        raise ValueError(f"expected a {scheme.value} strategy")
    if not 0 < strategy.rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if not strategy.p_s > 0:
        raise ValueError("p_s must be positive")


def sinr_prob_ps(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(SINR >= threshold) under power splitting.

    SINR = rho p g R^-a / (rho (I + N_RF) + N_rx).
    """
    _require(strategy, Scheme.PS)
    params = InterferenceFieldParams.from_config(strategy.p_s, config)
    s = rate_threshold(strategy, config) * config.r_link ** config.alpha / strategy.p_s
    rho = strategy.rho
    noise = s * (rho * config.noise_rf + config.noise_rx) / rho
    return _gamma_coverage(s, noise, config.m_antennas, params)


def sinr_prob_ts(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(SINR >= threshold) under time switching; only rho of the slot decodes.

    SINR = p g R^-a / (I + N_RF + N_rx).
    """
    _require(strategy, Scheme.TS)
    params = InterferenceFieldParams.from_config(strategy.p_s, config)
    s = rate_threshold(strategy, config) * config.r_link ** config.alpha / strategy.p_s
    noise = s * (config.noise_rf + config.noise_rx)
    return _gamma_coverage(s, noise, config.m_antennas, params)


def _harvest_prob(threshold, strategy, config) -> float:
    """P(p g R^-a + I >= threshold)."""
    if threshold <= 0:
        return 1.0
    law = InterferenceLaw(InterferenceFieldParams.from_config(strategy.p_s, config))
    m = config.m_antennas
    theta = strategy.p_s / config.r_link ** config.alpha
    log_norm = special.gammaln(m) + math.log(theta)

    def gamma_pdf(t):
        # Gamma(m, theta) density; t > 0 at every quadrature node
        return np.exp((m - 1) * np.log(t / theta) - t / theta - log_norm)

    v = convolve(gamma_pdf, law.cdf, threshold, theta, law.lower_support)
    return min(1.0, max(0.0, 1.0 - v))


def ph_prob_ps(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(harvested power >= PH_0) under power splitting.

    The harvester gets (1 - rho)(signal + I + N_RF) + N_rx.
    """
    _require(strategy, Scheme.PS)
    rho = strategy.rho
    if rho >= 1.0:
        return 1.0 if config.noise_rx >= config.ph_threshold else 0.0
    t0 = (config.ph_threshold - config.noise_rx) / (1.0 - rho) - config.noise_rf
    return _harvest_prob(t0, strategy, config)


def ph_prob_ts(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(harvested power >= PH_0) under time switching.

    The harvester gets (1 - rho)(signal + I + N_RF + N_rx).
    """
    _require(strategy, Scheme.TS)
    rho = strategy.rho
    if rho >= 1.0:
        return 1.0 if config.ph_threshold <= 0 else 0.0
    t0 = config.ph_threshold / (1.0 - rho) - config.noise_rx - config.noise_rf
    return _harvest_prob(t0, strategy, config)


def sinr_prob(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    fn = sinr_prob_ps if Scheme(strategy.scheme) is Scheme.PS else sinr_prob_ts
    return fn(strategy, config, q)


def ph_prob(strategy: Strategy, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    fn = ph_prob_ps if Scheme(strategy.scheme) is Scheme.PS else ph_prob_ts
    return fn(strategy, config, q)
