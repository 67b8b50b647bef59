"""Laplace transform of the aggregate PPP interference and its derivatives.

The aggregate interference seen by any node (D2D transmitters with
exponential fading plus active base stations) has transform

    L(s) = exp(-nu * s**(2/alpha))

i.e. it is a one-sided stable law of index 2/alpha scaled by nu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def sinc(z):
    """Normalized sinc, sin(pi z) / (pi z)."""
    return np.sinc(z)


@dataclass(frozen=True)
class InterferenceFieldParams:
    nu: float
    alpha: float

    def __post_init__(self):
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not self.alpha > 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")

    @property
    def index(self) -> float:
        """Stable index 2/alpha."""
        return 2.0 / self.alpha

    @property
    def scale(self) -> float:
        """Scale such that I / scale has transform exp(-s**(2/alpha))."""
        return self.nu ** (self.alpha / 2.0)

    @classmethod
    def from_config(cls, p_s, config) -> InterferenceFieldParams:
        return cls(nu=field_constant(p_s, config), alpha=config.alpha)


def field_constant(p_s, config) -> float:
    """nu = pi / sinc(2/alpha) * [lam_D P_H1 p_s^(2/alpha) + lam_B P_C1 p_C^(2/alpha)].

    The same constant governs the interference at the typical receiver and at
    the adversary.
    """
    a = 2.0 / config.alpha
    mass = (config.lambda_d * config.p_active_d * p_s ** a
            + config.lambda_b * config.p_active_b * config.p_cell ** a)
    return float(math.pi / sinc(a) * mass)


def interference_laplace(s, params: InterferenceFieldParams):
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("Laplace argument must be nonnegative")
    out = np.exp(-params.nu * s_arr ** params.index)
    return float(out) if out.ndim == 0 else out


def _falling_magnitudes(a, n):
    """|a (a-1) ... (a-k+1)| for k = 1..n (index 0 unused)."""
    c = np.zeros(n + 1)
    falling = 1.0
    for k in range(1, n + 1):
        falling *= a - (k - 1)
        c[k] = abs(falling)
    return c


def partial_bell_table(c, n_max):
    """Partial Bell polynomials B[n, j](c_1, c_2, ...) for 0 <= j <= n <= n_max."""
    B = np.zeros((n_max + 1, n_max + 1))
    B[0, 0] = 1.0
    for n in range(1, n_max + 1):
        for j in range(1, n + 1):
            acc = 0.0
            for i in range(1, n - j + 2):
                acc += math.comb(n - 1, i - 1) * c[i] * B[n - i, j - 1]
            B[n, j] = acc
    return B


def log_scaled_moments(s, n_max, params: InterferenceFieldParams):
    """log E[(s I)^n exp(-s I)] for n = 0..n_max.

    With w = nu s^a, s^n (-1)^n L^(n)(s) = exp(-w) sum_j w^j B[n, j](|(a)_k|):
    Faa di Bruno applied to exp(-nu s^a), where every term is nonnegative.
    Working in logs keeps huge arguments (w >> 700) finite.
    """
    if s < 0:
        raise ValueError("Laplace argument must be nonnegative")
    if s == 0:
        out = np.full(n_max + 1, -np.inf)
        out[0] = 0.0
        return out
    w = params.nu * s ** params.index
    logw = math.log(w)
    B = partial_bell_table(_falling_magnitudes(params.index, n_max), n_max)
    out = np.empty(n_max + 1)
    out[0] = -w
    for n in range(1, n_max + 1):
        logs = [j * logw + math.log(B[n, j]) for j in range(1, n + 1) if B[n, j] > 0]
        top = max(logs)
        out[n] = -w + top + math.log(sum(math.exp(v - top) for v in logs))
    return out


def laplace_nth_derivative(s, n: int, params: InterferenceFieldParams) -> float:
    """Exact n-th derivative of exp(-nu s^(2/alpha)) via the Bell-polynomial expansion."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return interference_laplace(s, params)
    if not s > 0:
        raise ValueError("derivatives need s > 0")
    log_mu = log_scaled_moments(s, n, params)[n]
    return (-1) ** n * math.exp(log_mu - n * math.log(s))


def laplace_moment_terms(s, n_max, params: InterferenceFieldParams):
    """E[I^n exp(-s I)] = (-1)^n L^(n)(s) for n = 0..n_max (all nonnegative)."""
    if not s > 0:
        raise ValueError("moment terms need s > 0")
    n = np.arange(n_max + 1)
    return np.exp(log_scaled_moments(s, n_max, params) - n * math.log(s))
