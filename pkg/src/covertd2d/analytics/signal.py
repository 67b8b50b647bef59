"""Law of the typical transmitter's signal at its nearest adversary.

X = p g r^-alpha with g ~ Exp(1) and r the nearest-adversary distance,
f_r(r) = 2 pi lam r exp(-pi lam r^2). Substituting v = pi lam r^2 gives

    P(X > y) = G(kappa),   f_X(y) = H(kappa) / (p (pi lam)^h),
    G(k) = int_0^inf exp(-v - k v^h) dv,
    H(k) = int_0^inf v^h exp(-v - k v^h) dv,

with h = alpha/2 and kappa = y / (p (pi lam)^h). G and H depend on alpha
only, so they are tabulated once per alpha.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, special

from .inversion import DEFAULT_QUADRATURE, QuadratureSpec, _quad


def signal_scale(p_s, config) -> float:
    """y-scale p (pi lam_A)^(alpha/2) that maps X onto the standardized law."""
    return p_s * (math.pi * config.lambda_a) ** (config.alpha / 2.0)


def nearest_distance_pdf(r, lambda_a):
    r = np.asarray(r, dtype=float)
    return 2.0 * math.pi * lambda_a * r * np.exp(-math.pi * lambda_a * r * r)


def _distance_cutoff(lambda_a, abs_tol):
    # exp(-pi lam r^2) < abs_tol beyond this radius
    return math.sqrt(-math.log(abs_tol) / (math.pi * lambda_a))


def nearest_adversary_signal_pdf(t, p_s, config, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """Density of p_s g r^-alpha by direct quadrature over the distance."""
    if not t > 0:
        raise ValueError("signal density needs t > 0")
    a, lam = config.alpha, config.lambda_a

    def integrand(r):
        x = r ** a / p_s
        return nearest_distance_pdf(r, lam) * math.exp(-t * x) * x

    r_max = _distance_cutoff(lam, q.abs_tol)
    # the factor exp(-t r^a / p) cuts in near r0; split there
    r0 = min((p_s / t) ** (1.0 / a), r_max)
    v1, _ = _quad(integrand, 0.0, r0, q)
    v2, _ = _quad(integrand, r0, r_max, q)
    return v1 + v2


def nearest_adversary_signal_sf(t, p_s, config, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """P(p_s g r^-alpha > t) by direct quadrature over the distance."""
    if t <= 0:
        return 1.0
    a, lam = config.alpha, config.lambda_a

    def integrand(r):
        return nearest_distance_pdf(r, lam) * math.exp(-t * r ** a / p_s)

    r_max = _distance_cutoff(lam, q.abs_tol)
    r0 = min((p_s / t) ** (1.0 / a), r_max)
    v1, _ = _quad(integrand, 0.0, r0, q)
    v2, _ = _quad(integrand, r0, r_max, q)
    return min(1.0, v1 + v2)


def nearest_adversary_signal_cdf(t, p_s, config, q: QuadratureSpec = DEFAULT_QUADRATURE):
    return 1.0 - nearest_adversary_signal_sf(t, p_s, config, q)


# ---------------------------------------------------------------------------
# standardized tables

_KAPPA_LO = 1e-8
_KAPPA_HI = 1e6


def _moment_integral(kappa, power, h, q):
    """int_0^inf v^power exp(-v - kappa v^h) dv over geometric panels.

    The mass sits below v ~ min(1, kappa^(-1/h)); the integrand is negligible
    beyond (45 / kappa)^(1/h) or 60 + 3 power, whichever comes first.
    """
    def f(v):
        return v ** power * math.exp(-v - kappa * v ** h)
    vc = min(1.0, kappa ** (-1.0 / h)) if kappa > 0 else 1.0
    v_hi = 60.0 + 3.0 * power
    if kappa > 0:
        v_hi = min(v_hi, (45.0 / kappa) ** (1.0 / h))
    edges = [0.0, vc]
    while edges[-1] < v_hi:
        edges.append(min(8.0 * edges[-1], v_hi))
    return sum(_quad(f, a, b, q)[0] for a, b in zip(edges[:-1], edges[1:]))


def _small_kappa(kappa, power, h, terms=3):
    # Taylor expansion of exp(-kappa v^h) under the integral
    kappa = np.asarray(kappa, dtype=float)
    out = np.zeros_like(kappa)
    for j in range(terms):
        out += (-kappa) ** j / math.factorial(j) * math.gamma(1.0 + power + j * h)
    return out


def _large_kappa(kappa, power, h, terms=30):
    # expand exp(-v) instead; convergent, fast once kappa^(-1/h) is small
    kappa = np.asarray(kappa, dtype=float)
    out = np.zeros_like(kappa)
    lk = np.log(kappa)
    for j in range(terms):
        e = (j + 1.0 + power) / h
        out += (-1.0) ** j * np.exp(special.gammaln(e) - special.gammaln(j + 1.0) - e * lk)
    return out / h


@dataclass
class _SignalTable:
    h: float
    log_g: interpolate.CubicHermiteSpline
    log_h: interpolate.CubicHermiteSpline


@functools.lru_cache(maxsize=16)
def signal_table(alpha: float, nodes_per_decade: int = 40) -> _SignalTable:
    h = alpha / 2.0
    q = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)
    n = int(math.ceil(math.log10(_KAPPA_HI / _KAPPA_LO) * nodes_per_decade)) + 1
    kappa = np.geomspace(_KAPPA_LO, _KAPPA_HI, n)
    G = np.array([_moment_integral(k, 0.0, h, q) for k in kappa])
    H = np.array([_moment_integral(k, h, h, q) for k in kappa])
    K = np.array([_moment_integral(k, 2 * h, h, q) for k in kappa])
    x = np.log(kappa)
    # dG/dkappa = -H, dH/dkappa = -K
    log_g = interpolate.CubicHermiteSpline(x, np.log(G), -kappa * H / G)
    log_h = interpolate.CubicHermiteSpline(x, np.log(H), -kappa * K / H)
    return _SignalTable(h, log_g, log_h)


class SignalLaw:
    """Vectorized survival function and density of the adversary-side signal."""

    def __init__(self, p_s, config):
        self.scale = signal_scale(p_s, config)
        self._tab = signal_table(float(config.alpha))

    def _standard(self, kappa, power, spline):
        h = self._tab.h
        kappa = np.asarray(kappa, dtype=float)
        out = np.empty_like(kappa)
        lo = kappa < _KAPPA_LO
        hi = kappa > _KAPPA_HI
        mid = ~(lo | hi)
        out[mid] = np.exp(spline(np.log(kappa[mid])))
        if np.any(lo):
            out[lo] = _small_kappa(kappa[lo], power, h)
        if np.any(hi):
            out[hi] = _large_kappa(kappa[hi], power, h)
        return out

    def sf(self, y):
        y = np.asarray(y, dtype=float)
        kappa = np.maximum(y, 0.0) / self.scale
        return np.clip(self._standard(kappa, 0.0, self._tab.log_g), 0.0, 1.0)

    def cdf(self, y):
        return 1.0 - self.sf(y)

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        kappa = np.maximum(y, 0.0) / self.scale
        return np.maximum(self._standard(kappa, self._tab.h, self._tab.log_h), 0.0) / self.scale
