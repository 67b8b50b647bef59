"""Bromwich inversion of exp(-nu s^(2/alpha)) into a CDF and a density.

Collapsing the Bromwich contour onto the negative real axis gives

    F(t) = 1 - 1/pi * int_0^inf exp(-nu th^a cos(pi a) - t th)
                                 * sin(nu th^a sin(pi a)) dth / th,

with a = 2/alpha. Substituting th = u^(alpha/2) turns the oscillating factor
into a pure sine in u and removes the 1/th singularity:

    F(t) = 1 - alpha/(2 pi) * int_0^inf exp(-c u - t u^(alpha/2)) sin(w u) du / u,

c = nu cos(2 pi/alpha), w = nu sin(2 pi/alpha). The density is the same
integral with du/u replaced by u^(alpha/2 - 1) du.

:func:`interference_cdf` and :func:`interference_pdf` evaluate these
integrals directly. :class:`InterferenceLaw` serves the same quantities from
a per-alpha table of the standardized law (nu = 1), using the exact scaling
F(t; nu) = F(t / nu^(alpha/2); 1). It is what the convolution-heavy
probabilities use.
"""

from __future__ import annotations

import functools
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, interpolate, special

from .laplace import InterferenceFieldParams

log = logging.getLogger(__name__)


class QuadratureError(ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, achieved=float("nan")):
        super().__init__(f"{message} (achieved abs error {achieved:.3g})")
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_subdivisions: int = 2000
    tail_growth_factor: float = 2.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.tail_growth_factor > 1:
            raise ValueError("tail_growth_factor must exceed 1")


DEFAULT_QUADRATURE = QuadratureSpec()
_MAX_TAIL_SEGMENTS = 400


def _quad(func, a, b, q: QuadratureSpec, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = integrate.quad(func, a, b, epsabs=q.abs_tol * 1e-2,
                                        epsrel=q.rel_tol, limit=q.max_subdivisions,
                                        full_output=1, **kw)[:3]
    return val, err


def _bromwich_integral(t, params: InterferenceFieldParams, q: QuadratureSpec, power):
    """int_0^inf exp(-c u - t u^h) u^power sin(w u) du, for power = -1 or h - 1."""
    h = params.alpha / 2.0
    ang = 2.0 * math.pi / params.alpha
    c = params.nu * math.cos(ang)
    w = params.nu * math.sin(ang)

    def envelope_log(u):
        return -c * u - t * u ** h + power * math.log(u)

    def head(u):
        if u == 0.0:
            return w if power == -1 else 0.0
        osc = w * np.sinc(w * u / math.pi) if power == -1 else math.sin(w * u) * u ** power
        return math.exp(-c * u - t * u ** h) * osc

    # first segment: the regularized origin, up to one period or the decay scale
    u1 = min(2.0 * math.pi / w, t ** (-1.0 / h))
    total, err = _quad(head, 0.0, u1, q)

    def env(u):
        return math.exp(envelope_log(u))

    lo = u1
    for _ in range(_MAX_TAIL_SEGMENTS):
        hi = lo * q.tail_growth_factor
        piece, perr = _quad(env, lo, hi, q, weight="sin", wvar=w)
        total += piece
        err += perr
        lo = hi
        # concave log-envelope => tail <= env(lo) / |d log env / du| once decreasing
        slope = -c - t * h * lo ** (h - 1.0) + power / lo
        if slope < 0:
            bound = math.exp(envelope_log(lo)) / -slope
            if bound < q.abs_tol:
                break
    else:
        raise QuadratureError("Bromwich tail did not decay", err)
    if err > max(q.abs_tol, q.rel_tol * abs(total)) * 100:
        raise QuadratureError("Bromwich integral did not converge", err)
    return total, err


def interference_cdf(t, params: InterferenceFieldParams, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """CDF of the aggregate interference at ``t`` by direct Bromwich quadrature."""
    if not t > 0:
        if t < 0:
            raise ValueError("interference_cdf needs t >= 0")
        return 0.0
    if _below_left_cutoff(t / params.scale, params.alpha):
        return 0.0
    val, _ = _bromwich_integral(t, params, q, power=-1)
    return float(min(1.0, max(0.0, 1.0 - params.alpha / (2.0 * math.pi) * val)))


def interference_pdf(t, params: InterferenceFieldParams, q: QuadratureSpec = DEFAULT_QUADRATURE,
                     full_output=False):
    """Density of the aggregate interference.

    Uses the differentiated Bromwich integrand; if that fails to converge the
    CDF is differenced instead. With ``full_output`` returns ``(value, path)``
    where path is ``"bromwich"`` or ``"finite-difference"``.
    """
    if not t > 0:
        raise ValueError("interference_pdf needs t > 0")
    if _below_left_cutoff(t / params.scale, params.alpha):
        value, path = 0.0, "bromwich"
    else:
        h = params.alpha / 2.0
        try:
            val, _ = _bromwich_integral(t, params, q, power=h - 1.0)
            value, path = max(0.0, h / math.pi * val), "bromwich"
        except QuadratureError as exc:
            log.info("pdf at t=%g falls back to differencing: %s", t, exc)
            value, path = _differenced_pdf(t, params, q), "finite-difference"
    return (value, path) if full_output else value


def _differenced_pdf(t, params, q):
    # Richardson-extrapolated central difference
    def central(step):
        return (interference_cdf(t + step, params, q) - interference_cdf(t - step, params, q)) / (2 * step)
    step = 1e-3 * t
    d1, d2 = central(step), central(step / 2)
    return max(0.0, (4 * d2 - d1) / 3)


# ---------------------------------------------------------------------------
# standardized law (nu = 1) and its table

def _left_tail_exponent(z, alpha):
    """Leading log F(z) of the standard one-sided stable law as z -> 0."""
    a = 2.0 / alpha
    return -(1.0 - a) * a ** (a / (1.0 - a)) * z ** (-a / (1.0 - a))


def _below_left_cutoff(z, alpha, log_floor=-50.0):
    return _left_tail_exponent(z, alpha) < log_floor


def _left_cutoff(alpha, log_floor=-50.0):
    a = 2.0 / alpha
    k = (1.0 - a) * a ** (a / (1.0 - a))
    return (k / -log_floor) ** ((1.0 - a) / a)


def stable_tail_series(z, alpha, terms=40):
    """Convergent series for (1 - F(z), f(z)) of the standard law; accurate for large z."""
    a = 2.0 / alpha
    z = np.asarray(z, dtype=float)
    sf = np.zeros_like(z)
    pdf = np.zeros_like(z)
    lz = np.log(z)
    for k in range(1, terms + 1):
        s = math.sin(math.pi * k * a)
        if s == 0.0:
            continue
        sign = 1.0 if k % 2 else -1.0
        log_coef = special.gammaln(k * a) - special.gammaln(k + 1)
        term = sign * s * np.exp(log_coef - k * a * lz)
        sf += term
        pdf += term * (k * a) / z
    return sf / math.pi, pdf / math.pi


@dataclass
class _StandardTable:
    alpha: float
    z_lo: float
    z_hi: float
    cdf_spline: interpolate.CubicHermiteSpline
    logpdf_spline: interpolate.CubicSpline


_TABLE_LOG_FLOOR = -23.0


@functools.lru_cache(maxsize=16)
def standard_table(alpha: float, nodes_per_decade: int = 60, z_hi: float = 1e4):
    """Tabulate the nu = 1 law by Bromwich quadrature on a log grid.

    The grid starts where the CDF is about 1e-10; below it the law is treated
    as having no mass (the quadrature cannot resolve smaller values anyway).
    """
    params = InterferenceFieldParams(nu=1.0, alpha=alpha)
    z_lo = _left_cutoff(alpha, log_floor=_TABLE_LOG_FLOOR)
    # the left tail steepens like z^(-a/(1-a)); refine the grid accordingly
    a = 2.0 / alpha
    density = nodes_per_decade * max(1.0, a / (1.0 - a))
    n = int(math.ceil(math.log10(z_hi / z_lo) * density)) + 1
    z = np.geomspace(z_lo, z_hi, n)
    F = np.array([interference_cdf(zi, params) for zi in z])
    f = np.array([interference_pdf(zi, params) for zi in z])
    x = np.log(z)
    cdf_spline = interpolate.CubicHermiteSpline(x, F, z * f)
    logpdf_spline = interpolate.CubicSpline(x, np.log(np.maximum(f, 1e-300)))
    return _StandardTable(alpha, z_lo, z_hi, cdf_spline, logpdf_spline)


class InterferenceLaw:
    """Vectorized CDF/pdf of the aggregate interference for fixed (nu, alpha)."""

    def __init__(self, params: InterferenceFieldParams):
        self.params = params
        self.scale = params.scale
        self._table = standard_table(float(params.alpha))

    def _std(self, t):
        return np.asarray(t, dtype=float) / self.scale

    def cdf(self, t):
        z = self._std(t)
        tab = self._table
        out = np.zeros_like(z)
        mid = (z >= tab.z_lo) & (z <= tab.z_hi)
        out[mid] = tab.cdf_spline(np.log(z[mid]))
        hi = z > tab.z_hi
        if np.any(hi):
            out[hi] = 1.0 - stable_tail_series(z[hi], tab.alpha)[0]
        return np.clip(out, 0.0, 1.0)

    def sf(self, t):
        return 1.0 - self.cdf(t)

    def pdf(self, t):
        z = self._std(t)
        tab = self._table
        out = np.zeros_like(z)
        mid = (z >= tab.z_lo) & (z <= tab.z_hi)
        out[mid] = np.exp(tab.logpdf_spline(np.log(z[mid])))
        hi = z > tab.z_hi
        if np.any(hi):
            out[hi] = stable_tail_series(z[hi], tab.alpha)[1]
        return np.maximum(out, 0.0) / self.scale

    @property
    def lower_support(self):
        """Below this value the CDF is treated as exactly zero."""
        return self._table.z_lo * self.scale
