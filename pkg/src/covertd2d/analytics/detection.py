"""False alarm, miss detection and total detection error of the adversary.

The adversary compares its received power with a threshold tau. With
x = tau - N_a, I the aggregate interference and X the typical signal,

    FA(tau) = 1 - F_I(x)
    MD(tau) = int_0^x f_X(t) F_I(x - t) dt
    D(tau)  = FA + MD = 1 - int_0^x f_I(x - t) P(X > t) dt

The last form (integration by parts) is the one the solver uses.
"""

from __future__ import annotations

from .convolution import convolve
from .inversion import DEFAULT_QUADRATURE, InterferenceLaw, QuadratureSpec
from .laplace import InterferenceFieldParams
from .signal import SignalLaw


class DetectionModel:
    """Detection statistics for a fixed transmit power ``p_s``."""

    def __init__(self, p_s, config):
        if not p_s > 0:
            raise ValueError("p_s must be positive")
        self.p_s = float(p_s)
        self.noise = config.noise_adv
        self.interference = InterferenceLaw(InterferenceFieldParams.from_config(p_s, config))
        self.signal = SignalLaw(p_s, config)

    def _gap(self, tau):
        return float(tau) - self.noise

    def fa(self, tau):
        x = self._gap(tau)
        if x <= 0:
            return 1.0
        return float(self.interference.sf(x))

    def md(self, tau):
        x = self._gap(tau)
        if x <= 0:
            return 0.0
        v = convolve(self.signal.pdf, self.interference.cdf, x,
                     self.signal.scale, self.interference.lower_support)
        return min(1.0, max(0.0, v))

    def error(self, tau):
        x = self._gap(tau)
        if x <= 0:
            return 1.0
        v = convolve(self.signal.sf, self.interference.pdf, x,
                     self.signal.scale, self.interference.lower_support)
        return min(1.0, max(0.0, 1.0 - v))

    def typical_scale(self):
        """A threshold offset of the order of the bulk of I and X."""
        return max(self.interference.scale, self.signal.scale)


def fa_prob(p_s, tau, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    return DetectionModel(p_s, config).fa(tau)


def md_prob(p_s, tau, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    return DetectionModel(p_s, config).md(tau)


def detection_error(p_s, tau, config, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    return DetectionModel(p_s, config).error(tau)
