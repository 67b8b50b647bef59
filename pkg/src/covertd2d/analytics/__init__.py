"""Semi-analytical performance model of the covert SWIPT D2D network."""

from .detection import DetectionModel, detection_error, fa_prob, md_prob
from .inversion import (DEFAULT_QUADRATURE, InterferenceLaw, QuadratureError,
                        QuadratureSpec, interference_cdf, interference_pdf)
from .laplace import (InterferenceFieldParams, field_constant, interference_laplace,
                      laplace_moment_terms, laplace_nth_derivative, sinc)
from .link import (ph_prob, ph_prob_ps, ph_prob_ts, rate_threshold, sinr_prob,
                   sinr_prob_ps, sinr_prob_ts)
from .signal import (SignalLaw, nearest_adversary_signal_cdf, nearest_adversary_signal_pdf,
                     nearest_adversary_signal_sf)

__all__ = [
    "DEFAULT_QUADRATURE", "DetectionModel", "InterferenceFieldParams", "InterferenceLaw",
    "QuadratureError", "QuadratureSpec", "SignalLaw", "detection_error", "fa_prob",
    "field_constant", "interference_cdf", "interference_laplace", "interference_pdf",
    "laplace_moment_terms", "laplace_nth_derivative", "md_prob",
    "nearest_adversary_signal_cdf", "nearest_adversary_signal_pdf",
    "nearest_adversary_signal_sf", "ph_prob", "ph_prob_ps", "ph_prob_ts",
    "rate_threshold", "sinc", "sinr_prob", "sinr_prob_ps", "sinr_prob_ts",
]
