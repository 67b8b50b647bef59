"""Composite Gauss-Legendre rule for convolutions int_0^x a(t) b(x - t) dt.

Both factors typically vary on scales far below x near their own origin, so
the panels shrink geometrically toward both ends of [0, x]. Everything is
vectorized: one call evaluates ``a`` and ``b`` once on the full node set.
"""

import numpy as np

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(12)


def panel_breaks(x, left_scale, right_scale, ratio=2.0, depth=1e-5):
    """Breakpoints on [0, x], geometrically refined toward 0 and toward x."""
    parts = [np.array([0.0, x])]
    for scale, from_right in ((left_scale, False), (right_scale, True)):
        floor = min(scale, x) * depth
        n = max(0, int(np.ceil(np.log(0.5 * x / floor) / np.log(ratio))))
        d = 0.5 * x * ratio ** -np.arange(n)
        parts.append(x - d if from_right else d)
    return np.unique(np.concatenate(parts))


def convolve(a, b, x, left_scale, right_scale):
    """int_0^x a(t) b(x - t) dt for vectorized callables ``a`` and ``b``.

    ``left_scale`` / ``right_scale`` are the lengths over which ``a`` near 0
    and ``b`` near 0 change appreciably. The argument of ``b`` is formed as
    (x - hi) + offset so it stays accurate when it is tiny.
    """
    if not x > 0:
        return 0.0
    br = panel_breaks(x, left_scale, right_scale)
    lo, hi = br[:-1], br[1:]
    half = 0.5 * (hi - lo)[:, None]
    t = lo[:, None] + half * (1.0 + _NODES)
    u = (x - hi)[:, None] + half * (1.0 - _NODES)
    vals = a(t) * b(u)
    return float(np.sum(half * _WEIGHTS * vals))
