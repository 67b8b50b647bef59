import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from covertd2d.analytics import (InterferenceFieldParams, field_constant, interference_laplace,
                                 laplace_moment_terms, laplace_nth_derivative, sinc)
from oracles import cauchy_derivative, complex_step


def test_sinc_is_normalized():
    assert sinc(0.5) == pytest.approx(2 / math.pi, rel=1e-15)
    assert sinc(0.0) == 1.0


def test_field_constant_defaults(defaults):
    nu = field_constant(10.0, defaults)
    by_hand = math.pi ** 2 / 2 * (0.05 * math.sqrt(10) + 0.005 * math.sqrt(1000))
    assert nu == pytest.approx(by_hand, rel=1e-14)
    assert nu == pytest.approx(1.5606, abs=1e-4)
    p = InterferenceFieldParams(nu, 4.0)
    assert interference_laplace(1.0, p) == pytest.approx(0.2100, abs=1e-4)


def test_laplace_basic():
    p = InterferenceFieldParams(1.5606, 4.0)
    assert interference_laplace(0.0, p) == 1.0
    assert interference_laplace(2.0, p) < interference_laplace(1.0, p)
    with pytest.raises(ValueError):
        interference_laplace(-1.0, p)
    s = np.array([0.0, 0.5, 1.0])
    assert interference_laplace(s, p).shape == (3,)


@given(st.floats(1e-6, 1e6), st.floats(1e-3, 1e3), st.floats(2.1, 8.0))
def test_log_laplace_is_linear_in_power(s, nu, alpha):
    p = InterferenceFieldParams(nu, alpha)
    expected = -nu * s ** (2 / alpha)
    got = math.log(interference_laplace(s, p)) if expected > -700 else expected
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        InterferenceFieldParams(0.0, 4.0)
    with pytest.raises(ValueError):
        InterferenceFieldParams(1.0, 2.0)


def test_first_derivative_by_hand():
    p = InterferenceFieldParams(1.5606, 4.0)
    assert laplace_nth_derivative(1.0, 0, p) == interference_laplace(1.0, p)
    d1 = laplace_nth_derivative(1.0, 1, p)
    assert d1 == pytest.approx(-(1.5606 / 2) * math.exp(-1.5606), rel=1e-12)
    assert d1 == pytest.approx(-0.1639, abs=1e-4)


def test_derivative_domain():
    p = InterferenceFieldParams(1.0, 4.0)
    with pytest.raises(ValueError):
        laplace_nth_derivative(0.0, 1, p)
    with pytest.raises(ValueError):
        laplace_nth_derivative(1.0, -1, p)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 5.5])
@pytest.mark.parametrize("n", range(1, 10))
def test_derivatives_match_cauchy_contour(alpha, n):
    p = InterferenceFieldParams(1.3, alpha)
    s = 0.8
    f = lambda z: np.exp(-p.nu * z ** p.index)  # principal branch, analytic near s > 0
    ref = cauchy_derivative(f, s, n, radius=0.4 * s)
    assert laplace_nth_derivative(s, n, p) == pytest.approx(ref, rel=1e-9)


def test_first_derivative_complex_step():
    p = InterferenceFieldParams(0.7, 3.0)
    f = lambda z: np.exp(-p.nu * z ** p.index)
    for s in (0.01, 0.3, 5.0, 300.0):
        assert laplace_nth_derivative(s, 1, p) == pytest.approx(complex_step(f, s), rel=1e-13)


@given(st.floats(1e-4, 1e4), st.integers(0, 12), st.floats(0.01, 100), st.floats(2.05, 8))
def test_completely_monotone_sign(s, n, nu, alpha):
    p = InterferenceFieldParams(nu, alpha)
    assert (-1) ** n * laplace_nth_derivative(s, n, p) >= 0


def test_moment_terms_huge_argument_underflow_cleanly():
    # a TS threshold of 2^200 drives the transform far below the float range
    p = InterferenceFieldParams(1.5, 4.0)
    terms = laplace_moment_terms(2.0 ** 200, 9, p)
    assert np.all(terms == 0.0)
    assert np.all(np.isfinite(terms))


def test_moment_terms_match_quadrature():
    # E[I^n e^{-sI}] against the Levy density at alpha = 4
    from scipy import integrate
    from oracles import levy_pdf
    nu, s = 1.2, 0.7
    p = InterferenceFieldParams(nu, 4.0)
    terms = laplace_moment_terms(s, 5, p)
    for n in range(6):
        ref = integrate.quad(lambda t: t ** n * math.exp(-s * t) * levy_pdf(t, nu), 0, np.inf,
                             epsabs=1e-14, epsrel=1e-12, limit=400)[0]
        assert terms[n] == pytest.approx(ref, rel=1e-8)
