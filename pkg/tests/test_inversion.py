import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from covertd2d.analytics import (InterferenceFieldParams, InterferenceLaw, QuadratureError,
                                 QuadratureSpec, interference_cdf, interference_pdf)
from covertd2d.analytics import inversion
from covertd2d.montecarlo import empirical_cdf
from oracles import levy_cdf, levy_pdf, zolotarev_cdf

NU = 1.5606
P4 = InterferenceFieldParams(NU, 4.0)


def test_cdf_at_zero_and_negative():
    assert interference_cdf(0.0, P4) == 0.0
    with pytest.raises(ValueError):
        interference_cdf(-1.0, P4)
    with pytest.raises(ValueError):
        interference_pdf(0.0, P4)


@pytest.mark.parametrize("t", np.geomspace(0.05, 1e9, 25))
def test_cdf_matches_levy_closed_form(t):
    assert interference_cdf(t, P4) == pytest.approx(levy_cdf(t, NU), abs=1e-9)


@pytest.mark.parametrize("t", np.geomspace(0.08, 1e7, 20))
def test_pdf_matches_levy_closed_form(t):
    ref = levy_pdf(t, NU)
    assert interference_pdf(t, P4) == pytest.approx(ref, rel=1e-6, abs=1e-11)


def test_far_tail_matches_exact_tail():
    # the law is heavy tailed (1 - F ~ t^(-2/alpha)), so at 10^6 medians the
    # CDF is close to, but not within 1e-10 of, one
    median = NU ** 2 / (4 * 0.4769362762044699 ** 2)
    t = 1e6 * median
    F = interference_cdf(t, P4)
    assert F == pytest.approx(levy_cdf(t, NU), abs=1e-10)
    assert 1 - F < 1e-3
    assert interference_cdf(1e12 * median, P4) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 3.5, 5.0, 6.0])
@pytest.mark.parametrize("z", [0.05, 0.3, 1.0, 4.0, 30.0, 500.0])
def test_cdf_matches_zolotarev(alpha, z):
    p = InterferenceFieldParams(1.0, alpha)
    assert interference_cdf(z, p) == pytest.approx(zolotarev_cdf(z, alpha), abs=1e-9)


def test_nu_scaling():
    # F(t; nu) = F(t / nu^(alpha/2); 1)
    for alpha in (3.0, 4.5):
        p1 = InterferenceFieldParams(1.0, alpha)
        p2 = InterferenceFieldParams(2.7, alpha)
        for t in (0.5, 3.0, 40.0):
            assert interference_cdf(t, p2) == pytest.approx(interference_cdf(t / p2.scale, p1), abs=1e-10)


def test_pdf_nonnegative_and_normalized():
    grid = np.geomspace(1e-2, 1e6, 100)
    vals = [interference_pdf(t, P4) for t in grid]
    assert min(vals) >= 0.0
    edges = np.concatenate([[1e-6], np.geomspace(0.02, 1e8, 30)])
    mass = sum(integrate.quad(lambda t: interference_pdf(t, P4), a, b, limit=200)[0]
               for a, b in zip(edges[:-1], edges[1:]))
    tail = 1 - interference_cdf(edges[-1], P4)
    assert mass + tail == pytest.approx(1.0, abs=1e-3)
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_cdf_reconstructed_from_pdf():
    p = InterferenceFieldParams(1.0, 3.0)
    lo = 1e-3
    for t in np.geomspace(0.05, 50, 10):
        acc = integrate.quad(lambda u: interference_pdf(u, p), lo, t, limit=200)[0]
        assert acc == pytest.approx(interference_cdf(t, p), abs=5e-3)


def test_pdf_reports_path_and_falls_back(monkeypatch):
    value, path = interference_pdf(2.0, P4, full_output=True)
    assert path == "bromwich"
    real = inversion._bromwich_integral

    def failing(t, params, q, power):
        if power != -1:
            raise QuadratureError("forced", 1.0)
        return real(t, params, q, power)

    monkeypatch.setattr(inversion, "_bromwich_integral", failing)
    v2, path2 = interference_pdf(2.0, P4, full_output=True)
    assert path2 == "finite-difference"
    assert v2 == pytest.approx(value, rel=1e-4)


def test_nonconvergence_carries_tolerance():
    q = QuadratureSpec(max_subdivisions=1, rel_tol=1e-14, abs_tol=1e-16)
    try:
        interference_cdf(0.7, P4, q)
    except QuadratureError as exc:
        assert math.isfinite(exc.achieved)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)


@given(st.lists(st.floats(1e-3, 1e5), min_size=2, max_size=8))
def test_cdf_nondecreasing(ts):
    ts = sorted(ts)
    vals = [interference_cdf(t, P4) for t in ts]
    assert all(0 <= v <= 1 for v in vals)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 5.0])
def test_table_law_matches_direct_inversion(alpha):
    p = InterferenceFieldParams(1.7, alpha)
    law = InterferenceLaw(p)
    ts = p.scale * np.geomspace(law.lower_support / p.scale * 1.01, 1e6, 40)
    direct_cdf = np.array([interference_cdf(t, p) for t in ts])
    direct_pdf = np.array([interference_pdf(t, p) for t in ts])
    assert np.max(np.abs(law.cdf(ts) - direct_cdf)) < 1e-6
    assert np.max(np.abs(law.pdf(ts) - direct_pdf) / np.maximum(direct_pdf, 1e-300) * (direct_pdf > 1e-8)) < 1e-3


def test_table_law_alpha4_exact():
    law = InterferenceLaw(P4)
    ts = np.geomspace(0.05, 1e9, 200)
    assert np.max(np.abs(law.cdf(ts) - [levy_cdf(t, NU) for t in ts])) < 1e-8
    assert np.all(law.cdf(np.array([0.0, law.lower_support * 0.5])) == 0.0)
    assert np.allclose(law.sf(ts), 1 - law.cdf(ts))


def test_cdf_matches_monte_carlo(defaults, mc_batch):
    samples = mc_batch.interference_rx(10.0)
    law = InterferenceLaw(InterferenceFieldParams.from_config(10.0, defaults))
    qs = np.quantile(samples, np.linspace(0.025, 0.975, 20))
    emp = dict(empirical_cdf(samples, qs))
    for t in qs:
        assert abs(interference_cdf(t, law.params) - emp[t]) <= 0.02
    grid = np.geomspace(0.05, 1e4, 400)
    sup = max(abs(law.cdf(t) - f) for t, f in empirical_cdf(samples, grid))
    assert sup <= 0.02
