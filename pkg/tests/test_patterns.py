import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mmwpt import specfun
from mmwpt.patterns import (
    FlatTopPattern,
    UlaPattern,
    flat_top_matching,
    gain,
    gain_values,
    gaussian_from_beamwidth,
    normalized_gain,
    ula_for_beamwidth,
    wrap_angle,
)

# published constants of the Gaussian fit, one row per mainlobe half-width:
# (theta0, theta3db, eta, gm)
PATTERN_ROWS = [
    (math.pi / 24, 0.0503, 272.5250, 38.4103),
    (math.pi / 12, 0.1007, 68.1313, 23.4227),
    (math.pi / 6, 0.2014, 17.0328, 13.1559),
]


@pytest.mark.parametrize("theta0,theta3db,eta,gm", PATTERN_ROWS)
def test_constants_regenerate(theta0, theta3db, eta, gm):
    p = gaussian_from_beamwidth(theta0)
    assert p.theta3db == pytest.approx(theta3db, abs=1e-3)
    assert p.eta == pytest.approx(eta, abs=1e-3)
    assert p.gm == pytest.approx(gm, abs=1e-3)


def test_derived_invariants():
    p = gaussian_from_beamwidth(math.pi / 12)
    assert p.theta3db == pytest.approx(p.theta0 / 2.6, rel=1e-14)
    assert p.eta == pytest.approx(2.028 * math.log(10) / p.theta0**2, rel=1e-12)
    assert p.gs == pytest.approx(p.gm * math.exp(-p.eta * p.theta0**2), rel=1e-14)
    assert p.g == pytest.approx(10 ** (-2.028), rel=1e-12)


def test_out_of_range_width_warns():
    with pytest.warns(UserWarning):
        gaussian_from_beamwidth(math.pi / 40)
    with pytest.raises(ValueError):
        gaussian_from_beamwidth(-0.1)


def test_gain_peak_and_half_power():
    p = gaussian_from_beamwidth(math.pi / 12)
    assert gain(p, 0.0) == pytest.approx(p.gm, rel=1e-15)
    # half-power point by construction of the decay constant
    assert gain(p, p.theta3db) == pytest.approx(p.gm * 10 ** (-0.3), rel=1e-12)
    # continuity at the mainlobe edge and into the sidelobe floor
    assert gain(p, p.theta0) == pytest.approx(p.gs, rel=1e-12)
    assert gain(p, p.theta0 + 1e-9) == p.gs


def test_normalized_gain_bounds():
    p = gaussian_from_beamwidth(math.pi / 12)
    assert normalized_gain(p, 0.0) == 1.0
    assert normalized_gain(p, p.theta0) == pytest.approx(p.g, rel=1e-12)
    assert normalized_gain(p, 2.0) == pytest.approx(10 ** (-2.028), rel=1e-12)
    for theta in np.linspace(-math.pi, math.pi, 101, endpoint=False):
        assert p.g <= normalized_gain(p, theta) <= 1.0


def test_gain_domain_checked():
    p = gaussian_from_beamwidth(math.pi / 12)
    with pytest.raises(ValueError):
        gain(p, math.pi)
    with pytest.raises(ValueError):
        gain(p, -3.5)
    assert gain(p, -math.pi) == p.gs


@given(st.floats(-50.0, 50.0))
def test_wrap_angle_lands_in_interval(theta):
    w = wrap_angle(theta)
    assert -math.pi <= w < math.pi
    # wrapped angle differs by a multiple of 2*pi
    k = round((theta - w) / (2 * math.pi))
    assert theta - w == pytest.approx(2 * math.pi * k, abs=1e-9)


@given(st.floats(0.0, math.pi - 1e-9))
def test_gaussian_gain_even_and_bounded(theta):
    p = gaussian_from_beamwidth(math.pi / 12)
    assert gain(p, theta) == gain(p, -theta)
    assert gain(p, theta) >= p.gs > 0.0


def test_gaussian_gain_monotone_on_half_interval():
    p = gaussian_from_beamwidth(math.pi / 24)
    thetas = np.linspace(0.0, math.pi - 1e-9, 400)
    vals = [gain(p, t) for t in thetas]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_flat_top_matches_gaussian_levels():
    g = gaussian_from_beamwidth(math.pi / 12)
    f = flat_top_matching(g)
    assert f.gm == g.gm and f.gs == g.gs and f.theta3db == g.theta3db
    assert gain(f, 0.5 * f.theta3db) == f.gm
    assert gain(f, 2.0 * f.theta3db) == f.gs
    with pytest.raises(ValueError):
        FlatTopPattern(gm=1.0, gs=2.0, theta3db=0.1)


@pytest.mark.parametrize("theta0,na", [(math.pi / 6, 11), (math.pi / 12, 22), (math.pi / 24, 43)])
def test_ula_element_counts(theta0, na):
    assert ula_for_beamwidth(theta0).na == na


def test_ula_peak_and_null():
    u = UlaPattern(na=11)
    assert gain(u, 0.0) == 11.0
    # first null of the array factor
    assert gain(u, 2 * math.pi / 11) == pytest.approx(0.0, abs=1e-25)
    with pytest.raises(ValueError):
        UlaPattern(na=1)


def test_ula_energy_conservation():
    # the array factor integrates to 2*pi over a full turn
    for na in (11, 22, 43):
        u = UlaPattern(na=na)
        total = specfun.integrate(
            lambda t: gain(u, t), -math.pi, math.nextafter(math.pi, 0.0),
            rtol=1e-9, atol=1e-12, limit=2000,
        )
        assert total == pytest.approx(2 * math.pi, rel=1e-6)


def test_vectorized_gain_matches_scalar():
    thetas = np.linspace(-math.pi, math.pi, 257, endpoint=False)
    for pattern in (
        gaussian_from_beamwidth(math.pi / 12),
        flat_top_matching(gaussian_from_beamwidth(math.pi / 12)),
        UlaPattern(na=22),
    ):
        vec = gain_values(pattern, thetas)
        ref = np.array([gain(pattern, float(t)) for t in thetas])
        np.testing.assert_allclose(vec, ref, rtol=1e-13)
