import math

import mpmath as mp
import numpy as np
import pytest

from mmwpt.bae import Perfect, TruncatedGaussian, Uniform
from mmwpt.gain_stats import (
    cascaded_pdf_approx,
    cascaded_pdf_exact,
    fading_moment,
    gain_moment,
    ks_distance,
    moment_table,
    sample_cascaded,
    single_gain_pdf,
    uniform_cascade_moment,
)
from mmwpt.patterns import gaussian_from_beamwidth

P12 = gaussian_from_beamwidth(math.pi / 12)
P24 = gaussian_from_beamwidth(math.pi / 24)


# ---------------------------------------------------------------------------
# single-gain law


def test_single_perfect_is_unit_atom():
    d = single_gain_pdf(P12, Perfect())
    assert d.segments == ()
    assert d.atoms == ((1.0, 1.0),)
    assert d.total_mass() == 1.0


def test_single_uniform_atom_mass():
    d = single_gain_pdf(P12, Uniform())
    (loc, mass), = d.atoms
    assert loc == P12.g
    assert mass == pytest.approx(1.0 - P12.theta0 / math.pi, rel=1e-14)


def test_single_gaussian_segment_integral_is_mainlobe_prob():
    model = TruncatedGaussian(math.pi / 48)
    d = single_gain_pdf(P12, model)
    from mmwpt.bae import mainlobe_prob

    seg_mass = d.segments[0].integrate()
    assert seg_mass == pytest.approx(mainlobe_prob(model, P12.theta0), abs=1e-6)


@pytest.mark.parametrize("model", [Uniform(), TruncatedGaussian(math.pi / 48)])
def test_single_total_mass(model):
    assert single_gain_pdf(P12, model).total_mass() == pytest.approx(1.0, abs=1e-6)


# ---------------------------------------------------------------------------
# exact cascaded law


@pytest.mark.parametrize(
    "model",
    [Uniform(), TruncatedGaussian(P12.theta0 / 4), TruncatedGaussian(P12.theta0)],
)
def test_cascaded_exact_mass(model):
    assert cascaded_pdf_exact(P12, model).total_mass() == pytest.approx(1.0, abs=1e-6)


def test_cascaded_exact_atom():
    from mmwpt.bae import mainlobe_prob

    model = TruncatedGaussian(P12.theta0 / 3)
    d = cascaded_pdf_exact(P12, model)
    (loc, mass), = d.atoms
    p0 = mainlobe_prob(model, P12.theta0)
    assert loc == P12.g**2
    assert mass == pytest.approx((1.0 - p0) ** 2, rel=1e-12)


def test_cascaded_exact_uniform_upper_density():
    d = cascaded_pdf_exact(P12, Uniform())
    for w in (0.02, 0.1, 0.5, 0.99):
        assert d.pdf(w) == pytest.approx(1.0 / (4 * math.pi * P12.eta * w), rel=1e-12)


def test_cascaded_exact_nonnegative_on_grid():
    for model in (Uniform(), TruncatedGaussian(P12.theta0 / 3)):
        d = cascaded_pdf_exact(P12, model)
        lo = P12.g**2
        grid = np.exp(np.linspace(math.log(lo), 0.0, 10_000, endpoint=False))[1:]
        vals = np.array([d.pdf(float(w)) for w in grid])
        assert np.all(vals >= 0.0)


def test_cascaded_exact_rejects_perfect():
    with pytest.raises(TypeError):
        cascaded_pdf_exact(P12, Perfect())


def _single_density_mp(pattern, model):
    # independent high-precision rebuild of the single-gain law
    eta = mp.mpf(pattern.eta)
    g = mp.mpf(pattern.g)
    if isinstance(model, Uniform):
        c = 1 / (2 * mp.pi * mp.sqrt(eta))
        dens = lambda y: c / (y * mp.sqrt(-mp.log(y)))
        p0 = mp.mpf(pattern.theta0) / mp.pi
    else:
        s = mp.mpf(model.sigma)
        pw = 1 / (2 * eta * s**2)
        erf_pi = mp.erf(mp.pi / (mp.sqrt(2) * s))
        c = mp.sqrt(pw / mp.pi) / erf_pi
        dens = lambda y: c * y ** (pw - 1) / mp.sqrt(-mp.log(y))
        p0 = mp.erf(mp.mpf(pattern.theta0) / (mp.sqrt(2) * s)) / erf_pi
    return dens, g, 1 - p0


def _convolution_density_mp(pattern, model, omega):
    # product-distribution integral of two independent single gains,
    # evaluated by tanh-sinh quadrature straight from the single-gain law
    dens, g, miss_mass = _single_density_mp(pattern, model)
    w = mp.mpf(omega)
    lo, hi = max(g, w), min(mp.mpf(1), w / g)
    cont = mp.mpf(0)
    if hi > lo:
        cont = mp.quad(lambda y: dens(y) * dens(w / y) / y, [lo, mp.sqrt(lo * hi), hi])
    cross = mp.mpf(0)
    if g <= w / g < 1:
        cross = 2 * miss_mass * dens(w / g) / g
    return float(cont + cross)


@pytest.mark.parametrize(
    "model",
    [Uniform(), TruncatedGaussian(P12.theta0 / 4), TruncatedGaussian(P12.theta0 / 2)],
    ids=["uniform", "gaussian-quarter", "gaussian-half"],
)
def test_cascaded_exact_density_matches_convolution_oracle(model):
    d = cascaded_pdf_exact(P12, model)
    g = P12.g
    with mp.workdps(40):
        for omega in (1.2 * g * g, 3 * g * g, 0.5 * g, 0.93 * g, 1.5 * g, 0.05, 0.3, 0.8, 0.97):
            oracle = _convolution_density_mp(P12, model, omega)
            assert d.pdf(omega) == pytest.approx(oracle, rel=1e-10)


# ---------------------------------------------------------------------------
# approximate cascaded law


def test_cascaded_approx_perfect_is_unit_atom():
    d = cascaded_pdf_approx(P12, Perfect())
    assert d.atoms == ((1.0, 1.0),)


def test_cascaded_approx_gaussian_mass_deficit():
    # the sidelobe component is dropped; mass deficit stays under 2 percent
    # up to a spread of a third of the mainlobe width
    for frac in (7, 5, 4, 3):
        d = cascaded_pdf_approx(P12, TruncatedGaussian(P12.theta0 / frac))
        mass = d.total_mass()
        assert 0.98 <= mass <= 1.0 + 1e-12
    d3 = cascaded_pdf_approx(P12, TruncatedGaussian(P12.theta0 / 3))
    assert d3.total_mass() == pytest.approx(0.98888, abs=2e-4)


def test_cascaded_approx_uniform_atom():
    d = cascaded_pdf_approx(P12, Uniform())
    (loc, mass), = d.atoms
    assert loc == P12.g**2
    assert mass == pytest.approx((1.0 - P12.theta0 / math.pi) ** 2, rel=1e-14)


def test_approx_vs_exact_cdf_distance_small_spread():
    for frac in (7, 5, 4):
        sigma = P12.theta0 / frac
        ex = cascaded_pdf_exact(P12, TruncatedGaussian(sigma))
        ap = cascaded_pdf_approx(P12, TruncatedGaussian(sigma))
        xs = np.concatenate(
            [
                np.linspace(P12.g**2, P12.g, 1500, endpoint=False),
                np.linspace(P12.g, 1.0, 3000),
            ]
        )
        dist = np.max(np.abs(np.asarray(ex.cdf(xs)) - np.asarray(ap.cdf(xs))))
        assert dist < 0.01


# ---------------------------------------------------------------------------
# sampling


def test_sample_perfect_is_one():
    rng = np.random.default_rng(0)
    assert sample_cascaded(P12, Perfect(), rng) == 1.0


def test_sample_range():
    rng = np.random.default_rng(1)
    draws = sample_cascaded(P12, Uniform(), rng, 50_000)
    assert draws.min() >= P12.g**2 - 1e-15
    assert draws.max() <= 1.0 + 1e-15


@pytest.mark.parametrize(
    "model", [Uniform(), TruncatedGaussian(P12.theta0 / 4)], ids=["uniform", "gaussian"]
)
def test_sample_matches_exact_law_ks(model):
    rng = np.random.default_rng(42)
    draws = sample_cascaded(P12, model, rng, 10**6)
    assert ks_distance(draws, cascaded_pdf_exact(P12, model)) < 0.005


def test_sample_mean_matches_moment():
    rng = np.random.default_rng(7)
    draws = sample_cascaded(P12, Uniform(), rng, 10**6)
    approx_mean = uniform_cascade_moment(P12, 1.0)
    # value frozen from the closed-form moment of the approximate law
    assert approx_mean == pytest.approx(1.817036e-3, abs=1e-8)
    assert abs(draws.mean() - approx_mean) / approx_mean < 0.01


# ---------------------------------------------------------------------------
# moments


def test_moment_exponent_domain():
    d = cascaded_pdf_approx(P12, Uniform())
    with pytest.raises(ValueError):
        gain_moment(d, 0.0)
    with pytest.raises(ValueError):
        gain_moment(d, -1.0)


def test_moment_small_exponent_approaches_mass():
    d = cascaded_pdf_exact(P12, Uniform())
    assert gain_moment(d, 1e-9) == pytest.approx(d.total_mass(), abs=1e-6)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0 / 2.1, 2.0 / 2.92, 3.0])
def test_uniform_moment_closed_vs_quadrature(z):
    d = cascaded_pdf_approx(P12, Uniform())
    closed = gain_moment(d, z, method="closed")
    quad = gain_moment(d, z, method="quadrature")
    assert closed == pytest.approx(quad, rel=1e-8)


def test_gain_moment_strictly_decreasing_in_z():
    d = cascaded_pdf_exact(P12, Uniform())
    zs = np.linspace(0.2, 4.0, 12)
    vals = [gain_moment(d, float(z)) for z in zs]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_fading_moment_values():
    assert fading_moment(1, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert fading_moment(3, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert fading_moment(3, 2.0) == pytest.approx(4.0 / 3.0, rel=1e-12)
    # frozen from the Gamma-ratio formula; cross-checked by simulation below
    assert fading_moment(2, 0.5) == pytest.approx(0.9399856030, rel=1e-9)


def test_fading_moment_monte_carlo():
    rng = np.random.default_rng(11)
    h = rng.gamma(2.0, 0.5, 10**7)
    assert abs(np.mean(np.sqrt(h)) - fading_moment(2, 0.5)) / fading_moment(2, 0.5) < 0.002


def test_fading_moment_domain():
    with pytest.raises(ValueError):
        fading_moment(0, 1.0)
    with pytest.raises(ValueError):
        fading_moment(2, 0.0)


def test_moment_table_caches_and_positive():
    table = moment_table(P24, 3, 2)
    assert table is moment_table(P24, 3, 2)
    for branch in ("los", "nlos"):
        for z in (0.5, 1.0, 2.0):
            v = table.chi(branch, z)
            assert v > 0.0
            assert float(table.chi_mp(branch, z)) == pytest.approx(v, rel=1e-12)


def test_quadrature_nodes_reproduce_moments():
    d = cascaded_pdf_approx(P12, Uniform())
    locs, wts = d.quadrature_nodes()
    assert wts.sum() == pytest.approx(d.total_mass(), rel=1e-10)
    for z in (0.5, 1.0, 2.0):
        node_moment = float(np.dot(wts, locs**z))
        assert node_moment == pytest.approx(gain_moment(d, z), rel=1e-9)
