import math

import numpy as np
import pytest

from mmwpt import specfun
from mmwpt.bae import (
    Perfect,
    TruncatedGaussian,
    Uniform,
    bae_pdf,
    gaussian_bae,
    mainlobe_prob,
    sample_bae,
)


def test_factory_degenerates_to_perfect():
    assert isinstance(gaussian_bae(0.0), Perfect)
    assert isinstance(gaussian_bae(0.1), TruncatedGaussian)
    with pytest.raises(ValueError):
        gaussian_bae(-0.1)
    with pytest.raises(ValueError):
        TruncatedGaussian(0.0)


def test_uniform_density_value():
    assert bae_pdf(Uniform(), 0.3) == pytest.approx(1.0 / (2 * math.pi), rel=1e-15)
    assert bae_pdf(Uniform(), -math.pi) == pytest.approx(1.0 / (2 * math.pi), rel=1e-15)


def test_gaussian_density_peak():
    s = 0.1
    expected = 1.0 / (math.sqrt(2 * math.pi) * s * math.erf(math.pi / (math.sqrt(2) * s)))
    assert bae_pdf(TruncatedGaussian(s), 0.0) == pytest.approx(expected, rel=1e-14)


def test_perfect_has_no_density():
    with pytest.raises(ValueError):
        bae_pdf(Perfect(), 0.0)


def test_density_domain_checked():
    with pytest.raises(ValueError):
        bae_pdf(Uniform(), math.pi)


@pytest.mark.parametrize("model", [Uniform(), TruncatedGaussian(0.05), TruncatedGaussian(0.8)])
def test_density_normalization(model):
    mass = specfun.integrate(
        lambda x: bae_pdf(model, x),
        -math.pi,
        math.nextafter(math.pi, 0.0),
        rtol=1e-12,
        atol=1e-13,
    )
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_perfect_samples_are_zero():
    rng = np.random.default_rng(1)
    assert sample_bae(Perfect(), rng) == 0.0
    assert not sample_bae(Perfect(), rng, 100).any()


def test_uniform_sample_mean():
    rng = np.random.default_rng(2)
    draws = sample_bae(Uniform(), rng, 10**6)
    stderr = 2 * math.pi / math.sqrt(12 * draws.size)
    assert abs(draws.mean()) < 3 * stderr


def test_gaussian_sample_mainlobe_fraction():
    theta0 = math.pi / 12
    model = TruncatedGaussian(theta0 / 3)
    rng = np.random.default_rng(3)
    draws = sample_bae(model, rng, 10**6)
    assert np.all(draws >= -math.pi) and np.all(draws < math.pi)
    p_hat = np.mean(np.abs(draws) <= theta0)
    p = mainlobe_prob(model, theta0)
    stderr = math.sqrt(p * (1 - p) / draws.size)
    assert abs(p_hat - p) < 3 * stderr


def test_gaussian_sample_ks():
    # exact CDF of the truncated law vs the empirical one
    s = 0.07
    model = TruncatedGaussian(s)
    rng = np.random.default_rng(4)
    draws = np.sort(sample_bae(model, rng, 10**6))
    cap = math.erf(math.pi / (math.sqrt(2) * s))
    cdf = (np.vectorize(math.erf)(draws / (math.sqrt(2) * s)) + cap) / (2 * cap)
    n = draws.size
    ks = max(
        np.max(np.arange(1, n + 1) / n - cdf),
        np.max(cdf - np.arange(0, n) / n),
    )
    assert ks < 0.005


def test_mainlobe_prob_values():
    theta0 = math.pi / 12
    assert mainlobe_prob(Uniform(), theta0) == pytest.approx(1.0 / 12.0, rel=1e-14)
    assert mainlobe_prob(Perfect(), theta0) == 1.0
    for t0 in (math.pi / 24, math.pi / 12, math.pi / 6):
        assert mainlobe_prob(TruncatedGaussian(t0 / 3), t0) == pytest.approx(0.9973, abs=3e-4)
        assert mainlobe_prob(TruncatedGaussian(t0 / 2), t0) == pytest.approx(0.9545, abs=3e-4)


def test_mainlobe_prob_monotone_in_spread():
    theta0 = math.pi / 12
    spreads = np.linspace(1e-3, 1.5, 40)
    vals = [mainlobe_prob(TruncatedGaussian(s), theta0) for s in spreads]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(1.0, abs=1e-12)
