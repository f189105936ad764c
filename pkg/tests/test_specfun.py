import math

import pytest
import scipy.special as sc

from mmwpt import specfun
from mmwpt.specfun import (
    FoxHSpec,
    QuadratureError,
    SeriesConvergenceError,
    binomial,
    far_field_moment,
    far_field_moment_whittaker,
    fox_h_20_02,
    fox_h_20_02_mellin_barnes,
    fox_h_shift_series,
    gamma,
    hyp2f1_euler,
    hyp2f1_series,
    integrate,
    ln_gamma,
)


def test_primitive_values():
    assert specfun.erf(0.0) == 0.0
    assert gamma(5.0) == 24.0
    assert binomial(4, 2) == 6
    assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-15)


def test_primitive_domains():
    with pytest.raises(ValueError):
        gamma(-2.0)
    with pytest.raises(ValueError):
        ln_gamma(0.0)
    with pytest.raises(ValueError):
        binomial(3, 5)


def test_integrate_rejects_bad_estimates():
    # heavy oscillation with the subdivision budget capped: the estimate
    # cannot reach the requested tolerance and the wrapper must refuse
    with pytest.raises(QuadratureError):
        integrate(lambda x: math.sin(4000.0 * x), 0.0, 1.0, rtol=1e-12, atol=1e-300, limit=1)


def test_integrate_basic():
    assert integrate(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-12)


# ---------------------------------------------------------------------------
# Gauss hypergeometric


def test_hyp2f1_at_zero_argument():
    assert hyp2f1_euler(2.3, 0.7, 0.0) == 1.0


def test_hyp2f1_log_identity():
    # 2F1(1,1;2;-z) = log(1+z)/z
    assert hyp2f1_euler(1.0, 1.0, 1.0) == pytest.approx(math.log(2.0), rel=1e-12)
    assert hyp2f1_euler(1.0, 1.0, 3.0) == pytest.approx(math.log(4.0) / 3.0, rel=1e-12)


@pytest.mark.parametrize(
    "a,b,z",
    [
        (3.0, 0.96, 5.0),
        (2.0, 1.7129, 9.84),
        (3.0, 0.25, 0.4),
        (1.5, 12.0, 100.0),
        (3.0, 0.96, -0.5),
    ],
)
def test_hyp2f1_euler_vs_series(a, b, z):
    assert hyp2f1_euler(a, b, z) == pytest.approx(hyp2f1_series(a, b, z), rel=1e-9)


def test_hyp2f1_vs_scipy():
    assert hyp2f1_euler(3.0, 0.96, 5.0) == pytest.approx(sc.hyp2f1(3.0, 0.96, 1.96, -5.0), rel=1e-10)


def test_hyp2f1_monotone_decreasing_in_z():
    vals = [hyp2f1_euler(2.0, 1.3, z) for z in (0.0, 0.5, 1.0, 5.0, 20.0)]
    assert vals[0] == 1.0
    assert all(1.0 >= a > b > 0.0 for a, b in zip(vals, vals[1:]))


def test_hyp2f1_domain():
    with pytest.raises(ValueError):
        hyp2f1_euler(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        hyp2f1_euler(1.0, 1.0, -1.5)


# ---------------------------------------------------------------------------
# Fox H


def test_fox_h_at_zero_argument():
    # suppressor absent: alpha * Gamma(rho)
    assert fox_h_20_02(FoxHSpec(rho=2.0, alpha_inv=0.5, z=0.0)) == pytest.approx(2.0, rel=1e-12)
    assert fox_h_20_02(FoxHSpec(rho=3.0, alpha_inv=0.25, z=0.0)) == pytest.approx(8.0, rel=1e-12)


def test_fox_h_spec_invariants():
    with pytest.raises(ValueError):
        FoxHSpec(rho=1.5, alpha_inv=0.5, z=1.0)
    with pytest.raises(ValueError):
        FoxHSpec(rho=2.0, alpha_inv=1.2, z=1.0)
    with pytest.raises(ValueError):
        FoxHSpec(rho=2.0, alpha_inv=0.5, z=-1.0)


def test_fox_h_matches_distance_integral():
    # alpha*beta^2 * integral of r*exp(-beta*r - c*r^-alpha) equals the H value
    alpha, beta, c = 2.1, 0.0071, 1.0
    lhs = alpha * beta**2 * integrate(
        lambda r: r * math.exp(-beta * r - c * r ** (-alpha)),
        0.0,
        math.inf,
        rtol=1e-11,
        atol=1e-300,
    )
    h = fox_h_20_02(FoxHSpec(rho=2.0, alpha_inv=1.0 / alpha, z=beta * c ** (1.0 / alpha)))
    assert lhs == pytest.approx(h, rel=1e-9)


@pytest.mark.parametrize(
    "rho,alpha,z",
    [
        (2.0, 2.1, 1.785),
        (2.0, 2.92, 0.164),
        (4.0, 2.1, 0.5),
        (7.0, 2.92, 2.0),
        (2.0, 2.0, 0.05),
    ],
)
def test_fox_h_integral_vs_mellin_barnes(rho, alpha, z):
    spec = FoxHSpec(rho=rho, alpha_inv=1.0 / alpha, z=z)
    direct = fox_h_20_02(spec)
    contour = fox_h_20_02_mellin_barnes(spec)
    assert direct == pytest.approx(contour, rel=1e-8)


def test_fox_h_decreasing_in_argument():
    vals = [
        fox_h_20_02(FoxHSpec(rho=2.0, alpha_inv=1 / 2.1, z=z)) for z in (0.0, 0.3, 1.0, 3.0, 8.0)
    ]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_fox_h_shift_series_reconstruction():
    # splitting the argument into x*y and shifting the first parameter
    x, y, rho, alpha = 0.8, 0.5, 2.0, 2.92
    direct = fox_h_20_02(FoxHSpec(rho=rho, alpha_inv=1.0 / alpha, z=x * y))
    series, diag = fox_h_shift_series(x, y, rho, alpha, tol=1e-12)
    assert diag.converged
    assert series == pytest.approx(direct, rel=1e-6)


def test_fox_h_shift_series_diverges_far_from_one():
    # the expansion parameter (1-x) leaves the unit disk for x > 2
    with pytest.raises(SeriesConvergenceError) as err:
        fox_h_shift_series(3.5, 0.5, 2.0, 2.92, tol=1e-12, max_terms=60)
    assert err.value.diagnostics.terms_used == 61


# ---------------------------------------------------------------------------
# far-field moment


def test_far_field_moment_exponential_integral():
    # alpha=2 reduces to the exponential integral E1(beta)
    beta = 0.0071
    assert far_field_moment(2.0, beta) == pytest.approx(float(sc.exp1(beta)), rel=1e-10)
    # value frozen from the E1 oracle
    assert far_field_moment(2.0, beta) == pytest.approx(4.377532247, abs=1e-6)


@pytest.mark.parametrize("alpha", [2.1, 2.92])
@pytest.mark.parametrize("beta", [0.0071, 0.1, 1.0])
def test_far_field_moment_whittaker_identity(alpha, beta):
    assert far_field_moment(alpha, beta) == pytest.approx(
        far_field_moment_whittaker(alpha, beta), rel=1e-8
    )


def test_far_field_moment_laplace_asymptote():
    # for large beta the mass sits at r=1: value ~ exp(-beta)/beta
    beta = 50.0
    ratio = far_field_moment(2.1, beta) / (math.exp(-beta) / beta)
    assert ratio == pytest.approx(1.0, abs=0.05)
    ratio = far_field_moment(2.1, 200.0) / (math.exp(-200.0) / 200.0)
    assert ratio == pytest.approx(1.0, abs=0.02)


def test_far_field_moment_domain():
    with pytest.raises(ValueError):
        far_field_moment(0.0, 1.0)
    with pytest.raises(ValueError):
        far_field_moment(2.0, -1.0)


# ---------------------------------------------------------------------------
# fault injection


def test_erf_offset_hook(monkeypatch):
    monkeypatch.setattr(specfun, "_erf_offset", 1e-3)
    assert specfun.erf(0.0) == pytest.approx(1e-3)
    monkeypatch.setattr(specfun, "_erf_offset", 0.0)
    assert specfun.erf(0.0) == 0.0
