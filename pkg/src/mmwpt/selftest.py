"""Built-in oracle suite.

Re-derives key quantities along independent numerical routes and compares
them at pinned tolerances: pattern constants, density normalizations, the
dual Fox H paths, the argument-splitting series, the hypergeometric
evaluator, the far-field moment identity, closed-form moments, and the
series-vs-quadrature field transforms.  A fresh installation must pass all
checks; any mismatch signals a broken numerical kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .analysis import laplace_field, laplace_field_quadrature, rel
from .bae import TruncatedGaussian, Uniform, bae_pdf, mainlobe_prob
from .defaults import reference_channel, reference_network, reference_nonlinear
from .gain_stats import cascaded_pdf_approx, cascaded_pdf_exact, single_gain_pdf
from .patterns import gaussian_from_beamwidth
from .units import dbm_to_watt
from .analysis import invert_threshold, gamma_sum_amplitude


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str


def _check(name: str, err: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(err <= tol), value=err, tolerance=tol, detail=detail)


# expected pattern constants: (theta0, theta3db, eta, gm)
_PATTERN_TABLE = [
    (math.pi / 24, 0.0503, 272.5250, 38.4103),
    (math.pi / 12, 0.1007, 68.1313, 23.4227),
    (math.pi / 6, 0.2014, 17.0328, 13.1559),
]


def run_selftest() -> list[CheckResult]:
    checks: list[CheckResult] = []

    # pattern constant regeneration
    worst = 0.0
    for theta0, t3, eta, gm in _PATTERN_TABLE:
        p = gaussian_from_beamwidth(theta0)
        worst = max(worst, abs(p.theta3db - t3), abs(p.eta - eta), abs(p.gm - gm))
    checks.append(_check("pattern-constants", worst, 1e-3, "theta3db/eta/gm triples"))

    # alignment-error density normalization (quadrature, error-sensitive)
    worst = 0.0
    for model in (Uniform(), TruncatedGaussian(0.05), TruncatedGaussian(0.3)):
        mass = specfun.integrate(
            lambda x: bae_pdf(model, x), -math.pi, math.nextafter(math.pi, 0.0),
            rtol=1e-12, atol=1e-13,
        )
        worst = max(worst, abs(mass - 1.0))
    checks.append(_check("bae-pdf-normalization", worst, 1e-9))

    # mainlobe-hit probabilities at the two canonical spreads
    worst = 0.0
    for theta0, _, _, _ in _PATTERN_TABLE:
        worst = max(worst, abs(mainlobe_prob(TruncatedGaussian(theta0 / 3.0), theta0) - 0.9973))
        worst = max(worst, abs(mainlobe_prob(TruncatedGaussian(theta0 / 2.0), theta0) - 0.9545))
    checks.append(_check("mainlobe-probabilities", worst, 3e-4))

    # total mass of the exact gain laws
    pattern = gaussian_from_beamwidth(math.pi / 12)
    worst = 0.0
    for model in (Uniform(), TruncatedGaussian(pattern.theta0 / 4.0)):
        worst = max(worst, abs(single_gain_pdf(pattern, model).total_mass() - 1.0))
        worst = max(worst, abs(cascaded_pdf_exact(pattern, model).total_mass() - 1.0))
    checks.append(_check("gain-law-mass", worst, 1e-6))

    # Fox H: real-axis integral vs Mellin-Barnes contour
    worst = 0.0
    for rho, alpha, z in [(2.0, 2.1, 1.785), (4.0, 2.92, 0.164), (2.0, 2.0, 0.5)]:
        spec = specfun.FoxHSpec(rho=rho, alpha_inv=1.0 / alpha, z=z)
        direct = specfun.fox_h_20_02(spec)
        contour = specfun.fox_h_20_02_mellin_barnes(spec)
        worst = max(worst, abs(direct - contour) / abs(contour))
    checks.append(_check("fox-h-dual-path", worst, 1e-8, "relative"))

    # argument-splitting series reconstruction
    spec = specfun.FoxHSpec(rho=2.0, alpha_inv=1.0 / 2.92, z=0.8 * 0.5)
    direct = specfun.fox_h_20_02(spec)
    series, _ = specfun.fox_h_shift_series(0.8, 0.5, 2.0, 2.92, tol=1e-12)
    checks.append(_check("fox-h-shift-series", abs(series - direct) / abs(direct), 1e-6))

    # hypergeometric evaluator vs power series
    worst = 0.0
    for a, b, z in [(1.0, 1.0, 1.0), (3.0, 0.96, 5.0), (2.5, 4.0, 0.3), (3.0, 1.7, 40.0)]:
        quad = specfun.hyp2f1_euler(a, b, z)
        ser = specfun.hyp2f1_series(a, b, z)
        worst = max(worst, abs(quad - ser) / abs(ser))
    checks.append(_check("hypergeometric-dual-path", worst, 1e-9, "relative"))

    # far-field moment: quadrature vs confluent-hypergeometric identity
    worst = 0.0
    for alpha in (2.1, 2.92):
        for beta in (0.0071, 0.05, 0.5):
            quad = specfun.far_field_moment(alpha, beta)
            ident = specfun.far_field_moment_whittaker(alpha, beta)
            worst = max(worst, abs(quad - ident) / abs(ident))
    checks.append(_check("far-field-moment-identity", worst, 1e-8, "relative"))

    # closed-form uniform-cascade moments vs segment quadrature
    dist = cascaded_pdf_approx(pattern, Uniform())
    worst = 0.0
    for z in (0.5, 1.0, 2.0 / 2.1, 2.0 / 2.92):
        closed = dist.moment(z, method="closed")
        quad = dist.moment(z, method="quadrature")
        worst = max(worst, abs(closed - quad) / abs(quad))
    checks.append(_check("cascade-moment-closed-form", worst, 1e-8, "relative"))

    # relative-loss moment identity: closed form vs quadrature of the
    # aligned-link gain law
    worst = 0.0
    for sigma in (pattern.theta0 / 4.0, pattern.theta0 / 2.0):
        law = cascaded_pdf_approx(pattern, TruncatedGaussian(sigma))
        ident = 1.0 - law.moment(1.0, method="quadrature")
        worst = max(worst, abs(rel(pattern, sigma) - ident))
    checks.append(_check("relative-loss-identity", worst, 1e-8))

    # field transform: series path vs double quadrature (one quick setting)
    net = reference_network()
    chan = reference_channel()
    eh = reference_nonlinear()
    rf_th = invert_threshold(eh, dbm_to_watt(-40.0))
    a1 = gamma_sum_amplitude(5) / rf_th
    worst = 0.0
    for los in (True, False):
        series = laplace_field(a1, net, chan, pattern, los)
        quad = laplace_field_quadrature(a1, net, chan, pattern, los)
        worst = max(worst, abs(series - quad) / abs(quad))
    checks.append(_check("field-transform-dual-path", worst, 1e-4, "relative"))

    return checks


def selftest_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
